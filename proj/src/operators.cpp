#include "parabell/operators.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "parabell/errors.hpp"

namespace parabell {

Operator::Operator(Matrix entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        std::ostringstream msg;
        msg << "operator '" << label_ << "' must be square and non-empty, got "
            << entries_.rows() << "x" << entries_.cols();
        throw InputError(msg.str());
    }
}

Operator Operator::adjoint() const {
    return Operator(entries_.adjoint(), label_ + "^dag");
}

Operator tensor_product(const Operator& left, const Operator& right) {
    Matrix k = Eigen::kroneckerProduct(left.entries(), right.entries()).eval();
    return Operator(std::move(k), left.label() + " (x) " + right.label());
}

Operator product(const Operator& lhs, const Operator& rhs, std::string label) {
    if (lhs.dim() != rhs.dim()) {
        throw InputError("product: dimension mismatch between '" + lhs.label() +
                         "' and '" + rhs.label() + "'");
    }
    return Operator(lhs.entries() * rhs.entries(), std::move(label));
}

std::optional<Complex> commutation_phase(const Operator& x, const Operator& y, double tol) {
    if (x.dim() != y.dim()) {
        throw InputError("commutation_phase: dimension mismatch");
    }
    const Matrix xy = x.entries() * y.entries();
    const Matrix yx = y.entries() * x.entries();

    Eigen::Index row = 0;
    Eigen::Index col = 0;
    const double largest = yx.cwiseAbs().maxCoeff(&row, &col);
    if (largest <= tol) {
        // yx vanishes; any phase works only if xy vanishes too.
        if (xy.cwiseAbs().maxCoeff() <= tol) return Complex{1.0, 0.0};
        return std::nullopt;
    }
    const Complex ratio = xy(row, col) / yx(row, col);
    if (std::abs(std::abs(ratio) - 1.0) > tol) return std::nullopt;
    const Complex lambda = ratio / std::abs(ratio);
    if ((xy - lambda * yx).cwiseAbs().maxCoeff() > tol) return std::nullopt;
    return lambda;
}

ObservableSet make_observable_set(std::string label, Operator alice0, Operator alice1,
                                  Operator bob0, Operator bob1) {
    bool signaling = false;
    for (const Operator* a : {&alice0, &alice1}) {
        for (const Operator* b : {&bob0, &bob1}) {
            const Matrix comm = a->entries() * b->entries() - b->entries() * a->entries();
            if (comm.cwiseAbs().maxCoeff() > 1e-12) signaling = true;
        }
    }
    return ObservableSet{std::move(alice0), std::move(alice1), std::move(bob0),
                         std::move(bob1),   signaling,         std::move(label)};
}

namespace qutrit {

Matrix identity() { return Matrix::Identity(3, 3); }

Matrix clock() {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = omega();
    m(2, 2) = std::conj(omega());
    return m;
}

Matrix shift() {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = 1.0;
    m(1, 2) = 1.0;
    m(2, 0) = 1.0;
    return m;
}

}  // namespace qutrit

namespace {

// Alice-side factor of B0' and B1'.
Matrix primed_left() {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = std::conj(omega());
    m(1, 2) = omega();
    m(2, 0) = 1.0;
    return m;
}

// Bob-side factor of B1'.
Matrix primed_right_b1() {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 2) = 1.0;
    m(1, 0) = std::conj(omega());
    m(2, 1) = omega();
    return m;
}

Operator kron(const Matrix& left, const Matrix& right, std::string label) {
    return Operator(Eigen::kroneckerProduct(left, right).eval(), std::move(label));
}

}  // namespace

Operator named_observable(std::string_view name) {
    using namespace qutrit;
    if (name == "A0") return kron(clock(), identity(), "A0");
    if (name == "A1") return kron(shift(), identity(), "A1");
    if (name == "B0") return kron(identity(), clock(), "B0");
    if (name == "B1") return kron(identity(), shift(), "B1");
    if (name == "B0p") return kron(primed_left(), shift(), "B0p");
    if (name == "B1p") return kron(primed_left(), primed_right_b1(), "B1p");
    if (name == "B2") {
        return product(named_observable("B0").adjoint(), named_observable("B1"), "B2");
    }
    if (name == "B2p") {
        return product(named_observable("B0p").adjoint(), named_observable("B1p"), "B2p");
    }
    throw InputError("unknown observable '" + std::string(name) + "'");
}

const std::vector<std::string>& observable_names() {
    static const std::vector<std::string> names{"A0", "A1", "B0", "B1",
                                                "B0p", "B1p", "B2", "B2p"};
    return names;
}

namespace {

struct SetRecipe {
    const char* a0;
    const char* a1;
    const char* b0;
    const char* b1;
};

// Table order: the Table-I pair, then the remaining Table-II rows.
constexpr std::array<SetRecipe, 10> kRecipes{{
    {"A0", "A1", "B0", "B1"},
    {"A0", "A1", "B0p", "B1p"},
    {"A1", "A0", "B1", "B0"},
    {"A1", "A0", "B1p", "B0p"},
    {"A0", "A1", "B1", "B0"},
    {"A0", "A1", "B1p", "B0p"},
    {"A0", "A1", "B0", "B2"},
    {"A0", "A1", "B0p", "B2p"},
    {"A0", "A1", "B2", "B0"},
    {"A0", "A1", "B2p", "B0p"},
}};

}  // namespace

std::vector<ObservableSet> build_standard_sets() {
    std::vector<ObservableSet> sets;
    sets.reserve(kRecipes.size());
    for (const auto& r : kRecipes) {
        std::string label = std::string(r.a0) + r.a1 + "-" + r.b0 + r.b1;
        sets.push_back(make_observable_set(std::move(label), named_observable(r.a0),
                                           named_observable(r.a1), named_observable(r.b0),
                                           named_observable(r.b1)));
    }
    return sets;
}

std::string canonical_set_label(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    for (char ch : label) {
        if (ch == '\'') {
            out.push_back('p');
        } else if (ch != ' ') {
            out.push_back(ch);
        }
    }
    return out;
}

ObservableSet find_standard_set(std::string_view label) {
    const std::string wanted = canonical_set_label(label);
    for (auto& set : build_standard_sets()) {
        if (set.label == wanted) return set;
    }
    throw InputError("unknown observable set '" + std::string(label) + "'");
}

std::vector<ObservableSet> select_standard_sets(std::string_view selector) {
    auto all = build_standard_sets();
    if (selector == "all" || selector == "tableII") return all;
    if (selector == "tableI") return {all[0], all[1]};

    std::vector<ObservableSet> picked;
    std::string_view rest = selector;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        if (!item.empty()) picked.push_back(find_standard_set(item));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (picked.empty()) throw InputError("empty set selection");
    return picked;
}

}  // namespace parabell
