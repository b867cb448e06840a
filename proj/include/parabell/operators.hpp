#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace parabell {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Primitive cube root of unity, e^{2 pi i / 3}.
inline Complex omega() {
    return std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
}

/// A square complex matrix with a human-readable label.
class Operator {
public:
    /// Throws InputError if `entries` is empty or not square.
    Operator(Matrix entries, std::string label);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    const std::string& label() const { return label_; }

    Operator adjoint() const;

private:
    Matrix entries_;
    std::string label_;
};

/// Kronecker product, left factor is the outer (Alice-side) index.
Operator tensor_product(const Operator& left, const Operator& right);

/// Matrix product `lhs * rhs`.
Operator product(const Operator& lhs, const Operator& rhs, std::string label);

/// Returns lambda with |lambda| = 1 and x*y = lambda*y*x (elementwise within
/// `tol`), or nullopt when the two products are not proportional.
std::optional<Complex> commutation_phase(const Operator& x, const Operator& y,
                                         double tol = 1e-10);

/// Two Alice and two Bob observables acting on the 9-dimensional
/// two-qutrit space.
struct ObservableSet {
    Operator alice0;
    Operator alice1;
    Operator bob0;
    Operator bob1;
    bool signaling = false;
    std::string label;

    const Operator& alice(int i) const { return i == 0 ? alice0 : alice1; }
    const Operator& bob(int j) const { return j == 0 ? bob0 : bob1; }
};

/// Builds a set and classifies it as signaling iff some Alice/Bob pair fails
/// to commute within 1e-12.
ObservableSet make_observable_set(std::string label, Operator alice0, Operator alice1,
                                  Operator bob0, Operator bob1);

namespace qutrit {

Matrix identity();
/// diag(1, w, w*)
Matrix clock();
/// Cyclic shift |k> -> |k-1>, i.e. ones on the superdiagonal and (2,0).
Matrix shift();

}  // namespace qutrit

/// The parafermionic observables on the two-qutrit space.
/// Names: A0 A1 B0 B1 B0p B1p B2 B2p.
Operator named_observable(std::string_view name);
const std::vector<std::string>& observable_names();

/// The ten observable sets, Table-I pair first.
std::vector<ObservableSet> build_standard_sets();

/// Canonical label for user input: accepts "'" as an alias for "p".
std::string canonical_set_label(std::string_view label);

/// Looks up one of the ten standard sets by (canonical) label; throws
/// InputError for unknown labels.
ObservableSet find_standard_set(std::string_view label);

/// Expands a selector ("all", "tableI", "tableII" or a comma separated list
/// of labels) to the matching standard sets, in table order.
std::vector<ObservableSet> select_standard_sets(std::string_view selector);

}  // namespace parabell
