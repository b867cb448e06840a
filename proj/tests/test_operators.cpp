#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include <Eigen/Eigenvalues>

#include "parabell/errors.hpp"
#include "parabell/operators.hpp"
#include "test_support.hpp"

using namespace parabell;

namespace {

const double kPi = std::numbers::pi;

Complex phase(double angle) { return std::polar(1.0, angle); }

// Elementwise definition: (L (x) R)[i*q + k, j*q + l] = L[i,j] R[k,l].
Matrix kron_oracle(const Matrix& l, const Matrix& r) {
    const auto p = l.rows();
    const auto q = r.rows();
    Matrix out(p * q, p * q);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            for (Eigen::Index k = 0; k < q; ++k)
                for (Eigen::Index m = 0; m < q; ++m) out(i * q + k, j * q + m) = l(i, j) * r(k, m);
    return out;
}

}  // namespace

TEST_CASE("tensor_product of identities is the 9x9 identity") {
    const Operator i3(qutrit::identity(), "I");
    const auto i9 = tensor_product(i3, i3);
    CHECK(i9.dim() == 9);
    CHECK((i9.entries() - Matrix::Identity(9, 9)).norm() == 0.0);
}

TEST_CASE("clock (x) identity reproduces the literal A0 matrix") {
    const auto a0 = tensor_product(Operator(qutrit::clock(), "D"), Operator(qutrit::identity(), "I"));
    Matrix literal = Matrix::Zero(9, 9);
    const Complex w = phase(2 * kPi / 3);
    for (int k = 0; k < 3; ++k) {
        literal(k, k) = 1.0;
        literal(3 + k, 3 + k) = w;
        literal(6 + k, 6 + k) = std::conj(w);
    }
    CHECK((a0.entries() - literal).norm() < 1e-15);
    CHECK((named_observable("A0").entries() - literal).norm() < 1e-15);
}

TEST_CASE("tensor_product matches the elementwise Kronecker definition") {
    const Operator s(qutrit::shift(), "S");
    const Operator d(qutrit::clock(), "D");
    const auto sd = tensor_product(s, d);
    CHECK((sd.entries() - kron_oracle(s.entries(), d.entries())).norm() < 1e-15);
    // (1,2) block of S (x) D is S(0,1) * D = D.
    CHECK((sd.entries().block(0, 3, 3, 3) - d.entries()).norm() < 1e-15);

    std::mt19937_64 rng(11);
    const auto l = testing::random_operator(2, rng);
    const auto r = testing::random_operator(4, rng);
    CHECK((tensor_product(l, r).entries() - kron_oracle(l.entries(), r.entries())).norm() < 1e-13);
}

TEST_CASE("operator construction rejects non-square input") {
    CHECK_THROWS_AS(Operator(Matrix::Zero(2, 3), "bad"), InputError);
    CHECK_THROWS_AS(Operator(Matrix(0, 0), "empty"), InputError);
    CHECK_THROWS_AS(named_observable("C7"), InputError);
}

TEST_CASE("every observable is unitary with cube equal to identity") {
    const Matrix id = Matrix::Identity(9, 9);
    for (const auto& name : observable_names()) {
        CAPTURE(name);
        const Matrix m = named_observable(name).entries();
        CHECK((m * m.adjoint() - id).norm() < 1e-12);
        CHECK((m * m * m - id).norm() < 1e-12);
    }
}

TEST_CASE("every observable has spectrum {1, w, w*} with multiplicity three") {
    for (const auto& name : observable_names()) {
        CAPTURE(name);
        Eigen::ComplexEigenSolver<Matrix> solver(named_observable(name).entries());
        std::map<int, int> counts;
        for (Eigen::Index k = 0; k < 9; ++k) {
            const Complex ev = solver.eigenvalues()(k);
            bool matched = false;
            for (int r = 0; r < 3; ++r) {
                if (std::abs(ev - phase(2 * kPi * r / 3)) < 1e-9) {
                    ++counts[r];
                    matched = true;
                }
            }
            CHECK(matched);
        }
        CHECK(counts[0] == 3);
        CHECK(counts[1] == 3);
        CHECK(counts[2] == 3);
    }
}

TEST_CASE("B2 = B0^dag B1 equals I (x) (diag(1, w*, w) S)") {
    const Matrix expected = kron_oracle(qutrit::identity(), qutrit::clock().adjoint() * qutrit::shift());
    CHECK((named_observable("B2").entries() - expected).norm() < 1e-14);
    const Matrix b2p = named_observable("B0p").entries().adjoint() * named_observable("B1p").entries();
    CHECK((named_observable("B2p").entries() - b2p).norm() < 1e-14);
}

TEST_CASE("standard sets: labels, order and signaling flags") {
    const auto sets = build_standard_sets();
    REQUIRE(sets.size() == 10);
    const std::vector<std::string> labels{"A0A1-B0B1",   "A0A1-B0pB1p", "A1A0-B1B0",
                                          "A1A0-B1pB0p", "A0A1-B1B0",   "A0A1-B1pB0p",
                                          "A0A1-B0B2",   "A0A1-B0pB2p", "A0A1-B2B0",
                                          "A0A1-B2pB0p"};
    for (std::size_t k = 0; k < sets.size(); ++k) {
        CAPTURE(labels[k]);
        CHECK(sets[k].label == labels[k]);
        CHECK(sets[k].signaling == (labels[k].find('p') != std::string::npos));
    }
}

TEST_CASE("alice observables act on the first factor, unprimed bob on the second") {
    const Matrix id = qutrit::identity();
    for (const auto& set : build_standard_sets()) {
        CAPTURE(set.label);
        for (const Operator* a : {&set.alice0, &set.alice1}) {
            const Matrix left = a->entries()(Eigen::seq(0, 8, 3), Eigen::seq(0, 8, 3));
            CHECK((a->entries() - kron_oracle(left, id)).norm() < 1e-14);
        }
        if (!set.signaling) {
            for (const Operator* b : {&set.bob0, &set.bob1}) {
                const Matrix right = b->entries().block(0, 0, 3, 3);
                CHECK((b->entries() - kron_oracle(id, right)).norm() < 1e-14);
            }
        }
    }
}

TEST_CASE("commutation phases of the local and cross algebra") {
    const auto a0 = named_observable("A0");
    const auto a1 = named_observable("A1");
    const auto b0 = named_observable("B0");
    const auto b1 = named_observable("B1");
    const auto b0p = named_observable("B0p");
    const auto b1p = named_observable("B1p");
    const Complex local = phase(-2 * kPi / 3);
    const Complex cross = phase(4 * kPi / 3);

    auto near = [](std::optional<Complex> got, Complex want) {
        return got && std::abs(*got - want) < 1e-12;
    };
    CHECK(near(commutation_phase(a0, a1), local));
    CHECK(near(commutation_phase(b0, b1), local));
    CHECK(near(commutation_phase(b0p, b1p), local));
    CHECK(near(commutation_phase(a0, b0), 1.0));
    CHECK(near(commutation_phase(a0, b0p), cross));

    const auto signaling = find_standard_set("A0A1-B0pB1p");
    const auto quiet = find_standard_set("A0A1-B0B1");
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(near(commutation_phase(signaling.alice(i), signaling.bob(j)), cross));
            CHECK(near(commutation_phase(quiet.alice(i), quiet.bob(j)), 1.0));
        }
    }
    for (const auto& set : build_standard_sets()) {
        if (set.signaling) continue;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(near(commutation_phase(set.alice(i), set.bob(j)), 1.0));
    }
}

TEST_CASE("commutation_phase reports no scalar relation when none exists") {
    const auto a0 = named_observable("A0");
    const Operator mix(a0.entries() + named_observable("A1").entries(), "A0+A1");
    CHECK_FALSE(commutation_phase(a0, mix).has_value());
}

TEST_CASE("set lookup accepts primes and rejects unknown labels") {
    CHECK(find_standard_set("A0A1-B0'B1'").label == "A0A1-B0pB1p");
    CHECK(select_standard_sets("tableI").size() == 2);
    CHECK(select_standard_sets("all").size() == 10);
    CHECK(select_standard_sets("A0A1-B0B1,A0A1-B2pB0p").size() == 2);
    CHECK_THROWS_AS(find_standard_set("A2A0-B0B1"), InputError);
    CHECK_THROWS_AS(select_standard_sets(""), InputError);
}
