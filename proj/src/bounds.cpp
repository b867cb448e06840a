#include "parabell/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "parabell/errors.hpp"

namespace parabell {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

double ball_bell_terms(Complex bell) {
    const double re = bell.real() / (2.0 * kSqrt2);
    const double im = bell.imag() / (2.0 * kSqrt2);
    return re * re + im * im;
}

Complex eta_for(const CorrelationReport& report, Side side) {
    return side == Side::A ? report.etaA : report.etaB;
}

}  // namespace

Complex bell_parameter(const CorrelationReport& report) {
    const auto& c = report.c;
    return c[0][0] + c[1][0] + c[0][1] - c[1][1];
}

double tsirelson_middle(Complex eta) {
    const double re = eta.real();
    return kSqrt2 * (std::sqrt(std::max(0.0, 1.0 + re)) + std::sqrt(std::max(0.0, 1.0 - re)));
}

Theorem1Chain theorem1_chain(const CorrelationReport& report) {
    Theorem1Chain chain;
    chain.absBell = std::abs(bell_parameter(report));
    chain.middleA = tsirelson_middle(report.etaA);
    chain.middleB = tsirelson_middle(report.etaB);
    return chain;
}

double TlmTerms::ratio() const {
    if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

TlmTerms tlm(const CorrelationReport& report) {
    TlmTerms t;
    t.lhs = std::abs(std::conj(report.bob_alice(0, 0)) * report.bob_alice(0, 1) -
                     std::conj(report.bob_alice(1, 0)) * report.bob_alice(1, 1));
    for (int j = 0; j < 2; ++j) {
        const double f0 = 1.0 - std::norm(report.bob_alice(j, 0));
        const double f1 = 1.0 - std::norm(report.bob_alice(j, 1));
        t.rhs += std::sqrt(std::max(0.0, f0 * f1));
    }
    return t;
}

double relation3(const CorrelationReport& report, Side side) {
    const double half_re_eta = eta_for(report, side).real() / 2.0;
    return half_re_eta * half_re_eta + ball_bell_terms(bell_parameter(report));
}

Relation4 relation4(const CorrelationReport& report, Side side) {
    const Complex bell = bell_parameter(report);
    const Complex rho = bell / 4.0;
    Relation4 r;
    r.lhs = std::norm(eta_for(report, side)) + ball_bell_terms(bell);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double sign = (i * j == 1) ? -1.0 : 1.0;
            r.isotropyResidual = std::max(r.isotropyResidual, std::abs(report.c[i][j] - sign * rho));
        }
    }
    return r;
}

double fu_i3(const ObservableSet& set, const QuantumState& psi) {
    const Vector& v = psi.amplitudes();
    if (set.alice0.dim() != psi.dim()) throw InputError("fu_i3: dimension mismatch");
    auto q = [&](int j, int k, double sign) {
        const Complex avg = v.dot(set.alice(j).entries() * (set.bob(k).entries() * v));
        return avg.real() + sign * kInvSqrt3 * avg.imag();
    };
    return q(0, 0, 1.0) + q(0, 1, -1.0) - q(1, 0, 1.0) + q(1, 1, 1.0);
}

SchurWitness schur_witness(const ObservableSet& set, const QuantumState& psi, int j, Side side,
                           double epsilon) {
    if (j != 0 && j != 1) throw InputError("schur_witness: j must be 0 or 1");
    const bool a_side = side == Side::A;
    const std::array<Operator, 3> ops{a_side ? set.bob(j) : set.alice(j),
                                      a_side ? set.alice1 : set.bob1,
                                      a_side ? set.alice0 : set.bob0};
    SchurWitness w;
    w.matrix3 = correlation_matrix(ops, psi, epsilon);

    Eigen::SelfAdjointEigenSolver<Matrix> solver(w.matrix3, Eigen::EigenvaluesOnly);
    w.minEigenvalue = solver.eigenvalues().minCoeff();

    // Row 0 holds C(X_j, Y1), C(X_j, Y0); entry (2,1) is C(Y0, Y1) = eta.
    const Complex c1 = w.matrix3(0, 1);
    const Complex c0 = w.matrix3(0, 2);
    const Complex eta = w.matrix3(2, 1);
    w.detResidual = (1.0 - std::norm(c0)) * (1.0 - std::norm(c1)) -
                    std::norm(eta - std::conj(c0) * c1);
    return w;
}

BoundReport evaluate_bounds(const ObservableSet& set, const QuantumState& psi, double epsilon) {
    const auto report = correlate(set, psi, epsilon);
    BoundReport b;
    b.epsilon = epsilon;
    b.bell = bell_parameter(report);
    b.absBell = std::abs(b.bell);
    b.middleBoundA = tsirelson_middle(report.etaA);
    b.middleBoundB = tsirelson_middle(report.etaB);
    const auto t = tlm(report);
    b.tlmLhs = t.lhs;
    b.tlmRhs = t.rhs;
    b.relation3A = relation3(report, Side::A);
    b.relation3B = relation3(report, Side::B);
    const auto r4a = relation4(report, Side::A);
    b.relation4A = r4a.lhs;
    b.relation4B = relation4(report, Side::B).lhs;
    b.isotropyResidual = r4a.isotropyResidual;
    b.i3 = fu_i3(set, psi);
    return b;
}

}  // namespace parabell
