#pragma once

#include "parabell/correlator.hpp"

namespace parabell {

/// Which local correlator plays the role of eta: C(A0,A1) or C(B0,B1).
enum class Side { A, B };

/// 2 sqrt 2
inline constexpr double kTsirelson = 2.8284271247461900976;
/// Known quantum maximum of the three-outcome I3 expression (cited, not derived).
inline constexpr double kFuQuantumMaximum = 2.91;

/// B = C(A0,B0) + C(A1,B0) + C(A0,B1) - C(A1,B1)
Complex bell_parameter(const CorrelationReport& report);

/// sqrt2 [sqrt(1 + Re eta) + sqrt(1 - Re eta)], radicands clamped at zero.
double tsirelson_middle(Complex eta);

struct Theorem1Chain {
    double absBell = 0.0;
    double middleA = 0.0;
    double middleB = 0.0;
    double top = kTsirelson;

    bool holds(double tol = 1e-9) const {
        return absBell <= middleA + tol && absBell <= middleB + tol && middleA <= top + tol &&
               middleB <= top + tol;
    }
};
Theorem1Chain theorem1_chain(const CorrelationReport& report);

struct TlmTerms {
    double lhs = 0.0;
    double rhs = 0.0;

    bool holds(double tol = 1e-9) const { return lhs <= rhs + tol; }
    /// lhs / rhs; 0 when both vanish.
    double ratio() const;
};
TlmTerms tlm(const CorrelationReport& report);

/// (Re eta / 2)^2 + (Re B / 2 sqrt2)^2 + (Im B / 2 sqrt2)^2
double relation3(const CorrelationReport& report, Side side);

struct Relation4 {
    double lhs = 0.0;
    /// max_ij |C(A_i,B_j) - (-1)^{ij} B/4|
    double isotropyResidual = 0.0;
};
/// |eta|^2 + (Re B / 2 sqrt2)^2 + (Im B / 2 sqrt2)^2 with its isotropy residual.
Relation4 relation4(const CorrelationReport& report, Side side);

/// I3 = Q00 + Q01 - Q10 + Q11 built from plain products <A_j B_k>.
double fu_i3(const ObservableSet& set, const QuantumState& psi);

struct SchurWitness {
    Matrix matrix3;
    double minEigenvalue = 0.0;
    /// (1-|c0|^2)(1-|c1|^2) - |eta - c0^* c1|^2 with c_i = C(B_j, A_i)
    double detResidual = 0.0;
};
/// The 3x3 correlation matrix of (B_j, A1, A0) (or (A_j, B1, B0) for side B)
/// with its smallest eigenvalue and determinant residual.
SchurWitness schur_witness(const ObservableSet& set, const QuantumState& psi, int j, Side side,
                           double epsilon);

struct BoundReport {
    Complex bell;
    double absBell = 0.0;
    double middleBoundA = 0.0;
    double middleBoundB = 0.0;
    double tlmLhs = 0.0;
    double tlmRhs = 0.0;
    double relation3A = 0.0;
    double relation3B = 0.0;
    double relation4A = 0.0;
    double relation4B = 0.0;
    double isotropyResidual = 0.0;
    double i3 = 0.0;
    double epsilon = 0.0;
};
BoundReport evaluate_bounds(const ObservableSet& set, const QuantumState& psi, double epsilon);

}  // namespace parabell
