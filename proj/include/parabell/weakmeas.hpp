#pragma once

#include "parabell/correlator.hpp"

namespace parabell {

/// Two identical Gaussian pointers with coupling g and width sigma.
struct DetectorConfig {
    double g = 1e-3;
    double sigma = 1.0;

    /// Throws InputError unless both are finite and positive.
    void validate() const;
};

/// <psi| AB + BA |psi> by direct matrix arithmetic.
Complex anticommutator_exact(const Operator& a, const Operator& b, const QuantumState& psi);

/// Eigenvalues of a Hermitian operator grouped into orthogonal projectors;
/// eigenvalues closer than 1e-10 share a projector.
struct HermitianEigenspace {
    double eigenvalue;
    Matrix projector;
};
std::vector<HermitianEigenspace> hermitian_eigenspaces(const Operator& h);

/// <Phi|Q1 Q2|Phi> after the system couples to pointer 1 through aH and then
/// to pointer 2 through bH:
///   (g^2/2) sum_{a,a'} (a + a') exp(-g^2 (a-a')^2 / 4 sigma^2) <psi|P_a bH P_a'|psi>
double pointer_correlation(const Operator& aH, const Operator& bH, const QuantumState& psi,
                           const DetectorConfig& det);

/// Hermitian parts with A = real + i*imag.
struct HermitianParts {
    Operator real;  ///< (A + A^dag) / 2
    Operator imag;  ///< i (A^dag - A) / 2
};
HermitianParts hermitian_parts(const Operator& a);

/// Estimate of <{A, B}> from four Hermitian pointer runs, rescaled by 2/g^2.
Complex weak_product_correlator(const Operator& a, const Operator& b, const QuantumState& psi,
                                const DetectorConfig& det);

}  // namespace parabell
