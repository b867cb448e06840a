#include "parabell/weakmeas.hpp"

#include <cmath>

#include "parabell/errors.hpp"

namespace parabell {

namespace {

constexpr double kDegenerate = 1e-10;
constexpr double kHermitianTol = 1e-12;

void require_same_dim(const Operator& a, const Operator& b, const QuantumState& psi,
                      const char* where) {
    if (a.dim() != psi.dim() || b.dim() != psi.dim()) {
        throw InputError(std::string(where) + ": dimension mismatch");
    }
}

}  // namespace

void DetectorConfig::validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) throw InputError("detector coupling g must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("pointer width sigma must be > 0");
}

Complex anticommutator_exact(const Operator& a, const Operator& b, const QuantumState& psi) {
    require_same_dim(a, b, psi, "anticommutator_exact");
    const Matrix& am = a.entries();
    const Matrix& bm = b.entries();
    const Vector& v = psi.amplitudes();
    return v.dot((am * bm + bm * am) * v);
}

std::vector<HermitianEigenspace> hermitian_eigenspaces(const Operator& h) {
    const Matrix& m = h.entries();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw InputError("operator '" + h.label() + "' is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();

    std::vector<HermitianEigenspace> spaces;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        const Vector col = vectors.col(k);
        // Eigenvalues come sorted, so a degenerate cluster is contiguous.
        if (!spaces.empty() && values(k) - spaces.back().eigenvalue < kDegenerate) {
            spaces.back().projector += col * col.adjoint();
        } else {
            spaces.push_back({values(k), col * col.adjoint()});
        }
    }
    return spaces;
}

double pointer_correlation(const Operator& aH, const Operator& bH, const QuantumState& psi,
                           const DetectorConfig& det) {
    det.validate();
    require_same_dim(aH, bH, psi, "pointer_correlation");
    if ((bH.entries() - bH.entries().adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw InputError("operator '" + bH.label() + "' is not Hermitian");
    }
    const auto spaces = hermitian_eigenspaces(aH);
    const Vector& v = psi.amplitudes();

    std::vector<Vector> parts;
    parts.reserve(spaces.size());
    for (const auto& s : spaces) parts.push_back(s.projector * v);

    const double scale = det.g * det.g / (4.0 * det.sigma * det.sigma);
    double sum = 0.0;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        const Vector b_part = bH.entries() * parts[i];
        for (std::size_t k = 0; k < spaces.size(); ++k) {
            const double a = spaces[k].eigenvalue;
            const double a2 = spaces[i].eigenvalue;
            const double gap = a - a2;
            // <psi|P_a bH P_a'|psi>; the (a, a') and (a', a) terms are conjugate.
            sum += (a + a2) * std::exp(-scale * gap * gap) * parts[k].dot(b_part).real();
        }
    }
    return 0.5 * det.g * det.g * sum;
}

HermitianParts hermitian_parts(const Operator& a) {
    const Matrix& m = a.entries();
    const Complex i(0.0, 1.0);
    return HermitianParts{Operator((m + m.adjoint()) / 2.0, "Re[" + a.label() + "]"),
                          Operator(i * (m.adjoint() - m) / 2.0, "Im[" + a.label() + "]")};
}

Complex weak_product_correlator(const Operator& a, const Operator& b, const QuantumState& psi,
                                const DetectorConfig& det) {
    det.validate();
    require_same_dim(a, b, psi, "weak_product_correlator");
    const auto pa = hermitian_parts(a);
    const auto pb = hermitian_parts(b);
    const Complex i(0.0, 1.0);
    const double rr = pointer_correlation(pa.real, pb.real, psi, det);
    const double ii = pointer_correlation(pa.imag, pb.imag, psi, det);
    const double ir = pointer_correlation(pa.imag, pb.real, psi, det);
    const double ri = pointer_correlation(pa.real, pb.imag, psi, det);
    return (2.0 / (det.g * det.g)) * (rr - ii + i * ir + i * ri);
}

}  // namespace parabell
