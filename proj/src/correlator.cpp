#include "parabell/correlator.hpp"

#include <cmath>
#include <sstream>

#include "parabell/errors.hpp"

namespace parabell {

namespace {

constexpr double kNormTol = 1e-12;
// Spreads below this are treated as zero when no cutoff is applied.
constexpr double kZeroSpread = 1e-12;

void require_dim(const Operator& x, const QuantumState& psi, const char* where) {
    if (x.dim() != psi.dim()) {
        std::ostringstream msg;
        msg << where << ": operator '" << x.label() << "' has dim " << x.dim()
            << " but state has dim " << psi.dim();
        throw InputError(msg.str());
    }
}

// (X - <X>)^dag |psi>. Its norm is the spread and the inner product of two
// such vectors is the covariance <X Y^dag> - <X><Y>^*.
struct Centered {
    Vector vec;
    Complex mean;
    double spread;
};

Centered center(const Matrix& x, const Vector& psi) {
    Vector u = x.adjoint() * psi;
    const Complex mean = u.dot(psi);
    u -= std::conj(mean) * psi;
    const double spread = u.norm();
    return Centered{std::move(u), mean, spread};
}

Complex correlate_centered(const Centered& x, const Centered& y, double epsilon,
                           const std::string& xl, const std::string& yl) {
    const double eps2 = epsilon * epsilon;
    if (epsilon == 0.0 && (x.spread < kZeroSpread || y.spread < kZeroSpread)) {
        throw UndefinedCorrelatorError("C(" + xl + ", " + yl +
                                       ") is undefined: zero spread without cutoff");
    }
    return x.vec.dot(y.vec) / ((x.spread + eps2) * (y.spread + eps2));
}

}  // namespace

QuantumState::QuantumState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw InputError("state must have positive dimension");
    const double n = amplitudes_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTol) {
        std::ostringstream msg;
        msg << "state norm must be 1 within 1e-12, got " << n;
        throw InputError(msg.str());
    }
}

QuantumState QuantumState::normalized(Vector amplitudes) {
    const double n = amplitudes.norm();
    if (!std::isfinite(n) || n == 0.0) {
        throw InputError("cannot normalize a zero or non-finite state vector");
    }
    amplitudes /= n;
    return QuantumState(std::move(amplitudes));
}

QuantumState QuantumState::product(const Vector& left, const Vector& right) {
    Vector out(left.size() * right.size());
    for (Eigen::Index i = 0; i < left.size(); ++i) {
        out.segment(i * right.size(), right.size()) = left(i) * right;
    }
    return normalized(std::move(out));
}

QuantumState QuantumState::basis(int dim, int index) {
    if (dim <= 0 || index < 0 || index >= dim) throw InputError("basis index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return QuantumState(std::move(v));
}

Complex expectation(const Operator& x, const QuantumState& psi) {
    require_dim(x, psi, "expectation");
    return psi.amplitudes().dot(x.entries() * psi.amplitudes());
}

double variance(const Operator& x, const QuantumState& psi, double epsilon) {
    require_dim(x, psi, "variance");
    return center(x.entries(), psi.amplitudes()).spread + epsilon * epsilon;
}

Complex pearson(const Operator& x, const Operator& y, const QuantumState& psi, double epsilon) {
    require_dim(x, psi, "pearson");
    require_dim(y, psi, "pearson");
    const auto cx = center(x.entries(), psi.amplitudes());
    const auto cy = center(y.entries(), psi.amplitudes());
    return correlate_centered(cx, cy, epsilon, x.label(), y.label());
}

Matrix correlation_matrix(std::span<const Operator> ops, const QuantumState& psi,
                          double epsilon) {
    const auto n = static_cast<Eigen::Index>(ops.size());
    std::vector<Centered> centered;
    centered.reserve(ops.size());
    for (const auto& op : ops) {
        require_dim(op, psi, "correlation_matrix");
        centered.push_back(center(op.entries(), psi.amplitudes()));
    }
    Matrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            c(i, j) = correlate_centered(centered[i], centered[j], epsilon, ops[i].label(),
                                         ops[j].label());
            c(j, i) = std::conj(c(i, j));
        }
        c(i, i) = c(i, i).real();
    }
    return c;
}

CorrelationReport correlate(const ObservableSet& set, const QuantumState& psi, double epsilon) {
    const std::array<const Operator*, 4> ops{&set.alice0, &set.alice1, &set.bob0, &set.bob1};
    std::array<Centered, 4> cen;
    for (std::size_t k = 0; k < ops.size(); ++k) {
        require_dim(*ops[k], psi, "correlate");
        cen[k] = center(ops[k]->entries(), psi.amplitudes());
    }
    auto corr = [&](int a, int b) {
        return correlate_centered(cen[a], cen[b], epsilon, ops[a]->label(), ops[b]->label());
    };

    CorrelationReport r;
    r.epsilon = epsilon;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r.c[i][j] = corr(i, 2 + j);
    }
    r.etaA = corr(0, 1);
    r.etaB = corr(2, 3);
    const double eps2 = epsilon * epsilon;
    r.variances = {{"alice0", cen[0].spread + eps2},
                   {"alice1", cen[1].spread + eps2},
                   {"bob0", cen[2].spread + eps2},
                   {"bob1", cen[3].spread + eps2}};
    return r;
}

std::vector<SpectralProjector> spectral_projectors(const Operator& x) {
    const Matrix& m = x.entries();
    const auto n = m.rows();
    if ((m * m.adjoint() - m.adjoint() * m).cwiseAbs().maxCoeff() > 1e-10) {
        throw InputError("operator '" + x.label() + "' is not normal");
    }
    const Matrix id = Matrix::Identity(n, n);
    std::vector<SpectralProjector> out;

    if ((m * m * m - id).cwiseAbs().maxCoeff() <= 1e-10) {
        // Spectrum within {1, w, w^*}: P_r = (1/3) sum_k (X / lambda_r)^k.
        for (int r = 0; r < 3; ++r) {
            const Complex lambda = std::polar(1.0, 2.0 * std::numbers::pi * r / 3.0);
            const Matrix scaled = m / lambda;
            Matrix p = (id + scaled + scaled * scaled) / 3.0;
            if (p.cwiseAbs().maxCoeff() > 1e-12) out.push_back({lambda, std::move(p)});
        }
        return out;
    }

    // Generic normal operator: cluster eigenvalues, then Lagrange interpolation
    // P_r = prod_{s != r} (X - l_s) / (l_r - l_s).
    Eigen::ComplexEigenSolver<Matrix> solver(m, false);
    std::vector<Complex> distinct;
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex ev = solver.eigenvalues()(k);
        bool seen = false;
        for (const auto& d : distinct) seen = seen || std::abs(d - ev) < 1e-8;
        if (!seen) distinct.push_back(ev);
    }
    for (std::size_t r = 0; r < distinct.size(); ++r) {
        Matrix p = id;
        for (std::size_t s = 0; s < distinct.size(); ++s) {
            if (s == r) continue;
            p = p * (m - distinct[s] * id) / (distinct[r] - distinct[s]);
        }
        out.push_back({distinct[r], std::move(p)});
    }
    return out;
}

std::vector<QuasiprobabilityCell> quasiprobability(const Operator& x, const Operator& y,
                                                   const QuantumState& psi) {
    require_dim(x, psi, "quasiprobability");
    require_dim(y, psi, "quasiprobability");
    const auto px = spectral_projectors(x);
    const auto py = spectral_projectors(y);
    const Vector& v = psi.amplitudes();

    std::vector<QuasiprobabilityCell> cells;
    cells.reserve(px.size() * py.size());
    for (const auto& a : px) {
        const Vector left = a.projector.adjoint() * v;
        for (const auto& b : py) {
            cells.push_back({a.eigenvalue, b.eigenvalue, left.dot(b.projector * v)});
        }
    }
    return cells;
}

}  // namespace parabell
