#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "parabell/operators.hpp"

namespace parabell {

/// Pure state with unit Euclidean norm (checked to 1e-12).
class QuantumState {
public:
    explicit QuantumState(Vector amplitudes);

    /// Rescales to unit norm; throws InputError on a zero or non-finite vector.
    static QuantumState normalized(Vector amplitudes);
    /// |left> (x) |right>, both normalized first.
    static QuantumState product(const Vector& left, const Vector& right);
    /// Computational basis vector e_index.
    static QuantumState basis(int dim, int index);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }

private:
    Vector amplitudes_;
};

/// <psi|X|psi>
Complex expectation(const Operator& x, const QuantumState& psi);

/// sqrt(<XX^dag> - |<X>|^2) + epsilon^2.
double variance(const Operator& x, const QuantumState& psi, double epsilon);

/// (<XY^dag> - <X><Y>^*) / (Delta(X) Delta(Y)), with regularized spreads.
/// Throws UndefinedCorrelatorError when epsilon == 0 and a spread vanishes.
Complex pearson(const Operator& x, const Operator& y, const QuantumState& psi, double epsilon);

/// Hermitian matrix of pairwise C(X_i, X_j).
Matrix correlation_matrix(std::span<const Operator> ops, const QuantumState& psi,
                          double epsilon);

/// All correlators of one observable set on one state.
struct CorrelationReport {
    /// c[i][j] = C(A_i, B_j)
    std::array<std::array<Complex, 2>, 2> c{};
    Complex etaA;  ///< C(A0, A1)
    Complex etaB;  ///< C(B0, B1)
    /// Regularized spreads keyed by role: alice0, alice1, bob0, bob1.
    std::map<std::string, double> variances;
    double epsilon = 0.0;

    /// C(B_j, A_i), the Hermitian partner of c[i][j].
    Complex bob_alice(int j, int i) const { return std::conj(c[i][j]); }
};

CorrelationReport correlate(const ObservableSet& set, const QuantumState& psi, double epsilon);

/// One cell of the joint (quasi)probability table.
struct QuasiprobabilityCell {
    Complex x_value;
    Complex y_value;
    Complex weight;
};

/// W(x, y) = <psi| P_x^(X) P_y^(Y) |psi> over the eigenvalue grid of two
/// normal operators. Throws InputError for a non-normal operator.
std::vector<QuasiprobabilityCell> quasiprobability(const Operator& x, const Operator& y,
                                                   const QuantumState& psi);

/// Spectral projectors of a normal operator, one per distinct eigenvalue.
struct SpectralProjector {
    Complex eigenvalue;
    Matrix projector;
};
std::vector<SpectralProjector> spectral_projectors(const Operator& x);

}  // namespace parabell
