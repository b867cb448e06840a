#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parabell/bounds.hpp"

namespace parabell {

struct OptimizerConfig {
    int starts = 200;
    int maxIterations = 2000;
    double convergenceTol = 1e-9;
    std::vector<double> epsilonSweep{1e-2, 1e-3, 1e-4};
    std::uint64_t seed = 0;
    /// Length of the first trial step (and of every step after a curvature reset).
    double stepInit = 0.1;
    /// Worker threads; 0 means PARABELL_THREADS or the hardware default.
    int threads = 0;

    /// Throws InputError when a field is out of range.
    void validate() const;
};

using Objective = std::function<double(const QuantumState&)>;
using ObjectiveFactory = std::function<Objective(double epsilon)>;

struct LocalAscentResult {
    double value = 0.0;
    Vector state;
    int iterations = 0;
    bool converged = false;
    /// Objective after each accepted step (only filled when requested).
    std::vector<double> trace;
};

/// Quasi-Newton (BFGS) ascent on the 2*dim real coordinates of the state with
/// central-difference gradients and renormalization after every step.
/// Throws NumericalFailure when the objective returns a non-finite value.
LocalAscentResult local_ascent(const Objective& objective, const Vector& start,
                               const OptimizerConfig& config, bool record_trace = false);

struct OptimizationResult {
    double bestValue = 0.0;
    QuantumState bestState = QuantumState::basis(1, 0);
    /// epsilon -> best value at that cutoff (empty for a single objective).
    std::map<double, double> perEpsilonValues;
    /// Cutoff of the run that produced bestState (NaN for a single objective).
    double bestEpsilon = std::numeric_limits<double>::quiet_NaN();
    int startsConverged = 0;
    std::string objectiveLabel;
};

/// Multi-start local ascent from seeded Gaussian starts; deterministic in
/// (seed, config) regardless of thread count.
OptimizationResult maximize(const Objective& objective, int dim, const OptimizerConfig& config,
                            std::string label = {});

/// Runs `maximize` once per cutoff of config.epsilonSweep and keeps the best.
OptimizationResult maximize_over_epsilons(const ObjectiveFactory& factory, int dim,
                                          const OptimizerConfig& config, std::string label = {});

/// The five tabulated quantities, in column order.
enum class BoundObjective { I3, Tsirelson, TlmRatio, Relation3, Relation4 };
inline constexpr std::array<BoundObjective, 5> kTableObjectives{
    BoundObjective::I3, BoundObjective::Tsirelson, BoundObjective::TlmRatio,
    BoundObjective::Relation3, BoundObjective::Relation4};

std::string_view objective_name(BoundObjective which);

/// Relation 3/4 take the larger of the two eta sides.
double evaluate_objective(BoundObjective which, const ObservableSet& set,
                          const QuantumState& psi, double epsilon);
Objective make_objective(BoundObjective which, const ObservableSet& set, double epsilon);

struct IsotropicResult {
    OptimizationResult optimization;  ///< over the penalized objective
    double relation4Lhs = 0.0;        ///< max over sides at the best state
    double isotropyResidual = 0.0;
    double penaltyWeight = 0.0;       ///< weight actually used after escalation
};

/// Maximizes relation4 - penaltyWeight * residual^2. A positive weight is
/// escalated once by 10x when the final residual exceeds 1e-6; zero gives the
/// unconstrained maximum.
IsotropicResult maximize_isotropic(const ObservableSet& set, const OptimizerConfig& config,
                                   double penaltyWeight = 1e4);

struct TableCell {
    OptimizationResult result;
    /// Smallest unregularized spread of the four observables at bestState.
    double minSpread = 0.0;
    /// Isotropy residual at bestState (recorded for every cell).
    double isotropyResidual = 0.0;
};

struct TableRow {
    std::string setLabel;
    bool signaling = false;
    std::array<TableCell, 5> cells;
};

std::vector<TableRow> reproduce_tables(const std::vector<ObservableSet>& sets,
                                       const OptimizerConfig& config);

/// Worker count: `requested` if positive, else PARABELL_THREADS, else hardware.
int resolve_thread_count(int requested);

}  // namespace parabell
