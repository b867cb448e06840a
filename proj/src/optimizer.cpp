#include "parabell/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "parabell/errors.hpp"

namespace parabell {

namespace {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

constexpr double kFiniteDifferenceStep = 1e-6;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-14;
constexpr double kGradientFloor = 1e-9;

Vector to_complex(const RealVector& x) {
    const auto n = x.size() / 2;
    Vector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = Complex(x(k), x(n + k));
    return v;
}

RealVector to_real(const Vector& v) {
    const auto n = v.size();
    RealVector x(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        x(k) = v(k).real();
        x(n + k) = v(k).imag();
    }
    return x;
}

std::string describe_state(const RealVector& x) {
    std::ostringstream out;
    out.precision(17);
    const auto v = to_complex(x);
    out << "[";
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        out << (k ? ", " : "") << "[" << v(k).real() << ", " << v(k).imag() << "]";
    }
    out << "]";
    return out.str();
}

// Objective on raw real coordinates, evaluated at the normalized state.
class RealObjective {
public:
    explicit RealObjective(const Objective& f) : f_(f) {}

    double operator()(const RealVector& x) const {
        const double n = x.norm();
        if (!std::isfinite(n) || n == 0.0) {
            throw NumericalFailure("optimizer reached a degenerate state " + describe_state(x));
        }
        const double value = f_(QuantumState(to_complex(x / n)));
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "objective is non-finite (" << value << ") at state " << describe_state(x / n);
            throw NumericalFailure(msg.str());
        }
        return value;
    }

    RealVector gradient(const RealVector& x) const {
        RealVector g(x.size());
        RealVector probe = x;
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            probe(k) = x(k) + kFiniteDifferenceStep;
            const double up = (*this)(probe);
            probe(k) = x(k) - kFiniteDifferenceStep;
            const double down = (*this)(probe);
            probe(k) = x(k);
            g(k) = (up - down) / (2.0 * kFiniteDifferenceStep);
        }
        return g;
    }

private:
    const Objective& f_;
};

Vector gaussian_start(std::uint64_t seed, int start_index, int dim) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(start_index)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    RealVector x(2 * dim);
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = normal(rng);
    return to_complex(x);
}

// Runs fn(i) for i in [0, count) on `threads` workers and rethrows the
// exception of the lowest failing index.
template <typename Fn>
void parallel_for(int count, int threads, Fn fn) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    const int n = std::max(1, std::min(threads, count));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double min_spread(const ObservableSet& set, const QuantumState& psi) {
    double m = std::numeric_limits<double>::infinity();
    for (const Operator* op : {&set.alice0, &set.alice1, &set.bob0, &set.bob1}) {
        m = std::min(m, variance(*op, psi, 0.0));
    }
    return m;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (starts < 1) throw InputError("optimizer: starts must be >= 1");
    if (maxIterations < 1) throw InputError("optimizer: maxIterations must be >= 1");
    if (!(convergenceTol > 0.0)) throw InputError("optimizer: convergenceTol must be > 0");
    if (!(stepInit > 0.0)) throw InputError("optimizer: stepInit must be > 0");
    for (double eps : epsilonSweep) {
        if (!(eps >= 0.0) || !std::isfinite(eps)) {
            throw InputError("optimizer: epsilon values must be finite and >= 0");
        }
    }
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PARABELL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
        throw InputError("PARABELL_THREADS must be an integer >= 1");
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

LocalAscentResult local_ascent(const Objective& objective, const Vector& start,
                               const OptimizerConfig& config, bool record_trace) {
    const RealObjective f(objective);
    RealVector x = to_real(start);
    const double n0 = x.norm();
    if (!(n0 > 0.0) || !std::isfinite(n0)) throw InputError("local_ascent: zero start vector");
    x /= n0;

    const auto dim = x.size();
    double fx = f(x);
    RealVector g = f.gradient(x);
    RealMatrix h = RealMatrix::Identity(dim, dim);
    bool fresh = true;  // h is the identity
    int stalls = 0;

    LocalAscentResult out;
    if (record_trace) out.trace.push_back(fx);

    int it = 0;
    for (; it < config.maxIterations; ++it) {
        if (g.norm() < kGradientFloor) {
            out.converged = true;
            break;
        }
        RealVector p = h * g;
        double slope = p.dot(g);
        if (!(slope > 0.0)) {
            h.setIdentity();
            fresh = true;
            p = g;
            slope = p.dot(g);
        }
        double t = fresh ? config.stepInit / p.norm() : 1.0;

        RealVector xn;
        double fn = fx;
        bool accepted = false;
        while (t * p.norm() > kMinStep) {
            xn = x + t * p;
            xn /= xn.norm();
            fn = f(xn);
            if (fn >= fx + kArmijo * t * slope && fn > fx) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (fresh) {
                out.converged = true;
                break;
            }
            h.setIdentity();
            fresh = true;
            continue;
        }

        const RealVector gn = f.gradient(xn);
        // BFGS on -f: s = step, y = change of the gradient of -f.
        const RealVector s = xn - x;
        const RealVector y = g - gn;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const RealVector hy = h * y;
            h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
                 rho * (hy * s.transpose() + s * hy.transpose());
            fresh = false;
        }

        const double gain = fn - fx;
        x = xn;
        fx = fn;
        g = gn;
        if (record_trace) out.trace.push_back(fx);

        if (gain <= config.convergenceTol * std::max(1.0, std::abs(fx))) {
            if (++stalls >= 3) {
                out.converged = true;
                ++it;
                break;
            }
        } else {
            stalls = 0;
        }
    }

    out.value = fx;
    out.state = to_complex(x);
    out.iterations = it;
    return out;
}

OptimizationResult maximize(const Objective& objective, int dim, const OptimizerConfig& config,
                            std::string label) {
    config.validate();
    if (dim < 1) throw InputError("maximize: dim must be >= 1");

    std::vector<LocalAscentResult> runs(static_cast<std::size_t>(config.starts));
    parallel_for(config.starts, resolve_thread_count(config.threads), [&](int i) {
        runs[static_cast<std::size_t>(i)] =
            local_ascent(objective, gaussian_start(config.seed, i, dim), config);
    });

    std::size_t best = 0;
    int converged = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].converged) ++converged;
        if (runs[i].value > runs[best].value) best = i;
    }

    OptimizationResult result;
    result.bestValue = runs[best].value;
    result.bestState = QuantumState::normalized(runs[best].state);
    result.startsConverged = converged;
    result.objectiveLabel = std::move(label);
    return result;
}

OptimizationResult maximize_over_epsilons(const ObjectiveFactory& factory, int dim,
                                          const OptimizerConfig& config, std::string label) {
    config.validate();
    if (config.epsilonSweep.empty()) throw InputError("maximize: empty epsilon sweep");

    OptimizationResult best;
    bool have = false;
    for (double eps : config.epsilonSweep) {
        const Objective objective = factory(eps);
        auto run = maximize(objective, dim, config, label);
        best.perEpsilonValues[eps] = run.bestValue;
        if (!have || run.bestValue > best.bestValue) {
            best.bestValue = run.bestValue;
            best.bestState = run.bestState;
            best.bestEpsilon = eps;
            best.startsConverged = run.startsConverged;
            have = true;
        }
    }
    best.objectiveLabel = std::move(label);
    return best;
}

std::string_view objective_name(BoundObjective which) {
    switch (which) {
        case BoundObjective::I3: return "i3";
        case BoundObjective::Tsirelson: return "tsirelsonLhs";
        case BoundObjective::TlmRatio: return "tlmRatio";
        case BoundObjective::Relation3: return "relation3";
        case BoundObjective::Relation4: return "relation4";
    }
    return "unknown";
}

double evaluate_objective(BoundObjective which, const ObservableSet& set,
                          const QuantumState& psi, double epsilon) {
    if (which == BoundObjective::I3) return fu_i3(set, psi);
    const auto report = correlate(set, psi, epsilon);
    switch (which) {
        case BoundObjective::Tsirelson: return std::abs(bell_parameter(report));
        case BoundObjective::TlmRatio: return tlm(report).ratio();
        case BoundObjective::Relation3:
            return std::max(relation3(report, Side::A), relation3(report, Side::B));
        case BoundObjective::Relation4:
            return std::max(relation4(report, Side::A).lhs, relation4(report, Side::B).lhs);
        case BoundObjective::I3: break;
    }
    return fu_i3(set, psi);
}

Objective make_objective(BoundObjective which, const ObservableSet& set, double epsilon) {
    return [which, set, epsilon](const QuantumState& psi) {
        return evaluate_objective(which, set, psi, epsilon);
    };
}

IsotropicResult maximize_isotropic(const ObservableSet& set, const OptimizerConfig& config,
                                   double penaltyWeight) {
    if (!(penaltyWeight >= 0.0) || !std::isfinite(penaltyWeight)) {
        throw InputError("maximize_isotropic: penaltyWeight must be finite and >= 0");
    }
    auto run = [&](double weight) {
        const auto factory = [&set, weight](double eps) -> Objective {
            return [&set, weight, eps](const QuantumState& psi) {
                const auto report = correlate(set, psi, eps);
                const auto a = relation4(report, Side::A);
                const double lhs = std::max(a.lhs, relation4(report, Side::B).lhs);
                return lhs - weight * a.isotropyResidual * a.isotropyResidual;
            };
        };
        IsotropicResult r;
        r.optimization = maximize_over_epsilons(factory, set.alice0.dim(), config,
                                                "relation4-isotropic:" + set.label);
        r.penaltyWeight = weight;
        const auto report = correlate(set, r.optimization.bestState, r.optimization.bestEpsilon);
        const auto a = relation4(report, Side::A);
        r.relation4Lhs = std::max(a.lhs, relation4(report, Side::B).lhs);
        r.isotropyResidual = a.isotropyResidual;
        return r;
    };

    auto result = run(penaltyWeight);
    if (penaltyWeight > 0.0 && result.isotropyResidual > 1e-6) {
        result = run(penaltyWeight * 10.0);
    }
    return result;
}

std::vector<TableRow> reproduce_tables(const std::vector<ObservableSet>& sets,
                                       const OptimizerConfig& config) {
    std::vector<TableRow> rows;
    rows.reserve(sets.size());
    for (const auto& set : sets) {
        TableRow row;
        row.setLabel = set.label;
        row.signaling = set.signaling;
        for (std::size_t k = 0; k < kTableObjectives.size(); ++k) {
            const auto which = kTableObjectives[k];
            const auto factory = [&set, which](double eps) {
                return make_objective(which, set, eps);
            };
            auto& cell = row.cells[k];
            cell.result = maximize_over_epsilons(
                factory, set.alice0.dim(), config,
                std::string(objective_name(which)) + ":" + set.label);
            cell.minSpread = min_spread(set, cell.result.bestState);
            const auto report = correlate(set, cell.result.bestState, cell.result.bestEpsilon);
            cell.isotropyResidual = relation4(report, Side::A).isotropyResidual;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace parabell
