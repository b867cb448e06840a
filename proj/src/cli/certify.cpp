#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "parabell/cli.hpp"
#include "parabell/errors.hpp"

namespace parabell::cli {

namespace {

constexpr double kTol = 1e-9;
constexpr double kMinSpread = 1e-6;

Operator random_operator(int dim, std::mt19937_64& rng, std::string label) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = Complex(normal(rng), normal(rng));
    }
    return Operator(std::move(m), std::move(label));
}

void record(CertifySummary& s, const std::string& check, bool ok, const ObservableSet& set,
            const QuantumState& psi) {
    if (ok) return;
    ++s.violations[check];
    ++s.totalViolations;
    if (!s.counterexample) {
        s.counterexample = Json{
            {"check", check}, {"set", set.label}, {"dim", psi.dim()}, {"state", to_json(psi)}};
    }
}

void check_sample(CertifySummary& s, const ObservableSet& set, const QuantumState& psi,
                  double epsilon) {
    const std::array<Operator, 4> ops{set.alice0, set.alice1, set.bob0, set.bob1};
    for (const auto& op : ops) {
        if (variance(op, psi, 0.0) <= kMinSpread) {
            ++s.skipped;
            return;
        }
    }
    ++s.evaluations;

    const Matrix c = correlation_matrix(ops, psi, epsilon);
    const double max_abs = c.cwiseAbs().maxCoeff();
    s.maxAbsCorrelator = std::max(s.maxAbsCorrelator, max_abs);
    record(s, "correlatorBound", max_abs <= 1.0 + kTol, set, psi);

    Eigen::SelfAdjointEigenSolver<Matrix> solver(c, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    s.minCorrelationEigenvalue = std::min(s.minCorrelationEigenvalue, min_eig);
    record(s, "correlationMatrixPsd", min_eig >= -kTol, set, psi);

    bool schur_ok = true;
    for (int j = 0; j < 2; ++j) {
        for (Side side : {Side::A, Side::B}) {
            const auto w = schur_witness(set, psi, j, side, epsilon);
            s.minSchurEigenvalue = std::min(s.minSchurEigenvalue, w.minEigenvalue);
            s.minSchurDeterminant = std::min(s.minSchurDeterminant, w.detResidual);
            schur_ok = schur_ok && w.minEigenvalue >= -kTol && w.detResidual >= -kTol;
        }
    }
    record(s, "schurWitness", schur_ok, set, psi);

    const auto report = correlate(set, psi, epsilon);
    const auto chain = theorem1_chain(report);
    s.maxChainExcess =
        std::max(s.maxChainExcess, chain.absBell - std::min(chain.middleA, chain.middleB));
    record(s, "theorem1Chain", chain.holds(kTol), set, psi);

    const auto t = tlm(report);
    s.maxTlmExcess = std::max(s.maxTlmExcess, t.lhs - t.rhs);
    record(s, "theorem2Tlm", t.holds(kTol), set, psi);

    const Complex bell = bell_parameter(report);
    bool r3_ok = true;
    for (Side side : {Side::A, Side::B}) {
        const double r3 = relation3(report, side);
        s.maxRelation3 = std::max(s.maxRelation3, r3);
        const double re_eta = (side == Side::A ? report.etaA : report.etaB).real();
        const double squared_bound =
            4.0 * (1.0 + std::sqrt(std::max(0.0, 1.0 - re_eta * re_eta)));
        r3_ok = r3_ok && r3 <= 1.0 + kTol && std::norm(bell) <= squared_bound + kTol;
    }
    record(s, "theorem3", r3_ok, set, psi);

    bool r4_ok = true;
    for (Side side : {Side::A, Side::B}) {
        const auto r4 = relation4(report, side);
        if (r4.isotropyResidual <= 1e-8) r4_ok = r4_ok && r4.lhs <= 1.0 + 1e-6;
    }
    record(s, "theorem4Conditional", r4_ok, set, psi);
}

void merge(CertifySummary& into, const CertifySummary& part) {
    into.evaluations += part.evaluations;
    into.skipped += part.skipped;
    for (const auto& [k, v] : part.violations) into.violations[k] += v;
    into.totalViolations += part.totalViolations;
    into.maxAbsCorrelator = std::max(into.maxAbsCorrelator, part.maxAbsCorrelator);
    into.minCorrelationEigenvalue =
        std::min(into.minCorrelationEigenvalue, part.minCorrelationEigenvalue);
    into.minSchurEigenvalue = std::min(into.minSchurEigenvalue, part.minSchurEigenvalue);
    into.minSchurDeterminant = std::min(into.minSchurDeterminant, part.minSchurDeterminant);
    into.maxChainExcess = std::max(into.maxChainExcess, part.maxChainExcess);
    into.maxTlmExcess = std::max(into.maxTlmExcess, part.maxTlmExcess);
    into.maxRelation3 = std::max(into.maxRelation3, part.maxRelation3);
    if (!into.counterexample && part.counterexample) into.counterexample = part.counterexample;
}

void certify_range(const CertifyOptions& o, long begin, long end, CertifySummary& out) {
    for (long i = begin; i < end; ++i) {
        const auto stream = static_cast<std::uint64_t>(i);
        if (o.randomOps) {
            const int dim = o.dims[static_cast<std::size_t>(i) % o.dims.size()];
            std::seed_seq seq{static_cast<std::uint32_t>(o.seed),
                              static_cast<std::uint32_t>(o.seed >> 32),
                              static_cast<std::uint32_t>(stream),
                              static_cast<std::uint32_t>(stream >> 32), 0x0b5u};
            std::mt19937_64 rng(seq);
            auto set = make_observable_set(
                "random-dim" + std::to_string(dim), random_operator(dim, rng, "X0"),
                random_operator(dim, rng, "X1"), random_operator(dim, rng, "Y0"),
                random_operator(dim, rng, "Y1"));
            check_sample(out, set, random_state(dim, o.seed, stream), o.epsilon);
        } else {
            const auto psi = random_state(o.sets.front().alice0.dim(), o.seed, stream);
            for (const auto& set : o.sets) check_sample(out, set, psi, o.epsilon);
        }
    }
}

}  // namespace

const std::vector<std::string>& certify_check_names() {
    static const std::vector<std::string> names{
        "correlatorBound", "correlationMatrixPsd", "schurWitness",       "theorem1Chain",
        "theorem2Tlm",     "theorem3",             "theorem4Conditional"};
    return names;
}

QuantumState random_state(int dim, std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (int k = 0; k < dim; ++k) v(k) = Complex(normal(rng), normal(rng));
    return QuantumState::normalized(std::move(v));
}

CertifySummary run_certification(const CertifyOptions& o) {
    if (o.samples < 1) throw InputError("certify: --samples must be >= 1");
    if (o.randomOps) {
        if (o.dims.empty()) throw InputError("certify: no dimensions given");
        for (int d : o.dims) {
            if (d < 2) throw InputError("certify: dimension must be >= 2");
        }
    } else if (o.sets.empty()) {
        throw InputError("certify: no observable sets selected");
    }

    const int threads = static_cast<int>(
        std::min<long>(resolve_thread_count(o.threads), std::max<long>(1, o.samples / 256)));
    std::vector<CertifySummary> parts(static_cast<std::size_t>(threads));
    std::vector<std::exception_ptr> errors(parts.size());
    const long chunk = (o.samples + threads - 1) / threads;
    auto job = [&](int t) {
        try {
            const long begin = t * chunk;
            certify_range(o, begin, std::min(o.samples, begin + chunk),
                          parts[static_cast<std::size_t>(t)]);
        } catch (...) {
            errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
    };
    if (threads == 1) {
        job(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(job, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    CertifySummary total;
    for (const auto& name : certify_check_names()) total.violations[name] = 0;
    for (const auto& p : parts) merge(total, p);
    return total;
}

}  // namespace parabell::cli
