// Acceptance run: one PASS/FAIL line per primary criterion.
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "parabell/cli.hpp"
#include "parabell/optimizer.hpp"
#include "parabell/reference.hpp"

using namespace parabell;

namespace {

using Clock = std::chrono::steady_clock;

struct CliRun {
    int code = -1;
    Json doc;
    double seconds = 0.0;
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const auto t0 = Clock::now();
    CliRun r;
    r.code = cli::run(args, out, err);
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    std::cerr << err.str();
    try {
        r.doc = Json::parse(out.str());
    } catch (const Json::parse_error&) {
        r.doc = Json();
    }
    return r;
}

int failures = 0;

void verdict(const std::string& name, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

std::string num(double v, int digits = 4) {
    std::ostringstream ss;
    ss << std::setprecision(digits) << v;
    return ss.str();
}

struct CellStats {
    int cells = 0;
    int passed = 0;
    int stable = 0;
    double worstSpread = 0.0;
    std::string worstCell;
    std::string failedCells;
};

void collect(const Json& results, CellStats& s) {
    if (!results.is_array()) return;
    for (const auto& row : results) {
        for (const auto& [name, cell] : row["cells"].items()) {
            ++s.cells;
            const std::string id = row["setLabel"].get<std::string>() + "/" + name;
            if (cell["pass"].get<bool>()) {
                ++s.passed;
            } else {
                s.failedCells += " " + id + "=" + num(cell["value"].get<double>());
            }
            if (cell["epsilonStable"].get<bool>()) ++s.stable;
            const double spread = cell["epsilonSpread"].get<double>();
            if (spread > s.worstSpread) {
                s.worstSpread = spread;
                s.worstCell = id;
            }
        }
    }
}

std::string remaining_sets() {
    std::string labels;
    const auto all = build_standard_sets();
    for (std::size_t k = 2; k < all.size(); ++k) labels += (labels.empty() ? "" : ",") + all[k].label;
    return labels;
}

}  // namespace

int main() {
    // Table I
    const std::vector<std::string> table1_args{"tables", "--sets", "tableI", "--starts", "200",
                                               "--seed", "7"};
    const auto t1 = run_cli(table1_args);
    CellStats s1;
    collect(t1.doc["results"], s1);
    verdict("table-I-reproduction", t1.code == 0 && s1.cells == 10 && s1.passed == 10 && t1.seconds <= 600,
            std::to_string(s1.passed) + "/" + std::to_string(s1.cells) + " cells within +-0.02 in " +
                num(t1.seconds) + " s" + s1.failedCells);

    // Table II: the remaining eight sets (the first two come from the run above)
    const auto t2 = run_cli({"tables", "--sets", remaining_sets(), "--starts", "200", "--seed", "7"});
    CellStats s2;
    collect(t2.doc["results"], s2);
    verdict("table-II-reproduction",
            t2.code == 0 && s1.passed == 10 && s2.cells == 40 && s2.passed == 40 &&
                t1.seconds + t2.seconds <= 2400,
            std::to_string(s1.passed + s2.passed) + "/" + std::to_string(s1.cells + s2.cells) +
                " cells of ten sets within +-0.02 in " + num(t1.seconds + t2.seconds) + " s" + s2.failedCells);

    // epsilon stability over every reproduced cell
    {
        const int cells = s1.cells + s2.cells;
        const int stable = s1.stable + s2.stable;
        const double worst = std::max(s1.worstSpread, s2.worstSpread);
        const std::string where = s1.worstSpread >= s2.worstSpread ? s1.worstCell : s2.worstCell;
        verdict("epsilon-stability", cells == 50 && stable == cells && worst <= kEpsilonSpreadTolerance,
                std::to_string(stable) + "/" + std::to_string(cells) + " cells with spread <= 0.005; worst " +
                    num(worst) + " at " + where);
    }

    // Certification
    {
        const auto states = run_cli({"certify", "--samples", "10000", "--sets", "all", "--seed", "1"});
        const auto ops = run_cli({"certify", "--random-ops", "--dim", "2-6", "--samples", "10000", "--seed", "1"});
        const auto& rs = states.doc["results"];
        const auto& ro = ops.doc["results"];
        const bool ok_docs = rs.is_object() && ro.is_object();
        const long evals_states = ok_docs ? rs["evaluations"].get<long>() : 0;
        const long evals_ops = ok_docs ? ro["evaluations"].get<long>() : 0;
        const long violations = ok_docs ? rs["totalViolations"].get<long>() + ro["totalViolations"].get<long>() : -1;
        const double seconds = states.seconds + ops.seconds;
        verdict("certification",
                states.code == 0 && ops.code == 0 && violations == 0 && evals_states >= 99000 &&
                    evals_ops >= 9900 && seconds <= 300,
                std::to_string(evals_states) + " state samples + " + std::to_string(evals_ops) +
                    " operator samples, " + std::to_string(violations) + " violations in " + num(seconds) +
                    " s (skipped " +
                    (ok_docs ? std::to_string(rs["skipped"].get<long>() + ro["skipped"].get<long>()) : "?") +
                    ")");
    }

    // Theorem 4 discrimination
    {
        OptimizerConfig cfg;
        cfg.starts = 50;
        cfg.seed = 7;
        bool ok = true;
        std::string detail;
        double worst_lhs = 0.0, worst_res = 0.0;
        for (const auto& set : build_standard_sets()) {
            if (set.signaling) continue;
            const auto r = maximize_isotropic(set, cfg, 1e4);
            worst_lhs = std::max(worst_lhs, r.relation4Lhs);
            worst_res = std::max(worst_res, r.isotropyResidual);
            if (r.isotropyResidual > 1e-6 || r.relation4Lhs > 1.0 + 1e-6) ok = false;
        }
        detail = "constrained max lhs " + num(worst_lhs, 10) + " at residual <= " + num(worst_res, 3) + ";";
        cfg.starts = 200;
        for (const auto& set : build_standard_sets()) {
            if (!set.signaling) continue;
            const auto r = maximize_isotropic(set, cfg, 0.0);
            const double reference = (*reference_row(set.label))[4];
            // Reference cells of 1.50 sit on the threshold; they count when
            // within the table tolerance of it.
            const bool exceeds = r.relation4Lhs > 1.5 - kReferenceTolerance &&
                                 std::abs(r.relation4Lhs - reference) <= kReferenceTolerance;
            if (!exceeds) ok = false;
            detail += " " + set.label + "=" + num(r.relation4Lhs) + " (reference " + num(reference, 3) + ")";
        }
        verdict("theorem-4-discrimination", ok, detail);
    }

    // Quasiprobability
    {
        bool ok = true;
        bool nonclassical = false;
        double worst_sum = 0.0, worst_moment = 0.0, worst_neg = 0.0;
        long samples = 0;
        const auto sets = build_standard_sets();
        for (std::size_t si = 0; si < sets.size(); ++si) {
            const auto& set = sets[si];
            std::vector<std::pair<Operator, Operator>> pairs;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) pairs.emplace_back(set.alice(i), set.bob(j));
            pairs.emplace_back(set.alice0, set.alice1);
            pairs.emplace_back(set.bob0, set.bob1);
            for (int n = 0; n < 100; ++n) {
                const auto psi = cli::random_state(9, 2024, si * 1000 + n);
                for (const auto& [x, y] : pairs) {
                    ++samples;
                    const auto phase = commutation_phase(x, y);
                    const bool commuting = phase && std::abs(*phase - 1.0) < 1e-12;
                    Complex total = 0.0, moment = 0.0;
                    for (const auto& cell : quasiprobability(x, y, psi)) {
                        total += cell.weight;
                        moment += cell.x_value * std::conj(cell.y_value) * cell.weight;
                        if (commuting) {
                            worst_neg = std::min(worst_neg, cell.weight.real());
                            if (cell.weight.real() < -1e-12 || std::abs(cell.weight.imag()) > 1e-12) ok = false;
                        } else if (std::abs(cell.weight.imag()) > 1e-6) {
                            nonclassical = true;
                        }
                    }
                    const Operator xy(x.entries() * y.entries().adjoint(), "XYdag");
                    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
                    worst_moment = std::max(worst_moment, std::abs(moment - expectation(xy, psi)));
                }
            }
        }
        ok = ok && worst_sum <= 1e-12 && worst_moment <= 1e-10 && nonclassical;
        verdict("quasiprobability", ok,
                std::to_string(samples) + " samples; max |sum W - 1| " + num(worst_sum, 3) +
                    ", max moment error " + num(worst_moment, 3) + ", min commuting Re W " +
                    num(worst_neg, 3) + ", non-commuting Im W > 1e-6 seen: " + (nonclassical ? "yes" : "no"));
    }

    // Weak measurement
    {
        const auto a = named_observable("A0");
        const auto b = named_observable("B0p").adjoint();
        const auto psi = cli::random_state(9, 0, 0);
        const auto study = cli::run_weak_study(a, b, psi, {0.1, 0.05, 0.02, 0.01}, 1.0, 1e-3);
        const bool ok = !study.exact && study.order >= 1.8 && study.order <= 2.2 && study.recoveryApplicable &&
                        study.recoveryError <= 1e-5;
        verdict("weak-measurement", ok,
                "log-log slope " + num(study.order, 5) + " over g/sigma 0.1..0.01; recovery error " +
                    num(study.recoveryError, 3) + " at g/sigma 1e-3");
    }

    // Determinism
    {
        const auto again = run_cli(table1_args);
        const bool same = t1.doc.contains("results") && again.doc.contains("results") &&
                          t1.doc["results"].dump() == again.doc["results"].dump();
        verdict("determinism", same, same ? "results payloads byte-identical" : "results payloads differ");
    }

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
