#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "parabell/cli.hpp"
#include "parabell/errors.hpp"
#include "parabell/reference.hpp"

namespace parabell::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& args) {
    std::string s = "parabell";
    for (const auto& a : args) s += " " + a;
    return s;
}

std::vector<std::string> labels_of(const std::vector<ObservableSet>& sets) {
    std::vector<std::string> out;
    for (const auto& s : sets) out.push_back(s.label);
    return out;
}

// Writes `text` to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f.flush()) throw IoError("failed writing '" + path + "'");
}

std::vector<int> parse_dims(const std::string& spec) {
    std::vector<int> dims;
    try {
        const auto dash = spec.find('-');
        if (dash != std::string::npos && dash > 0) {
            const int lo = std::stoi(spec.substr(0, dash));
            const int hi = std::stoi(spec.substr(dash + 1));
            if (hi < lo) throw InputError("bad --dim range '" + spec + "'");
            for (int d = lo; d <= hi; ++d) dims.push_back(d);
        } else {
            std::stringstream ss(spec);
            std::string item;
            while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
        }
    } catch (const std::logic_error&) {
        throw InputError("bad --dim value '" + spec + "'");
    }
    for (int d : dims) {
        if (d < 2) throw InputError("certify: dimension must be >= 2, got " + std::to_string(d));
    }
    if (dims.empty()) throw InputError("certify: empty --dim");
    return dims;
}

struct TablesArgs {
    std::string sets = "tableI";
    OptimizerConfig config;
    std::string output;
};

int cmd_tables(const TablesArgs& a, const std::string& command, std::ostream& out,
               std::ostream& err) {
    a.config.validate();
    const auto sets = select_standard_sets(a.sets);
    const auto rows = reproduce_tables(sets, a.config);

    bool all_pass = true;
    Json doc;
    doc["manifest"] = to_json(RunManifest{command, a.config, labels_of(sets), a.output,
                                          utc_timestamp()});
    doc["results"] = tables_payload(rows, all_pass);
    std::size_t cells = 0, passed = 0, stable = 0;
    for (const auto& row : doc["results"]) {
        for (const auto& [name, cell] : row["cells"].items()) {
            ++cells;
            if (cell.value("pass", false)) ++passed;
            if (cell.value("epsilonStable", false)) ++stable;
        }
    }
    doc["summary"] = Json{{"cells", cells},
                          {"passed", passed},
                          {"epsilonStable", stable},
                          {"tolerance", kReferenceTolerance},
                          {"allPass", all_pass}};
    emit(a.output, doc.dump(2) + "\n", out);

    for (const auto& row : rows) {
        err << row.setLabel << ":";
        for (const auto& cell : row.cells) err << " " << fixed(cell.result.bestValue, 3);
        err << "\n";
    }
    err << passed << "/" << cells << " cells within +-" << kReferenceTolerance << "\n";
    return all_pass ? kOk : 1;
}

struct CertifyArgs {
    long samples = 1000;
    std::string sets = "all";
    bool randomOps = false;
    std::string dims = "2-6";
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    int threads = 0;
    std::string output;
};

int cmd_certify(const CertifyArgs& a, const std::string& command, std::ostream& out,
                std::ostream& err) {
    CertifyOptions o;
    o.samples = a.samples;
    o.randomOps = a.randomOps;
    o.seed = a.seed;
    o.epsilon = a.epsilon;
    o.threads = a.threads;
    if (a.samples < 1) throw InputError("certify: --samples must be >= 1");
    if (!(a.epsilon >= 0.0)) throw InputError("certify: --epsilon must be >= 0");
    if (a.randomOps) {
        o.dims = parse_dims(a.dims);
    } else {
        o.sets = select_standard_sets(a.sets);
    }
    const auto s = run_certification(o);

    OptimizerConfig shown;
    shown.seed = a.seed;
    shown.epsilonSweep = {a.epsilon};
    Json doc;
    doc["manifest"] = to_json(RunManifest{command, shown,
                                          a.randomOps ? std::vector<std::string>{"random-ops"}
                                                      : labels_of(o.sets),
                                          a.output, utc_timestamp()});
    Json res;
    res["evaluations"] = s.evaluations;
    res["skipped"] = s.skipped;
    res["violations"] = s.violations;
    res["totalViolations"] = s.totalViolations;
    res["maxAbsCorrelator"] = s.maxAbsCorrelator;
    res["minCorrelationEigenvalue"] = s.minCorrelationEigenvalue;
    res["minSchurEigenvalue"] = s.minSchurEigenvalue;
    res["minSchurDeterminant"] = s.minSchurDeterminant;
    res["maxChainExcess"] = s.maxChainExcess;
    res["maxTlmExcess"] = s.maxTlmExcess;
    res["maxRelation3"] = s.maxRelation3;
    if (a.randomOps) res["dims"] = o.dims;
    res["counterexample"] = s.counterexample ? *s.counterexample : Json(nullptr);
    doc["results"] = res;
    emit(a.output, doc.dump(2) + "\n", out);

    err << s.evaluations << " evaluations, " << s.totalViolations << " violations";
    if (s.skipped) err << " (" << s.skipped << " near-degenerate samples skipped)";
    err << "\n";
    if (s.counterexample) err << "counterexample: " << s.counterexample->dump() << "\n";
    return s.totalViolations == 0 ? kOk : 1;
}

struct BallArgs {
    std::string sets = "tableI";
    long samples = 100;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::string output;
};

int cmd_ball(const BallArgs& a, std::ostream& out, std::ostream& err) {
    if (a.samples < 0) throw InputError("ball: --samples must be >= 0");
    if (!(a.epsilon >= 0.0)) throw InputError("ball: --epsilon must be >= 0");
    const auto sets = select_standard_sets(a.sets);
    const auto rows = ball_rows(sets, a.samples, a.seed, a.epsilon);
    std::ostringstream csv;
    write_ball_csv(csv, rows);
    emit(a.output, csv.str(), out);

    double max_norm = 0.0;
    double max_im = 0.0;
    for (const auto& r : rows) {
        max_norm = std::max(max_norm, std::sqrt(r.reEtaHalf * r.reEtaHalf +
                                                r.reBellScaled * r.reBellScaled +
                                                r.imBellScaled * r.imBellScaled));
        max_im = std::max(max_im, std::abs(r.imBellScaled));
    }
    err << rows.size() << " rows, max norm " << fixed(max_norm, 6) << ", max |Im B|/2sqrt2 "
        << fixed(max_im, 6) << "\n";
    return max_norm <= 1.0 + 1e-9 ? kOk : 1;
}

struct WeakArgs {
    std::string pair = "A0,B0p";
    std::vector<double> gsigma{0.1, 0.05, 0.02, 0.01};
    double sigma = 1.0;
    double recoverAt = 1e-3;
    std::uint64_t seed = 0;
    std::string output;
};

int cmd_weakmeas(const WeakArgs& a, const std::string& command, std::ostream& out,
                 std::ostream& err) {
    if (!(a.sigma > 0.0)) throw InputError("weakmeas: --sigma must be > 0");
    for (double r : a.gsigma) {
        if (!(r > 0.0)) throw InputError("weakmeas: --gsigma values must be > 0");
    }
    if (!(a.recoverAt > 0.0)) throw InputError("weakmeas: --recover-at must be > 0");
    const auto comma = a.pair.find(',');
    if (comma == std::string::npos) throw InputError("weakmeas: --pair must be X,Y");
    const Operator x = named_observable(a.pair.substr(0, comma));
    const Operator y = named_observable(a.pair.substr(comma + 1));
    // The second operator enters adjointed, as in the numerator <X Y^dag>.
    const Operator y_dag = y.adjoint();
    const auto psi = random_state(x.dim(), a.seed, 0);
    const auto study = run_weak_study(x, y_dag, psi, a.gsigma, a.sigma, a.recoverAt);
    const bool ok = study.exact || (study.order >= 1.8 && study.order <= 2.2);

    std::ostringstream text;
    text << "pair " << x.label() << ", " << y_dag.label() << "\n";
    text << "exact <{A,B}> = " << fixed(study.points.front().exact.real(), 12) << " + "
         << fixed(study.points.front().exact.imag(), 12) << "i\n";
    for (const auto& p : study.points) {
        text << "g/sigma " << p.gOverSigma << "  estimate " << fixed(p.estimate.real(), 12)
             << " + " << fixed(p.estimate.imag(), 12) << "i  error " << p.error << "\n";
    }
    if (study.exact) {
        text << "estimate exact at every g/sigma\n";
    } else {
        text << "convergence order " << fixed(study.order, 4) << "\n";
    }
    if (study.recoveryApplicable) {
        text << "recovered <A B> at g/sigma " << study.recoveryRatio << ": "
             << fixed(study.recoveredProduct.real(), 12) << " + "
             << fixed(study.recoveredProduct.imag(), 12) << "i, direct "
             << fixed(study.directProduct.real(), 12) << " + "
             << fixed(study.directProduct.imag(), 12) << "i, error " << study.recoveryError
             << "\n";
    }

    if (!a.output.empty()) {
        OptimizerConfig shown;
        shown.seed = a.seed;
        Json doc;
        doc["manifest"] = to_json(RunManifest{command, shown, {a.pair}, a.output, utc_timestamp()});
        Json pts = Json::array();
        for (const auto& p : study.points) {
            pts.push_back(Json{{"gOverSigma", p.gOverSigma},
                               {"estimate", to_json(p.estimate)},
                               {"exact", to_json(p.exact)},
                               {"error", p.error}});
        }
        Json res{{"state", to_json(psi)}, {"points", pts}, {"exact", study.exact}};
        res["order"] = study.exact ? Json(nullptr) : Json(study.order);
        if (study.recoveryApplicable) {
            res["recovery"] = Json{{"gOverSigma", study.recoveryRatio},
                                   {"recovered", to_json(study.recoveredProduct)},
                                   {"direct", to_json(study.directProduct)},
                                   {"error", study.recoveryError}};
        }
        res["pass"] = ok;
        doc["results"] = res;
        emit(a.output, doc.dump(2) + "\n", err);
    }
    out << text.str();
    return ok ? kOk : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Complex Pearson correlators, nonlocality bounds and their numerical maxima",
                 "parabell"};
    app.require_subcommand(1);

    TablesArgs tables;
    std::vector<double> table_eps = tables.config.epsilonSweep;
    auto* t = app.add_subcommand("tables", "Maximize the tabulated bounds for observable sets");
    t->add_option("--sets", tables.sets, "all | tableI | tableII | comma separated labels")
        ->capture_default_str();
    t->add_option("--starts", tables.config.starts, "random starts per maximization")
        ->capture_default_str();
    t->add_option("--max-iterations", tables.config.maxIterations)->capture_default_str();
    t->add_option("--tol", tables.config.convergenceTol)->capture_default_str();
    t->add_option("--step-init", tables.config.stepInit)->capture_default_str();
    t->add_option("--epsilon", table_eps, "cutoff sweep")->delimiter(',')->capture_default_str();
    t->add_option("--seed", tables.config.seed)->capture_default_str();
    t->add_option("--threads", tables.config.threads, "0 = PARABELL_THREADS or all cores");
    t->add_option("--output,-o", tables.output, "JSON report path (default stdout)");

    CertifyArgs certify;
    auto* c = app.add_subcommand("certify", "Check the bounds on seeded random samples");
    c->add_option("--samples", certify.samples)->capture_default_str();
    c->add_option("--sets", certify.sets)->capture_default_str();
    c->add_flag("--random-ops", certify.randomOps, "random operator quadruples instead of sets");
    c->add_option("--dim", certify.dims, "dimension, list or range for --random-ops")
        ->capture_default_str();
    c->add_option("--seed", certify.seed)->capture_default_str();
    c->add_option("--epsilon", certify.epsilon)->capture_default_str();
    c->add_option("--threads", certify.threads);
    c->add_option("--output,-o", certify.output, "JSON report path (default stdout)");

    BallArgs ball;
    auto* b = app.add_subcommand("ball", "Emit unit-ball coordinates as CSV");
    b->add_option("--sets", ball.sets)->capture_default_str();
    b->add_option("--samples", ball.samples, "states per set")->capture_default_str();
    b->add_option("--seed", ball.seed)->capture_default_str();
    b->add_option("--epsilon", ball.epsilon)->capture_default_str();
    b->add_option("--output,-o", ball.output, "CSV path (default stdout)");

    WeakArgs weak;
    auto* w = app.add_subcommand("weakmeas", "Weak-measurement convergence study");
    w->add_option("--pair", weak.pair, "X,Y measures <{X, Y^dag}>")->capture_default_str();
    w->add_option("--gsigma", weak.gsigma, "g/sigma sequence")->delimiter(',');
    w->add_option("--sigma", weak.sigma)->capture_default_str();
    w->add_option("--recover-at", weak.recoverAt)->capture_default_str();
    w->add_option("--seed", weak.seed)->capture_default_str();
    w->add_option("--output,-o", weak.output, "JSON report path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    const std::string command = join(args);
    try {
        if (*t) {
            tables.config.epsilonSweep = table_eps;
            return cmd_tables(tables, command, out, err);
        }
        if (*c) return cmd_certify(certify, command, out, err);
        if (*b) return cmd_ball(ball, out, err);
        if (*w) return cmd_weakmeas(weak, command, out, err);
    } catch (const InputError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const UndefinedCorrelatorError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}

}  // namespace parabell::cli
