#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parabell/report.hpp"
#include "parabell/weakmeas.hpp"

namespace parabell::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

/// Entry point shared by the executable and the tests; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---- certify -------------------------------------------------------------

struct CertifyOptions {
    long samples = 1000;
    std::vector<ObservableSet> sets;
    bool randomOps = false;
    std::vector<int> dims{2, 3, 4, 5, 6};
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    int threads = 0;
};

struct CertifySummary {
    long evaluations = 0;
    /// Samples dropped because some spread was below 1e-6.
    long skipped = 0;
    std::map<std::string, long> violations;
    long totalViolations = 0;
    double maxAbsCorrelator = 0.0;
    double minCorrelationEigenvalue = 1.0;
    double minSchurEigenvalue = 1.0;
    double minSchurDeterminant = 1.0;
    double maxChainExcess = -1.0;    ///< max over samples of |B| - middle
    double maxTlmExcess = -1.0;      ///< max of lhs - rhs
    double maxRelation3 = 0.0;
    /// First failing sample (state and operator label).
    std::optional<Json> counterexample;
};

/// Names of the checked properties, in report order.
const std::vector<std::string>& certify_check_names();

CertifySummary run_certification(const CertifyOptions& options);

// ---- ball ----------------------------------------------------------------

struct BallRow {
    double reEtaHalf;
    double reBellScaled;
    double imBellScaled;
    std::string setLabel;
};

std::vector<BallRow> ball_rows(const std::vector<ObservableSet>& sets, long samples,
                               std::uint64_t seed, double epsilon);
/// RFC-4180 CSV with a header line.
void write_ball_csv(std::ostream& os, const std::vector<BallRow>& rows);

// ---- weakmeas ------------------------------------------------------------

struct WeakStudyPoint {
    double gOverSigma;
    Complex estimate;
    Complex exact;
    double error;
};

struct WeakStudy {
    std::vector<WeakStudyPoint> points;
    /// Least-squares slope of log(error) against log(g/sigma); NaN when exact.
    double order = 0.0;
    bool exact = false;
    /// Product recovery <a b> = <{a,b}> / (1 + conj(phase)) when a b = phase b a.
    bool recoveryApplicable = false;
    double recoveryRatio = 0.0;
    Complex recoveredProduct;
    Complex directProduct;
    double recoveryError = 0.0;
};

WeakStudy run_weak_study(const Operator& a, const Operator& b, const QuantumState& psi,
                         const std::vector<double>& ratios, double sigma, double recoverAt);

/// Seeded Haar-like (normalized complex Gaussian) state.
QuantumState random_state(int dim, std::uint64_t seed, std::uint64_t stream);

}  // namespace parabell::cli
