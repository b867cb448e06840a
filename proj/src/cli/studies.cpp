#include <cmath>
#include <limits>
#include <ostream>

#include "parabell/cli.hpp"
#include "parabell/errors.hpp"

namespace parabell::cli {

std::vector<BallRow> ball_rows(const std::vector<ObservableSet>& sets, long samples,
                               std::uint64_t seed, double epsilon) {
    if (samples < 0) throw InputError("ball: --samples must be >= 0");
    const double scale = 2.0 * std::numbers::sqrt2;
    std::vector<BallRow> rows;
    rows.reserve(static_cast<std::size_t>(samples) * sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) {
        const auto& set = sets[s];
        for (long i = 0; i < samples; ++i) {
            const auto stream = (static_cast<std::uint64_t>(s) << 40) | static_cast<std::uint64_t>(i);
            const auto psi = random_state(set.alice0.dim(), seed, stream);
            const auto report = correlate(set, psi, epsilon);
            const Complex bell = bell_parameter(report);
            rows.push_back({report.etaA.real() / 2.0, bell.real() / scale, bell.imag() / scale,
                            set.label});
        }
    }
    return rows;
}

void write_ball_csv(std::ostream& os, const std::vector<BallRow>& rows) {
    os << "re_eta_half,re_bell_scaled,im_bell_scaled,set\r\n";
    const auto old = os.precision(17);
    for (const auto& r : rows) {
        os << r.reEtaHalf << ',' << r.reBellScaled << ',' << r.imBellScaled << ',' << r.setLabel
           << "\r\n";
    }
    os.precision(old);
}

WeakStudy run_weak_study(const Operator& a, const Operator& b, const QuantumState& psi,
                         const std::vector<double>& ratios, double sigma, double recoverAt) {
    if (ratios.empty()) throw InputError("weakmeas: no g/sigma values");
    WeakStudy study;
    const Complex exact = anticommutator_exact(a, b, psi);
    for (double r : ratios) {
        const DetectorConfig det{r * sigma, sigma};
        det.validate();
        const Complex est = weak_product_correlator(a, b, psi, det);
        study.points.push_back({r, est, exact, std::abs(est - exact)});
    }

    // Fit log(error) = order * log(g/sigma) + c over the points with a
    // resolvable error.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : study.points) {
        if (p.error <= 1e-14 * std::max(1.0, std::abs(p.exact))) continue;
        const double x = std::log(p.gOverSigma);
        const double y = std::log(p.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n == 0) {
        study.exact = true;
        study.order = std::numeric_limits<double>::quiet_NaN();
    } else if (n == 1 || n * sxx - sx * sx <= 0.0) {
        study.order = std::numeric_limits<double>::quiet_NaN();
    } else {
        study.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    if (const auto phase = commutation_phase(a, b)) {
        const Complex factor = 1.0 + std::conj(*phase);
        if (std::abs(factor) > 1e-9) {
            study.recoveryApplicable = true;
            study.recoveryRatio = recoverAt;
            const DetectorConfig det{recoverAt * sigma, sigma};
            det.validate();
            study.recoveredProduct = weak_product_correlator(a, b, psi, det) / factor;
            study.directProduct = psi.amplitudes().dot(a.entries() * (b.entries() * psi.amplitudes()));
            study.recoveryError = std::abs(study.recoveredProduct - study.directProduct);
        }
    }
    return study;
}

}  // namespace parabell::cli
