#include "parabell/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "parabell/reference.hpp"

namespace parabell {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

Json to_json(const OptimizerConfig& config) {
    Json j;
    j["starts"] = config.starts;
    j["maxIterations"] = config.maxIterations;
    j["convergenceTol"] = config.convergenceTol;
    j["epsilonSweep"] = config.epsilonSweep;
    j["seed"] = config.seed;
    j["stepInit"] = config.stepInit;
    return j;
}

Json to_json(const RunManifest& manifest) {
    Json j;
    j["command"] = manifest.command;
    j["config"] = to_json(manifest.config);
    j["setLabels"] = manifest.setLabels;
    j["outputPath"] = manifest.outputPath;
    j["timestampUTC"] = manifest.timestampUTC;
    return j;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const QuantumState& psi) {
    Json amps = Json::array();
    for (Eigen::Index k = 0; k < psi.amplitudes().size(); ++k) {
        amps.push_back(to_json(psi.amplitudes()(k)));
    }
    return amps;
}

CellVerdict judge_cell(const TableCell& cell, double reference) {
    CellVerdict v;
    v.reference = reference;
    v.deviation = cell.result.bestValue - reference;
    v.withinReference = std::abs(v.deviation) <= kReferenceTolerance + 1e-12;
    double lo = cell.result.bestValue;
    double hi = cell.result.bestValue;
    for (const auto& [eps, value] : cell.result.perEpsilonValues) {
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    v.epsilonSpread = hi - lo;
    v.epsilonStable = v.epsilonSpread <= kEpsilonSpreadTolerance;
    return v;
}

Json tables_payload(const std::vector<TableRow>& rows, bool& all_pass) {
    all_pass = true;
    Json out = Json::array();
    for (const auto& row : rows) {
        const auto ref = reference_row(row.setLabel);
        Json jr;
        jr["setLabel"] = row.setLabel;
        jr["signaling"] = row.signaling;
        Json cells;
        for (std::size_t k = 0; k < kTableObjectives.size(); ++k) {
            const auto& cell = row.cells[k];
            Json jc;
            jc["value"] = cell.result.bestValue;
            jc["rounded"] = std::round(cell.result.bestValue * 100.0) / 100.0;
            Json per = Json::array();
            for (const auto& [eps, value] : cell.result.perEpsilonValues) {
                per.push_back(Json{{"epsilon", eps}, {"value", value}});
            }
            jc["perEpsilon"] = per;
            jc["bestEpsilon"] = cell.result.bestEpsilon;
            jc["startsConverged"] = cell.result.startsConverged;
            jc["minSpread"] = cell.minSpread;
            jc["isotropyResidual"] = cell.isotropyResidual;
            if (ref) {
                const auto v = judge_cell(cell, (*ref)[k]);
                jc["reference"] = v.reference;
                jc["deviation"] = v.deviation;
                jc["pass"] = v.withinReference;
                jc["epsilonSpread"] = v.epsilonSpread;
                jc["epsilonStable"] = v.epsilonStable;
                all_pass = all_pass && v.withinReference;
            }
            jc["bestState"] = to_json(cell.result.bestState);
            cells[std::string(objective_name(kTableObjectives[k]))] = std::move(jc);
        }
        jr["cells"] = std::move(cells);
        out.push_back(std::move(jr));
    }
    return out;
}

std::string fixed(double value, int decimals) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(decimals) << value;
    return out.str();
}

}  // namespace parabell
