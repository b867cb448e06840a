#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace parabell {

/// Published maxima per observable set, columns in kTableObjectives order:
/// I3, |B|, TLM lhs/rhs, relation 3, relation 4.
struct ReferenceRow {
    std::string_view label;
    std::array<double, 5> cells;
};

// Rows 1-2 are Table I (also the first two rows of Table II); the rest are
// Table II. Values as printed, two decimals.
inline constexpr std::array<ReferenceRow, 10> kReferenceTable{{
    {"A0A1-B0B1", {2.60, 2.44, 0.71, 0.74, 1.00}},
    {"A0A1-B0pB1p", {2.60, 2.82, 1.00, 1.00, 1.56}},
    {"A1A0-B1B0", {2.60, 2.44, 0.71, 0.74, 1.00}},
    {"A1A0-B1pB0p", {2.60, 2.82, 1.00, 1.00, 1.56}},
    {"A0A1-B1B0", {2.60, 2.22, 0.71, 0.62, 1.00}},
    {"A0A1-B1pB0p", {2.60, 2.71, 1.00, 0.97, 1.56}},
    {"A0A1-B0B2", {2.60, 2.44, 0.71, 0.74, 1.00}},
    {"A0A1-B0pB2p", {2.00, 2.23, 1.00, 0.75, 1.50}},
    {"A0A1-B2B0", {2.60, 2.22, 0.71, 0.62, 1.00}},
    {"A0A1-B2pB0p", {2.00, 2.44, 1.00, 0.75, 1.50}},
}};

/// Tolerance for comparing a reproduced cell with the published value.
inline constexpr double kReferenceTolerance = 0.02;
/// Largest allowed spread of a cell across the epsilon sweep.
inline constexpr double kEpsilonSpreadTolerance = 0.005;

inline std::optional<std::array<double, 5>> reference_row(std::string_view label) {
    for (const auto& row : kReferenceTable) {
        if (row.label == label) return row.cells;
    }
    return std::nullopt;
}

}  // namespace parabell
