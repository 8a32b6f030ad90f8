#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ofc/sim/config.hpp"

namespace ofc::sim {

struct CellSpec {
    std::string format;
    int spans = 0;
    std::string scheme;
    int n_r = 0;
    std::uint64_t seed = 1;
};

struct ResultRow {
    double distance_km = 0;
    std::string format;
    std::string scheme;
    int n_r = 0;
    std::uint64_t seed = 0;
    double ngmi_mean = 0;
    double fec_oh = 0;
    double poh_mean = 0;
    double r_net = 0;
    double gain_pct = 0;
    int dd_window = 0;
    double runtime_s = 0;
    std::string error;  // empty when the cell succeeded
};

/// Cells of the configured sweep grid, always including the Independent
/// baseline for every (format, distance, seed).
std::vector<CellSpec> sweep_cells(const RunConfig& cfg);

/// The configured single cell plus its Independent baseline.
std::vector<CellSpec> run_cells(const RunConfig& cfg);

/// Executes cells on a pool of cfg.jobs workers. Cells sharing a transmitted
/// signal (format, seed, pilot layout) share one link simulation that walks
/// the distances in increasing order. Failed cells keep NaN metrics and an
/// error string. Rows come back in a fixed order independent of scheduling,
/// with gains filled in against the baseline rows.
std::vector<ResultRow> execute(const RunConfig& cfg, const std::vector<CellSpec>& cells);

}  // namespace ofc::sim
