#pragma once

#include <string>
#include <vector>

#include "ofc/sim/config.hpp"
#include "ofc/sim/sweep.hpp"

namespace ofc::sim {

inline constexpr const char* csv_header =
    "distance_km,format,scheme,n_r,seed,ngmi_mean,fec_oh,poh_mean,r_net,gain_pct,dd_window,runtime_s";

std::string format_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(const std::string& text);

/// Mean gain and standard deviation over seeds for one curve point.
struct CurvePoint {
    double distance_km;
    double mean;
    double std;
    int count;
};
struct Curve {
    std::string scheme;
    int n_r;
    std::vector<CurvePoint> points;
};

/// Curves of one format, one per (scheme, n_r), skipping the baseline and
/// failed rows.
std::vector<Curve> gain_curves(const std::vector<ResultRow>& rows, const std::string& format);

/// Gain-versus-distance plot of one format.
std::string render_svg(const std::vector<ResultRow>& rows, const std::string& format, const std::string& title);

/// Writes results.csv, fig2a.svg (16-QAM), fig2b.svg (64-QAM), meta.txt and,
/// when any cell failed, errors.txt into cfg.out_dir.
void write_outputs(const RunConfig& cfg, const std::vector<ResultRow>& rows, const std::string& verb);

}  // namespace ofc::sim
