#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ofc/core/types.hpp"
#include "ofc/sigkit/frame.hpp"

namespace ofc::cpr {

/// Known symbols at known indices of a symbol array, grouped into bursts.
struct PilotSet {
    std::vector<long> pos;     // ascending indices into the symbol array
    std::vector<cplx> vx, vy;  // known values per polarisation
    std::vector<std::pair<int, int>> bursts;  // [begin, end) ranges into pos

    std::size_t size() const { return pos.size(); }
    double centroid(std::size_t b) const;
};

/// Pilot set for a symbol array of `length` entries where entry i carries
/// transmitted symbol i - offset (taken modulo the stream length `n_stream`,
/// frames of layout.plan.frame_len back to back). Bursts that do not fit
/// entirely inside the array are dropped. With `include_header`, one header
/// symbol per block joins the pilot grid.
PilotSet make_pilot_set(const sigkit::FrameLayout& layout, long n_stream, long offset, long length,
                        bool include_header);

/// Builds a pilot set directly from positions, values and burst ranges.
PilotSet make_pilot_set(std::vector<long> pos, std::vector<cplx> vx, std::vector<cplx> vy,
                        std::vector<std::pair<int, int>> bursts);

/// ML phase of one burst, joint over both polarisations: arg sum r conj(p).
double burst_phase(const DualPol& x, const PilotSet& pilots, std::size_t burst);

/// Adds multiples of 2 pi so consecutive values differ by at most pi.
void unwrap(std::span<double> phase);

/// Linear interpolation of (t, v) points onto 0..n-1, held at the ends.
RVec interp_linear(std::span<const double> t, std::span<const double> v, std::size_t n);

/// Zero-order hold of (t, v) points onto 0..n-1: each value applies from its
/// time up to the next point; the first value is also held before it.
RVec hold(std::span<const double> t, std::span<const double> v, std::size_t n);

/// x[i] * exp(-j phase[i]) on both polarisations.
DualPol derotate(const DualPol& x, std::span<const double> phase);

/// Value of a sampled track at a fractional index (linear, clamped).
double sample_at(std::span<const double> track, double index);

struct PhaseEstimateTrack {
    enum class Source { PilotInterp, DecisionDirected, Held, Reconstructed };
    RVec phase;   // radians per symbol, unwrapped
    RVec fo_hz;   // per symbol frequency estimate
    Source source = Source::PilotInterp;
};

}  // namespace ofc::cpr
