#pragma once

#include <string>
#include <vector>

#include "ofc/cpr/cpe.hpp"
#include "ofc/cpr/phase.hpp"
#include "ofc/sigkit/constellation.hpp"
#include "ofc/sigkit/frame.hpp"

namespace ofc::cpr {

enum class Scheme { Independent, MS1, MS2, DRC };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Default main channels for a scheme on an n-channel comb.
std::vector<int> default_mains(Scheme s, int n_channels);

struct CprSchemeConfig {
    Scheme scheme = Scheme::Independent;
    std::vector<int> main_indices;  // empty: default_mains
    int n_r = 0;                    // secondary pilot sparsity
    int dd_window = 64;
    DpllGains dpll;
    double drc_eps = 0.1;
    double drc_min_separation = 4.0;  // grid samples; below this DRC falls back to MS2
    bool header_pilots = true;        // header symbols join the pilot grid

    std::vector<int> mains(int n_channels) const;
    void validate(int n_channels) const;
};

/// One equalised channel, aligned so that index k holds transmitted symbol k
/// of the (circular) stream.
struct ChannelInput {
    DualPol y;
    double rx_start = 0;  // receiver time (symbols) at which symbol 0 arrives
    double tau = 0;       // walk-off delay from accumulated dispersion, symbols
    sigkit::FrameLayout layout;  // pilot layout this channel was sent with
};

struct ChannelCprOutput {
    DualPol corrected;
    PhaseEstimateTrack track;
    bool is_main = false;
    bool drc_fallback = false;
};

/// Runs the selected carrier-recovery scheme over all channels.
std::vector<ChannelCprOutput> run_scheme(const std::vector<ChannelInput>& channels, const CprSchemeConfig& cfg,
                                         const sigkit::ConstellationSpec& spec, double symbol_rate);

/// Full PA+DD carrier recovery of a single main channel (DPLL, pilot stage,
/// decision-directed stage), on the stream extended by `ext` symbols each side.
struct MainTrack {
    RVec phase;   // total phase over the extended array, index i <-> symbol i - ext
    RVec omega;   // DPLL frequency, radians/symbol
    long ext = 0;
};
MainTrack recover_main(const ChannelInput& ch, long ext, const CprSchemeConfig& cfg,
                       const sigkit::ConstellationSpec& spec);

}  // namespace ofc::cpr
