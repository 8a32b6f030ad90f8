#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ofc/combsrc/comb.hpp"
#include "ofc/cpr/schemes.hpp"
#include "ofc/link/fiber.hpp"
#include "ofc/metrics/metrics.hpp"
#include "ofc/sigkit/constellation.hpp"
#include "ofc/sigkit/frame.hpp"
#include "ofc/sim/config.hpp"

namespace ofc::sim {

/// What each channel transmitted over the whole stream.
struct ChannelTruth {
    sigkit::FrameLayout layout;
    DualPol symbols;                          // stream of n_frames frames
    std::vector<std::uint32_t> labels[2];     // per position (payload positions meaningful)
};

/// Secondary channels of a scheme carry sparse pilots; mains carry one pilot
/// per block. Returns the per-channel n_r used when transmitting.
std::vector<int> channel_n_r(cpr::Scheme scheme, int n_r, int n_channels);

/// End-to-end link for one (format, seed, pilot layout). The field is kept
/// between calls so distances can be visited in increasing order without
/// re-propagating.
class LinkSimulation {
public:
    LinkSimulation(const RunConfig& cfg, sigkit::Format format, std::uint64_t seed, std::vector<int> n_r_per_channel);
    ~LinkSimulation();

    /// Propagates until `spans` spans have been traversed (never backwards).
    void advance_to(int spans);
    int spans() const { return spans_done_; }

    /// Detection and receiver DSP (CDC, matched filter, sync, equaliser) of all
    /// channels at the current distance.
    std::vector<cpr::ChannelInput> receive() const;

    const std::vector<ChannelTruth>& truth() const { return truth_; }
    const combsrc::CombSpec& comb() const { return comb_; }
    long stream_len() const { return n_stream_; }

private:
    struct State;
    std::unique_ptr<State> st_;
    RunConfig cfg_;
    sigkit::Format format_;
    std::uint64_t seed_;
    combsrc::CombSpec comb_;
    std::vector<ChannelTruth> truth_;
    long n_stream_ = 0;
    int spans_done_ = 0;
};

struct CellResult {
    metrics::MetricsReport report;
    int dd_window = 0;
    std::vector<bool> drc_fallback;
};

/// Carrier recovery and metrics for one scheme on received channels. When
/// cfg.dd_window is 0 the window is chosen from cfg.dd_grid by the mean NGMI
/// of the scheme's main channels.
CellResult evaluate_scheme(const RunConfig& cfg, sigkit::Format format, cpr::Scheme scheme, int n_r,
                           const std::vector<cpr::ChannelInput>& rx, const std::vector<ChannelTruth>& truth);

/// Pilot overhead (header + carrier-recovery pilots) charged to a channel.
double channel_poh(const RunConfig& cfg, int n_r_channel);

/// Observations (payload of the evaluated frames) for the metrics module.
metrics::ChannelObservation observe(const RunConfig& cfg, const DualPol& corrected, const ChannelTruth& truth,
                                    double poh);

/// NGMI of a main channel for a given DD window, for window calibration.
double main_ngmi(const RunConfig& cfg, const cpr::ChannelInput& ch, const ChannelTruth& truth,
                 const sigkit::ConstellationSpec& spec, int window);

}  // namespace ofc::sim
