#pragma once

#include <vector>

#include "ofc/combsrc/comb.hpp"
#include "ofc/core/rng.hpp"
#include "ofc/link/field.hpp"

namespace ofc::link {

struct MuxParams {
    double symbol_rate = 135e9;
    double roll_off = 0.1;
    int oversample = 8;              // composite grid samples per symbol
    double launch_power_dbm = 3.0;   // per carrier
    std::vector<double> channel_offsets;  // Hz from comb centre, one per channel
};

/// RRC-shapes each channel, scales it to the launch power, applies its Tx line
/// phase and shifts it to its grid position. All channels share one symbol
/// clock; each channel offset times the window length must be an integer.
/// Throws ConfigError when a channel would alias.
FieldGrid modulate_mux(const std::vector<DualPol>& channel_symbols,
                       const std::vector<combsrc::PhaseTrack>& tx_phase, const MuxParams& p);

/// Composite SNR of two equal noise stages: per-stage SNR in dB such that the
/// stages add up to `total_db`.
double per_stage_snr_db(double total_db, int n_stages = 2);

/// Adds white circular Gaussian noise to both polarisations so that a channel
/// with power `channel_power_w` has `snr_db` in the symbol-rate bandwidth after
/// matched filtering. Infinite SNR leaves the field untouched.
void awgn_load(FieldGrid& g, double snr_db, double symbol_rate, double channel_power_w, Rng& rng);

}  // namespace ofc::link
