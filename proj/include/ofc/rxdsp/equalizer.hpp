#pragma once

#include <cstdint>
#include <span>

#include "ofc/core/types.hpp"
#include "ofc/sigkit/constellation.hpp"

namespace ofc::rxdsp {

struct EqualizerConfig {
    int n_taps = 31;          // T/2 spaced
    double mu_train = 1e-3;
    double mu_rde = 5e-5;
    int train_len = 1024;     // symbols of known header used for training
    int train_passes = 10;
    double tracker_gain = 0.05;  // first-order phase tracker during training
    double divergence_factor = 10.0;
    int divergence_run = 1000;
    int wrap_extra = 4096;    // symbols re-equalised after wrapping around

    void validate() const;
};

struct EqualizerResult {
    DualPol symbols;             // 1 sample/symbol, index 0 = first header symbol
    double training_fo = 0.0;    // cycles/symbol, coarse estimate used in training
    double training_mse = 0.0;   // last training pass, per polarisation average
};

/// 2x2 butterfly FIR equaliser on a circular 2-sps waveform.
///
/// Symbol n is centred on sample start + 2n. The filter is first trained
/// data-aided on the known header (with a coarse frequency-offset estimate
/// and a phase tracker, since carrier recovery comes later), then adapts
/// blindly with radius-directed updates through the whole sequence and
/// `wrap_extra` symbols beyond it. `known_radius` marks symbol positions
/// (index modulo its length) whose radius is 1 regardless of format.
EqualizerResult mimo_equalize(const DualPol& in, long start, const EqualizerConfig& cfg, const DualPol& training,
                              const sigkit::ConstellationSpec& spec, std::span<const std::uint8_t> known_radius = {});

/// Coarse frequency offset (cycles/symbol) between received symbol-instant
/// samples and known symbols, from the peak of the summed periodograms of
/// y_p * conj(d_q) over all polarisation pairs.
double coarse_fo(const DualPol& y, const DualPol& d);

}  // namespace ofc::rxdsp
