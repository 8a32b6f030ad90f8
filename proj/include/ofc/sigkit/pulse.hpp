#pragma once

#include <span>

#include "ofc/core/types.hpp"

namespace ofc::sigkit {

/// Raised-cosine spectrum value at normalised frequency f/Rs (1 at DC).
double raised_cosine(double f_norm, double roll_off);

/// Root-raised-cosine pulse shaping of a circular symbol sequence.
///
/// The output has `oversample` samples per symbol and the same mean power as
/// the input symbols. Filtering is done on the DFT grid, so the sequence is
/// treated as one period of a periodic signal.
CVec rrc_filter(std::span<const cplx> symbols, double roll_off, int oversample);

/// Matched RRC filter on a circular waveform at `sps` samples per symbol.
/// After the Tx filter and this filter, every sps-th sample equals the
/// transmitted symbol (unit gain, zero ISI).
CVec rrc_matched(std::span<const cplx> waveform, double roll_off, int sps);

/// In-place variant of rrc_matched.
void rrc_matched_inplace(std::span<cplx> waveform, double roll_off, int sps);

/// Takes every `factor`-th sample starting at `phase`.
CVec decimate(std::span<const cplx> x, int factor, int phase = 0);

/// Closed-form RRC impulse response sampled at `sps` per symbol over
/// `span_symbols` symbols each side, unit energy.
RVec rrc_taps(double roll_off, int sps, int span_symbols);

void check_roll_off(double roll_off);

}  // namespace ofc::sigkit
