#pragma once

#include <span>

#include "ofc/core/types.hpp"

namespace ofc::sigkit {

/// Band-limited resampling of a circular waveform by DFT truncation or
/// zero-padding. The output length is size * to_rate / from_rate, which must be
/// an integer. Content above min(rates)/2 is discarded; equal rates copy the
/// input unchanged.
CVec resample(std::span<const cplx> x, double from_rate, double to_rate);

/// Same, starting from an already computed spectrum (unscaled forward DFT).
CVec resample_spectrum(std::span<const cplx> spectrum, std::size_t n_out);

}  // namespace ofc::sigkit
