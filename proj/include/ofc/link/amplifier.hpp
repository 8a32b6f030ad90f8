#pragma once

#include "ofc/core/rng.hpp"
#include "ofc/link/field.hpp"

namespace ofc::link {

struct AmpParams {
    double gain_db = 16.0;
    double nf_db = 5.5;
    bool ase = true;
};

/// One-sided ASE power spectral density per polarisation, W/Hz.
double ase_psd(const AmpParams& amp, double center_freq_hz);

/// Scales the field by the amplifier gain and adds ASE, white over the grid
/// bandwidth, independently on both polarisations.
void edfa(FieldGrid& g, const AmpParams& amp, double center_freq_hz, Rng& rng);

}  // namespace ofc::link
