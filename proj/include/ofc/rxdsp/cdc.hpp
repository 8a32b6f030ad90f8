#pragma once

#include "ofc/core/types.hpp"

namespace ofc::rxdsp {

/// beta2 (s^2) that a channel at `channel_offset_hz` from the reference
/// wavelength associates with an accumulated dispersion in ps/nm.
double beta2_acc_from_dispersion(double d_acc_ps_nm, double channel_offset_hz, double ref_wavelength_nm);

/// Inverse of beta2_acc_from_dispersion: accumulated dispersion (ps/nm) that a
/// channel sees after beta2*L (s^2).
double dispersion_from_beta2_acc(double beta2_l, double channel_offset_hz, double ref_wavelength_nm);

/// Frequency-domain CD compensation exp(-j beta2_acc/2 w^2) on both
/// polarisations of a circular waveform sampled at `sample_rate`.
void cdc(DualPol& w, double sample_rate, double d_acc_ps_nm, double channel_offset_hz,
         double ref_wavelength_nm = 1550.0);

}  // namespace ofc::rxdsp
