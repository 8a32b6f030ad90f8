#pragma once

#include <vector>

#include "ofc/core/types.hpp"

namespace ofc::cpr {

/// Separation of transmitter-comb and LO phase from two main channels.
///
/// Both mains are sampled on a common periodic grid of receiver time (one
/// sample per grid cell). Their phases follow phi_m(t) = phi_tx(t - tau_m) +
/// phi_lo(t). In the DFT domain the difference of the mains is
/// Phi_tx(w) (e^{-j w tau_b} - e^{-j w tau_a}); bins where that factor is
/// smaller than eps in magnitude are zeroed. Delays are in grid samples.
struct DrcSeparation {
    CVec phi_tx;  // DFT of the transmitter phase
    CVec phi_lo;  // DFT of the LO phase
    std::vector<std::uint8_t> regularized;  // 1 where the bin was zeroed
    double tau_a = 0, tau_b = 0;
};

DrcSeparation drc_separate(const RVec& phi_a, const RVec& phi_b, double tau_a, double tau_b, double eps = 0.1);

/// Phase of a channel with delay tau_c synthesised from a separation:
/// IDFT[Phi_tx e^{-j w tau_c} + Phi_lo].
RVec drc_reconstruct(const DrcSeparation& sep, double tau_c);

/// Difference between a channel with delay tau_c and the main with delay
/// tau_ref, IDFT[Phi_tx (e^{-j w tau_c} - e^{-j w tau_ref})]. Adding this to the
/// main's own estimate gives the secondary's phase.
RVec drc_correction(const DrcSeparation& sep, double tau_c, double tau_ref);

/// Applies a fractional circular delay (grid samples) to a periodic sequence
/// through the DFT: out(t) = in(t - tau).
RVec circular_delay(const RVec& x, double tau);

}  // namespace ofc::cpr
