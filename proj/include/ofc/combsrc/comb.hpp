#pragma once

#include <cstddef>
#include <vector>

#include "ofc/core/rng.hpp"
#include "ofc/core/types.hpp"

namespace ofc::combsrc {

struct CombSpec {
    int n_lines = 4;
    double fsr = 150e9;         // Hz
    double common_lw = 200e3;   // Hz
    double line_lw = 1e3;       // Hz
    std::vector<double> scale_factors{-2.0, -1.0, 1.0, 2.0};
    double fo = 200e6;          // Hz, LO only, at the comb centre
    double fsr_dev = 1e6;       // Hz, LO only

    void validate() const;
    /// Line offset from the comb centre in units of lines: k - (n_lines-1)/2.
    double k_rel(int line) const { return line - 0.5 * (n_lines - 1); }
    double line_offset_hz(int line) const { return k_rel(line) * fsr; }
};

struct PhaseTrack {
    RVec samples;  // radians
    double sample_rate = 0.0;
    int line_index = -1;
};

/// Wiener phase: phi[0] = 0, i.i.d. N(0, 2*pi*lw/fs) increments.
PhaseTrack gen_wiener(double linewidth, double sample_rate, std::size_t n, Rng& rng);

/// Turns a Wiener track into a periodic one (Brownian bridge). A track of n+1
/// samples is reduced to n samples with the linear drift from phi[0] to phi[n]
/// removed, so the sequence wraps continuously.
void close_into_bridge(PhaseTrack& track);

/// phi_k = phi_c + s_k * phi_d with one common and one line-dependent Wiener
/// process drawn from separate streams. With `periodic`, both processes are
/// closed into bridges over the n samples.
std::vector<PhaseTrack> gen_comb_phases(const CombSpec& spec, double sample_rate, std::size_t n, Rng& common_rng,
                                        Rng& line_rng, bool periodic = false);

/// Frequency of line `line` relative to its nominal grid position: 0 for the
/// Tx comb, fo + k_rel * fsr_dev for the LO comb.
double line_frequency_offset(const CombSpec& spec, int line, bool is_lo);

/// exp(j*(phi_k[t] + 2*pi*f_off*t)) with f_off from line_frequency_offset.
CVec carrier_rotation(const PhaseTrack& track, int line, const CombSpec& spec, bool is_lo);

/// Adjusts fsr, fo and fsr_dev to the nearest values for which every line
/// position and LO frequency offset is an integer number of cycles over
/// `period` seconds (needed for circular simulation windows).
CombSpec snap_to_period(const CombSpec& spec, double period);

}  // namespace ofc::combsrc
