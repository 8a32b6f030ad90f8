#pragma once

#include <span>

#include "ofc/link/field.hpp"

namespace ofc::link {

struct RxParams {
    double symbol_rate = 135e9;
    double bpf_bw = 150e9;   // Gaussian optical filter, 3 dB bandwidth
    double elec_bw = 70e9;   // 3rd-order Bessel, 3 dB bandwidth
    int adc_sps = 2;
};

/// Power transfer of the Gaussian optical band-pass at offset df.
double gaussian_bpf_power(double df, double bw_3db);

/// 3rd-order Bessel low-pass H(s) = 15/(s^3+6s^2+15s+15) scaled so that
/// |H| = 1/sqrt(2) at `bw_3db`.
cplx bessel3_response(double f, double bw_3db);

/// Optical demux plus coherent front end. The field spectrum is computed once
/// and shared by all channels.
class CoherentReceiver {
public:
    CoherentReceiver(const FieldGrid& field, const RxParams& p);

    /// Filters the channel centred at `offset_hz`, mixes it with the LO line
    /// (rotation sampled on the field grid, including phase noise and
    /// frequency offset), applies the electrical filter and samples at adc_sps.
    DualPol detect(double offset_hz, std::span<const cplx> lo_rotation) const;

    double output_rate() const { return params_.symbol_rate * params_.adc_sps; }

private:
    RxParams params_;
    double fs_;
    std::size_t n_;
    CVec spec_[2];
};

/// One-shot wrapper around CoherentReceiver.
DualPol demux_rx(const FieldGrid& field, double offset_hz, std::span<const cplx> lo_rotation, const RxParams& p);

}  // namespace ofc::link
