#include "ofc/rxdsp/cdc.hpp"

#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/fft.hpp"

namespace ofc::rxdsp {

using namespace ofc::constants;

namespace {
double channel_wavelength(double offset_hz, double ref_wavelength_nm) {
    const double f0 = speed_of_light / (ref_wavelength_nm * 1e-9);
    return speed_of_light / (f0 + offset_hz);
}
}  // namespace

double beta2_acc_from_dispersion(double d_acc_ps_nm, double channel_offset_hz, double ref_wavelength_nm) {
    const double lambda = channel_wavelength(channel_offset_hz, ref_wavelength_nm);
    const double d_acc = d_acc_ps_nm * 1e-3;  // s/m
    return -d_acc * lambda * lambda / (two_pi * speed_of_light);
}

double dispersion_from_beta2_acc(double beta2_l, double channel_offset_hz, double ref_wavelength_nm) {
    const double lambda = channel_wavelength(channel_offset_hz, ref_wavelength_nm);
    return -two_pi * speed_of_light * beta2_l / (lambda * lambda) * 1e3;
}

void cdc(DualPol& w, double sample_rate, double d_acc_ps_nm, double channel_offset_hz, double ref_wavelength_nm) {
    if (d_acc_ps_nm == 0.0) return;
    const double b2 = beta2_acc_from_dispersion(d_acc_ps_nm, channel_offset_hz, ref_wavelength_nm);
    const std::size_t n = w.size();
    CVec h(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double om = two_pi * bin_frequency(k, n, sample_rate);
        h[k] = std::polar(1.0, -b2 / 2.0 * om * om);
    }
    for (int p = 0; p < 2; ++p) {
        fft(w[p]);
        for (std::size_t k = 0; k < n; ++k) w[p][k] *= h[k];
        ifft(w[p]);
    }
}

}  // namespace ofc::rxdsp
