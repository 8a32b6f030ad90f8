#include "ofc/link/receiver.hpp"

#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"
#include "ofc/sigkit/resample.hpp"

namespace ofc::link {

using namespace ofc::constants;

double gaussian_bpf_power(double df, double bw_3db) {
    const double r = df / (bw_3db / 2.0);
    return std::exp(-std::log(2.0) * r * r);
}

namespace {

cplx bessel3_normalized(double x) {
    const cplx s(0.0, x);
    return 15.0 / (s * s * s + 6.0 * s * s + 15.0 * s + 15.0);
}

// normalised frequency where |H| = 1/sqrt(2)
double bessel3_corner() {
    static const double corner = [] {
        double lo = 0.1, hi = 10.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (std::norm(bessel3_normalized(mid)) > 0.5 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return corner;
}

}  // namespace

cplx bessel3_response(double f, double bw_3db) { return bessel3_normalized(f / bw_3db * bessel3_corner()); }

CoherentReceiver::CoherentReceiver(const FieldGrid& field, const RxParams& p)
    : params_(p), fs_(field.sample_rate), n_(field.size()) {
    for (int pol = 0; pol < 2; ++pol) spec_[pol] = fft_copy(field.field[pol]);
}

DualPol CoherentReceiver::detect(double offset_hz, std::span<const cplx> lo_rotation) const {
    if (lo_rotation.size() != n_) throw InputSizeError("LO rotation length must match the field grid");
    const double window = static_cast<double>(n_) / fs_;
    const double cycles = offset_hz * window;
    if (std::abs(cycles - std::round(cycles)) > 1e-6) throw ConfigError("channel offset is off the frequency grid");
    const long shift = static_cast<long>(std::round(cycles));

    // Work at an intermediate rate of 4 samples/symbol (or the field rate if
    // lower): wide enough for the optical filter skirt, cheaper than the full grid.
    const double sym_window = window * params_.symbol_rate;
    const std::size_t n_sym = static_cast<std::size_t>(std::llround(sym_window));
    const std::size_t n_mid = std::min<std::size_t>(n_, n_sym * 4);
    const std::size_t decim = n_ / n_mid;
    if (decim * n_mid != n_) throw ConfigError("field grid is not a multiple of the receiver rate");
    const std::size_t n_out = n_sym * static_cast<std::size_t>(params_.adc_sps);

    DualPol out;
    for (int pol = 0; pol < 2; ++pol) {
        CVec mid(n_mid);
        const long half = static_cast<long>(n_mid / 2);
        for (long k = -half + 1; k < half; ++k) {
            const double f = static_cast<double>(k) / window;
            const double h = std::sqrt(gaussian_bpf_power(f, params_.bpf_bw));
            const long src = wrap_index(k + shift, static_cast<long>(n_));
            mid[static_cast<std::size_t>(wrap_index(k, static_cast<long>(n_mid)))] = spec_[pol][src] * h;
        }
        // keep the unscaled-forward / scaled-inverse convention across rates
        const double scale = static_cast<double>(n_mid) / static_cast<double>(n_);
        for (auto& v : mid) v *= scale;
        ifft(mid);
        for (std::size_t i = 0; i < n_mid; ++i) mid[i] *= std::conj(lo_rotation[i * decim]);
        fft(mid);
        for (std::size_t k = 0; k < n_mid; ++k) {
            mid[k] *= bessel3_response(bin_frequency(k, n_mid, 1.0 / window * n_mid), params_.elec_bw);
        }
        out[pol] = sigkit::resample_spectrum(mid, n_out);
    }
    return out;
}

DualPol demux_rx(const FieldGrid& field, double offset_hz, std::span<const cplx> lo_rotation, const RxParams& p) {
    return CoherentReceiver(field, p).detect(offset_hz, lo_rotation);
}

}  // namespace ofc::link
