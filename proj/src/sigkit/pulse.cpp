#include "ofc/sigkit/pulse.hpp"

#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"

namespace ofc::sigkit {

using namespace ofc::constants;

void check_roll_off(double roll_off) {
    if (!(roll_off > 0.0 && roll_off <= 1.0)) throw ParameterError("roll-off must be in (0, 1]");
}

double raised_cosine(double f_norm, double roll_off) {
    const double af = std::abs(f_norm);
    const double f1 = (1.0 - roll_off) / 2.0;
    const double f2 = (1.0 + roll_off) / 2.0;
    if (af <= f1) return 1.0;
    if (af >= f2) return 0.0;
    return 0.5 * (1.0 + std::cos(pi / roll_off * (af - f1)));
}

CVec rrc_filter(std::span<const cplx> symbols, double roll_off, int oversample) {
    check_roll_off(roll_off);
    if (oversample < 2) throw ParameterError("oversample must be >= 2");
    const std::size_t ns = symbols.size();
    const std::size_t n = ns * static_cast<std::size_t>(oversample);
    // Spectrum of the zero-stuffed sequence is the symbol spectrum repeated.
    CVec sym_spec(symbols.begin(), symbols.end());
    fft(sym_spec);
    CVec out(n);
    // the 1/n of the inverse transform vs the ns-point forward one
    const double gain = static_cast<double>(oversample);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = bin_frequency(k, n, static_cast<double>(oversample));
        const double h = raised_cosine(f, roll_off);
        if (h == 0.0) continue;
        out[k] = sym_spec[k % ns] * (gain * std::sqrt(h));
    }
    ifft(out);
    return out;
}

void rrc_matched_inplace(std::span<cplx> waveform, double roll_off, int sps) {
    check_roll_off(roll_off);
    const std::size_t n = waveform.size();
    fft(waveform);
    for (std::size_t k = 0; k < n; ++k) {
        waveform[k] *= std::sqrt(raised_cosine(bin_frequency(k, n, static_cast<double>(sps)), roll_off));
    }
    ifft(waveform);
}

CVec rrc_matched(std::span<const cplx> waveform, double roll_off, int sps) {
    CVec out(waveform.begin(), waveform.end());
    rrc_matched_inplace(out, roll_off, sps);
    return out;
}

CVec decimate(std::span<const cplx> x, int factor, int phase) {
    if (factor < 1) throw ParameterError("decimation factor must be >= 1");
    CVec out;
    out.reserve(x.size() / factor + 1);
    for (std::size_t i = static_cast<std::size_t>(phase); i < x.size(); i += factor) out.push_back(x[i]);
    return out;
}

RVec rrc_taps(double b, int sps, int span_symbols) {
    check_roll_off(b);
    const int half = sps * span_symbols;
    RVec h(2 * half + 1);
    double energy = 0.0;
    for (int i = -half; i <= half; ++i) {
        const double t = static_cast<double>(i) / sps;
        double v;
        if (i == 0) {
            v = 1.0 - b + 4.0 * b / pi;
        } else if (std::abs(std::abs(4.0 * b * t) - 1.0) < 1e-12) {
            v = b / std::sqrt(2.0) *
                ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
        } else {
            v = (std::sin(pi * t * (1.0 - b)) + 4.0 * b * t * std::cos(pi * t * (1.0 + b))) /
                (pi * t * (1.0 - 16.0 * b * b * t * t));
        }
        h[i + half] = v;
        energy += v * v;
    }
    for (auto& v : h) v /= std::sqrt(energy);
    return h;
}

}  // namespace ofc::sigkit
