#include "ofc/sigkit/resample.hpp"

#include <cmath>

#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"

namespace ofc::sigkit {

CVec resample_spectrum(std::span<const cplx> spectrum, std::size_t n_out) {
    const std::size_t n_in = spectrum.size();
    CVec out(n_out);
    // Keep bins strictly below the smaller Nyquist frequency. An even-length
    // Nyquist bin is ambiguous in sign and is dropped.
    const std::size_t n_min = std::min(n_in, n_out);
    const std::size_t keep_pos = (n_min + 1) / 2;  // bins 0..keep_pos-1
    const std::size_t keep_neg = (n_min - 1) / 2;  // bins -1..-keep_neg
    const double scale = static_cast<double>(n_out) / static_cast<double>(n_in);
    for (std::size_t k = 0; k < keep_pos; ++k) out[k] = spectrum[k] * scale;
    for (std::size_t k = 1; k <= keep_neg; ++k) out[n_out - k] = spectrum[n_in - k] * scale;
    ifft(out);
    return out;
}

CVec resample(std::span<const cplx> x, double from_rate, double to_rate) {
    if (!(from_rate > 0.0) || !(to_rate > 0.0)) throw ParameterError("sample rates must be positive");
    if (from_rate == to_rate) return CVec(x.begin(), x.end());
    const double exact = static_cast<double>(x.size()) * to_rate / from_rate;
    const double rounded = std::round(exact);
    if (rounded < 1.0 || std::abs(exact - rounded) > 1e-6 * exact) {
        throw ParameterError("resampled length is not an integer");
    }
    CVec spec = fft_copy(x);
    return resample_spectrum(spec, static_cast<std::size_t>(rounded));
}

}  // namespace ofc::sigkit
