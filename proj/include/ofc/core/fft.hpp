#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "ofc/core/types.hpp"

namespace ofc {

/// In-place forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / N). No scaling.
void fft(std::span<cplx> data);

/// In-place inverse DFT scaled by 1/N, so ifft(fft(x)) == x.
void ifft(std::span<cplx> data);

CVec fft_copy(std::span<const cplx> data);
CVec ifft_copy(std::span<const cplx> data);

/// Signed frequency (Hz) of DFT bin k for an N-point transform at sample rate fs.
inline double bin_frequency(std::size_t k, std::size_t n, double fs) {
    long kk = static_cast<long>(k);
    long nn = static_cast<long>(n);
    if (kk >= (nn + 1) / 2) kk -= nn;
    return static_cast<double>(kk) * fs / static_cast<double>(nn);
}

/// Controls plan rigor. Measured plans are persisted in a wisdom file so that
/// every process on the machine reuses the same algorithm (bit-identical output).
void fft_set_wisdom_file(const std::string& path);
void fft_use_measured_plans(bool enabled);

}  // namespace ofc
