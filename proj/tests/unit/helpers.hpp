#pragma once

#include <cmath>
#include <complex>

#include "ofc/core/rng.hpp"
#include "ofc/core/types.hpp"

namespace ofc::test {

inline double rel_l2(const CVec& a, const CVec& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

// SNR in dB of y against reference x after one least-squares complex gain
inline double ls_snr_db(const CVec& y, const CVec& x, std::size_t from = 0, std::size_t to = 0) {
    if (to == 0) to = x.size();
    cplx num = 0;
    double px = 0;
    for (std::size_t k = from; k < to; ++k) {
        num += y[k] * std::conj(x[k]);
        px += std::norm(x[k]);
    }
    const cplx g = num / px;
    double e = 0;
    for (std::size_t k = from; k < to; ++k) e += std::norm(y[k] - g * x[k]);
    return 10.0 * std::log10(std::norm(g) * px / e);
}

inline CVec random_qpsk(std::size_t n, Rng& rng) {
    CVec s(n);
    const double a = 1.0 / std::sqrt(2.0);
    for (auto& v : s) v = {rng.bit() ? a : -a, rng.bit() ? a : -a};
    return s;
}

}  // namespace ofc::test
