#include "ofc/cpr/drc.hpp"

#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"

namespace ofc::cpr {

using namespace ofc::constants;

namespace {
// signed angular frequency of bin k in radians per grid sample; the Nyquist
// bin of an even length is treated as real (its delay factor is not defined
// unambiguously), so it is left to the caller's zeroing rule.
double bin_omega(std::size_t k, std::size_t n) { return two_pi * bin_frequency(k, n, 1.0); }

CVec to_spectrum(const RVec& x) {
    CVec s(x.begin(), x.end());
    fft(s);
    return s;
}

RVec real_part_ifft(CVec s) {
    ifft(s);
    RVec out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
    return out;
}
}  // namespace

DrcSeparation drc_separate(const RVec& phi_a, const RVec& phi_b, double tau_a, double tau_b, double eps) {
    if (phi_a.size() != phi_b.size() || phi_a.empty()) throw InputSizeError("main tracks must have equal length");
    if (tau_a == tau_b) throw DegenerateGeometry("main channels have identical walk-off delay");
    const std::size_t n = phi_a.size();
    const CVec fa = to_spectrum(phi_a);
    const CVec fb = to_spectrum(phi_b);
    DrcSeparation s;
    s.tau_a = tau_a;
    s.tau_b = tau_b;
    s.phi_tx.assign(n, cplx{});
    s.phi_lo.assign(n, cplx{});
    s.regularized.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = bin_omega(k, n);
        const cplx ea = std::polar(1.0, -w * tau_a);
        const cplx eb = std::polar(1.0, -w * tau_b);
        const cplx den = eb - ea;
        const bool nyquist = (n % 2 == 0) && k == n / 2;
        if (std::abs(den) < eps || nyquist) {
            s.regularized[k] = 1;
            s.phi_lo[k] = fa[k];  // whole main-a content attributed to the LO
            continue;
        }
        s.phi_tx[k] = (fb[k] - fa[k]) / den;
        s.phi_lo[k] = fa[k] - s.phi_tx[k] * ea;
    }
    return s;
}

RVec drc_reconstruct(const DrcSeparation& sep, double tau_c) {
    const std::size_t n = sep.phi_tx.size();
    CVec s(n);
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = sep.phi_tx[k] * std::polar(1.0, -bin_omega(k, n) * tau_c) + sep.phi_lo[k];
    }
    return real_part_ifft(std::move(s));
}

RVec drc_correction(const DrcSeparation& sep, double tau_c, double tau_ref) {
    const std::size_t n = sep.phi_tx.size();
    CVec s(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = bin_omega(k, n);
        s[k] = sep.phi_tx[k] * (std::polar(1.0, -w * tau_c) - std::polar(1.0, -w * tau_ref));
    }
    return real_part_ifft(std::move(s));
}

RVec circular_delay(const RVec& x, double tau) {
    const std::size_t n = x.size();
    CVec s = to_spectrum(x);
    for (std::size_t k = 0; k < n; ++k) {
        if (n % 2 == 0 && k == n / 2) {
            s[k] *= std::cos(pi * tau);  // symmetric treatment keeps the output real
        } else {
            s[k] *= std::polar(1.0, -bin_omega(k, n) * tau);
        }
    }
    return real_part_ifft(std::move(s));
}

}  // namespace ofc::cpr
