#include "ofc/rxdsp/equalizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"
#include "ofc/core/vecmath.hpp"

namespace ofc::rxdsp {

using namespace ofc::constants;

void EqualizerConfig::validate() const {
    if (n_taps < 1 || n_taps % 2 == 0) throw ParameterError("equalizer tap count must be odd");
    if (!(mu_train > 0) || !(mu_rde > 0)) throw ParameterError("equalizer step sizes must be positive");
    if (train_len < 1 || train_passes < 1) throw ParameterError("invalid training length");
}

double coarse_fo(const DualPol& y, const DualPol& d) {
    const std::size_t n = y.size();
    std::size_t nfft = 8192;
    while (nfft < 4 * n) nfft *= 2;
    RVec power(nfft, 0.0);
    std::array<CVec, 4> prods;
    for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
            CVec z(nfft);
            for (std::size_t i = 0; i < n; ++i) z[i] = y[p][i] * std::conj(d[q][i]);
            prods[2 * p + q] = CVec(z.begin(), z.begin() + static_cast<long>(n));
            fft(z);
            for (std::size_t k = 0; k < nfft; ++k) power[k] += std::norm(z[k]);
        }
    }
    const std::size_t kmax = static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
    double f = bin_frequency(kmax, nfft, 1.0);
    // golden-section refinement of the summed DTFT magnitude around the peak
    auto dtft = [&](double fr) {
        double acc = 0.0;
        for (const auto& z : prods) {
            cplx s = 0;
            for (std::size_t i = 0; i < n; ++i) s += z[i] * std::polar(1.0, -two_pi * fr * static_cast<double>(i));
            acc += std::norm(s);
        }
        return acc;
    };
    double a = f - 1.0 / nfft, b = f + 1.0 / nfft;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), e = a + g * (b - a);
    double fc = dtft(c), fe = dtft(e);
    for (int it = 0; it < 30; ++it) {
        if (fc > fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = dtft(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = dtft(e);
        }
    }
    return 0.5 * (a + b);
}

namespace {

struct Butterfly {
    int taps;
    int half;
    // h[p][q][t]: output p from input q
    std::array<std::array<CVec, 2>, 2> h;

    explicit Butterfly(int n) : taps(n), half(n / 2) {
        for (auto& row : h)
            for (auto& v : row) v.assign(n, cplx{});
        h[0][0][half] = 1.0;
        h[1][1][half] = 1.0;
    }
};

// Gathers the 2 x n_taps input window centred on sample c of the circular input.
void gather(const DualPol& in, long c, int half, std::array<CVec, 2>& u) {
    const long n = static_cast<long>(in.size());
    const long first = c - half;
    for (int q = 0; q < 2; ++q) {
        const CVec& src = in[q];
        if (first >= 0 && first + 2 * half < n) {
            std::copy(src.begin() + first, src.begin() + first + 2 * half + 1, u[q].begin());
        } else {
            for (int t = 0; t <= 2 * half; ++t) u[q][t] = src[static_cast<std::size_t>(wrap_index(first + t, n))];
        }
    }
}

cplx filter_out(const Butterfly& bf, const std::array<CVec, 2>& u, int p) {
    cplx acc = 0;
    for (int q = 0; q < 2; ++q) {
        const cplx* h = bf.h[p][q].data();
        const cplx* x = u[q].data();
        double re = 0, im = 0;
        for (int t = 0; t < bf.taps; ++t) {
            re += h[t].real() * x[t].real() - h[t].imag() * x[t].imag();
            im += h[t].real() * x[t].imag() + h[t].imag() * x[t].real();
        }
        acc += cplx(re, im);
    }
    return acc;
}

void update(Butterfly& bf, const std::array<CVec, 2>& u, int p, cplx step) {
    for (int q = 0; q < 2; ++q) {
        cplx* h = bf.h[p][q].data();
        const cplx* x = u[q].data();
        for (int t = 0; t < bf.taps; ++t) h[t] += step * std::conj(x[t]);
    }
}

// Solves a x = b in place (Gaussian elimination, partial pivoting).
void solve(std::vector<cplx>& a, std::vector<cplx>& b, int n) {
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            std::swap(b[c], b[piv]);
        }
        const cplx d = a[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            const cplx f = a[r * n + c] / d;
            if (f == cplx{}) continue;
            for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
            b[r] -= f * b[c];
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        cplx acc = b[c];
        for (int j = c + 1; j < n; ++j) acc -= a[c * n + j] * b[j];
        b[c] = acc / a[c * n + c];
    }
}

// Least-squares butterfly over the header, so LMS starts near the optimum
// whatever the polarisation state or residual dispersion.
void ls_init(Butterfly& bf, const DualPol& in, long start, const DualPol& training, int train_len, double fo) {
    const int m = 2 * bf.taps;
    std::vector<cplx> r(static_cast<std::size_t>(m) * m, cplx{});
    std::vector<cplx> b[2] = {std::vector<cplx>(m), std::vector<cplx>(m)};
    std::array<CVec, 2> u{CVec(bf.taps), CVec(bf.taps)};
    std::vector<cplx> v(m);
    for (int n = 0; n < train_len; ++n) {
        gather(in, start + 2L * n, bf.half, u);
        for (int t = 0; t < bf.taps; ++t) {
            v[t] = u[0][t];
            v[bf.taps + t] = u[1][t];
        }
        const cplx rot = std::polar(1.0, two_pi * fo * n);
        for (int i = 0; i < m; ++i) {
            const cplx ci = std::conj(v[i]);
            for (int j = 0; j < m; ++j) r[i * m + j] += ci * v[j];
            for (int p = 0; p < 2; ++p) b[p][i] += ci * training[p][n] * rot;
        }
    }
    double tr = 0;
    for (int i = 0; i < m; ++i) tr += r[i * m + i].real();
    for (int i = 0; i < m; ++i) r[i * m + i] += 1e-3 * tr / m;
    for (int p = 0; p < 2; ++p) {
        auto a = r;
        solve(a, b[p], m);
        for (int t = 0; t < bf.taps; ++t) {
            bf.h[p][0][t] = b[p][t];
            bf.h[p][1][t] = b[p][bf.taps + t];
        }
    }
}

}  // namespace

EqualizerResult mimo_equalize(const DualPol& in_raw, long start, const EqualizerConfig& cfg, const DualPol& training,
                              const sigkit::ConstellationSpec& spec, std::span<const std::uint8_t> known_radius) {
    cfg.validate();
    const long n2 = static_cast<long>(in_raw.size());
    if (n2 % 2 != 0) throw InputSizeError("equalizer input must hold 2 samples per symbol");
    const long ns = n2 / 2;
    const int train_len = std::min<int>(cfg.train_len, static_cast<int>(training.size()));
    if (train_len < 1) throw InputSizeError("no training symbols");

    // unit mean power per polarisation at the input
    DualPol in = in_raw;
    for (int p = 0; p < 2; ++p) {
        const double pw = mean_power(in[p]);
        if (pw > 0) {
            const double s = 1.0 / std::sqrt(pw);
            for (auto& v : in[p]) v *= s;
        }
    }

    Butterfly bf(cfg.n_taps);
    std::array<CVec, 2> u{CVec(cfg.n_taps), CVec(cfg.n_taps)};
    EqualizerResult res;

    // coarse FO over the header at the symbol instants
    DualPol y0(train_len), d0(train_len);
    for (int n = 0; n < train_len; ++n) {
        for (int p = 0; p < 2; ++p) {
            y0[p][n] = in[p][static_cast<std::size_t>(wrap_index(start + 2L * n, n2))];
            d0[p][n] = training[p][n];
        }
    }
    const double fo = coarse_fo(y0, d0);
    res.training_fo = fo;
    ls_init(bf, in, start, training, train_len, fo);

    // data-aided training passes over the header
    for (int pass = 0; pass < cfg.train_passes; ++pass) {
        std::array<double, 2> theta{};
        for (int p = 0; p < 2; ++p) {
            cplx acc = 0;
            for (int n = 0; n < train_len; ++n) {
                gather(in, start + 2L * n, bf.half, u);
                acc += filter_out(bf, u, p) * std::conj(training[p][n] * std::polar(1.0, two_pi * fo * n));
            }
            theta[p] = std::arg(acc);
        }
        double mse = 0;
        for (int n = 0; n < train_len; ++n) {
            gather(in, start + 2L * n, bf.half, u);
            for (int p = 0; p < 2; ++p) {
                const cplx y = filter_out(bf, u, p);
                const cplx ref = training[p][n] * std::polar(1.0, theta[p] + two_pi * fo * n);
                const cplx e = ref - y;
                mse += std::norm(e);
                update(bf, u, p, cfg.mu_train * e);
                theta[p] += cfg.tracker_gain * std::arg(y * std::conj(ref));
            }
        }
        res.training_mse = mse / (2.0 * train_len);
    }

    // blind radius-directed adaptation over the whole circular sequence
    const auto& radii = spec.radii;
    auto nearest_radius = [&](double r) {
        double best = radii.front();
        for (double v : radii)
            if (std::abs(v - r) < std::abs(best - r)) best = v;
        return best;
    };
    res.symbols = DualPol(static_cast<std::size_t>(ns));
    const long total = ns + cfg.wrap_extra;
    const double limit = cfg.divergence_factor * 2.0;  // target output power is 1 per polarisation
    int over = 0;
    const long kr = static_cast<long>(known_radius.size());
    for (long n = 0; n < total; ++n) {
        gather(in, start + 2L * n, bf.half, u);
        const long idx = n % ns;
        const bool known = kr > 0 && known_radius[static_cast<std::size_t>(idx % kr)] != 0;
        double pw = 0;
        for (int p = 0; p < 2; ++p) {
            const cplx y = filter_out(bf, u, p);
            res.symbols[p][static_cast<std::size_t>(idx)] = y;
            const double m2 = std::norm(y);
            pw += m2;
            const double r = known ? 1.0 : nearest_radius(std::sqrt(m2));
            update(bf, u, p, cfg.mu_rde * y * (r * r - m2));
        }
        over = pw > limit ? over + 1 : 0;
        if (over >= cfg.divergence_run || !std::isfinite(pw)) {
            throw EqualizerDivergence("equalizer output power exceeded its target for " +
                                      std::to_string(cfg.divergence_run) + " symbols");
        }
    }
    return res;
}

}  // namespace ofc::rxdsp
