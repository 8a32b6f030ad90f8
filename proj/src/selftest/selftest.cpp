#include "ofc/selftest/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <type_traits>

#include "ofc/combsrc/comb.hpp"
#include "ofc/core/constants.hpp"
#include "ofc/core/fft.hpp"
#include "ofc/core/rng.hpp"
#include "ofc/cpr/cpe.hpp"
#include "ofc/cpr/drc.hpp"
#include "ofc/cpr/phase.hpp"
#include "ofc/link/fiber.hpp"
#include "ofc/metrics/metrics.hpp"
#include "ofc/rxdsp/cdc.hpp"
#include "ofc/selftest/oracles.hpp"
#include "ofc/sigkit/frame.hpp"
#include "ofc/sigkit/pulse.hpp"
#include "ofc/sim/config.hpp"
#include "ofc/sim/pipeline.hpp"

namespace ofc::selftest {

using namespace ofc::constants;

namespace {

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double rel_l2(const DualPol& a, const DualPol& b) {
    double num = 0, den = 0;
    for (int p = 0; p < 2; ++p)
        for (std::size_t i = 0; i < a.size(); ++i) {
            num += std::norm(a[p][i] - b[p][i]);
            den += std::norm(b[p][i]);
        }
    return std::sqrt(num / den);
}

// band-limited dual-pol test field, one channel at 4 samples/symbol
link::FieldGrid test_field(std::size_t n_sym, std::uint64_t seed) {
    Rng rng(seed, 7);
    link::FieldGrid g;
    g.sample_rate = 4 * 135e9;
    g.field = DualPol(n_sym * 4);
    for (int p = 0; p < 2; ++p) {
        CVec s(n_sym);
        for (auto& v : s) v = rng.complex_gaussian(1.0);
        g.field[p] = sigkit::rrc_filter(s, 0.1, 4);
        for (auto& v : g.field[p]) v *= 1e-2;
    }
    return g;
}

CheckResult ssfm_linear_limit() {
    link::FiberParams f;
    f.alpha_db_km = 0;
    f.gamma_w_km = 0;
    f.span_km = 80;
    link::StepControl st;
    st.step_km = 1.0;
    auto a = test_field(1 << 13, 1);
    auto b = a;
    link::FiberPropagator prop(f, st, a.sample_rate, a.size());
    prop.propagate_span(a);
    link::apply_dispersion(b, f.beta2() * f.span_km * 1e3);
    const double e = rel_l2(a.field, b.field);
    return {"ssfm linear lossless limit equals CD filter", e < 1e-8, fmt("relative L2 %.2e (< 1e-8)", e)};
}

CheckResult cdc_identity() {
    auto g = test_field(1 << 13, 2);
    const auto ref = g.field;
    link::FiberParams f;
    const double beta2_l = f.beta2() * 2400e3;
    link::apply_dispersion(g, beta2_l);
    const double d_acc = rxdsp::dispersion_from_beta2_acc(beta2_l, 0.0, f.wavelength_nm);
    rxdsp::cdc(g.field, g.sample_rate, d_acc, 0.0, f.wavelength_nm);
    const double e = rel_l2(g.field, ref);
    return {"cdc undoes analytic CD", e < 1e-10, fmt("relative L2 %.2e (< 1e-10)", e)};
}

CheckResult wiener_variance() {
    const double lw = 200e3, fs = 135e9;
    const std::size_t n = 1000000;
    Rng rng(11, 3);
    const auto t = combsrc::gen_wiener(lw, fs, n + 1, rng);
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) mean += t.samples[i + 1] - t.samples[i];
    mean /= static_cast<double>(n);
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = t.samples[i + 1] - t.samples[i] - mean;
        ss += d * d;
    }
    const double s2 = ss / static_cast<double>(n - 1);
    const double sigma2 = two_pi * lw / fs;
    const double k = static_cast<double>(n - 1);
    const double lo = chi2_quantile(0.005, k) / k * sigma2;
    const double hi = chi2_quantile(0.995, k) / k * sigma2;
    return {"wiener increment variance", s2 >= lo && s2 <= hi,
            fmt("%.5e in [%.5e, %.5e]", s2, lo, hi)};
}

CheckResult comb_anticorrelation() {
    combsrc::CombSpec spec;
    const std::size_t n = 100000;
    const double fs = 135e9 * 8;
    Rng c1(5, 1), l1(5, 2), c2(5, 1);
    const auto lines = combsrc::gen_comb_phases(spec, fs, n, c1, l1, false);
    const auto common = combsrc::gen_wiener(spec.common_lw, fs, n, c2);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = lines[0].samples[i] - common.samples[i];
        const double b = lines[3].samples[i] - common.samples[i];
        worst = std::max(worst, std::abs(a + b));
    }
    return {"outer comb lines anti-correlated", worst < 1e-12, fmt("max |(p1-pc)+(p4-pc)| = %.1e rad", worst)};
}

std::vector<CheckResult> gmi_vs_oracle() {
    std::vector<CheckResult> out;
    for (auto f : {sigkit::Format::QAM16, sigkit::Format::QAM64}) {
        const auto spec = sigkit::make_constellation(f);
        const int m = spec.bits_per_symbol;
        for (double snr_db : {15.0, 22.0, 30.0}) {
            const double sigma2 = 1.0 / std::pow(10.0, snr_db / 10.0);
            Rng rng(21, static_cast<std::uint64_t>(snr_db) + 100u * m);
            const std::size_t n = 200000;
            std::vector<std::uint32_t> labels(n);
            CVec y(n);
            for (std::size_t i = 0; i < n; ++i) {
                labels[i] = static_cast<std::uint32_t>(rng.next_u64() >> (64 - m));
                y[i] = spec.point(labels[i]) + rng.complex_gaussian(sigma2);
            }
            const double est = metrics::gmi(y, labels, spec, sigma2);
            const double ref = gmi_awgn_quadrature(spec, sigma2);
            const double d = std::abs(est - ref);
            out.push_back({"gmi " + sigkit::to_string(f) + " at " + fmt("%.0f dB", snr_db), d < 0.02,
                           fmt("estimate %.4f, quadrature %.4f, |diff| %.4f (< 0.02)", est, ref, d)});
        }
    }
    return out;
}

std::vector<CheckResult> pilot_overhead_counts() {
    std::vector<CheckResult> out;
    for (int n_r : {0, 64}) {
        sigkit::PilotPlan plan;
        plan.n_r = n_r;
        const auto lay = sigkit::make_layout(plan);
        const long period = static_cast<long>(plan.period_blocks()) * plan.block_len;
        const long periods = (plan.frame_len - plan.header_len) / period;
        long pilots = 0, payload = 0;
        for (long i = plan.header_len; i < plan.header_len + periods * period; ++i) {
            if (lay.kind[i] == sigkit::SymbolKind::Pilot) ++pilots;
            if (lay.kind[i] == sigkit::SymbolKind::Payload) ++payload;
        }
        const long denom = 31 + 8 * n_r;
        const bool ok = payload == denom * pilots && sigkit::cr_pilot_overhead(plan) == 1.0 / denom;
        out.push_back({"pilot overhead n_r=" + std::to_string(n_r), ok,
                       fmt("pilots %.0f, payload %.0f, ratio 1/%.4f", pilots, payload,
                           static_cast<double>(payload) / pilots)});
    }
    return out;
}

CheckResult drc_synthetic() {
    // mains at +-225 GHz, secondary at -75 GHz, 2400 km, one sample per 128 symbols
    const double rs = 135e9, cell = 128;
    const std::size_t n = 4096;
    link::FiberParams f;
    f.dispersion_ps_nm_km = 20.0;
    const double beta2_l = f.beta2() * 2400e3;
    auto tau = [&](double hz) { return link::group_delay(beta2_l, hz) * rs / cell; };
    const double ta = tau(-225e9), tb = tau(225e9), tc = tau(-75e9);
    Rng r1(31, 1), r2(31, 2);
    auto tx = combsrc::gen_wiener(200e3, rs / cell, n + 1, r1);
    auto lo = combsrc::gen_wiener(200e3, rs / cell, n + 1, r2);
    combsrc::close_into_bridge(tx);
    combsrc::close_into_bridge(lo);
    tx.samples.resize(n);
    lo.samples.resize(n);
    auto channel = [&](double t) {
        RVec d = cpr::circular_delay(tx.samples, t);
        for (std::size_t i = 0; i < n; ++i) d[i] += lo.samples[i];
        return d;
    };
    const RVec pa = channel(ta), pb = channel(tb), pc = channel(tc);
    const auto sep = cpr::drc_separate(pa, pb, ta, tb, 0.1);
    const RVec rec = cpr::drc_reconstruct(sep, tc);
    // compare on the bins the separation resolved
    CVec e(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = rec[i] - pc[i];
        s[i] = pc[i];
    }
    fft(e);
    fft(s);
    double ee = 0, ss = 0;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (sep.regularized[k]) continue;
        ee += std::norm(e[k]);
        ss += std::norm(s[k]);
        ++kept;
    }
    const double ratio = std::sqrt(ee / ss);
    return {"dual reference separation, synthetic delays", ratio < 0.05,
            fmt("error/PN rms %.2e over %.0f of %.0f bins (< 0.05)", ratio, static_cast<double>(kept),
                static_cast<double>(n))};
}

CheckResult hold_lag() {
    sigkit::PilotPlan plan;
    plan.n_r = 64;
    plan.frame_len = 1 << 15;
    const auto lay = sigkit::make_layout(plan);
    const long n = plan.frame_len;
    const auto& known = sigkit::known_symbol_table(plan.frame_len);
    const double w = two_pi * 1e6 / 135e9;
    DualPol x(static_cast<std::size_t>(n));
    for (int p = 0; p < 2; ++p)
        for (long k = 0; k < n; ++k) x[p][k] = known[p][k] * std::polar(1.0, w * static_cast<double>(k));
    const auto ps = cpr::make_pilot_set(lay, n, 0, n, false);
    const RVec est = cpr::pa_cpr_light(x, ps);
    double worst = 0;
    // between the first and last burst centroids
    const double first = ps.centroid(0), last = ps.centroid(ps.bursts.size() - 1);
    for (long k = static_cast<long>(std::ceil(first)); k < static_cast<long>(last); ++k) {
        worst = std::max(worst, std::abs(w * static_cast<double>(k) - est[k]));
    }
    const double target = two_pi * 1e6 * (32.0 * 68.0 / 135e9);
    const bool ok = std::abs(worst - target) <= 0.05 * target;
    return {"pilot hold lag at 1 MHz residual offset", ok, fmt("worst %.4f rad, expected %.4f rad (+-5%%)", worst, target)};
}

CheckResult b2b_snr() {
    sim::RunConfig cfg;
    sim::apply_profile(cfg, "desk");
    cfg.n_frames = 2;
    cfg.comb.common_lw = 0;
    cfg.comb.line_lw = 0;
    cfg.comb.fo = 0;
    cfg.comb.fsr_dev = 0;
    sim::LinkSimulation sim(cfg, sigkit::Format::QAM16, 1, std::vector<int>(cfg.comb.n_lines, 0));
    const auto rx = sim.receive();
    double lo = 1e9, hi = -1e9, mean = 0;
    for (std::size_t c = 0; c < rx.size(); ++c) {
        const auto& t = sim.truth()[c];
        // one complex gain per polarisation over the payload of the evaluated
        // frames; signal and error energy pooled over both polarisations
        double sig = 0, err = 0;
        for (int p = 0; p < 2; ++p) {
            cplx num = 0;
            double px = 0;
            for (int f = cfg.skip_frames; f < cfg.n_frames; ++f)
                for (int pos : t.layout.payload) {
                    const long k = static_cast<long>(f) * cfg.frame_len + pos;
                    num += rx[c].y[p][k] * std::conj(t.symbols[p][k]);
                    px += std::norm(t.symbols[p][k]);
                }
            const cplx g = num / px;
            for (int f = cfg.skip_frames; f < cfg.n_frames; ++f)
                for (int pos : t.layout.payload) {
                    const long k = static_cast<long>(f) * cfg.frame_len + pos;
                    err += std::norm(rx[c].y[p][k] - g * t.symbols[p][k]);
                }
            sig += std::norm(g) * px;
        }
        const double snr = 10.0 * std::log10(sig / err);
        lo = std::min(lo, snr);
        hi = std::max(hi, snr);
        mean += snr / static_cast<double>(rx.size());
    }
    const bool ok = lo >= 21.85 && hi <= 22.15;
    return {"back-to-back SNR calibration", ok, fmt("mean %.2f dB, range [%.2f, %.2f] (22 +- 0.15)", mean, lo, hi)};
}

}  // namespace

std::vector<CheckResult> run_property_suite() {
    std::vector<CheckResult> out;
    auto guard = [&](const char* name, auto&& f) {
        try {
            if constexpr (std::is_same_v<decltype(f()), CheckResult>) {
                out.push_back(f());
            } else {
                for (auto& r : f()) out.push_back(std::move(r));
            }
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };
    guard("ssfm linear lossless limit", ssfm_linear_limit);
    guard("cdc identity", cdc_identity);
    guard("wiener variance", wiener_variance);
    guard("comb anti-correlation", comb_anticorrelation);
    guard("gmi oracle", gmi_vs_oracle);
    guard("pilot overhead", pilot_overhead_counts);
    guard("drc synthetic", drc_synthetic);
    guard("hold lag", hold_lag);
    guard("b2b snr", b2b_snr);
    return out;
}

}  // namespace ofc::selftest
