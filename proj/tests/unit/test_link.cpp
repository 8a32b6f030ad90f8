#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "helpers.hpp"
#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"
#include "ofc/core/vecmath.hpp"
#include "ofc/link/amplifier.hpp"
#include "ofc/link/fiber.hpp"
#include "ofc/link/receiver.hpp"
#include "ofc/link/transmitter.hpp"
#include "ofc/link/waveform_io.hpp"
#include "ofc/sigkit/pulse.hpp"

using namespace ofc;
using namespace ofc::link;
using namespace ofc::constants;

namespace {

constexpr double rs = 135e9;
// 4608 symbols keep 75 GHz multiples on whole DFT bins
constexpr std::size_t ns_grid = 4608;

DualPol qpsk_pair(std::size_t n, std::uint64_t seed) {
    Rng rng(seed, stream::payload);
    return DualPol(test::random_qpsk(n, rng), test::random_qpsk(n, rng));
}

combsrc::PhaseTrack flat(std::size_t n, double fs) {
    combsrc::PhaseTrack t;
    t.sample_rate = fs;
    t.samples.assign(n, 0.0);
    return t;
}

FieldGrid single_channel(std::size_t ns, double p_dbm, std::uint64_t seed = 1, int os = 8) {
    MuxParams mp;
    mp.oversample = os;
    mp.launch_power_dbm = p_dbm;
    mp.channel_offsets = {0.0};
    return modulate_mux({qpsk_pair(ns, seed)}, {flat(ns * os, rs * os)}, mp);
}

FieldGrid four_channels(double p_dbm) {
    MuxParams mp;
    mp.launch_power_dbm = p_dbm;
    mp.channel_offsets = {-225e9, -75e9, 75e9, 225e9};
    std::vector<DualPol> sym;
    std::vector<combsrc::PhaseTrack> ph;
    for (int c = 0; c < 4; ++c) {
        sym.push_back(qpsk_pair(ns_grid, 10 + c));
        ph.push_back(flat(ns_grid * 8, rs * 8));
    }
    return modulate_mux(sym, ph, mp);
}

double band_power(const CVec& spec, double fs, double lo, double hi) {
    double acc = 0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double f = bin_frequency(k, spec.size(), fs);
        if (f >= lo && f < hi) acc += std::norm(spec[k]);
    }
    return acc;
}

FieldGrid cw(std::size_t n, double fs, double p_w) {
    FieldGrid g;
    g.sample_rate = fs;
    g.field = DualPol(n);
    for (auto& v : g.field.x) v = std::sqrt(p_w);
    return g;
}

FieldGrid gaussian_pulse(std::size_t n, double fs, double t0, double f0) {
    FieldGrid g;
    g.sample_rate = fs;
    g.field = DualPol(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(n) / 2) / fs;
        g.field.x[i] = std::exp(-t * t / (2 * t0 * t0)) * std::polar(1.0, two_pi * f0 * t);
    }
    return g;
}

double centroid_time(const CVec& x, double fs) {
    double m0 = 0, m1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(x.size()) / 2) / fs;
        m0 += std::norm(x[i]);
        m1 += t * std::norm(x[i]);
    }
    return m1 / m0;
}

// SNR after the best linear T/2-spaced FIR (least squares against the known
// symbols), i.e. what remains once the deterministic filter ISI is undone
double ls_fir_snr_db(const CVec& y, const CVec& sym, int taps) {
    const long n = static_cast<long>(sym.size());
    const long ny = static_cast<long>(y.size());
    double best = -1e9;
    for (int centre = 0; centre < 4; ++centre) {
        std::vector<std::vector<cplx>> a(taps, std::vector<cplx>(taps + 1, 0.0));
        auto tap = [&](long k, int j) { return y[wrap_index(2 * k + centre + taps / 2 - j, ny)]; };
        for (long k = 0; k < n; ++k) {
            for (int i = 0; i < taps; ++i) {
                const cplx ci = std::conj(tap(k, i));
                for (int j = 0; j < taps; ++j) a[i][j] += ci * tap(k, j);
                a[i][taps] += ci * sym[k];
            }
        }
        // Gauss-Jordan with partial pivoting
        for (int c = 0; c < taps; ++c) {
            int piv = c;
            for (int r = c + 1; r < taps; ++r)
                if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
            std::swap(a[c], a[piv]);
            for (int r = 0; r < taps; ++r) {
                if (r == c) continue;
                const cplx f = a[r][c] / a[c][c];
                for (int j = c; j <= taps; ++j) a[r][j] -= f * a[c][j];
            }
        }
        CVec out(n);
        for (long k = 0; k < n; ++k) {
            cplx acc = 0;
            for (int j = 0; j < taps; ++j) acc += a[j][taps] / a[j][j] * tap(k, j);
            out[k] = acc;
        }
        best = std::max(best, test::ls_snr_db(out, sym));
    }
    return best;
}

}  // namespace

TEST(Mux, SingleChannelPowerBookkeeping) {
    const auto g = single_channel(ns_grid, 0.0);
    EXPECT_NEAR(watt_to_dbm(total_power(g)), 0.0, 0.05);
}

TEST(Mux, FourChannelsTotalPower) {
    const auto g = four_channels(3.0);
    EXPECT_NEAR(watt_to_dbm(total_power(g)), watt_to_dbm(4 * dbm_to_watt(3.0)), 0.05);
    EXPECT_NEAR(watt_to_dbm(total_power(g)), 9.03, 0.05);
}

TEST(Mux, SpectrumHasFourLobes) {
    const auto g = four_channels(3.0);
    const auto spec = fft_copy(g.field.x);
    const double fs = g.sample_rate;
    const double half = rs * 1.1 / 2;  // 74.25 GHz
    const double all = band_power(spec, fs, -fs, fs);
    for (double c : {-225e9, -75e9, 75e9, 225e9}) {
        EXPECT_NEAR(band_power(spec, fs, c - half, c + half) / all, 0.25, 0.01);
    }
    // guard bands between and outside the lobes are empty
    EXPECT_LT(band_power(spec, fs, 300e9 + 1e9, fs) / all, 1e-6);
    EXPECT_LT(band_power(spec, fs, -fs, -300e9 - 1e9) / all, 1e-6);
}

TEST(Mux, AliasingRejected) {
    MuxParams mp;
    mp.oversample = 2;
    mp.channel_offsets = {225e9};
    EXPECT_THROW(modulate_mux({qpsk_pair(ns_grid, 1)}, {flat(ns_grid * 2, rs * 2)}, mp), ConfigError);
}

TEST(Awgn, TwoStagesCompose) {
    const double stage = per_stage_snr_db(22.0);
    EXPECT_NEAR(stage, 25.01, 0.01);
    const std::size_t ns = 32768;
    const auto clean = single_channel(ns, 0.0, 3);
    auto g = clean;
    Rng a(3, stream::awgn_tx), b(3, stream::awgn_rx);
    awgn_load(g, stage, rs, 1e-3, a);
    awgn_load(g, stage, rs, 1e-3, b);
    CVec yx = sigkit::decimate(sigkit::rrc_matched(g.field.x, 0.1, 8), 8);
    CVec yy = sigkit::decimate(sigkit::rrc_matched(g.field.y, 0.1, 8), 8);
    CVec xx = sigkit::decimate(sigkit::rrc_matched(clean.field.x, 0.1, 8), 8);
    CVec xy = sigkit::decimate(sigkit::rrc_matched(clean.field.y, 0.1, 8), 8);
    CVec y(yx), x(xx);
    y.insert(y.end(), yy.begin(), yy.end());
    x.insert(x.end(), xy.begin(), xy.end());
    EXPECT_NEAR(test::ls_snr_db(y, x), 22.0, 0.1);
}

TEST(Awgn, InfiniteSnrLeavesFieldUnchanged) {
    auto g = single_channel(512, 0.0);
    const auto ref = g.field.x;
    Rng rng(1, 1);
    awgn_load(g, std::numeric_limits<double>::infinity(), rs, 1e-3, rng);
    EXPECT_EQ(g.field.x, ref);
}

TEST(Awgn, NoisePsdFlat) {
    const std::size_t n = 1 << 18;
    FieldGrid g;
    g.sample_rate = rs * 8;
    g.field = DualPol(n);
    Rng rng(9, stream::awgn_tx);
    awgn_load(g, 20.0, rs, 1e-3, rng);
    const auto spec = fft_copy(g.field.x);
    const double fs = g.sample_rate;
    const int groups = 20;
    std::vector<double> p;
    for (int i = 0; i < groups; ++i) {
        const double lo = -0.4 * fs + 0.8 * fs * i / groups;
        p.push_back(band_power(spec, fs, lo, lo + 0.8 * fs / groups));
    }
    const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    EXPECT_LT(lin_to_db(*mx / *mn), 0.2);
}

TEST(Awgn, SameSeedSameField) {
    auto a = single_channel(1024, 3.0, 4), b = single_channel(1024, 3.0, 4);
    Rng ra(4, stream::awgn_tx), rb(4, stream::awgn_tx);
    awgn_load(a, 25.0, rs, 2e-3, ra);
    awgn_load(b, 25.0, rs, 2e-3, rb);
    EXPECT_EQ(a.field.x, b.field.x);
    EXPECT_EQ(a.field.y, b.field.y);
}

TEST(Fiber, Beta2FromDispersion) {
    FiberParams f;
    // ps^2/km
    EXPECT_NEAR(f.beta2() * 1e24 * 1e3, -25.5, 0.05);
}

TEST(Fiber, LinearLosslessMatchesAnalyticDispersion) {
    FiberParams f;
    f.alpha_db_km = 0;
    f.gamma_w_km = 0;
    auto g = single_channel(2048, 3.0, 5);
    auto ref = g;
    StepControl st;
    st.step_km = 5.0;
    ssfm_span(g, f, st);
    apply_dispersion(ref, f.beta2() * f.span_km * 1e3);
    EXPECT_LT(test::rel_l2(g.field.x, ref.field.x), 1e-8);
    EXPECT_LT(test::rel_l2(g.field.y, ref.field.y), 1e-8);
}

TEST(Fiber, SpanAttenuation) {
    FiberParams f;
    f.gamma_w_km = 0;
    auto g = single_channel(2048, 3.0, 6);
    const double p0 = total_power(g);
    ssfm_span(g, f, StepControl{});
    EXPECT_NEAR(lin_to_db(total_power(g) / p0), -16.0, 0.01);
}

TEST(Fiber, CwSelfPhaseModulation) {
    FiberParams f;
    f.alpha_db_km = 0;
    f.dispersion_ps_nm_km = 0;
    auto g = cw(256, rs * 8, 10e-3);
    ssfm_span(g, f, StepControl{});
    const double expect = 8.0 / 9.0 * 1.3e-3 * 0.01 * 80e3;
    EXPECT_NEAR(expect, 0.925, 0.001);
    for (std::size_t i = 0; i < g.size(); i += 17) {
        EXPECT_NEAR(std::arg(g.field.x[i]), expect, 1e-9);
        EXPECT_NEAR(std::abs(g.field.x[i]), std::sqrt(0.01), 1e-12);
    }
}

TEST(Fiber, LosslessNonlinearConservesEnergy) {
    FiberParams f;
    f.alpha_db_km = 0;
    auto g = four_channels(10.0);
    const double p0 = total_power(g);
    ssfm_span(g, f, StepControl{});
    EXPECT_NEAR(total_power(g) / p0, 1.0, 1e-6);
}

TEST(Fiber, GroupDelaySignFromPulse) {
    FiberParams f;
    const std::size_t n = 1 << 14;
    const double fs = 1.08e12;
    const double f0 = 100e9;
    auto g = gaussian_pulse(n, fs, 20e-12, f0);
    const double b2l = f.beta2() * 80e3;
    apply_dispersion(g, b2l);
    const double t = centroid_time(g.field.x, fs);
    EXPECT_GT(t, 0.0);
    EXPECT_NEAR(t / group_delay(b2l, f0), 1.0, 0.01);
}

TEST(Fiber, StepControlCoversSpan) {
    StepControl st;
    st.mode = StepControl::Mode::Logarithmic;
    double sum = 0;
    for (double s : st.steps(80.0)) {
        EXPECT_LE(s, st.max_km + 1e-12);
        sum += s;
    }
    EXPECT_NEAR(sum, 80.0, 1e-9);
    st.mode = StepControl::Mode::Fixed;
    st.step_km = 0;
    EXPECT_THROW(st.steps(80.0), NumericalError);
}

TEST(Fiber, NanInputRejected) {
    FiberParams f;
    auto g = cw(64, rs * 8, 1e-3);
    g.field.x[3] = cplx(std::nan(""), 0);
    EXPECT_THROW(ssfm_span(g, f, StepControl{}), NumericalError);
}

TEST(Edfa, AsePsd) {
    AmpParams a;
    EXPECT_NEAR(ase_psd(a, 193.4e12) / 8.83e-18, 1.0, 0.005);
}

TEST(Edfa, NoiselessGain) {
    AmpParams a;
    a.ase = false;
    auto g = cw(64, rs * 8, 1e-3);
    Rng rng(1, stream::ase);
    edfa(g, a, 193.4e12, rng);
    EXPECT_NEAR(std::abs(g.field.x[0]), std::sqrt(1e-3) * std::pow(10.0, 16.0 / 20.0), 1e-12);
}

TEST(Edfa, AseAccumulatesLinearly) {
    AmpParams a;
    const std::size_t n = 1 << 16;
    FieldGrid g;
    g.sample_rate = rs * 8;
    g.field = DualPol(n);
    const double loss = std::pow(10.0, -16.0 / 20.0);
    for (int s = 0; s < 30; ++s) {
        for (int p = 0; p < 2; ++p)
            for (auto& v : g.field[p]) v *= loss;
        Rng rng(2, stream::ase + s);
        edfa(g, a, 193.4e12, rng);
    }
    const double one = 2 * ase_psd(a, 193.4e12) * g.sample_rate;
    EXPECT_NEAR(total_power(g) / (30 * one), 1.0, 0.01);
}

TEST(Receiver, BandPassAtNeighbour) {
    EXPECT_NEAR(lin_to_db(gaussian_bpf_power(150e9, 150e9)), -12.04, 0.01);
    EXPECT_NEAR(lin_to_db(gaussian_bpf_power(75e9, 150e9)), -3.01, 0.01);
}

TEST(Receiver, BesselCorner) {
    EXPECT_NEAR(std::abs(bessel3_response(70e9, 70e9)), 1.0 / std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(std::abs(bessel3_response(0, 70e9)), 1.0, 1e-12);
}

TEST(Receiver, NoiselessChainSnr) {
    const std::size_t ns = 4608;
    Rng rng(11, stream::payload);
    const DualPol sym(test::random_qpsk(ns, rng), test::random_qpsk(ns, rng));
    MuxParams mp;
    mp.launch_power_dbm = 0;
    mp.channel_offsets = {75e9};
    const auto g = modulate_mux({sym}, {flat(ns * 8, rs * 8)}, mp);
    const CVec lo(ns * 8, cplx(1, 0));
    auto y = demux_rx(g, 75e9, lo, RxParams{});
    ASSERT_EQ(y.size(), 2 * ns);
    sigkit::rrc_matched_inplace(y.x, 0.1, 2);
    EXPECT_GE(ls_fir_snr_db(y.x, sym.x, 31), 35.0);
}

TEST(Receiver, LoFrequencyOffsetRotatesOutput) {
    const std::size_t ns = 4608;
    const auto g = single_channel(ns, 0.0, 12);
    const double fs = g.sample_rate;
    const double fo = 200e6;
    CVec lo0(ns * 8, cplx(1, 0)), lo(ns * 8);
    for (std::size_t i = 0; i < lo.size(); ++i) lo[i] = std::polar(1.0, two_pi * fo * static_cast<double>(i) / fs);
    const auto a = demux_rx(g, 0.0, lo0, RxParams{});
    const auto b = demux_rx(g, 0.0, lo, RxParams{});
    // phase of b relative to a over consecutive blocks
    const std::size_t blk = 256;
    const double rate = 2 * rs;
    double prev = 0, sum = 0;
    int count = 0;
    for (std::size_t s = 0; s + blk <= a.size(); s += blk) {
        cplx acc = 0;
        for (std::size_t i = s; i < s + blk; ++i) acc += b.x[i] * std::conj(a.x[i]);
        const double ph = std::arg(acc);
        if (s > 0) {
            double d = ph - prev;
            d -= two_pi * std::round(d / two_pi);
            sum += d;
            ++count;
        }
        prev = ph;
    }
    // mixing with conj(LO) turns the receiver output at -fo
    EXPECT_NEAR(sum / count / (-two_pi * fo * blk / rate), 1.0, 0.01);
}

TEST(Receiver, OffGridChannelRejected) {
    const auto g = single_channel(256, 0.0);
    const CVec lo(256 * 8, cplx(1, 0));
    EXPECT_THROW(demux_rx(g, 1e6, lo, RxParams{}), ConfigError);
}

TEST(WaveformIo, RoundTrip) {
    auto g = single_channel(512, 3.0, 13);
    g.ref_freq_offset = 75e9;
    const auto path = (std::filesystem::temp_directory_path() / "ofc_wave_rt.bin").string();
    write_waveform(path, g);
    const auto r = read_waveform(path);
    EXPECT_EQ(r.size(), g.size());
    EXPECT_DOUBLE_EQ(r.sample_rate, g.sample_rate);
    EXPECT_DOUBLE_EQ(r.ref_freq_offset, g.ref_freq_offset);
    EXPECT_LT(test::rel_l2(r.field.x, g.field.x), 1e-6);
    EXPECT_LT(test::rel_l2(r.field.y, g.field.y), 1e-6);
    std::remove(path.c_str());
    std::remove((path + ".txt").c_str());
}
