#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/link/fiber.hpp"
#include "ofc/rxdsp/cdc.hpp"
#include "ofc/rxdsp/equalizer.hpp"
#include "ofc/rxdsp/sync.hpp"
#include "ofc/sigkit/frame.hpp"
#include "ofc/sigkit/pulse.hpp"

using namespace ofc;
using namespace ofc::rxdsp;
using namespace ofc::constants;

namespace {

constexpr double rs = 135e9;
constexpr int n_sym = 8192;
constexpr int header_len = 1024;

DualPol header_of() {
    const auto& known = sigkit::known_symbol_table(n_sym);
    DualPol h(header_len);
    for (int p = 0; p < 2; ++p) std::copy(known[p].begin(), known[p].begin() + header_len, h[p].begin());
    return h;
}

// header followed by random payload of the given format
DualPol tx_symbols(sigkit::Format f, std::uint64_t seed) {
    const auto spec = sigkit::make_constellation(f);
    const auto& known = sigkit::known_symbol_table(n_sym);
    Rng rng(seed, stream::payload);
    DualPol s(n_sym);
    for (int p = 0; p < 2; ++p) {
        for (int i = 0; i < n_sym; ++i) {
            s[p][i] = i < header_len ? known[p][i] : spec.point(static_cast<std::uint32_t>(rng.next_u64() % spec.size()));
        }
    }
    return s;
}

DualPol shape(const DualPol& s) {
    return DualPol(sigkit::rrc_filter(s.x, 0.1, 2), sigkit::rrc_filter(s.y, 0.1, 2));
}

void matched(DualPol& w) {
    for (int p = 0; p < 2; ++p) sigkit::rrc_matched_inplace(w[p], 0.1, 2);
}

DualPol shift(const DualPol& w, long d) {
    DualPol out(w.size());
    const long n = static_cast<long>(w.size());
    for (int p = 0; p < 2; ++p)
        for (long i = 0; i < n; ++i) out[p][wrap_index(i + d, n)] = w[p][i];
    return out;
}

void add_noise(DualPol& w, double snr_db, Rng& rng) {
    // unit-energy symbols at 2 sps before the matched filter
    const double var = 1.0 / db_to_lin(snr_db) * 2.0;
    for (int p = 0; p < 2; ++p)
        for (auto& v : w[p]) v += rng.complex_gaussian(var);
}

double payload_snr(const DualPol& y, const DualPol& s, int from) {
    CVec a, b;
    for (int p = 0; p < 2; ++p) {
        a.insert(a.end(), y[p].begin() + from, y[p].end());
        b.insert(b.end(), s[p].begin() + from, s[p].end());
    }
    return test::ls_snr_db(a, b);
}

}  // namespace

TEST(Cdc, Beta2FromDispersion) {
    // ps^2 per km from 20 ps/nm over 1 km
    EXPECT_NEAR(beta2_acc_from_dispersion(20.0, 0.0, 1550.0) * 1e24, -25.5, 0.05);
    const double b = link::FiberParams{}.beta2() * 1e3;
    EXPECT_NEAR(dispersion_from_beta2_acc(b, 0.0, 1550.0), 20.0, 1e-9);
}

TEST(Cdc, ZeroDispersionIsIdentity) {
    auto w = shape(tx_symbols(sigkit::Format::QAM16, 1));
    const auto ref = w;
    cdc(w, 2 * rs, 0.0, 0.0);
    EXPECT_EQ(w.x, ref.x);
    EXPECT_EQ(w.y, ref.y);
}

TEST(Cdc, UndoesAnalyticDispersion) {
    const link::FiberParams f;
    for (double off : {0.0, 225e9}) {
        link::FieldGrid g;
        g.sample_rate = 2 * rs;
        g.field = shape(tx_symbols(sigkit::Format::QAM16, 2));
        const auto ref = g.field;
        // the channel's own carrier sets its beta2
        const double b2l = beta2_acc_from_dispersion(20.0 * 2400, off, 1550.0);
        link::apply_dispersion(g, b2l);
        cdc(g.field, 2 * rs, dispersion_from_beta2_acc(b2l, off, 1550.0), off);
        EXPECT_LT(test::rel_l2(g.field.x, ref.x), 1e-10);
        EXPECT_LT(test::rel_l2(g.field.y, ref.y), 1e-10);
    }
}

TEST(Sync, RecoversInjectedOffset) {
    auto w = shift(shape(tx_symbols(sigkit::Format::QAM16, 3)), 5000);
    matched(w);
    const auto r = frame_sync(w, header_of());
    EXPECT_EQ(r.frame_offset, 5000);
    EXPECT_GT(r.correlation_peak, 0.9);
    EXPECT_LE(r.correlation_peak, 1.0);
}

TEST(Sync, OffsetEquivariance) {
    auto w = shift(shape(tx_symbols(sigkit::Format::QAM64, 4)), 1234);
    matched(w);
    const auto h = header_of();
    const long a = frame_sync(w, h).frame_offset;
    const long b = frame_sync(shift(w, 777), h).frame_offset;
    EXPECT_EQ(b - a, 777);
}

TEST(Sync, NoisyWithFrequencyOffset) {
    const auto h = header_of();
    const auto clean = shape(tx_symbols(sigkit::Format::QAM16, 5));
    Rng rng(5, stream::awgn_rx);
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const long off = static_cast<long>(rng.next_u64() % (2 * n_sym));
        auto w = shift(clean, off);
        const double phi0 = two_pi * rng.uniform();
        for (int p = 0; p < 2; ++p)
            for (std::size_t i = 0; i < w.size(); ++i)
                w[p][i] *= std::polar(1.0, phi0 + two_pi * 200e6 * static_cast<double>(i) / (2 * rs));
        add_noise(w, 10.0, rng);
        matched(w);
        try {
            hits += frame_sync(w, h).frame_offset == off;
        } catch (const SyncFailure&) {
        }
    }
    EXPECT_GE(hits, 99);
}

TEST(Sync, PureNoiseFails) {
    DualPol w(2 * n_sym);
    Rng rng(6, 1);
    for (int p = 0; p < 2; ++p)
        for (auto& v : w[p]) v = rng.complex_gaussian(1.0);
    EXPECT_THROW(frame_sync(w, header_of()), SyncFailure);
}

TEST(Equalizer, IdentityChannel) {
    const auto s = tx_symbols(sigkit::Format::QAM16, 7);
    auto w = shape(s);
    matched(w);
    const auto r = mimo_equalize(w, 0, EqualizerConfig{}, header_of(), sigkit::make_constellation(sigkit::Format::QAM16));
    ASSERT_EQ(r.symbols.size(), s.size());
    EXPECT_GE(payload_snr(r.symbols, s, n_sym / 2), 40.0);
}

TEST(Equalizer, InvertsPolarisationRotation) {
    const auto s = tx_symbols(sigkit::Format::QAM16, 8);
    auto w = shape(s);
    // 90 degree rotation: x' = y, y' = -x
    DualPol r90(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        r90.x[i] = w.y[i];
        r90.y[i] = -w.x[i];
    }
    matched(r90);
    const auto r = mimo_equalize(r90, 0, EqualizerConfig{}, header_of(), sigkit::make_constellation(sigkit::Format::QAM16));
    // each output carries its own tributary, not the other one
    EXPECT_GE(payload_snr(r.symbols, s, n_sym / 2), 30.0);
    EXPECT_LT(test::ls_snr_db(CVec(r.symbols.x.begin() + n_sym / 2, r.symbols.x.end()),
                              CVec(s.y.begin() + n_sym / 2, s.y.end())),
              0.0);
}

TEST(Equalizer, GlobalPhaseOnlyRotatesOutput) {
    const auto s = tx_symbols(sigkit::Format::QAM16, 9);
    auto w = shape(s);
    matched(w);
    auto wr = w;
    for (int p = 0; p < 2; ++p)
        for (auto& v : wr[p]) v *= std::polar(1.0, 0.7);
    const auto spec = sigkit::make_constellation(sigkit::Format::QAM16);
    const auto a = mimo_equalize(w, 0, EqualizerConfig{}, header_of(), spec);
    const auto b = mimo_equalize(wr, 0, EqualizerConfig{}, header_of(), spec);
    for (int p = 0; p < 2; ++p) {
        const CVec ya(a.symbols[p].begin() + n_sym / 2, a.symbols[p].end());
        const CVec yb(b.symbols[p].begin() + n_sym / 2, b.symbols[p].end());
        EXPECT_GE(test::ls_snr_db(yb, ya), 30.0);
    }
}

TEST(Equalizer, AbsorbsSmallResidualDispersion) {
    const auto s = tx_symbols(sigkit::Format::QAM16, 10);
    const auto spec = sigkit::make_constellation(sigkit::Format::QAM16);
    auto run = [&](double d_ps_nm) {
        link::FieldGrid g;
        g.sample_rate = 2 * rs;
        g.field = shape(s);
        link::apply_dispersion(g, beta2_acc_from_dispersion(d_ps_nm, 0.0, 1550.0));
        Rng rng(10, stream::awgn_rx);
        add_noise(g.field, 22.0, rng);
        matched(g.field);
        return payload_snr(mimo_equalize(g.field, 0, EqualizerConfig{}, header_of(), spec).symbols, s, n_sym / 2);
    };
    const double ref = run(0.0);
    const double cd = run(100.0);
    EXPECT_LT(ref - cd, 0.2);
}

TEST(Equalizer, ConfigValidation) {
    EqualizerConfig c;
    c.n_taps = 30;
    EXPECT_THROW(c.validate(), ParameterError);
    c.n_taps = 31;
    c.mu_rde = 0;
    EXPECT_THROW(c.validate(), ParameterError);
}
