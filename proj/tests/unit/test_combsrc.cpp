#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ofc/combsrc/comb.hpp"
#include "ofc/core/error.hpp"
#include "ofc/selftest/oracles.hpp"

using namespace ofc;
using namespace ofc::combsrc;

namespace {

constexpr double rs = 135e9;

double increment_var(const RVec& s) {
    double acc = 0;
    for (std::size_t i = 1; i < s.size(); ++i) acc += (s[i] - s[i - 1]) * (s[i] - s[i - 1]);
    return acc / static_cast<double>(s.size() - 1);
}

CombSpec quiet() {
    CombSpec c;
    c.common_lw = 0;
    c.line_lw = 0;
    c.fo = 0;
    c.fsr_dev = 0;
    return c;
}

}  // namespace

TEST(Wiener, ZeroLinewidthIsFlat) {
    Rng rng(1, 2);
    const auto t = gen_wiener(0.0, rs, 1000, rng);
    for (double v : t.samples) EXPECT_EQ(v, 0.0);
}

TEST(Wiener, IncrementVarianceWithinChi2Bounds) {
    const std::size_t n = 1'000'001;
    Rng rng(7, stream::tx_common_pn);
    const auto t = gen_wiener(200e3, rs, n, rng);
    const double expect = 2.0 * std::numbers::pi * 200e3 / rs;
    EXPECT_NEAR(expect, 9.31e-6, 0.01e-6);
    const double k = static_cast<double>(n - 1);
    const double lo = selftest::chi2_quantile(0.005, k) / k;
    const double hi = selftest::chi2_quantile(0.995, k) / k;
    const double v = increment_var(t.samples) / expect;
    EXPECT_GT(v, lo);
    EXPECT_LT(v, hi);
}

TEST(Wiener, RejectsNegativeLinewidth) {
    Rng rng(1, 1);
    EXPECT_THROW(gen_wiener(-1.0, rs, 10, rng), ParameterError);
}

TEST(Comb, ZeroLineLinewidthGivesIdenticalLines) {
    CombSpec c;
    c.line_lw = 0;
    Rng a(3, stream::tx_common_pn), b(3, stream::tx_line_pn);
    const auto lines = gen_comb_phases(c, rs, 4096, a, b);
    ASSERT_EQ(lines.size(), 4u);
    for (int k = 1; k < 4; ++k) EXPECT_EQ(lines[k].samples, lines[0].samples);
}

TEST(Comb, InnerLineDifferenceVariance) {
    // scale factors -1 and +1: phi_3 - phi_2 = 2 phi_d
    CombSpec c;
    const std::size_t n = 1'000'001;
    Rng a(4, stream::tx_common_pn), b(4, stream::tx_line_pn);
    const auto lines = gen_comb_phases(c, rs, n, a, b);
    RVec d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = lines[2].samples[i] - lines[1].samples[i];
    const double expect = 4.0 * 2.0 * std::numbers::pi * c.line_lw / rs;
    const double k = static_cast<double>(n - 1);
    const double v = increment_var(d) / expect;
    EXPECT_GT(v, selftest::chi2_quantile(0.005, k) / k);
    EXPECT_LT(v, selftest::chi2_quantile(0.995, k) / k);
}

TEST(Comb, OuterLinesAntiCorrelated) {
    CombSpec c;
    const std::size_t n = 20000;
    Rng a(5, 1), b(5, 2);
    const auto lines = gen_comb_phases(c, rs, n, a, b);
    Rng again(5, 1);
    const auto common = gen_wiener(c.common_lw, rs, n, again);
    double s11 = 0, s44 = 0, s14 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = lines[0].samples[i] - common.samples[i];
        const double w = lines[3].samples[i] - common.samples[i];
        s11 += u * u;
        s44 += w * w;
        s14 += u * w;
    }
    EXPECT_NEAR(s14 / std::sqrt(s11 * s44), -1.0, 1e-12);
}

TEST(Comb, CommonAndLineIncrementsUncorrelated) {
    CombSpec c;
    c.common_lw = c.line_lw;  // equal weights so the sum/difference split is clean
    const std::size_t n = 1'000'001;
    Rng a(6, stream::tx_common_pn), b(6, stream::tx_line_pn);
    const auto lines = gen_comb_phases(c, rs, n, a, b);
    double scc = 0, sdd = 0, scd = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d2 = lines[1].samples[i] - lines[1].samples[i - 1];
        const double d3 = lines[2].samples[i] - lines[2].samples[i - 1];
        const double cc = 0.5 * (d2 + d3), dd = 0.5 * (d3 - d2);
        scc += cc * cc;
        sdd += dd * dd;
        scd += cc * dd;
    }
    EXPECT_LT(std::abs(scd / std::sqrt(scc * sdd)), 0.01);
}

TEST(Comb, PeriodicTracksWrapContinuously) {
    CombSpec c;
    Rng a(8, 1), b(8, 2);
    const auto lines = gen_comb_phases(c, rs, 8192, a, b, true);
    for (const auto& t : lines) {
        ASSERT_EQ(t.samples.size(), 8192u);
        const double wrap = t.samples.front() - t.samples.back();
        EXPECT_LT(std::abs(wrap), 10.0 * std::sqrt(2.0 * std::numbers::pi * 5 * c.common_lw / rs));
    }
}

TEST(Comb, BridgeRemovesRamp) {
    PhaseTrack t;
    t.sample_rate = 1;
    for (int i = 0; i <= 10; ++i) t.samples.push_back(0.3 * i);
    close_into_bridge(t);
    ASSERT_EQ(t.samples.size(), 10u);
    for (double v : t.samples) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Carrier, QuietCombIsUnity) {
    const auto c = quiet();
    PhaseTrack t;
    t.sample_rate = rs;
    t.samples.assign(256, 0.0);
    for (int k = 0; k < 4; ++k) {
        const auto r = carrier_rotation(t, k, c, true);
        for (const auto& v : r) EXPECT_NEAR(std::abs(v - cplx(1, 0)), 0.0, 1e-15);
    }
}

TEST(Carrier, FrequencyOffsetSlope) {
    auto c = quiet();
    c.fo = 200e6;
    PhaseTrack t;
    t.sample_rate = rs;
    t.samples.assign(4096, 0.0);
    const double expect = 2.0 * std::numbers::pi * 200e6 / rs;
    for (int k = 0; k < 4; ++k) {
        const auto r = carrier_rotation(t, k, c, true);
        for (std::size_t i = 1; i < r.size(); i += 97) EXPECT_NEAR(std::arg(r[i] * std::conj(r[i - 1])), expect, 1e-9);
        // the Tx comb carries no offset
        const auto tx = carrier_rotation(t, k, c, false);
        EXPECT_NEAR(std::arg(tx[100] * std::conj(tx[99])), 0.0, 1e-15);
    }
}

TEST(Carrier, FsrDeviationLadder) {
    auto c = quiet();
    c.fsr_dev = 1e6;
    for (int k = 1; k < 4; ++k) {
        EXPECT_NEAR(line_frequency_offset(c, k, true) - line_frequency_offset(c, k - 1, true), 1e6, 1e-6);
    }
    // symmetric about the comb centre
    EXPECT_NEAR(line_frequency_offset(c, 0, true) + line_frequency_offset(c, 3, true), 0.0, 1e-6);
}

TEST(Carrier, SnapToPeriodGivesWholeCycles) {
    CombSpec c;
    const double period = 262144.0 / rs;
    const auto s = snap_to_period(c, period);
    for (int k = 0; k < 4; ++k) {
        const double pos = s.line_offset_hz(k) * period;
        const double lo = line_frequency_offset(s, k, true) * period;
        EXPECT_NEAR(pos, std::round(pos), 1e-6);
        EXPECT_NEAR(lo, std::round(lo), 1e-6);
    }
    EXPECT_NEAR(s.fsr, c.fsr, 1.0 / period);
    EXPECT_NEAR(s.fo, c.fo, 1.0 / period);
}
