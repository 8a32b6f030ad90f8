#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/selftest/oracles.hpp"
#include "ofc/sigkit/constellation.hpp"
#include "ofc/sim/config.hpp"
#include "ofc/sim/pipeline.hpp"
#include "ofc/sim/report.hpp"
#include "ofc/sim/sweep.hpp"

using namespace ofc;
using namespace ofc::sim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("ofc_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

ResultRow row(double km, const std::string& scheme, int n_r, std::uint64_t seed, double gain) {
    ResultRow r;
    r.distance_km = km;
    r.format = "16qam";
    r.scheme = scheme;
    r.n_r = n_r;
    r.seed = seed;
    r.ngmi_mean = 0.9;
    r.fec_oh = 0.2;
    r.poh_mean = 0.03;
    r.r_net = 0.8;
    r.gain_pct = gain;
    r.dd_window = 32;
    return r;
}

// smallest link that still runs the whole chain
RunConfig tiny() {
    RunConfig c;
    apply_profile(c, "desk");
    c.frame_len = 1 << 13;
    c.n_frames = 2;
    c.spans = 1;
    c.seeds = {1};
    c.dd_window = 32;
    return c;
}

}  // namespace

TEST(Config, PrecedenceProfileFileOverride) {
    RunConfig c;
    apply_profile(c, "desk");
    EXPECT_EQ(c.frame_len, 1 << 15);
    EXPECT_EQ(c.n_frames, 4);

    const auto dir = scratch("cfg");
    {
        std::ofstream os(dir / "c.yaml");
        os << "frame:\n  n_frames: 6\n  len: 16384\nfiber:\n  span_km: 60\n";
    }
    apply_file(c, (dir / "c.yaml").string());
    EXPECT_EQ(c.n_frames, 6);
    EXPECT_EQ(c.frame_len, 16384);
    EXPECT_DOUBLE_EQ(c.fiber.span_km, 60.0);

    apply_override(c, "frame.n_frames=3");
    apply_override(c, "seeds=[7, 8]");
    EXPECT_EQ(c.n_frames, 3);
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{7, 8}));
    EXPECT_EQ(c.frame_len, 16384);
    // file leaves are recorded too, in the order applied
    ASSERT_EQ(c.overrides.size(), 5u);
    EXPECT_EQ(c.overrides[3], "frame.n_frames=3");
}

TEST(Config, RejectsUnknownAndMalformed) {
    RunConfig c;
    EXPECT_THROW(apply_profile(c, "lab"), ConfigError);
    EXPECT_THROW(apply_override(c, "frame.bogus=3"), ConfigError);
    EXPECT_THROW(apply_override(c, "frame.n_frames=three"), ConfigError);
    EXPECT_THROW(apply_override(c, "noequals"), ConfigError);
    EXPECT_THROW(apply_file(c, "/nonexistent/x.yaml"), ConfigError);
    const auto dir = scratch("cfgbad");
    {
        std::ofstream os(dir / "b.yaml");
        os << "frame:\n  lenn: 4\n";
    }
    EXPECT_THROW(apply_file(c, (dir / "b.yaml").string()), ConfigError);
}

TEST(Config, ValidateCatchesBadValues) {
    RunConfig c;
    c.n_frames = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.format = "8qam";
    EXPECT_ANY_THROW(c.validate());
    c = RunConfig{};
    c.seeds.clear();
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, GetSetRoundTrip) {
    RunConfig a;
    apply_profile(a, "desk");
    RunConfig b;
    for (const auto& k : config_keys()) set_value(b, k, get_value(a, k));
    for (const auto& k : config_keys()) EXPECT_EQ(get_value(b, k), get_value(a, k)) << k;
    EXPECT_NE(dump_config(a).find("frame.len: 32768"), std::string::npos);
}

TEST(Sweep, BaselineAlwaysPresent) {
    RunConfig c;
    c.sweep_formats = {"16qam"};
    c.sweep_schemes = {"ms1", "drc"};
    c.sweep_n_r = {0, 64};
    c.sweep_spans = {2, 6};
    c.seeds = {1, 2};
    const auto cells = sweep_cells(c);
    // per (distance, seed): baseline + 2 schemes x 2 n_r
    EXPECT_EQ(cells.size(), 2u * 2u * 5u);
    for (int s : {2, 6})
        for (std::uint64_t seed : {1u, 2u}) {
            const auto n = std::count_if(cells.begin(), cells.end(), [&](const CellSpec& x) {
                return x.spans == s && x.seed == seed && x.scheme == "independent";
            });
            EXPECT_EQ(n, 1);
        }

    c.scheme = "ms2";
    const auto rc = run_cells(c);
    ASSERT_EQ(rc.size(), 2u);
    EXPECT_EQ(rc[0].scheme, "independent");
    EXPECT_EQ(rc[1].scheme, "ms2");
    c.scheme = "independent";
    EXPECT_EQ(run_cells(c).size(), 1u);
}

TEST(Sweep, MainsCarryDensePilots) {
    const auto ms1 = channel_n_r(cpr::Scheme::MS1, 64, 4);
    EXPECT_EQ(std::count(ms1.begin(), ms1.end(), 0), 1);
    EXPECT_EQ(std::count(ms1.begin(), ms1.end(), 64), 3);
    const auto ind = channel_n_r(cpr::Scheme::Independent, 64, 4);
    EXPECT_EQ(std::count(ind.begin(), ind.end(), 0), 4);
    RunConfig c;
    EXPECT_LT(channel_poh(c, 64), channel_poh(c, 0));
}

TEST(Report, CsvRoundTrip) {
    std::vector<ResultRow> rows{row(80, "independent", 0, 1, 0.0), row(80, "drc", 64, 1, 1.75)};
    rows[1].error = "x";
    rows[1].ngmi_mean = std::nan("");
    const auto text = format_csv(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')), csv_header);
    const auto back = parse_csv(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].scheme, "drc");
    EXPECT_EQ(back[1].n_r, 64);
    EXPECT_NEAR(back[1].gain_pct, 1.75, 1e-6);
    EXPECT_NEAR(back[0].fec_oh, 0.2, 1e-6);
    EXPECT_TRUE(std::isnan(back[1].ngmi_mean));
}

TEST(Report, GainCurvesMeanAndStd) {
    std::vector<ResultRow> rows;
    const double g[] = {1.0, 2.0, 3.0, 6.0};
    for (std::uint64_t s = 1; s <= 4; ++s) {
        rows.push_back(row(160, "independent", 0, s, 0.0));
        rows.push_back(row(160, "ms1", 64, s, g[s - 1]));
    }
    auto bad = row(160, "ms1", 64, 5, 100.0);
    bad.error = "sync";
    rows.push_back(bad);
    const auto curves = gain_curves(rows, "16qam");
    ASSERT_EQ(curves.size(), 1u);
    EXPECT_EQ(curves[0].scheme, "ms1");
    ASSERT_EQ(curves[0].points.size(), 1u);
    const auto& p = curves[0].points[0];
    EXPECT_EQ(p.count, 4);
    EXPECT_DOUBLE_EQ(p.mean, 3.0);
    // sample deviation of {1,2,3,6}
    EXPECT_NEAR(p.std, std::sqrt(14.0 / 3.0), 1e-12);
}

TEST(Report, WriteOutputsAndErrors) {
    RunConfig c;
    c.out_dir = scratch("out").string();
    apply_override(c, "spans=3");
    std::vector<ResultRow> rows{row(80, "independent", 0, 1, 0.0), row(80, "ms1", 64, 1, 2.0)};
    write_outputs(c, rows, "run");
    const fs::path d(c.out_dir);
    for (const char* f : {"results.csv", "fig2a.svg", "fig2b.svg", "meta.txt"}) EXPECT_TRUE(fs::exists(d / f)) << f;
    EXPECT_FALSE(fs::exists(d / "errors.txt"));
    EXPECT_NE(slurp(d / "meta.txt").find("spans=3"), std::string::npos);

    rows[1].error = "equalizer diverged";
    write_outputs(c, rows, "run");
    EXPECT_NE(slurp(d / "errors.txt").find("equalizer diverged"), std::string::npos);
    rows[1].error.clear();
    write_outputs(c, rows, "run");
    EXPECT_FALSE(fs::exists(d / "errors.txt"));
}

TEST(Pipeline, DeterministicRows) {
    auto c = tiny();
    c.scheme = "drc";
    const auto cells = run_cells(c);
    const auto a = execute(c, cells);
    const auto b = execute(c, cells);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(format_csv(a), format_csv(b));
    for (const auto& r : a) EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_EQ(a[0].scheme, "independent");
    EXPECT_EQ(a[0].gain_pct, 0.0);
}

TEST(Pipeline, BackToBackMatchesAwgnOracle) {
    RunConfig c;
    apply_profile(c, "desk");
    c.format = "64qam";
    c.scheme = "ms1";
    c.n_r = 0;
    c.spans = 0;
    c.seed = 1;
    const auto rows = execute(c, run_cells(c));
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) ASSERT_TRUE(r.error.empty()) << r.error;
    const auto spec = sigkit::make_constellation(sigkit::Format::QAM64);
    const double oracle = selftest::gmi_awgn_quadrature(spec, 1.0 / constants::db_to_lin(c.snr_b2b_db)) / 6.0;
    EXPECT_NEAR(rows[0].ngmi_mean, oracle, 0.01);
    EXPECT_NEAR(rows[1].ngmi_mean, rows[0].ngmi_mean, 0.005);
}
