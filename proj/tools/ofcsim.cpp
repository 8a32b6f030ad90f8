// ofcsim: command-line front end for the comb transmission simulator.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"
#include "ofc/cpr/cpe.hpp"
#include "ofc/selftest/selftest.hpp"
#include "ofc/sim/config.hpp"
#include "ofc/sim/pipeline.hpp"
#include "ofc/sim/report.hpp"
#include "ofc/sim/sweep.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string profile = "paper";
    long long seed = -1;
    std::string out;
    int jobs = 0;
    std::vector<std::string> sets;
    bool record_runtime = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "YAML configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--profile", o.profile, "parameter preset")->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--seed", o.seed, "random seed (overrides seed and seeds)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--jobs", o.jobs, "parallel workers");
    cmd->add_option("--set", o.sets, "override a key, e.g. --set fiber.span_km=80")->take_all();
    cmd->add_flag("--record-runtime", o.record_runtime, "store wall-clock time per cell in results.csv");
}

// defaults -> profile -> file -> --set -> flags
ofc::sim::RunConfig resolve(const CommonOpts& o) {
    ofc::sim::RunConfig cfg;
    ofc::sim::apply_profile(cfg, o.profile);
    if (!o.config.empty()) ofc::sim::apply_file(cfg, o.config);
    for (const auto& s : o.sets) ofc::sim::apply_override(cfg, s);
    if (o.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(o.seed);
        cfg.seeds = {cfg.seed};
        cfg.overrides.push_back("seed=" + std::to_string(o.seed));
    }
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.jobs > 0) cfg.jobs = o.jobs;
    if (o.record_runtime) cfg.record_runtime = true;
    cfg.validate();
    return cfg;
}

void setup_fft() {
    if (const char* e = std::getenv("OFC_FFTW_ESTIMATE"); e && std::string(e) == "1") {
        ofc::fft_use_measured_plans(false);
        return;
    }
    std::string path;
    if (const char* w = std::getenv("OFC_FFTW_WISDOM")) {
        path = w;
    } else if (const char* home = std::getenv("HOME")) {
        path = std::string(home) + "/.cache/ofcsim/fftw.wisdom";
    }
    if (!path.empty()) ofc::fft_set_wisdom_file(path);
}

void print_rows(const std::vector<ofc::sim::ResultRow>& rows) {
    std::cout << ofc::sim::format_csv(rows);
    for (const auto& r : rows)
        if (!r.error.empty()) std::cerr << "cell failed (" << r.scheme << ", " << r.distance_km << " km): " << r.error << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-comb superchannel simulator with joint carrier recovery"};
    app.require_subcommand(1);
    CommonOpts run_o, sweep_o, cal_o, self_o;
    auto* run = app.add_subcommand("run", "simulate one cell and its independent-CR baseline");
    add_common(run, run_o);
    auto* sweep = app.add_subcommand("sweep", "simulate the configured distance/scheme grid");
    add_common(sweep, sweep_o);
    auto* cal = app.add_subcommand("calibrate-window", "search the decision-directed window for one cell");
    add_common(cal, cal_o);
    auto* self = app.add_subcommand("selftest", "run the numerical property suite");
    add_common(self, self_o);

    CLI11_PARSE(app, argc, argv);
    setup_fft();

    try {
        if (*run) {
            auto cfg = resolve(run_o);
            const auto rows = ofc::sim::execute(cfg, ofc::sim::run_cells(cfg));
            ofc::sim::write_outputs(cfg, rows, "run");
            print_rows(rows);
            return 0;
        }
        if (*sweep) {
            auto cfg = resolve(sweep_o);
            const auto rows = ofc::sim::execute(cfg, ofc::sim::sweep_cells(cfg));
            ofc::sim::write_outputs(cfg, rows, "sweep");
            print_rows(rows);
            return 0;
        }
        if (*cal) {
            auto cfg = resolve(cal_o);
            const auto format = ofc::sigkit::format_from_string(cfg.format);
            const auto scheme = ofc::cpr::scheme_from_string(cfg.scheme);
            ofc::sim::LinkSimulation sim(cfg, format, cfg.seed,
                                         ofc::sim::channel_n_r(scheme, cfg.n_r, cfg.comb.n_lines));
            sim.advance_to(cfg.spans);
            const auto rx = sim.receive();
            const auto spec = ofc::sigkit::make_constellation(format);
            const auto mains = ofc::cpr::default_mains(scheme, cfg.comb.n_lines);
            std::cout << "window,ngmi_mains\n";
            const int best = ofc::cpr::optimize_dd_window(
                [&](int w) {
                    double s = 0;
                    for (int m : mains) s += ofc::sim::main_ngmi(cfg, rx[m], sim.truth()[m], spec, w);
                    s /= static_cast<double>(mains.size());
                    std::cout << w << ',' << s << "\n";
                    return s;
                },
                cfg.dd_grid);
            std::cout << "best window: " << best << "\n";
            return 0;
        }
        if (*self) {
            const auto results = ofc::selftest::run_property_suite();
            bool ok = true;
            for (const auto& r : results) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
                ok = ok && r.pass;
            }
            return ok ? 0 : 1;
        }
    } catch (const ofc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
