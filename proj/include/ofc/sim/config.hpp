#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ofc/combsrc/comb.hpp"
#include "ofc/link/amplifier.hpp"
#include "ofc/link/fiber.hpp"
#include "ofc/link/receiver.hpp"
#include "ofc/rxdsp/equalizer.hpp"


namespace ofc::sim {

struct RunConfig {
    std::string profile = "paper";

    // single cell (run)
    std::string format = "16qam";
    std::string scheme = "drc";
    int n_r = 64;
    int spans = 10;
    std::uint64_t seed = 1;

    // sweep grid
    std::vector<std::string> sweep_formats{"16qam", "64qam"};
    std::vector<std::string> sweep_schemes{"ms1", "ms2", "drc"};
    std::vector<int> sweep_n_r{0, 64};
    std::vector<int> sweep_spans{1, 2, 4, 6, 7, 8, 10, 14, 19, 24, 27, 30};
    std::vector<std::uint64_t> seeds{1};

    // framing
    int frame_len = 1 << 17;
    int n_frames = 2;
    int header_len = 1024;
    int block_len = 32;
    int burst_blocks = 4;

    // transmitter and noise loading
    double symbol_rate = 135e9;
    double roll_off = 0.1;
    int oversample = 8;
    double launch_power_dbm = 3.0;
    double snr_b2b_db = 22.0;
    int awgn_stages = 2;

    combsrc::CombSpec comb;
    link::FiberParams fiber;
    link::AmpParams amp;
    link::RxParams rx;
    link::StepControl ssfm;
    rxdsp::EqualizerConfig eq;

    // carrier recovery
    int dd_window = 0;  // 0: pick from dd_grid per run
    std::vector<int> dd_grid{8, 16, 32, 64, 128, 256};
    double dpll_kp = 0.05;
    double dpll_ki = 2e-3;
    double drc_eps = 0.1;
    double drc_min_separation = 4.0;
    bool header_pilots = true;

    // accounting
    double coding_gap = 0.07;
    int skip_frames = 1;          // leading frames excluded from metrics
    int poh_frame_len = 1 << 17;  // frame length used for the header overhead term

    // execution
    int jobs = 1;
    std::string out_dir = "out";
    bool record_runtime = false;

    std::vector<std::string> overrides;  // "key=value" in the order applied

    void validate() const;
};

/// Names of all settable keys, in a stable order.
std::vector<std::string> config_keys();

/// Sets one dotted key from text (scalars or "[a, b]" lists, YAML syntax).
/// Throws ConfigError for unknown keys or malformed values.
void set_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Current value of a key, formatted as YAML flow text.
std::string get_value(const RunConfig& cfg, const std::string& key);

/// Applies a named profile ("paper" or "desk") on top of the defaults.
void apply_profile(RunConfig& cfg, const std::string& profile);

/// Loads a YAML file of nested keys and applies every leaf.
void apply_file(RunConfig& cfg, const std::string& path);

/// Parses "key=value" and applies it.
void apply_override(RunConfig& cfg, const std::string& kv);

/// Resolved configuration as "key: value" lines.
std::string dump_config(const RunConfig& cfg);

}  // namespace ofc::sim
