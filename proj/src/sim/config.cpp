#include "ofc/sim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <sstream>

#include "ofc/core/error.hpp"
#include "ofc/cpr/schemes.hpp"
#include "ofc/sigkit/constellation.hpp"

namespace ofc::sim {

namespace {

struct Field {
    std::function<void(RunConfig&, const YAML::Node&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <typename T>
std::string show(const T& v) {
    YAML::Emitter e;
    e.SetSeqFormat(YAML::Flow);
    e.SetFloatPrecision(17);
    e.SetDoublePrecision(17);
    e << v;
    return e.c_str();
}

template <typename T, typename Sel>
Field field(Sel sel) {
    return {[sel](RunConfig& c, const YAML::Node& n) { sel(c) = n.as<T>(); },
            [sel](const RunConfig& c) { return show(sel(const_cast<RunConfig&>(c))); }};
}

const std::vector<std::pair<std::string, Field>>& registry() {
    static const std::vector<std::pair<std::string, Field>> r = {
        {"format", field<std::string>([](RunConfig& c) -> auto& { return c.format; })},
        {"scheme", field<std::string>([](RunConfig& c) -> auto& { return c.scheme; })},
        {"n_r", field<int>([](RunConfig& c) -> auto& { return c.n_r; })},
        {"spans", field<int>([](RunConfig& c) -> auto& { return c.spans; })},
        {"seed", field<std::uint64_t>([](RunConfig& c) -> auto& { return c.seed; })},
        {"seeds", field<std::vector<std::uint64_t>>([](RunConfig& c) -> auto& { return c.seeds; })},
        {"sweep.formats", field<std::vector<std::string>>([](RunConfig& c) -> auto& { return c.sweep_formats; })},
        {"sweep.schemes", field<std::vector<std::string>>([](RunConfig& c) -> auto& { return c.sweep_schemes; })},
        {"sweep.n_r", field<std::vector<int>>([](RunConfig& c) -> auto& { return c.sweep_n_r; })},
        {"sweep.spans", field<std::vector<int>>([](RunConfig& c) -> auto& { return c.sweep_spans; })},
        {"frame.len", field<int>([](RunConfig& c) -> auto& { return c.frame_len; })},
        {"frame.n_frames", field<int>([](RunConfig& c) -> auto& { return c.n_frames; })},
        {"frame.header_len", field<int>([](RunConfig& c) -> auto& { return c.header_len; })},
        {"frame.block_len", field<int>([](RunConfig& c) -> auto& { return c.block_len; })},
        {"frame.burst_blocks", field<int>([](RunConfig& c) -> auto& { return c.burst_blocks; })},
        {"tx.symbol_rate", field<double>([](RunConfig& c) -> auto& { return c.symbol_rate; })},
        {"tx.roll_off", field<double>([](RunConfig& c) -> auto& { return c.roll_off; })},
        {"tx.oversample", field<int>([](RunConfig& c) -> auto& { return c.oversample; })},
        {"tx.launch_power_dbm", field<double>([](RunConfig& c) -> auto& { return c.launch_power_dbm; })},
        {"noise.snr_b2b_db", field<double>([](RunConfig& c) -> auto& { return c.snr_b2b_db; })},
        {"noise.awgn_stages", field<int>([](RunConfig& c) -> auto& { return c.awgn_stages; })},
        {"comb.n_lines", field<int>([](RunConfig& c) -> auto& { return c.comb.n_lines; })},
        {"comb.fsr", field<double>([](RunConfig& c) -> auto& { return c.comb.fsr; })},
        {"comb.common_lw", field<double>([](RunConfig& c) -> auto& { return c.comb.common_lw; })},
        {"comb.line_lw", field<double>([](RunConfig& c) -> auto& { return c.comb.line_lw; })},
        {"comb.scale_factors", field<std::vector<double>>([](RunConfig& c) -> auto& { return c.comb.scale_factors; })},
        {"comb.fo", field<double>([](RunConfig& c) -> auto& { return c.comb.fo; })},
        {"comb.fsr_dev", field<double>([](RunConfig& c) -> auto& { return c.comb.fsr_dev; })},
        {"fiber.alpha_db_km", field<double>([](RunConfig& c) -> auto& { return c.fiber.alpha_db_km; })},
        {"fiber.dispersion_ps_nm_km", field<double>([](RunConfig& c) -> auto& { return c.fiber.dispersion_ps_nm_km; })},
        {"fiber.gamma_w_km", field<double>([](RunConfig& c) -> auto& { return c.fiber.gamma_w_km; })},
        {"fiber.span_km", field<double>([](RunConfig& c) -> auto& { return c.fiber.span_km; })},
        {"fiber.wavelength_nm", field<double>([](RunConfig& c) -> auto& { return c.fiber.wavelength_nm; })},
        {"amp.gain_db", field<double>([](RunConfig& c) -> auto& { return c.amp.gain_db; })},
        {"amp.nf_db", field<double>([](RunConfig& c) -> auto& { return c.amp.nf_db; })},
        {"amp.ase", field<bool>([](RunConfig& c) -> auto& { return c.amp.ase; })},
        {"rx.bpf_bw", field<double>([](RunConfig& c) -> auto& { return c.rx.bpf_bw; })},
        {"rx.elec_bw", field<double>([](RunConfig& c) -> auto& { return c.rx.elec_bw; })},
        {"ssfm.mode", {[](RunConfig& c, const YAML::Node& n) {
                           const auto s = n.as<std::string>();
                           if (s == "fixed") c.ssfm.mode = link::StepControl::Mode::Fixed;
                           else if (s == "log" || s == "logarithmic") c.ssfm.mode = link::StepControl::Mode::Logarithmic;
                           else throw ConfigError("ssfm.mode must be fixed or log");
                       },
                       [](const RunConfig& c) {
                           return std::string(c.ssfm.mode == link::StepControl::Mode::Fixed ? "fixed" : "log");
                       }}},
        {"ssfm.step_km", field<double>([](RunConfig& c) -> auto& { return c.ssfm.step_km; })},
        {"ssfm.min_km", field<double>([](RunConfig& c) -> auto& { return c.ssfm.min_km; })},
        {"ssfm.max_km", field<double>([](RunConfig& c) -> auto& { return c.ssfm.max_km; })},
        {"ssfm.growth", field<double>([](RunConfig& c) -> auto& { return c.ssfm.growth; })},
        {"eq.n_taps", field<int>([](RunConfig& c) -> auto& { return c.eq.n_taps; })},
        {"eq.mu_train", field<double>([](RunConfig& c) -> auto& { return c.eq.mu_train; })},
        {"eq.mu_rde", field<double>([](RunConfig& c) -> auto& { return c.eq.mu_rde; })},
        {"eq.train_len", field<int>([](RunConfig& c) -> auto& { return c.eq.train_len; })},
        {"eq.train_passes", field<int>([](RunConfig& c) -> auto& { return c.eq.train_passes; })},
        {"eq.wrap_extra", field<int>([](RunConfig& c) -> auto& { return c.eq.wrap_extra; })},
        {"cpr.dd_window", field<int>([](RunConfig& c) -> auto& { return c.dd_window; })},
        {"cpr.dd_grid", field<std::vector<int>>([](RunConfig& c) -> auto& { return c.dd_grid; })},
        {"cpr.dpll_kp", field<double>([](RunConfig& c) -> auto& { return c.dpll_kp; })},
        {"cpr.dpll_ki", field<double>([](RunConfig& c) -> auto& { return c.dpll_ki; })},
        {"cpr.drc_eps", field<double>([](RunConfig& c) -> auto& { return c.drc_eps; })},
        {"cpr.drc_min_separation", field<double>([](RunConfig& c) -> auto& { return c.drc_min_separation; })},
        {"cpr.header_pilots", field<bool>([](RunConfig& c) -> auto& { return c.header_pilots; })},
        {"metrics.coding_gap", field<double>([](RunConfig& c) -> auto& { return c.coding_gap; })},
        {"metrics.skip_frames", field<int>([](RunConfig& c) -> auto& { return c.skip_frames; })},
        {"metrics.poh_frame_len", field<int>([](RunConfig& c) -> auto& { return c.poh_frame_len; })},
        {"jobs", field<int>([](RunConfig& c) -> auto& { return c.jobs; })},
        {"out", field<std::string>([](RunConfig& c) -> auto& { return c.out_dir; })},
        {"record_runtime", field<bool>([](RunConfig& c) -> auto& { return c.record_runtime; })},
    };
    return r;
}

const Field& lookup(const std::string& key) {
    for (const auto& [k, f] : registry())
        if (k == key) return f;
    throw ConfigError("unknown configuration key '" + key + "'");
}

void apply_node(RunConfig& cfg, const std::string& key, const YAML::Node& n) {
    try {
        lookup(key).set(cfg, n);
    } catch (const YAML::Exception& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

void walk(RunConfig& cfg, const YAML::Node& node, const std::string& prefix) {
    if (node.IsMap()) {
        for (const auto& kv : node) {
            const std::string k = kv.first.as<std::string>();
            walk(cfg, kv.second, prefix.empty() ? k : prefix + "." + k);
        }
        return;
    }
    if (prefix.empty()) throw ConfigError("configuration file must be a mapping");
    apply_node(cfg, prefix, node);
    cfg.overrides.push_back(prefix + "=" + get_value(cfg, prefix));
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, f] : registry()) keys.push_back(k);
    return keys;
}

void set_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    YAML::Node n;
    try {
        n = YAML::Load(value);
    } catch (const YAML::Exception& e) {
        throw ConfigError("cannot parse value for '" + key + "': " + e.what());
    }
    apply_node(cfg, key, n);
}

std::string get_value(const RunConfig& cfg, const std::string& key) { return lookup(key).get(cfg); }

void apply_profile(RunConfig& cfg, const std::string& profile) {
    if (profile == "paper") {
        cfg.profile = profile;
        return;
    }
    if (profile != "desk") throw ConfigError("unknown profile '" + profile + "' (expected desk or paper)");
    cfg.profile = profile;
    cfg.frame_len = 1 << 15;
    cfg.n_frames = 4;
    cfg.seeds = {1, 2, 3, 4};
    cfg.ssfm.mode = link::StepControl::Mode::Fixed;
    cfg.ssfm.step_km = 1.0;
    cfg.sweep_spans = {2, 6, 10, 14, 19, 24, 30};
}

void apply_file(RunConfig& cfg, const std::string& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::Exception& e) {
        throw ConfigError("cannot read config '" + path + "': " + e.what());
    }
    if (root.IsNull()) return;
    walk(cfg, root, "");
}

void apply_override(RunConfig& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    set_value(cfg, key, kv.substr(eq + 1));
    cfg.overrides.push_back(key + "=" + get_value(cfg, key));
}

std::string dump_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "profile: " << cfg.profile << "\n";
    for (const auto& [k, f] : registry()) os << k << ": " << f.get(cfg) << "\n";
    return os.str();
}

void RunConfig::validate() const {
    sigkit::format_from_string(format);
    cpr::scheme_from_string(scheme);
    for (const auto& f : sweep_formats) sigkit::format_from_string(f);
    for (const auto& s : sweep_schemes) cpr::scheme_from_string(s);
    if (n_r < 0) throw ConfigError("n_r must be >= 0");
    for (int v : sweep_n_r)
        if (v < 0) throw ConfigError("sweep.n_r entries must be >= 0");
    if (spans < 0) throw ConfigError("spans must be >= 0");
    for (int v : sweep_spans)
        if (v < 0) throw ConfigError("sweep.spans entries must be >= 0");
    if (seeds.empty()) throw ConfigError("seeds must not be empty");
    if (n_frames < 2) throw ConfigError("frame.n_frames must be >= 2");
    if (skip_frames < 0 || skip_frames >= n_frames) throw ConfigError("metrics.skip_frames out of range");
    if (oversample < 2) throw ConfigError("tx.oversample must be >= 2");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (awgn_stages < 1) throw ConfigError("noise.awgn_stages must be >= 1");
    if (dd_window < 0) throw ConfigError("cpr.dd_window must be >= 0");
    if (dd_window == 0 && dd_grid.empty()) throw ConfigError("cpr.dd_grid must not be empty");
    comb.validate();
    fiber.validate();
    eq.validate();
}

}  // namespace ofc::sim
