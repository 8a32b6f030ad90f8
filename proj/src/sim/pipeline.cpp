#include "ofc/sim/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/rng.hpp"
#include "ofc/link/amplifier.hpp"
#include "ofc/link/receiver.hpp"
#include "ofc/link/transmitter.hpp"
#include "ofc/rxdsp/cdc.hpp"
#include "ofc/rxdsp/equalizer.hpp"
#include "ofc/rxdsp/sync.hpp"
#include "ofc/sigkit/pulse.hpp"

namespace ofc::sim {

using namespace ofc::constants;

std::vector<int> channel_n_r(cpr::Scheme scheme, int n_r, int n_channels) {
    std::vector<int> out(n_channels, n_r);
    for (int m : cpr::default_mains(scheme, n_channels)) out[m] = 0;
    return out;
}

namespace {

sigkit::PilotPlan plan_for(const RunConfig& cfg, int n_r) {
    sigkit::PilotPlan p;
    p.block_len = cfg.block_len;
    p.burst_blocks = cfg.burst_blocks;
    p.header_len = cfg.header_len;
    p.frame_len = cfg.frame_len;
    p.n_r = n_r;
    return p;
}

double carrier_frequency(const RunConfig& cfg) { return speed_of_light / (cfg.fiber.wavelength_nm * 1e-9); }

}  // namespace

struct LinkSimulation::State {
    link::FieldGrid field;
    std::unique_ptr<link::FiberPropagator> prop;
    std::vector<combsrc::PhaseTrack> lo;
    std::vector<double> offsets;
};

LinkSimulation::LinkSimulation(const RunConfig& cfg, sigkit::Format format, std::uint64_t seed,
                               std::vector<int> n_r_per_channel)
    : st_(std::make_unique<State>()), cfg_(cfg), format_(format), seed_(seed) {
    cfg_.validate();
    const int n_ch = cfg.comb.n_lines;
    if (static_cast<int>(n_r_per_channel.size()) != n_ch) throw ConfigError("one n_r per channel required");
    n_stream_ = static_cast<long>(cfg.frame_len) * cfg.n_frames;
    const double window = static_cast<double>(n_stream_) / cfg.symbol_rate;
    comb_ = combsrc::snap_to_period(cfg.comb, window);

    const auto spec = sigkit::make_constellation(format);
    const int m = spec.bits_per_symbol;
    const auto& known = sigkit::known_symbol_table(cfg.frame_len);

    std::vector<DualPol> tx_symbols;
    for (int c = 0; c < n_ch; ++c) {
        ChannelTruth t;
        t.layout = sigkit::make_layout(plan_for(cfg, n_r_per_channel[c]));
        t.symbols = DualPol(static_cast<std::size_t>(n_stream_));
        // Labels are drawn for every position, so layouts that differ only in
        // pilot placement carry the same data elsewhere.
        Rng rng(seed, stream::payload + static_cast<std::uint64_t>(c));
        for (int p = 0; p < 2; ++p) {
            t.labels[p].resize(static_cast<std::size_t>(n_stream_));
            for (auto& l : t.labels[p]) l = static_cast<std::uint32_t>(rng.next_u64() >> (64 - m));
        }
        for (long k = 0; k < n_stream_; ++k) {
            const long fp = k % cfg.frame_len;
            const bool is_known = t.layout.kind[fp] != sigkit::SymbolKind::Payload;
            for (int p = 0; p < 2; ++p) {
                t.symbols[p][k] = is_known ? known[p][fp] : spec.point(t.labels[p][k]);
            }
        }
        tx_symbols.push_back(t.symbols);
        truth_.push_back(std::move(t));
    }

    const double fs = cfg.symbol_rate * cfg.oversample;
    const std::size_t n = static_cast<std::size_t>(n_stream_) * cfg.oversample;
    Rng tx_c(seed, stream::tx_common_pn), tx_l(seed, stream::tx_line_pn);
    Rng lo_c(seed, stream::lo_common_pn), lo_l(seed, stream::lo_line_pn);
    const auto tx_pn = combsrc::gen_comb_phases(comb_, fs, n, tx_c, tx_l, true);
    st_->lo = combsrc::gen_comb_phases(comb_, fs, n, lo_c, lo_l, true);

    link::MuxParams mux;
    mux.symbol_rate = cfg.symbol_rate;
    mux.roll_off = cfg.roll_off;
    mux.oversample = cfg.oversample;
    mux.launch_power_dbm = cfg.launch_power_dbm;
    for (int c = 0; c < n_ch; ++c) mux.channel_offsets.push_back(comb_.line_offset_hz(c));
    st_->offsets = mux.channel_offsets;
    st_->field = link::modulate_mux(tx_symbols, tx_pn, mux);

    Rng awgn(seed, stream::awgn_tx);
    const double stage = link::per_stage_snr_db(cfg.snr_b2b_db, cfg.awgn_stages);
    link::awgn_load(st_->field, stage, cfg.symbol_rate, dbm_to_watt(cfg.launch_power_dbm), awgn);

    link::FiberParams fp = cfg.fiber;
    st_->prop = std::make_unique<link::FiberPropagator>(fp, cfg.ssfm, fs, n);
}

LinkSimulation::~LinkSimulation() = default;

void LinkSimulation::advance_to(int spans) {
    if (spans < spans_done_) throw ConfigError("distances must be visited in increasing order");
    while (spans_done_ < spans) {
        st_->prop->propagate_span(st_->field);
        Rng ase(seed_, stream::ase + static_cast<std::uint64_t>(spans_done_));
        link::edfa(st_->field, cfg_.amp, carrier_frequency(cfg_), ase);
        ++spans_done_;
    }
}

std::vector<cpr::ChannelInput> LinkSimulation::receive() const {
    link::FieldGrid g = st_->field;
    // receiver-side noise stage, a separate stream per distance
    Rng awgn(seed_, stream::awgn_rx + 0x10000ull * static_cast<std::uint64_t>(spans_done_));
    const double stage = link::per_stage_snr_db(cfg_.snr_b2b_db, cfg_.awgn_stages);
    for (int s = 1; s < cfg_.awgn_stages; ++s) {
        link::awgn_load(g, stage, cfg_.symbol_rate, dbm_to_watt(cfg_.launch_power_dbm), awgn);
    }

    link::RxParams rp = cfg_.rx;
    rp.symbol_rate = cfg_.symbol_rate;
    rp.adc_sps = 2;
    const link::CoherentReceiver rx(g, rp);
    const double beta2_l = cfg_.fiber.beta2() * cfg_.fiber.span_km * 1e3 * spans_done_;
    const auto spec = sigkit::make_constellation(format_);

    DualPol header(static_cast<std::size_t>(cfg_.header_len));
    const auto& known = sigkit::known_symbol_table(cfg_.frame_len);
    for (int p = 0; p < 2; ++p)
        std::copy(known[p].begin(), known[p].begin() + cfg_.header_len, header[p].begin());

    std::vector<cpr::ChannelInput> out;
    for (std::size_t c = 0; c < truth_.size(); ++c) {
        const int line = static_cast<int>(c);
        const double off = st_->offsets[c];
        const CVec lo = combsrc::carrier_rotation(st_->lo[c], line, comb_, true);
        DualPol w = rx.detect(off, lo);

        const double d_acc = rxdsp::dispersion_from_beta2_acc(beta2_l, off, cfg_.fiber.wavelength_nm);
        rxdsp::cdc(w, rx.output_rate(), d_acc, off, cfg_.fiber.wavelength_nm);
        for (int p = 0; p < 2; ++p) sigkit::rrc_matched_inplace(w[p], cfg_.roll_off, 2);

        const auto sync = rxdsp::frame_sync(w, header);
        std::vector<std::uint8_t> known_mask(static_cast<std::size_t>(cfg_.frame_len));
        for (int i = 0; i < cfg_.frame_len; ++i)
            known_mask[i] = truth_[c].layout.kind[i] != sigkit::SymbolKind::Payload;
        const auto eq = rxdsp::mimo_equalize(w, sync.frame_offset, cfg_.eq, header, spec, known_mask);

        // Which frame did sync lock to? Headers repeat every frame; the walk-off
        // delay from the known dispersion tells them apart.
        const double tau = link::group_delay(beta2_l, off) * cfg_.symbol_rate;
        const double r = 0.5 * static_cast<double>(sync.frame_offset);
        const double f_len = cfg_.frame_len;
        const long j = std::lround((r - tau) / f_len);
        cpr::ChannelInput ci;
        ci.rx_start = r - static_cast<double>(j) * f_len;
        ci.tau = tau;
        ci.layout = truth_[c].layout;
        ci.y = DualPol(static_cast<std::size_t>(n_stream_));
        const long shift = wrap_index(j * cfg_.frame_len, n_stream_);
        for (int p = 0; p < 2; ++p) {
            for (long k = 0; k < n_stream_; ++k) ci.y[p][k] = eq.symbols[p][wrap_index(k - shift, n_stream_)];
        }
        out.push_back(std::move(ci));
    }
    return out;
}

double channel_poh(const RunConfig& cfg, int n_r_channel) {
    sigkit::PilotPlan p = plan_for(cfg, n_r_channel);
    p.frame_len = cfg.poh_frame_len;
    return sigkit::header_overhead(p) + sigkit::cr_pilot_overhead(p);
}

metrics::ChannelObservation observe(const RunConfig& cfg, const DualPol& corrected, const ChannelTruth& truth,
                                    double poh) {
    metrics::ChannelObservation o;
    o.poh = poh;
    const auto& payload = truth.layout.payload;
    const std::size_t count = payload.size() * static_cast<std::size_t>(cfg.n_frames - cfg.skip_frames);
    o.rx = DualPol(count);
    o.tx = DualPol(count);
    for (int p = 0; p < 2; ++p) o.labels[p].resize(count);
    std::size_t i = 0;
    for (int f = cfg.skip_frames; f < cfg.n_frames; ++f) {
        const long base = static_cast<long>(f) * cfg.frame_len;
        for (int pos : payload) {
            const long k = base + pos;
            for (int p = 0; p < 2; ++p) {
                o.rx[p][i] = corrected[p][k];
                o.tx[p][i] = truth.symbols[p][k];
                o.labels[p][i] = truth.labels[p][k];
            }
            ++i;
        }
    }
    return o;
}

namespace {
cpr::CprSchemeConfig scheme_config(const RunConfig& cfg, cpr::Scheme scheme, int n_r, int window) {
    cpr::CprSchemeConfig c;
    c.scheme = scheme;
    c.n_r = n_r;
    c.dd_window = window;
    c.dpll.kp = cfg.dpll_kp;
    c.dpll.ki = cfg.dpll_ki;
    c.drc_eps = cfg.drc_eps;
    c.drc_min_separation = cfg.drc_min_separation;
    c.header_pilots = cfg.header_pilots;
    return c;
}
}  // namespace

double main_ngmi(const RunConfig& cfg, const cpr::ChannelInput& ch, const ChannelTruth& truth,
                 const sigkit::ConstellationSpec& spec, int window) {
    auto sc = scheme_config(cfg, cpr::Scheme::Independent, 0, window);
    const auto out = cpr::run_scheme({ch}, sc, spec, cfg.symbol_rate);
    const auto o = observe(cfg, out[0].corrected, truth, 0.0);
    double ngmi = 0;
    for (int p = 0; p < 2; ++p) {
        const double s2 = std::max(metrics::est_noise_var(o.rx[p], o.tx[p]), 1e-12);
        ngmi += 0.5 * metrics::gmi(o.rx[p], o.labels[p], spec, s2) / spec.bits_per_symbol;
    }
    return ngmi;
}

CellResult evaluate_scheme(const RunConfig& cfg, sigkit::Format format, cpr::Scheme scheme, int n_r,
                           const std::vector<cpr::ChannelInput>& rx, const std::vector<ChannelTruth>& truth) {
    const auto spec = sigkit::make_constellation(format);
    const int n_ch = static_cast<int>(rx.size());
    const auto mains = cpr::default_mains(scheme, n_ch);
    CellResult res;
    int window = cfg.dd_window;
    if (window == 0) {
        window = cpr::optimize_dd_window(
            [&](int w) {
                double s = 0;
                for (int m : mains) s += main_ngmi(cfg, rx[m], truth[m], spec, w);
                return s / static_cast<double>(mains.size());
            },
            cfg.dd_grid);
    }
    res.dd_window = window;
    const auto sc = scheme_config(cfg, scheme, n_r, window);
    const auto out = cpr::run_scheme(rx, sc, spec, cfg.symbol_rate);
    const auto n_r_ch = channel_n_r(scheme, n_r, n_ch);
    std::vector<metrics::ChannelObservation> obs;
    for (int c = 0; c < n_ch; ++c) {
        obs.push_back(observe(cfg, out[c].corrected, truth[c], channel_poh(cfg, n_r_ch[c])));
        res.drc_fallback.push_back(out[c].drc_fallback);
    }
    res.report = metrics::make_report(obs, spec, cfg.coding_gap);
    return res;
}

}  // namespace ofc::sim
