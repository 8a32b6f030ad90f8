#include "ofc/cpr/schemes.hpp"

#include <algorithm>
#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/cpr/drc.hpp"

namespace ofc::cpr {

using namespace ofc::constants;

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Independent: return "independent";
        case Scheme::MS1: return "ms1";
        case Scheme::MS2: return "ms2";
        case Scheme::DRC: return "drc";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    std::string t;
    for (char c : s) {
        if (c == '&' || c == '_' || c == '-') continue;
        t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (t == "independent" || t == "indep") return Scheme::Independent;
    if (t == "ms1") return Scheme::MS1;
    if (t == "ms2") return Scheme::MS2;
    if (t == "drc") return Scheme::DRC;
    throw ConfigError("unknown CPR scheme '" + s + "'");
}

std::vector<int> default_mains(Scheme s, int n) {
    switch (s) {
        case Scheme::Independent: {
            std::vector<int> all(n);
            for (int i = 0; i < n; ++i) all[i] = i;
            return all;
        }
        case Scheme::MS1: return {std::min(1, n - 1)};
        case Scheme::MS2:
        case Scheme::DRC: return {0, n - 1};
    }
    return {};
}

std::vector<int> CprSchemeConfig::mains(int n) const { return main_indices.empty() ? default_mains(scheme, n) : main_indices; }

void CprSchemeConfig::validate(int n) const {
    const auto m = mains(n);
    const std::size_t want = scheme == Scheme::Independent ? static_cast<std::size_t>(n)
                             : scheme == Scheme::MS1        ? 1u
                                                            : 2u;
    if (m.size() != want) throw ConfigError("wrong number of main channels for scheme " + to_string(scheme));
    for (int i : m)
        if (i < 0 || i >= n) throw ConfigError("main channel index out of range");
    if (n_r < 0) throw ConfigError("n_r must be >= 0");
    if (dd_window < 1) throw ConfigError("dd_window must be >= 1");
}

namespace {

// extended array: entry i holds stream symbol (i - ext) mod n
DualPol extend(const DualPol& y, long ext) {
    const long n = static_cast<long>(y.size());
    DualPol out(static_cast<std::size_t>(n + 2 * ext));
    for (int p = 0; p < 2; ++p) {
        for (long i = 0; i < n + 2 * ext; ++i) out[p][i] = y[p][static_cast<std::size_t>(wrap_index(i - ext, n))];
    }
    return out;
}

// mask and values of every known symbol (header and pilots) on the extended array
void known_symbols(const sigkit::FrameLayout& layout, long n, long ext, std::vector<std::uint8_t>& mask,
                   DualPol& values) {
    const long len = n + 2 * ext;
    const long f_len = layout.plan.frame_len;
    const auto& table = sigkit::known_symbol_table(static_cast<int>(f_len));
    mask.assign(static_cast<std::size_t>(len), 0);
    values = DualPol(static_cast<std::size_t>(len));
    for (long i = 0; i < len; ++i) {
        const long fp = wrap_index(i - ext, n) % f_len;
        if (layout.kind[fp] != sigkit::SymbolKind::Payload) {
            mask[i] = 1;
            values.x[i] = table.x[fp];
            values.y[i] = table.y[fp];
        }
    }
}

DualPol cut(const DualPol& ext_arr, long ext, long n) {
    DualPol out(static_cast<std::size_t>(n));
    for (int p = 0; p < 2; ++p) std::copy(ext_arr[p].begin() + ext, ext_arr[p].begin() + ext + n, out[p].begin());
    return out;
}

}  // namespace

MainTrack recover_main(const ChannelInput& ch, long ext, const CprSchemeConfig& cfg,
                       const sigkit::ConstellationSpec& spec) {
    const long n = static_cast<long>(ch.y.size());
    const DualPol y = extend(ch.y, ext);
    const PilotSet ps = make_pilot_set(ch.layout, n, ext, n + 2 * ext, cfg.header_pilots);
    const DpllResult d = dpll_fo(y, ps, cfg.dpll);
    const DualPol x1 = derotate(y, d.psi);
    const RVec th1 = pa_cpe_stage1(x1, ps);
    const DualPol x2 = derotate(x1, th1);
    std::vector<std::uint8_t> mask;
    DualPol known;
    known_symbols(ch.layout, n, ext, mask, known);
    const RVec th2 = dd_ml_stage2(x2, cfg.dd_window, spec, mask, &known);
    MainTrack t;
    t.ext = ext;
    t.phase.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) t.phase[i] = d.psi[i] + th1[i] + th2[i];
    t.omega = d.fo;
    return t;
}

std::vector<ChannelCprOutput> run_scheme(const std::vector<ChannelInput>& channels, const CprSchemeConfig& cfg,
                                         const sigkit::ConstellationSpec& spec, double symbol_rate) {
    const int n_ch = static_cast<int>(channels.size());
    if (n_ch == 0) return {};
    cfg.validate(n_ch);
    const long n = static_cast<long>(channels[0].y.size());
    for (const auto& c : channels)
        if (static_cast<long>(c.y.size()) != n) throw InputSizeError("channels must have equal length");

    double max_shift = 0;
    for (const auto& a : channels)
        for (const auto& b : channels) max_shift = std::max(max_shift, std::abs(a.rx_start - b.rx_start));
    const long ext = static_cast<long>(std::ceil(max_shift)) + 8192;
    const long len = n + 2 * ext;

    const auto mains = cfg.mains(n_ch);
    std::vector<int> main_of(n_ch, -1);
    for (std::size_t m = 0; m < mains.size(); ++m) main_of[mains[m]] = static_cast<int>(m);

    std::vector<MainTrack> tracks(mains.size());
    for (std::size_t m = 0; m < mains.size(); ++m) tracks[m] = recover_main(channels[mains[m]], ext, cfg, spec);

    std::vector<ChannelCprOutput> out(n_ch);
    auto finish = [&](int c, const RVec& phase_ext, const RVec& omega_ext, PhaseEstimateTrack::Source src) {
        const DualPol y = extend(channels[c].y, ext);
        const DualPol corr = derotate(y, phase_ext);
        out[c].corrected = cut(corr, ext, n);
        out[c].track.source = src;
        out[c].track.phase.assign(phase_ext.begin() + ext, phase_ext.begin() + ext + n);
        out[c].track.fo_hz.resize(static_cast<std::size_t>(n));
        for (long k = 0; k < n; ++k) out[c].track.fo_hz[k] = omega_ext[k + ext] / two_pi * symbol_rate;
    };

    for (std::size_t m = 0; m < mains.size(); ++m) {
        out[mains[m]].is_main = true;
        finish(mains[m], tracks[m].phase, tracks[m].omega, PhaseEstimateTrack::Source::DecisionDirected);
    }
    if (mains.size() == static_cast<std::size_t>(n_ch)) return out;

    auto closest_main = [&](int c) {
        int best = 0;
        for (std::size_t m = 1; m < mains.size(); ++m)
            if (std::abs(mains[m] - c) < std::abs(mains[best] - c)) best = static_cast<int>(m);
        return best;
    };

    // DRC geometry on a periodic receiver-time grid with one cell per main burst period
    bool use_drc = cfg.scheme == Scheme::DRC;
    const auto& plan = channels[mains[0]].layout.plan;
    const long cell = static_cast<long>(plan.burst_blocks) * plan.block_len;
    DrcSeparation sep;
    std::vector<RVec> q_main;     // detrended main phase per receiver-time cell
    std::vector<double> drift;    // main phase gained per stream period
    if (use_drc) {
        const double sep_cells = std::abs(channels[mains[1]].tau - channels[mains[0]].tau) / static_cast<double>(cell);
        if (n % cell != 0 || sep_cells < cfg.drc_min_separation) use_drc = false;
    }
    if (use_drc) {
        const long n_cells = n / cell;
        for (std::size_t m = 0; m < mains.size(); ++m) {
            const RVec& ph = tracks[m].phase;
            double dsum = 0;
            for (long i = 0; i < 2 * ext; ++i) dsum += ph[i + n] - ph[i];
            const double dr = dsum / static_cast<double>(2 * ext);
            drift.push_back(dr);
            const double s1 = channels[mains[m]].rx_start;
            RVec q(static_cast<std::size_t>(n_cells), 0.0);
            const double last = static_cast<double>(ph.size() - 1);
            for (long r = 0; r < n; ++r) {
                // stream index of the main symbol arriving at receiver time r,
                // folded back into the extended array with the drift it carries
                double k = static_cast<double>(r) - s1 + static_cast<double>(ext);
                double wrap = 0;
                while (k < 0) k += static_cast<double>(n), wrap -= dr;
                while (k > last) k -= static_cast<double>(n), wrap += dr;
                const double v = sample_at(ph, k) + wrap - dr * static_cast<double>(r) / static_cast<double>(n);
                q[r / cell] += v;
            }
            for (auto& v : q) v /= static_cast<double>(cell);
            q_main.push_back(std::move(q));
        }
        const double tc = static_cast<double>(cell);
        sep = drc_separate(q_main[0], q_main[1], channels[mains[0]].tau / tc, channels[mains[1]].tau / tc, cfg.drc_eps);
    }

    for (int c = 0; c < n_ch; ++c) {
        if (main_of[c] >= 0) continue;
        const auto& ch = channels[c];
        const int mi = closest_main(c);
        const MainTrack& mt = tracks[mi];
        const double shift = ch.rx_start - channels[mains[mi]].rx_start;
        RVec phase(static_cast<std::size_t>(len)), omega(static_cast<std::size_t>(len));
        PhaseEstimateTrack::Source src = PhaseEstimateTrack::Source::Held;
        if (!use_drc) {
            // copy the closest main at equal receiver time
            for (long i = 0; i < len; ++i) {
                phase[i] = sample_at(mt.phase, static_cast<double>(i) + shift);
                omega[i] = sample_at(mt.omega, static_cast<double>(i) + shift);
            }
            out[c].drc_fallback = cfg.scheme == Scheme::DRC;
        } else {
            src = PhaseEstimateTrack::Source::Reconstructed;
            const double tc = static_cast<double>(cell);
            const RVec corr = drc_correction(sep, ch.tau / tc, channels[mains[mi]].tau / tc);
            // secondary drift and frequency interpolated across the comb between the two mains
            const double a = static_cast<double>(c - mains[0]) / static_cast<double>(mains[1] - mains[0]);
            const double dr_c = drift[0] + a * (drift[1] - drift[0]);
            const long n_cells = static_cast<long>(corr.size());
            for (long i = 0; i < len; ++i) {
                const double im = static_cast<double>(i) + shift;  // same receiver time on the base main
                const double r = static_cast<double>(i - ext) + ch.rx_start;
                // base main detrended, plus interpolated correction, plus this channel's drift
                const double base = sample_at(mt.phase, im) - drift[mi] * r / static_cast<double>(n);
                const double cpos = r / tc - 0.5;
                const double cw = cpos - std::floor(cpos / n_cells) * n_cells;
                const long c0 = static_cast<long>(std::floor(cw)) % n_cells;
                const double fr = cw - std::floor(cw);
                const double cv = corr[c0] + fr * (corr[(c0 + 1) % n_cells] - corr[c0]);
                phase[i] = base + cv + dr_c * r / static_cast<double>(n);
                const double w0 = sample_at(tracks[0].omega, static_cast<double>(i) + ch.rx_start - channels[mains[0]].rx_start);
                const double w1 = sample_at(tracks[1].omega, static_cast<double>(i) + ch.rx_start - channels[mains[1]].rx_start);
                omega[i] = w0 + a * (w1 - w0);
            }
        }
        // residual correction from the channel's own sparse pilots
        const DualPol y = extend(ch.y, ext);
        const DualPol x = derotate(y, phase);
        const PilotSet ps = make_pilot_set(ch.layout, n, ext, len, cfg.header_pilots);
        const RVec light = pa_cpr_light(x, ps);
        for (long i = 0; i < len; ++i) phase[i] += light[i];
        finish(c, phase, omega, src);
    }
    return out;
}

}  // namespace ofc::cpr
