#include "ofc/link/transmitter.hpp"

#include <cmath>
#include <limits>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"
#include "ofc/core/vecmath.hpp"
#include "ofc/sigkit/pulse.hpp"

namespace ofc::link {

using namespace ofc::constants;

double total_power(const FieldGrid& g) { return mean_power(g.field.x) + mean_power(g.field.y); }

FieldGrid modulate_mux(const std::vector<DualPol>& channel_symbols,
                       const std::vector<combsrc::PhaseTrack>& tx_phase, const MuxParams& p) {
    const std::size_t n_ch = channel_symbols.size();
    if (n_ch == 0) throw ParameterError("no channels to multiplex");
    if (p.channel_offsets.size() != n_ch || tx_phase.size() != n_ch) {
        throw ParameterError("channel offsets and phase tracks must match the channel count");
    }
    const std::size_t ns = channel_symbols[0].size();
    const std::size_t n = ns * static_cast<std::size_t>(p.oversample);
    const double fs = p.symbol_rate * p.oversample;
    const double half_band = p.symbol_rate * (1.0 + p.roll_off) / 2.0;
    const double window = static_cast<double>(ns) / p.symbol_rate;

    FieldGrid g;
    g.sample_rate = fs;
    g.field = DualPol(n);
    const double amp = std::sqrt(dbm_to_watt(p.launch_power_dbm) / 2.0);

    for (std::size_t c = 0; c < n_ch; ++c) {
        const double off = p.channel_offsets[c];
        if (std::abs(off) + half_band > fs / 2.0) {
            throw ConfigError("channel at " + std::to_string(off / 1e9) + " GHz exceeds the simulation bandwidth");
        }
        const double cycles = off * window;
        if (std::abs(cycles - std::round(cycles)) > 1e-6) {
            throw ConfigError("channel offset is not on the frequency grid of the simulation window");
        }
        const long shift = static_cast<long>(std::round(cycles));
        if (channel_symbols[c].size() != ns || tx_phase[c].samples.size() != n) {
            throw InputSizeError("channel symbol or phase track length mismatch");
        }
        for (int pol = 0; pol < 2; ++pol) {
            CVec w = sigkit::rrc_filter(channel_symbols[c][pol], p.roll_off, p.oversample);
            for (auto& v : w) v *= amp;
            rotate_by_phase(w, tx_phase[c].samples);
            fft(w);
            // frequency shift by whole bins, accumulated in the spectral domain
            CVec& dst = g.field[pol];
            for (std::size_t k = 0; k < n; ++k) {
                dst[static_cast<std::size_t>(wrap_index(static_cast<long>(k) + shift, static_cast<long>(n)))] += w[k];
            }
        }
    }
    ifft(g.field.x);
    ifft(g.field.y);
    return g;
}

double per_stage_snr_db(double total_db, int n_stages) {
    return lin_to_db(db_to_lin(total_db) * n_stages);
}

void awgn_load(FieldGrid& g, double snr_db, double symbol_rate, double channel_power_w, Rng& rng) {
    if (std::isinf(snr_db) && snr_db > 0) return;
    const double snr = db_to_lin(snr_db);
    const double var = channel_power_w / (2.0 * snr) * g.sample_rate / symbol_rate;
    for (int pol = 0; pol < 2; ++pol) {
        for (auto& v : g.field[pol]) v += rng.complex_gaussian(var);
    }
}

}  // namespace ofc::link
