#include "ofc/link/amplifier.hpp"

#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"

namespace ofc::link {

using namespace ofc::constants;

double ase_psd(const AmpParams& amp, double center_freq_hz) {
    const double g = db_to_lin(amp.gain_db);
    const double n_sp = db_to_lin(amp.nf_db) / 2.0;
    return (g - 1.0) * n_sp * planck * center_freq_hz;
}

void edfa(FieldGrid& g, const AmpParams& amp, double center_freq_hz, Rng& rng) {
    if (amp.gain_db < 0) throw ParameterError("amplifier gain must be >= 0 dB");
    const double a = std::sqrt(db_to_lin(amp.gain_db));
    const double var = amp.ase ? ase_psd(amp, center_freq_hz) * g.sample_rate : 0.0;
    for (int p = 0; p < 2; ++p) {
        for (auto& v : g.field[p]) {
            v *= a;
            if (var > 0) v += rng.complex_gaussian(var);
        }
    }
}

}  // namespace ofc::link
