#include "ofc/combsrc/comb.hpp"

#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/vecmath.hpp"

namespace ofc::combsrc {

using namespace ofc::constants;

void CombSpec::validate() const {
    if (n_lines < 1) throw ParameterError("comb needs at least one line");
    if (static_cast<int>(scale_factors.size()) != n_lines) {
        throw ParameterError("scale_factors must have one entry per line");
    }
    if (common_lw < 0.0 || line_lw < 0.0) throw ParameterError("linewidth must be non-negative");
    if (!(fsr > 0.0)) throw ParameterError("fsr must be positive");
}

PhaseTrack gen_wiener(double linewidth, double sample_rate, std::size_t n, Rng& rng) {
    if (linewidth < 0.0) throw ParameterError("linewidth must be non-negative");
    if (n < 1) throw ParameterError("track length must be >= 1");
    if (!(sample_rate > 0.0)) throw ParameterError("sample rate must be positive");
    PhaseTrack t;
    t.sample_rate = sample_rate;
    t.samples.assign(n, 0.0);
    if (linewidth == 0.0) return t;
    const double sigma = std::sqrt(two_pi * linewidth / sample_rate);
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        acc += sigma * rng.gaussian();
        t.samples[i] = acc;
    }
    return t;
}

void close_into_bridge(PhaseTrack& track) {
    auto& s = track.samples;
    if (s.size() < 2) return;
    const std::size_t n = s.size() - 1;
    const double end = s[n] - s[0];
    for (std::size_t i = 0; i < n; ++i) s[i] -= end * static_cast<double>(i) / static_cast<double>(n);
    s.pop_back();
}

std::vector<PhaseTrack> gen_comb_phases(const CombSpec& spec, double sample_rate, std::size_t n, Rng& common_rng,
                                        Rng& line_rng, bool periodic) {
    spec.validate();
    const std::size_t len = periodic ? n + 1 : n;
    PhaseTrack common = gen_wiener(spec.common_lw, sample_rate, len, common_rng);
    PhaseTrack diff = gen_wiener(spec.line_lw, sample_rate, len, line_rng);
    if (periodic) {
        close_into_bridge(common);
        close_into_bridge(diff);
    }
    std::vector<PhaseTrack> lines(spec.n_lines);
    for (int k = 0; k < spec.n_lines; ++k) {
        auto& t = lines[k];
        t.sample_rate = sample_rate;
        t.line_index = k;
        t.samples.resize(n);
        const double s = spec.scale_factors[k];
        for (std::size_t i = 0; i < n; ++i) t.samples[i] = common.samples[i] + s * diff.samples[i];
    }
    return lines;
}

double line_frequency_offset(const CombSpec& spec, int line, bool is_lo) {
    return is_lo ? spec.fo + spec.k_rel(line) * spec.fsr_dev : 0.0;
}

CVec carrier_rotation(const PhaseTrack& track, int line, const CombSpec& spec, bool is_lo) {
    const std::size_t n = track.samples.size();
    const double f = line_frequency_offset(spec, line, is_lo);
    RVec phase(n);
    // ramp reduced to one cycle so the argument stays small on long tracks
    const double step = f / track.sample_rate;
    for (std::size_t i = 0; i < n; ++i) {
        const double cycles = step * static_cast<double>(i);
        phase[i] = track.samples[i] + two_pi * (cycles - std::floor(cycles));
    }
    CVec out(n);
    expj(phase, out);
    return out;
}

CombSpec snap_to_period(const CombSpec& spec, double period) {
    if (!(period > 0.0)) throw ParameterError("period must be positive");
    CombSpec s = spec;
    const bool half = (spec.n_lines % 2) == 0;  // line positions at half-integer multiples
    const double cyc_fsr = spec.fsr * period;
    s.fsr = (half ? 2.0 * std::round(cyc_fsr / 2.0) : std::round(cyc_fsr)) / period;
    const double dev_cycles = std::round(spec.fsr_dev * period);
    s.fsr_dev = dev_cycles / period;
    const bool odd_dev = half && std::fmod(std::abs(dev_cycles), 2.0) == 1.0;
    // fo + k_rel * fsr_dev must be whole cycles; with odd dev cycles and half
    // integer k_rel, fo sits on the half grid.
    const double fo_cycles = odd_dev ? std::round(spec.fo * period - 0.5) + 0.5 : std::round(spec.fo * period);
    s.fo = fo_cycles / period;
    return s;
}

}  // namespace ofc::combsrc
