#include "ofc/cpr/phase.hpp"

#include <algorithm>
#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/vecmath.hpp"

namespace ofc::cpr {

using namespace ofc::constants;

double PilotSet::centroid(std::size_t b) const {
    const auto [lo, hi] = bursts[b];
    double s = 0;
    for (int i = lo; i < hi; ++i) s += static_cast<double>(pos[i]);
    return s / (hi - lo);
}

PilotSet make_pilot_set(const sigkit::FrameLayout& layout, long n_stream, long offset, long length,
                        bool include_header) {
    const long f_len = layout.plan.frame_len;
    if (n_stream % f_len != 0) throw InputSizeError("stream length must be a whole number of frames");
    const auto bursts = sigkit::receiver_bursts(layout, include_header);
    const auto& known = sigkit::known_symbol_table(static_cast<int>(f_len));
    PilotSet ps;
    // frame starts (array index) that can overlap [0, length)
    const long first = -((offset + f_len - 1) / f_len) - 1;
    const long last = (length - offset) / f_len + 1;
    for (long f = first; f <= last; ++f) {
        const long base = offset + f * f_len;
        for (const auto& b : bursts) {
            if (base + b.front() < 0 || base + b.back() >= length) continue;
            const int begin = static_cast<int>(ps.pos.size());
            for (int p : b) {
                ps.pos.push_back(base + p);
                ps.vx.push_back(known.x[p]);
                ps.vy.push_back(known.y[p]);
            }
            ps.bursts.emplace_back(begin, static_cast<int>(ps.pos.size()));
        }
    }
    return ps;
}

PilotSet make_pilot_set(std::vector<long> pos, std::vector<cplx> vx, std::vector<cplx> vy,
                        std::vector<std::pair<int, int>> bursts) {
    if (vx.size() != pos.size() || vy.size() != pos.size()) throw InputSizeError("pilot value count mismatch");
    PilotSet ps;
    ps.pos = std::move(pos);
    ps.vx = std::move(vx);
    ps.vy = std::move(vy);
    ps.bursts = std::move(bursts);
    return ps;
}

double burst_phase(const DualPol& x, const PilotSet& pilots, std::size_t burst) {
    const auto [lo, hi] = pilots.bursts[burst];
    cplx acc = 0;
    for (int i = lo; i < hi; ++i) {
        const auto k = static_cast<std::size_t>(pilots.pos[i]);
        acc += x.x[k] * std::conj(pilots.vx[i]) + x.y[k] * std::conj(pilots.vy[i]);
    }
    return std::arg(acc);
}

void unwrap(std::span<double> phase) {
    for (std::size_t i = 1; i < phase.size(); ++i) {
        const double d = phase[i] - phase[i - 1];
        phase[i] -= two_pi * std::round(d / two_pi);
    }
}

RVec interp_linear(std::span<const double> t, std::span<const double> v, std::size_t n) {
    RVec out(n, 0.0);
    if (t.empty()) return out;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        while (j + 1 < t.size() && t[j + 1] <= x) ++j;
        if (x <= t.front()) {
            out[i] = v.front();
        } else if (j + 1 >= t.size()) {
            out[i] = v.back();
        } else {
            const double a = (x - t[j]) / (t[j + 1] - t[j]);
            out[i] = v[j] + a * (v[j + 1] - v[j]);
        }
    }
    return out;
}

RVec hold(std::span<const double> t, std::span<const double> v, std::size_t n) {
    RVec out(n, 0.0);
    if (t.empty()) return out;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (j + 1 < t.size() && t[j + 1] <= static_cast<double>(i)) ++j;
        out[i] = v[j];
    }
    return out;
}

DualPol derotate(const DualPol& x, std::span<const double> phase) {
    DualPol out = x;
    rotate_by_phase(out.x, phase, -1.0);
    rotate_by_phase(out.y, phase, -1.0);
    return out;
}

double sample_at(std::span<const double> track, double index) {
    if (track.empty()) return 0.0;
    const double last = static_cast<double>(track.size() - 1);
    const double x = std::clamp(index, 0.0, last);
    const auto i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= track.size()) return track.back();
    const double a = x - static_cast<double>(i);
    return track[i] + a * (track[i + 1] - track[i]);
}

}  // namespace ofc::cpr
