#include <algorithm>
#include <cmath>

#include "ofc/core/error.hpp"
#include "ofc/cpr/cpe.hpp"

namespace ofc::cpr {

namespace {
void burst_estimates(const DualPol& x, const PilotSet& ps, RVec& t, RVec& v) {
    t.resize(ps.bursts.size());
    v.resize(ps.bursts.size());
    for (std::size_t b = 0; b < ps.bursts.size(); ++b) {
        t[b] = ps.centroid(b);
        v[b] = burst_phase(x, ps, b);
    }
    unwrap(v);
}
}  // namespace

RVec pa_cpe_stage1(const DualPol& x, const PilotSet& ps) {
    RVec t, v;
    burst_estimates(x, ps, t, v);
    return interp_linear(t, v, x.size());
}

RVec pa_cpr_light(const DualPol& x, const PilotSet& ps) {
    RVec t, v;
    burst_estimates(x, ps, t, v);
    return hold(t, v, x.size());
}

RVec dd_ml_stage2(const DualPol& x, int window, const sigkit::ConstellationSpec& spec,
                  std::span<const std::uint8_t> known_mask, const DualPol* known) {
    if (window < 1) throw ParameterError("DD window must be >= 1");
    const std::size_t n = x.size();
    std::vector<cplx> prefix(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        cplx z = 0;
        const bool use_known = known && k < known_mask.size() && known_mask[k];
        for (int p = 0; p < 2; ++p) {
            const cplx d = use_known ? (*known)[p][k] : spec.point(spec.decide(x[p][k]));
            z += x[p][k] * std::conj(d);
        }
        prefix[k + 1] = prefix[k] + z;
    }
    const long h = window / 2;
    RVec out(n);
    const long nl = static_cast<long>(n);
    for (long k = 0; k < nl; ++k) {
        const long lo = std::max(0L, k - h);
        const long hi = std::min(nl - 1, k + h);
        out[k] = std::arg(prefix[hi + 1] - prefix[lo]);
    }
    return out;
}

std::vector<int> default_dd_grid() { return {8, 16, 32, 64, 128, 256}; }

int optimize_dd_window(const std::function<double(int)>& score, const std::vector<int>& grid) {
    if (grid.empty()) throw ParameterError("empty DD window grid");
    int best = grid.front();
    double best_score = -1e300;
    for (int w : grid) {
        const double s = score(w);
        if (s >= best_score) {
            best_score = s;
            best = w;
        }
    }
    return best;
}

}  // namespace ofc::cpr
