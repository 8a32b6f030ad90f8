#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/cpr/cpe.hpp"

namespace ofc::cpr {

using namespace ofc::constants;

namespace {
cplx pilot_product(const DualPol& y, const PilotSet& ps, std::size_t m) {
    const auto k = static_cast<std::size_t>(ps.pos[m]);
    return y.x[k] * std::conj(ps.vx[m]) + y.y[k] * std::conj(ps.vy[m]);
}
}  // namespace

DpllResult dpll_fo(const DualPol& y, const PilotSet& ps, const DpllGains& gains) {
    const std::size_t n = y.size();
    DpllResult r;
    r.psi.assign(n, 0.0);
    r.fo.assign(n, 0.0);
    if (ps.size() < 2) throw InputSizeError("DPLL needs at least two pilots");

    // coarse acquisition from pilots at the most common spacing
    std::vector<cplx> z(ps.size());
    for (std::size_t m = 0; m < ps.size(); ++m) z[m] = pilot_product(y, ps, m);
    long spacing = 0;
    {
        std::vector<std::pair<long, int>> counts;
        for (std::size_t m = 1; m < ps.size(); ++m) {
            const long d = ps.pos[m] - ps.pos[m - 1];
            auto it = std::find_if(counts.begin(), counts.end(), [&](auto& c) { return c.first == d; });
            if (it == counts.end()) counts.emplace_back(d, 1);
            else ++it->second;
        }
        int best = 0;
        for (auto& [d, c] : counts)
            if (c > best) best = c, spacing = d;
    }
    cplx inc = 0;
    for (std::size_t m = 1; m < ps.size(); ++m) {
        if (ps.pos[m] - ps.pos[m - 1] == spacing) inc += z[m] * std::conj(z[m - 1]);
    }
    double omega = std::arg(inc) / static_cast<double>(spacing);
    r.coarse_fo = omega;
    const double limit = 2.0 * two_pi / static_cast<double>(spacing);

    double theta = std::arg(z[0]);
    std::size_t next = 0;
    double psi = 0;
    long prev_pos = ps.pos[0];
    for (std::size_t k = 0; k < n; ++k) {
        if (next < ps.size() && static_cast<long>(k) == ps.pos[next]) {
            const double dn = static_cast<double>(ps.pos[next] - prev_pos);
            const double pred = theta + omega * dn;
            const double e = std::remainder(std::arg(z[next]) - pred, two_pi);
            theta = pred + gains.kp * e;
            if (dn > 0) omega += gains.ki * e / dn;
            if (!(std::abs(omega) <= limit)) throw LoopDivergence("DPLL frequency left the pilot acquisition range");
            prev_pos = ps.pos[next];
            ++next;
        }
        r.psi[k] = psi;
        r.fo[k] = omega;
        psi += omega;
    }
    return r;
}

}  // namespace ofc::cpr
