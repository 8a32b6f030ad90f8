#include "ofc/selftest/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"

namespace ofc::selftest {

using namespace ofc::constants;

void gauss_hermite(int n, RVec& x, RVec& w) {
    if (n < 1) throw ParameterError("need at least one node");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    // Newton on the physicists' Hermite recurrence, roots come in +/- pairs
    const int m = (n + 1) / 2;
    double z = 0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -1.0 / 6.0);
        else if (i == 1) z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2) z = 1.86 * z - 0.86 * x[0];
        else if (i == 3) z = 1.91 * z - 0.91 * x[1];
        else z = 2.0 * z - x[i - 2];
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p1 = std::pow(pi, -0.25), p2 = 0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-14) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
}

double gmi_awgn_quadrature(const sigkit::ConstellationSpec& spec, double sigma2, int nodes) {
    if (!(sigma2 > 0)) throw ParameterError("noise variance must be positive");
    const int m = spec.bits_per_symbol;
    const int M = 1 << m;
    RVec gx, gw;
    gauss_hermite(nodes, gx, gw);
    // n = sqrt(sigma2/2) * sqrt(2) * (u + j v) with weight exp(-u^2 - v^2) / pi
    const double s = std::sqrt(sigma2);
    std::vector<cplx> pts(M);
    for (int l = 0; l < M; ++l) pts[l] = spec.point(static_cast<std::uint32_t>(l));

    double loss = 0;  // E[ sum_i log2( sum_all / sum_same_bit ) ]
    std::vector<double> metric(M);
    for (int a = 0; a < M; ++a) {
        for (int iu = 0; iu < nodes; ++iu) {
            for (int iv = 0; iv < nodes; ++iv) {
                const double wt = gw[iu] * gw[iv] / pi;
                const cplx y = pts[a] + s * cplx(gx[iu], gx[iv]);
                double mx = -std::numeric_limits<double>::infinity();
                for (int l = 0; l < M; ++l) {
                    metric[l] = -std::norm(y - pts[l]) / sigma2;
                    mx = std::max(mx, metric[l]);
                }
                double all = 0;
                for (int l = 0; l < M; ++l) all += std::exp(metric[l] - mx);
                double term = 0;
                for (int i = 0; i < m; ++i) {
                    const int bit = (a >> (m - 1 - i)) & 1;
                    double same = 0;
                    for (int l = 0; l < M; ++l)
                        if (((l >> (m - 1 - i)) & 1) == bit) same += std::exp(metric[l] - mx);
                    term += std::log2(all / same);
                }
                loss += wt * term;
            }
        }
    }
    return m - loss / M;
}

double normal_quantile(double p) {
    if (!(p > 0 && p < 1)) throw ParameterError("probability must be in (0, 1)");
    // bisection on the complementary error function, plenty for a test bound
    double lo = -40, hi = 40;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double chi2_quantile(double p, double k) {
    const double z = normal_quantile(p);
    const double a = 2.0 / (9.0 * k);
    const double c = 1.0 - a + z * std::sqrt(a);
    return k * c * c * c;
}

}  // namespace ofc::selftest
