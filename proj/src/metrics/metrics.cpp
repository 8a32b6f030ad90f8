#include "ofc/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ofc/core/error.hpp"

namespace ofc::metrics {

double est_noise_var(std::span<const cplx> y, std::span<const cplx> x) {
    if (y.size() != x.size()) throw InputSizeError("received and reference lengths differ");
    if (y.empty()) return 0.0;
    double acc = 0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += std::norm(y[i] - x[i]);
    return acc / static_cast<double>(y.size());
}

double gmi(std::span<const cplx> y, std::span<const std::uint32_t> tx_labels, const sigkit::ConstellationSpec& spec,
           double sigma2) {
    if (!(sigma2 > 0)) throw ParameterError("sigma2 must be positive");
    if (y.size() != tx_labels.size()) throw InputSizeError("label count differs from symbol count");
    const int m = spec.bits_per_symbol;
    const std::size_t q = spec.size();
    if (y.empty()) return 0.0;
    std::vector<double> metric(q);
    double sum = 0;  // sum over symbols and bits of log2(all / matching)
    for (std::size_t s = 0; s < y.size(); ++s) {
        // log-domain with a common offset for stability
        double dmin = 1e300;
        for (std::size_t j = 0; j < q; ++j) {
            metric[j] = std::norm(y[s] - spec.points[j]) / sigma2;
            dmin = std::min(dmin, metric[j]);
        }
        double all = 0;
        double match[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        const std::uint32_t lab = tx_labels[s];
        for (std::size_t j = 0; j < q; ++j) {
            const double e = std::exp(dmin - metric[j]);
            all += e;
            const std::uint32_t same = ~(static_cast<std::uint32_t>(j) ^ lab);
            for (int i = 0; i < m; ++i) {
                if ((same >> (m - 1 - i)) & 1u) match[i] += e;
            }
        }
        for (int i = 0; i < m; ++i) sum += std::log2(all / std::max(match[i], 1e-300));
    }
    const double g = m - sum / static_cast<double>(y.size());
    return std::clamp(g, 0.0, static_cast<double>(m));
}

double code_rate(double ngmi, double gap) {
    const double rc = ngmi - gap;
    if (!(rc > 0)) throw UnsupportedOperatingPoint("NGMI " + std::to_string(ngmi) + " leaves no positive code rate");
    return std::min(rc, 1.0);
}

double fec_oh(double ngmi, double gap) {
    const double rc = code_rate(ngmi, gap);
    return (1.0 - rc) / rc;
}

double ngmi_from_fec_oh(double fec, double gap) { return 1.0 / (1.0 + fec) + gap; }

double net_rate(double fec, double poh) { return 1.0 / ((1.0 + fec) * (1.0 + poh)); }

double gain_pct(double r_scheme, double r_base) { return (r_scheme / r_base - 1.0) * 100.0; }

MetricsReport make_report(const std::vector<ChannelObservation>& obs, const sigkit::ConstellationSpec& spec,
                          double gap) {
    MetricsReport rep;
    if (obs.empty()) return rep;
    const int m = spec.bits_per_symbol;
    for (const auto& o : obs) {
        ChannelMetrics cm;
        for (int p = 0; p < 2; ++p) {
            cm.sigma2[p] = est_noise_var(o.rx[p], o.tx[p]);
            const double s2 = std::max(cm.sigma2[p], 1e-12);
            cm.ngmi[p] = ngmi_from_gmi(gmi(o.rx[p], o.labels[p], spec, s2), m);
        }
        cm.ngmi_mean = 0.5 * (cm.ngmi[0] + cm.ngmi[1]);
        cm.poh = o.poh;
        rep.ngmi_mean += cm.ngmi_mean;
        rep.poh_mean += cm.poh;
        rep.channels.push_back(cm);
    }
    rep.ngmi_mean /= static_cast<double>(obs.size());
    rep.poh_mean /= static_cast<double>(obs.size());
    rep.fec_oh = fec_oh(rep.ngmi_mean, gap);
    for (auto& cm : rep.channels) {
        cm.r_net = net_rate(rep.fec_oh, cm.poh);
        rep.r_net += cm.r_net;
    }
    rep.r_net /= static_cast<double>(rep.channels.size());
    return rep;
}

}  // namespace ofc::metrics
