#pragma once

#include <span>
#include <vector>

#include "ofc/core/types.hpp"
#include "ofc/sigkit/constellation.hpp"

namespace ofc::metrics {

inline constexpr double default_coding_gap = 0.07;

/// mean |y - x|^2
double est_noise_var(std::span<const cplx> y, std::span<const cplx> x);

/// Bit-metric GMI (bits/symbol) under a circular Gaussian auxiliary channel
/// with variance sigma2, clamped to [0, m]. `tx_labels` are the transmitted
/// constellation labels. Throws ParameterError for sigma2 <= 0.
double gmi(std::span<const cplx> y, std::span<const std::uint32_t> tx_labels, const sigkit::ConstellationSpec& spec,
           double sigma2);

inline double ngmi_from_gmi(double g, int m) { return g / m; }

/// Code rate NGMI - gap and FEC overhead (1 - Rc)/Rc. Throws
/// UnsupportedOperatingPoint when the rate is not positive.
double code_rate(double ngmi, double gap = default_coding_gap);
double fec_oh(double ngmi, double gap = default_coding_gap);
/// NGMI that produces a given FEC overhead.
double ngmi_from_fec_oh(double fec, double gap = default_coding_gap);

/// Normalised net rate of one channel.
double net_rate(double fec, double poh);

/// Relative gain of a scheme over the baseline, in percent.
double gain_pct(double r_net_scheme, double r_net_baseline);

struct ChannelMetrics {
    double sigma2[2] = {0, 0};
    double ngmi[2] = {0, 0};
    double ngmi_mean = 0;  // over polarisations
    double poh = 0;
    double r_net = 0;
};

struct MetricsReport {
    std::vector<ChannelMetrics> channels;
    double ngmi_mean = 0;  // over channels (joint FEC)
    double fec_oh = 0;
    double poh_mean = 0;
    double r_net = 0;      // mean over channels
};

/// Per-channel input for a report: received and transmitted payload symbols
/// per polarisation plus the channel's pilot overhead.
struct ChannelObservation {
    DualPol rx;
    DualPol tx;
    std::vector<std::uint32_t> labels[2];
    double poh = 0;
};

MetricsReport make_report(const std::vector<ChannelObservation>& obs, const sigkit::ConstellationSpec& spec,
                          double gap = default_coding_gap);

}  // namespace ofc::metrics
