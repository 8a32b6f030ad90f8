#pragma once

#include "ofc/core/types.hpp"
#include "ofc/sigkit/constellation.hpp"

namespace ofc::selftest {

/// GMI (bits/symbol) of a labelled constellation on a complex AWGN channel
/// with noise variance sigma2, by Gauss-Hermite product quadrature of the
/// bit-wise log-likelihood expectation. Shares nothing with metrics::gmi
/// beyond the constellation table.
double gmi_awgn_quadrature(const sigkit::ConstellationSpec& spec, double sigma2, int nodes = 48);

/// Two-sided chi-square quantile for k degrees of freedom
/// (Wilson-Hilferty approximation), p in (0, 1).
double chi2_quantile(double p, double k);

/// Standard normal quantile.
double normal_quantile(double p);

/// Gauss-Hermite nodes and weights for weight exp(-x^2).
void gauss_hermite(int n, RVec& x, RVec& w);

}  // namespace ofc::selftest
