#pragma once

#include <map>
#include <vector>

#include "ofc/link/field.hpp"

namespace ofc::link {

struct FiberParams {
    double alpha_db_km = 0.2;
    double dispersion_ps_nm_km = 20.0;
    double gamma_w_km = 1.3;  // 1/(W km)
    double span_km = 80.0;
    int n_spans = 1;
    double wavelength_nm = 1550.0;

    void validate() const;
    /// beta2 in s^2/m.
    double beta2() const;
    /// Field attenuation coefficient in 1/m (power loss exp(-alpha z)).
    double alpha_per_m() const;
    double gamma_per_w_m() const { return gamma_w_km * 1e-3; }
};

/// beta2 (s^2/m) from D (ps/nm/km) at a wavelength (nm).
double beta2_from_dispersion(double d_ps_nm_km, double wavelength_nm);

/// Group delay of a component at baseband frequency f after accumulated
/// beta2*L (s^2). Positive for f > 0 with anomalous dispersion.
double group_delay(double beta2_l, double f_hz);

struct StepControl {
    enum class Mode { Fixed, Logarithmic };
    Mode mode = Mode::Fixed;
    double step_km = 0.5;
    double min_km = 0.1;  // logarithmic mode: first step
    double max_km = 1.0;  // logarithmic mode: largest step
    double growth = 1.2;  // logarithmic mode: ratio between consecutive steps

    /// Step lengths (km) covering a span of `span_km`.
    std::vector<double> steps(double span_km) const;
};

/// Symmetric split-step propagation of the Manakov equation over spans.
/// Linear operators are cached per step length, so repeated spans cost only
/// FFTs and the Kerr rotation.
class FiberPropagator {
public:
    FiberPropagator(const FiberParams& fiber, const StepControl& steps, double sample_rate, std::size_t n);

    /// Propagates one span in place.
    void propagate_span(FieldGrid& g);

    const FiberParams& fiber() const { return fiber_; }

private:
    const CVec& linear_op(double dz_m);

    FiberParams fiber_;
    std::vector<double> steps_m_;
    double sample_rate_;
    std::size_t n_;
    std::map<long long, CVec> ops_;  // key: dz in micrometres
};

/// Convenience wrapper: one span with a fresh propagator.
void ssfm_span(FieldGrid& g, const FiberParams& fiber, const StepControl& steps);

/// Halves the fixed step until two successive span outputs differ by less than
/// `tol` (relative L2). Returns the accepted step in km.
double converge_step(const FieldGrid& input, const FiberParams& fiber, double start_km, double tol,
                     double min_km = 1e-3);

/// Analytic chromatic dispersion all-pass exp(j beta2 L / 2 w^2), in place.
void apply_dispersion(FieldGrid& g, double beta2_l);

}  // namespace ofc::link
