#include "ofc/link/fiber.hpp"

#include <cmath>

#include "ofc/core/constants.hpp"
#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"
#include "ofc/core/vecmath.hpp"

namespace ofc::link {

using namespace ofc::constants;

void FiberParams::validate() const {
    if (alpha_db_km < 0 || dispersion_ps_nm_km < 0 || gamma_w_km < 0 || span_km < 0 || n_spans < 0 ||
        wavelength_nm <= 0) {
        throw ParameterError("fiber parameters must be non-negative");
    }
}

double beta2_from_dispersion(double d_ps_nm_km, double wavelength_nm) {
    const double d = d_ps_nm_km * 1e-6;  // s/m^2
    const double lambda = wavelength_nm * 1e-9;
    return -d * lambda * lambda / (two_pi * speed_of_light);
}

double FiberParams::beta2() const { return beta2_from_dispersion(dispersion_ps_nm_km, wavelength_nm); }

double FiberParams::alpha_per_m() const { return alpha_db_km / (10.0 * std::log10(std::exp(1.0))) * 1e-3; }

double group_delay(double beta2_l, double f_hz) { return -beta2_l * two_pi * f_hz; }

std::vector<double> StepControl::steps(double span_km) const {
    if (span_km <= 0) return {};
    if (mode == Mode::Fixed) {
        if (!(step_km > 0)) throw NumericalError("step length must be positive");
        const int n = std::max(1, static_cast<int>(std::ceil(span_km / step_km - 1e-9)));
        return std::vector<double>(n, span_km / n);
    }
    if (!(min_km > 0) || max_km < min_km) throw NumericalError("invalid logarithmic step bounds");
    // steps grow geometrically from min_km until they reach max_km; the last
    // step is trimmed so the steps cover the span exactly
    std::vector<double> out;
    double z = 0.0, h = min_km;
    while (z < span_km - 1e-12) {
        const double take = std::min(h, span_km - z);
        out.push_back(take);
        z += take;
        h = std::min(h * growth, max_km);
    }
    return out;
}

FiberPropagator::FiberPropagator(const FiberParams& fiber, const StepControl& steps, double sample_rate,
                                 std::size_t n)
    : fiber_(fiber), sample_rate_(sample_rate), n_(n) {
    fiber_.validate();
    for (double s : steps.steps(fiber.span_km)) steps_m_.push_back(s * 1e3);
    if (fiber.span_km > 0 && steps_m_.empty()) throw NumericalError("step count < 1");
}

const CVec& FiberPropagator::linear_op(double dz) {
    const auto key = static_cast<long long>(std::llround(dz * 1e6));
    auto it = ops_.find(key);
    if (it != ops_.end()) return it->second;
    CVec op(n_);
    const double b2 = fiber_.beta2();
    const double a = fiber_.alpha_per_m();
    const double loss = std::exp(-a / 2.0 * dz);
    for (std::size_t k = 0; k < n_; ++k) {
        const double w = two_pi * bin_frequency(k, n_, sample_rate_);
        op[k] = std::polar(loss, b2 / 2.0 * w * w * dz);
    }
    return ops_.emplace(key, std::move(op)).first->second;
}

void FiberPropagator::propagate_span(FieldGrid& g) {
    if (g.size() != n_ || g.sample_rate != sample_rate_) throw InputSizeError("field does not match propagator grid");
    if (steps_m_.empty()) return;
    const double a = fiber_.alpha_per_m();
    const double gam = fiber_.gamma_per_w_m() * 8.0 / 9.0;
    auto apply = [&](const CVec& op) {
        for (int p = 0; p < 2; ++p) {
            CVec& f = g.field[p];
            for (std::size_t k = 0; k < n_; ++k) f[k] *= op[k];
        }
    };
    fft(g.field.x);
    fft(g.field.y);
    apply(linear_op(steps_m_[0] / 2.0));
    for (std::size_t i = 0; i < steps_m_.size(); ++i) {
        const double h = steps_m_[i];
        ifft(g.field.x);
        ifft(g.field.y);
        // Kerr phase at the step midpoint; effective length of a step centred there
        const double leff = a > 0 ? 2.0 * std::sinh(a * h / 2.0) / a : h;
        kerr_rotate(g.field.x, g.field.y, gam * leff);
        fft(g.field.x);
        fft(g.field.y);
        const double next = i + 1 < steps_m_.size() ? steps_m_[i + 1] : 0.0;
        apply(linear_op((h + next) / 2.0));
    }
    ifft(g.field.x);
    ifft(g.field.y);
    for (int p = 0; p < 2; ++p) {
        for (const auto& v : g.field[p]) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("non-finite field after span");
        }
    }
}

void ssfm_span(FieldGrid& g, const FiberParams& fiber, const StepControl& steps) {
    FiberPropagator prop(fiber, steps, g.sample_rate, g.size());
    prop.propagate_span(g);
}

double converge_step(const FieldGrid& input, const FiberParams& fiber, double start_km, double tol, double min_km) {
    StepControl sc;
    sc.step_km = start_km;
    FieldGrid prev = input;
    ssfm_span(prev, fiber, sc);
    while (sc.step_km / 2.0 >= min_km) {
        sc.step_km /= 2.0;
        FieldGrid cur = input;
        ssfm_span(cur, fiber, sc);
        double num = 0.0, den = 0.0;
        for (int p = 0; p < 2; ++p) {
            for (std::size_t i = 0; i < cur.size(); ++i) {
                num += std::norm(cur.field[p][i] - prev.field[p][i]);
                den += std::norm(cur.field[p][i]);
            }
        }
        if (std::sqrt(num / den) < tol) return sc.step_km * 2.0;
        prev = std::move(cur);
    }
    return sc.step_km;
}

void apply_dispersion(FieldGrid& g, double beta2_l) {
    const std::size_t n = g.size();
    for (int p = 0; p < 2; ++p) {
        CVec& f = g.field[p];
        fft(f);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = two_pi * bin_frequency(k, n, g.sample_rate);
            f[k] *= std::polar(1.0, beta2_l / 2.0 * w * w);
        }
        ifft(f);
    }
}

}  // namespace ofc::link
