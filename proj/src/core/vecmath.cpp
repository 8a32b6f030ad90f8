#include "ofc/core/vecmath.hpp"

#include <cmath>
#include <vector>

namespace ofc {

// Compiled with -ffast-math so the sin/cos loops vectorise through libmvec.

void rotate_by_phase(std::span<cplx> x, std::span<const double> phase, double sign) {
    const std::size_t n = x.size();
    double* d = reinterpret_cast<double*>(x.data());
    for (std::size_t i = 0; i < n; ++i) {
        const double c = std::cos(sign * phase[i]);
        const double s = std::sin(sign * phase[i]);
        const double re = d[2 * i];
        const double im = d[2 * i + 1];
        d[2 * i] = re * c - im * s;
        d[2 * i + 1] = re * s + im * c;
    }
}

void kerr_rotate(std::span<cplx> x, std::span<cplx> y, double scale) {
    const std::size_t n = x.size();
    double* dx = reinterpret_cast<double*>(x.data());
    double* dy = reinterpret_cast<double*>(y.data());
    for (std::size_t i = 0; i < n; ++i) {
        const double p = dx[2 * i] * dx[2 * i] + dx[2 * i + 1] * dx[2 * i + 1] + dy[2 * i] * dy[2 * i] +
                         dy[2 * i + 1] * dy[2 * i + 1];
        const double phi = scale * p;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        double re = dx[2 * i], im = dx[2 * i + 1];
        dx[2 * i] = re * c - im * s;
        dx[2 * i + 1] = re * s + im * c;
        re = dy[2 * i];
        im = dy[2 * i + 1];
        dy[2 * i] = re * c - im * s;
        dy[2 * i + 1] = re * s + im * c;
    }
}

void expj(std::span<const double> phase, std::span<cplx> out) {
    const std::size_t n = phase.size();
    double* d = reinterpret_cast<double*>(out.data());
    for (std::size_t i = 0; i < n; ++i) {
        d[2 * i] = std::cos(phase[i]);
        d[2 * i + 1] = std::sin(phase[i]);
    }
}

double mean_power(std::span<const cplx> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

}  // namespace ofc
