#pragma once

#include <span>

#include "ofc/core/types.hpp"

namespace ofc {

/// x[i] *= exp(j * sign * phase[i])
void rotate_by_phase(std::span<cplx> x, std::span<const double> phase, double sign = 1.0);

/// x[i] *= exp(j * scale * (|x[i]|^2 + |y[i]|^2)), same for y (Manakov SPM/XPM kernel).
void kerr_rotate(std::span<cplx> x, std::span<cplx> y, double scale);

/// out[i] = exp(j * phase[i])
void expj(std::span<const double> phase, std::span<cplx> out);

double mean_power(std::span<const cplx> x);

}  // namespace ofc
