#pragma once

#include "ofc/core/types.hpp"

namespace ofc::link {

/// Dual-polarisation complex baseband optical field on a uniform circular time
/// grid. Frequency 0 of the baseband sits at ref_freq_offset relative to the
/// comb centre.
struct FieldGrid {
    DualPol field;
    double sample_rate = 0.0;
    double ref_freq_offset = 0.0;

    std::size_t size() const { return field.size(); }
    double duration() const { return static_cast<double>(size()) / sample_rate; }
};

/// Mean power summed over both polarisations, W.
double total_power(const FieldGrid& g);

}  // namespace ofc::link
