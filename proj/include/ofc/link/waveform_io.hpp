#pragma once

#include <string>

#include "ofc/link/field.hpp"

namespace ofc::link {

/// Writes `<path>` as little-endian float32 samples interleaved per time
/// instant as x.re, x.im, y.re, y.im, and `<path>.txt` with the sample rate,
/// reference frequency offset and sample count.
void write_waveform(const std::string& path, const FieldGrid& g);

FieldGrid read_waveform(const std::string& path);

}  // namespace ofc::link
