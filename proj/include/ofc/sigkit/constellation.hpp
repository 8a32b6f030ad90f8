#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ofc/core/types.hpp"

namespace ofc::sigkit {

enum class Format { QPSK, QAM16, QAM64 };

std::string to_string(Format f);
Format format_from_string(const std::string& s);

/// Square Gray-labelled QAM with unit average energy.
///
/// Labels are m-bit integers read MSB first from the bit stream; the upper m/2
/// bits select the in-phase level and the lower m/2 bits the quadrature level,
/// each through a binary-reflected Gray code over the levels -(L-1)..(L-1).
struct ConstellationSpec {
    Format format = Format::QAM16;
    int bits_per_symbol = 4;
    int levels_per_axis = 4;
    double scale = 1.0;  // level spacing factor: point = scale * (a + jb)
    std::vector<cplx> points;            // indexed by label
    std::vector<double> radii;           // distinct magnitudes, ascending

    std::size_t size() const { return points.size(); }
    const cplx& point(std::uint32_t label) const { return points[label]; }

    /// Minimum-distance decision, returned as a label.
    std::uint32_t decide(cplx y) const;
};

ConstellationSpec make_constellation(Format format);

/// Maps groups of m bits (MSB first) onto constellation points.
/// Throws InputSizeError when bits.size() is not a multiple of m.
CVec map_bits(std::span<const std::uint8_t> bits, const ConstellationSpec& spec);

/// Hard decision demapper, inverse of map_bits on noiseless input.
Bits demap_hard(std::span<const cplx> symbols, const ConstellationSpec& spec);

/// Bit i (0 = MSB) of a label.
inline int label_bit(std::uint32_t label, int i, int m) { return static_cast<int>((label >> (m - 1 - i)) & 1u); }

}  // namespace ofc::sigkit
