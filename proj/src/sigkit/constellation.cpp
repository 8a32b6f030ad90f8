#include "ofc/sigkit/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ofc/core/error.hpp"

namespace ofc::sigkit {

std::string to_string(Format f) {
    switch (f) {
        case Format::QPSK: return "qpsk";
        case Format::QAM16: return "16qam";
        case Format::QAM64: return "64qam";
    }
    return "?";
}

Format format_from_string(const std::string& s) {
    std::string t;
    for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    std::erase(t, '-');
    if (t == "qpsk" || t == "4qam") return Format::QPSK;
    if (t == "16qam" || t == "qam16") return Format::QAM16;
    if (t == "64qam" || t == "qam64") return Format::QAM64;
    throw ConfigError("unknown modulation format '" + s + "'");
}

namespace {

std::uint32_t gray(std::uint32_t i) { return i ^ (i >> 1); }

}  // namespace

ConstellationSpec make_constellation(Format format) {
    ConstellationSpec spec;
    spec.format = format;
    switch (format) {
        case Format::QPSK: spec.bits_per_symbol = 2; break;
        case Format::QAM16: spec.bits_per_symbol = 4; break;
        case Format::QAM64: spec.bits_per_symbol = 6; break;
    }
    const int half = spec.bits_per_symbol / 2;
    const int levels = 1 << half;
    spec.levels_per_axis = levels;
    // Mean energy of the odd-integer lattice {±1, ±3, ...}^2 is 2(L^2 - 1)/3.
    const double e_avg = 2.0 * (levels * levels - 1) / 3.0;
    spec.scale = 1.0 / std::sqrt(e_avg);

    const std::size_t count = std::size_t{1} << spec.bits_per_symbol;
    spec.points.resize(count);
    std::set<long> r2;
    for (int i = 0; i < levels; ++i) {
        for (int q = 0; q < levels; ++q) {
            const std::uint32_t label = (gray(i) << half) | gray(q);
            const int a = 2 * i - (levels - 1);
            const int b = 2 * q - (levels - 1);
            spec.points[label] = spec.scale * cplx(a, b);
            r2.insert(static_cast<long>(a) * a + static_cast<long>(b) * b);
        }
    }
    for (long v : r2) spec.radii.push_back(spec.scale * std::sqrt(static_cast<double>(v)));
    return spec;
}

std::uint32_t ConstellationSpec::decide(cplx y) const {
    const int half = bits_per_symbol / 2;
    auto axis = [&](double v) {
        const double u = (v / scale + (levels_per_axis - 1)) / 2.0;
        long idx = std::lround(u);
        idx = std::clamp<long>(idx, 0, levels_per_axis - 1);
        return static_cast<std::uint32_t>(idx);
    };
    return (gray(axis(y.real())) << half) | gray(axis(y.imag()));
}

CVec map_bits(std::span<const std::uint8_t> bits, const ConstellationSpec& spec) {
    const int m = spec.bits_per_symbol;
    if (bits.size() % static_cast<std::size_t>(m) != 0) {
        throw InputSizeError("bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                             std::to_string(m));
    }
    CVec out(bits.size() / m);
    for (std::size_t s = 0; s < out.size(); ++s) {
        std::uint32_t label = 0;
        for (int i = 0; i < m; ++i) label = (label << 1) | (bits[s * m + i] & 1u);
        out[s] = spec.points[label];
    }
    return out;
}

Bits demap_hard(std::span<const cplx> symbols, const ConstellationSpec& spec) {
    const int m = spec.bits_per_symbol;
    Bits bits(symbols.size() * m);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const std::uint32_t label = spec.decide(symbols[s]);
        for (int i = 0; i < m; ++i) bits[s * m + i] = static_cast<std::uint8_t>(label_bit(label, i, m));
    }
    return bits;
}

}  // namespace ofc::sigkit
