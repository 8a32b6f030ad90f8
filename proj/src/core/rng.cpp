#include "ofc/core/rng.hpp"

#include <cmath>

namespace ofc {

namespace {
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x6f666373u};
    return std::mt19937_64(seq);
}
}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream_id) : engine_(make_engine(seed, stream_id)) {}

cplx Rng::complex_gaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    double re = normal_(engine_);
    double im = normal_(engine_);
    return {s * re, s * im};
}

Bits random_bits(std::size_t n, Rng& rng) {
    Bits bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
    return bits;
}

}  // namespace ofc
