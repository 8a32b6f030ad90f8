#pragma once

#include <cstdint>
#include <random>

#include "ofc/core/types.hpp"

namespace ofc {

/// Stream identifiers. Each random process in a run draws from its own stream,
/// keyed by (run seed, stream id), so adding channels or spans never shifts
/// another stream.
namespace stream {
inline constexpr std::uint64_t payload = 0x100;      // + channel
inline constexpr std::uint64_t tx_common_pn = 0x200;
inline constexpr std::uint64_t tx_line_pn = 0x201;
inline constexpr std::uint64_t lo_common_pn = 0x300;
inline constexpr std::uint64_t lo_line_pn = 0x301;
inline constexpr std::uint64_t awgn_tx = 0x400;
inline constexpr std::uint64_t awgn_rx = 0x401;
inline constexpr std::uint64_t ase = 0x1000;         // + span index
inline constexpr std::uint64_t known_symbols = 0x5EED0000;
}  // namespace stream

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream_id);

    double gaussian() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::uint64_t next_u64() { return engine_(); }
    int bit() { return static_cast<int>(engine_() >> 63); }

    /// Circular complex Gaussian with E|z|^2 = variance.
    cplx complex_gaussian(double variance);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

Bits random_bits(std::size_t n, Rng& rng);

}  // namespace ofc
