#pragma once

#include <cstdint>
#include <vector>

#include "ofc/core/types.hpp"
#include "ofc/sigkit/constellation.hpp"

namespace ofc::sigkit {

/// Pilot layout after the header: the payload region is cut into blocks of
/// `block_len` symbols. Periods of (burst_blocks + n_r) blocks repeat; the first
/// `burst_blocks` blocks of a period each carry one pilot on their first symbol.
struct PilotPlan {
    int block_len = 32;
    int burst_blocks = 4;
    int n_r = 0;
    int header_len = 1024;
    int frame_len = 1 << 17;

    int period_blocks() const { return burst_blocks + n_r; }
    void validate() const;
};

/// Pilots divided by non-pilot symbols in one full period: 1/(31 + 8 n_r) for
/// the default block/burst sizes.
double cr_pilot_overhead(const PilotPlan& plan);

/// Header symbols divided by the remaining symbols of the frame.
double header_overhead(const PilotPlan& plan);

enum class SymbolKind : std::uint8_t { Header, Pilot, Payload };

struct FrameLayout {
    PilotPlan plan;
    std::vector<SymbolKind> kind;  // per frame index
    std::vector<int> header;
    std::vector<int> pilots;
    std::vector<int> payload;
    /// CR pilot positions grouped into bursts of up to burst_blocks pilots.
    std::vector<std::vector<int>> bursts;
};

FrameLayout make_layout(const PilotPlan& plan);

/// Pilot bursts used by the receiver, optionally preceded by pseudo-bursts cut
/// from the header (one header symbol per block, grouped like CR pilots).
std::vector<std::vector<int>> receiver_bursts(const FrameLayout& layout, bool include_header);

/// Fixed training and pilot symbols, identical across channels and runs.
/// Returned as full-frame sequences; only header and pilot positions are used.
const DualPol& known_symbol_table(int frame_len);

struct SymbolFrame {
    DualPol symbols;
    FrameLayout layout;
    Bits tx_bits_x;  // payload bits, in payload order
    Bits tx_bits_y;
};

/// Builds one frame. Each polarisation's bit vector must fill the payload
/// positions exactly (payload.size() * m bits), otherwise InputSizeError.
SymbolFrame build_frame(const Bits& bits_x, const Bits& bits_y, const PilotPlan& plan,
                        const ConstellationSpec& spec);

}  // namespace ofc::sigkit
