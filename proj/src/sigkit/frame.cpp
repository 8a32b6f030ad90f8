#include "ofc/sigkit/frame.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "ofc/core/error.hpp"
#include "ofc/core/rng.hpp"

namespace ofc::sigkit {

void PilotPlan::validate() const {
    if (block_len < 2 || burst_blocks < 1 || n_r < 0 || header_len < 0) {
        throw ParameterError("invalid pilot plan");
    }
    if (frame_len <= header_len || (frame_len - header_len) % block_len != 0) {
        throw ParameterError("frame_len - header_len must be a positive multiple of block_len");
    }
}

double cr_pilot_overhead(const PilotPlan& plan) {
    const double pilots = plan.burst_blocks;
    const double others = static_cast<double>(plan.period_blocks()) * plan.block_len - plan.burst_blocks;
    return pilots / others;
}

double header_overhead(const PilotPlan& plan) {
    return static_cast<double>(plan.header_len) / static_cast<double>(plan.frame_len - plan.header_len);
}

FrameLayout make_layout(const PilotPlan& plan) {
    plan.validate();
    FrameLayout layout;
    layout.plan = plan;
    layout.kind.assign(plan.frame_len, SymbolKind::Payload);
    for (int i = 0; i < plan.header_len; ++i) {
        layout.kind[i] = SymbolKind::Header;
        layout.header.push_back(i);
    }
    const int n_blocks = (plan.frame_len - plan.header_len) / plan.block_len;
    const int period = plan.period_blocks();
    std::vector<int> burst;
    for (int b = 0; b < n_blocks; ++b) {
        const int in_period = b % period;
        if (in_period < plan.burst_blocks) {
            const int pos = plan.header_len + b * plan.block_len;
            layout.kind[pos] = SymbolKind::Pilot;
            layout.pilots.push_back(pos);
            burst.push_back(pos);
            if (in_period == plan.burst_blocks - 1) {
                layout.bursts.push_back(std::move(burst));
                burst.clear();
            }
        } else if (!burst.empty()) {
            layout.bursts.push_back(std::move(burst));
            burst.clear();
        }
    }
    if (!burst.empty()) layout.bursts.push_back(std::move(burst));
    for (int i = plan.header_len; i < plan.frame_len; ++i) {
        if (layout.kind[i] == SymbolKind::Payload) layout.payload.push_back(i);
    }
    return layout;
}

std::vector<std::vector<int>> receiver_bursts(const FrameLayout& layout, bool include_header) {
    std::vector<std::vector<int>> out;
    const auto& plan = layout.plan;
    if (include_header) {
        std::vector<int> burst;
        for (int pos = 0; pos < plan.header_len; pos += plan.block_len) {
            burst.push_back(pos);
            if (static_cast<int>(burst.size()) == plan.burst_blocks) {
                out.push_back(std::move(burst));
                burst.clear();
            }
        }
        if (!burst.empty()) out.push_back(std::move(burst));
    }
    out.insert(out.end(), layout.bursts.begin(), layout.bursts.end());
    return out;
}

const DualPol& known_symbol_table(int frame_len) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<DualPol>> tables;
    std::lock_guard lock(mutex);
    auto& slot = tables[frame_len];
    if (!slot) {
        const auto qpsk = make_constellation(Format::QPSK);
        slot = std::make_unique<DualPol>(frame_len);
        for (int p = 0; p < 2; ++p) {
            // Fixed seed: the receiver regenerates the same header and pilots.
            Rng rng(0x4F4643484452ull, stream::known_symbols + p);
            for (int i = 0; i < frame_len; ++i) {
                const auto label = static_cast<std::uint32_t>(rng.next_u64() >> 62);
                (*slot)[p][i] = qpsk.point(label);
            }
        }
    }
    return *slot;
}

SymbolFrame build_frame(const Bits& bits_x, const Bits& bits_y, const PilotPlan& plan,
                        const ConstellationSpec& spec) {
    SymbolFrame frame;
    frame.layout = make_layout(plan);
    const std::size_t need = frame.layout.payload.size() * static_cast<std::size_t>(spec.bits_per_symbol);
    if (bits_x.size() != need || bits_y.size() != need) {
        throw InputSizeError("payload bits do not fill the payload positions (need " + std::to_string(need) +
                             " per polarisation)");
    }
    const DualPol& known = known_symbol_table(plan.frame_len);
    frame.symbols = DualPol(plan.frame_len);
    const Bits* bits[2] = {&bits_x, &bits_y};
    for (int p = 0; p < 2; ++p) {
        const CVec data = map_bits(*bits[p], spec);
        for (int i : frame.layout.header) frame.symbols[p][i] = known[p][i];
        for (int i : frame.layout.pilots) frame.symbols[p][i] = known[p][i];
        for (std::size_t k = 0; k < frame.layout.payload.size(); ++k) {
            frame.symbols[p][frame.layout.payload[k]] = data[k];
        }
    }
    frame.tx_bits_x = bits_x;
    frame.tx_bits_y = bits_y;
    return frame;
}

}  // namespace ofc::sigkit
