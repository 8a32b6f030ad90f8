#include "ofc/sim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "ofc/core/error.hpp"
#include "ofc/cpr/schemes.hpp"
#include "ofc/metrics/metrics.hpp"
#include "ofc/sim/pipeline.hpp"

namespace ofc::sim {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string canonical_scheme(const std::string& s) { return cpr::to_string(cpr::scheme_from_string(s)); }
std::string canonical_format(const std::string& s) { return sigkit::to_string(sigkit::format_from_string(s)); }

int scheme_rank(const std::string& s) { return static_cast<int>(cpr::scheme_from_string(s)); }

struct Group {
    std::string format;
    std::uint64_t seed;
    std::vector<int> layout;
    std::vector<std::size_t> cells;  // indices into the cell list
};

}  // namespace

std::vector<CellSpec> sweep_cells(const RunConfig& cfg) {
    std::vector<CellSpec> cells;
    for (const auto& f : cfg.sweep_formats) {
        for (int s : cfg.sweep_spans) {
            for (auto seed : cfg.seeds) {
                cells.push_back({canonical_format(f), s, "independent", 0, seed});
                for (const auto& sc : cfg.sweep_schemes) {
                    const auto name = canonical_scheme(sc);
                    if (name == "independent") continue;
                    for (int nr : cfg.sweep_n_r) cells.push_back({canonical_format(f), s, name, nr, seed});
                }
            }
        }
    }
    return cells;
}

std::vector<CellSpec> run_cells(const RunConfig& cfg) {
    std::vector<CellSpec> cells;
    const auto f = canonical_format(cfg.format);
    cells.push_back({f, cfg.spans, "independent", 0, cfg.seed});
    const auto name = canonical_scheme(cfg.scheme);
    if (name != "independent") cells.push_back({f, cfg.spans, name, cfg.n_r, cfg.seed});
    return cells;
}

std::vector<ResultRow> execute(const RunConfig& cfg, const std::vector<CellSpec>& cells_in) {
    cfg.validate();
    // drop duplicates so every key appears once
    std::vector<CellSpec> cells;
    for (const auto& c : cells_in) {
        CellSpec k = c;
        k.format = canonical_format(c.format);
        k.scheme = canonical_scheme(c.scheme);
        if (k.scheme == "independent") k.n_r = 0;
        const bool dup = std::any_of(cells.begin(), cells.end(), [&](const CellSpec& o) {
            return o.format == k.format && o.spans == k.spans && o.scheme == k.scheme && o.n_r == k.n_r &&
                   o.seed == k.seed;
        });
        if (!dup) cells.push_back(k);
    }

    const int n_ch = cfg.comb.n_lines;
    std::vector<Group> groups;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        const auto layout = channel_n_r(cpr::scheme_from_string(c.scheme), c.n_r, n_ch);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return g.format == c.format && g.seed == c.seed && g.layout == layout;
        });
        if (it == groups.end()) {
            groups.push_back({c.format, c.seed, layout, {}});
            it = groups.end() - 1;
        }
        it->cells.push_back(i);
    }

    std::vector<ResultRow> rows(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto& r = rows[i];
        r.distance_km = cells[i].spans * cfg.fiber.span_km;
        r.format = cells[i].format;
        r.scheme = cells[i].scheme;
        r.n_r = cells[i].n_r;
        r.seed = cells[i].seed;
        r.ngmi_mean = r.fec_oh = r.poh_mean = r.r_net = r.gain_pct = nan;
    }

    auto run_group = [&](const Group& g) {
        using clock = std::chrono::steady_clock;
        std::vector<std::size_t> order = g.cells;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return cells[a].spans < cells[b].spans; });
        std::unique_ptr<LinkSimulation> sim;
        std::string fatal;
        try {
            sim = std::make_unique<LinkSimulation>(cfg, sigkit::format_from_string(g.format), g.seed, g.layout);
        } catch (const std::exception& e) {
            fatal = e.what();
        }
        std::size_t i = 0;
        while (i < order.size()) {
            const int spans = cells[order[i]].spans;
            std::size_t j = i;
            while (j < order.size() && cells[order[j]].spans == spans) ++j;
            std::vector<cpr::ChannelInput> rx;
            std::string err = fatal;
            double rx_time = 0;
            if (err.empty()) {
                const auto t0 = clock::now();
                try {
                    sim->advance_to(spans);
                    rx = sim->receive();
                } catch (const std::exception& e) {
                    err = e.what();
                }
                rx_time = std::chrono::duration<double>(clock::now() - t0).count();
            }
            for (std::size_t k = i; k < j; ++k) {
                const auto& c = cells[order[k]];
                auto& row = rows[order[k]];
                if (!err.empty()) {
                    row.error = err;
                    continue;
                }
                const auto t0 = clock::now();
                try {
                    const auto res = evaluate_scheme(cfg, sigkit::format_from_string(c.format),
                                                     cpr::scheme_from_string(c.scheme), c.n_r, rx, sim->truth());
                    row.ngmi_mean = res.report.ngmi_mean;
                    row.fec_oh = res.report.fec_oh;
                    row.poh_mean = res.report.poh_mean;
                    row.r_net = res.report.r_net;
                    row.dd_window = res.dd_window;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                if (cfg.record_runtime) {
                    row.runtime_s = rx_time + std::chrono::duration<double>(clock::now() - t0).count();
                }
            }
            i = j;
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t g = next++; g < groups.size(); g = next++) run_group(groups[g]);
    };
    const int n_workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(groups.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // gains against the baseline of the same distance, format and seed
    for (auto& r : rows) {
        const auto base = std::find_if(rows.begin(), rows.end(), [&](const ResultRow& b) {
            return b.scheme == "independent" && b.format == r.format && b.distance_km == r.distance_km &&
                   b.seed == r.seed;
        });
        if (base != rows.end() && r.error.empty() && base->error.empty()) {
            r.gain_pct = metrics::gain_pct(r.r_net, base->r_net);
        }
    }

    std::vector<std::size_t> idx(rows.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::map<std::string, int> format_rank;
    for (const auto& c : cells) format_rank.emplace(c.format, static_cast<int>(format_rank.size()));
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = rows[a];
        const auto& y = rows[b];
        return std::make_tuple(format_rank[x.format], x.distance_km, scheme_rank(x.scheme), x.n_r, x.seed) <
               std::make_tuple(format_rank[y.format], y.distance_km, scheme_rank(y.scheme), y.n_r, y.seed);
    });
    std::vector<ResultRow> sorted;
    for (auto i : idx) sorted.push_back(rows[i]);
    return sorted;
}

}  // namespace ofc::sim
