#include "ofc/sim/report.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ofc/core/error.hpp"

#ifndef OFC_VERSION
#define OFC_VERSION "dev"
#endif

namespace ofc::sim {

namespace {

std::string num(double v, int prec) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& s) { return s == "nan" ? std::nan("") : std::stod(s); }

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << csv_header << "\n";
    for (const auto& r : rows) {
        os << num(r.distance_km, 1) << ',' << r.format << ',' << r.scheme << ',' << r.n_r << ',' << r.seed << ','
           << num(r.ngmi_mean, 6) << ',' << num(r.fec_oh, 6) << ',' << num(r.poh_mean, 6) << ',' << num(r.r_net, 6)
           << ',' << num(r.gain_pct, 4) << ',' << r.dd_window << ',' << num(r.runtime_s, 3) << "\n";
    }
    return os.str();
}

std::vector<ResultRow> parse_csv(const std::string& text) {
    std::vector<ResultRow> rows;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != csv_header) throw InputSizeError("unexpected CSV header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 12) throw InputSizeError("CSV row with " + std::to_string(f.size()) + " fields");
        ResultRow r;
        r.distance_km = to_double(f[0]);
        r.format = f[1];
        r.scheme = f[2];
        r.n_r = std::stoi(f[3]);
        r.seed = std::stoull(f[4]);
        r.ngmi_mean = to_double(f[5]);
        r.fec_oh = to_double(f[6]);
        r.poh_mean = to_double(f[7]);
        r.r_net = to_double(f[8]);
        r.gain_pct = to_double(f[9]);
        r.dd_window = std::stoi(f[10]);
        r.runtime_s = to_double(f[11]);
        rows.push_back(r);
    }
    return rows;
}

std::vector<Curve> gain_curves(const std::vector<ResultRow>& rows, const std::string& format) {
    std::map<std::pair<std::string, int>, std::map<double, std::vector<double>>> acc;
    std::vector<std::pair<std::string, int>> order;
    for (const auto& r : rows) {
        if (r.format != format || r.scheme == "independent" || !r.error.empty() || std::isnan(r.gain_pct)) continue;
        const auto key = std::make_pair(r.scheme, r.n_r);
        if (!acc.count(key)) order.push_back(key);
        acc[key][r.distance_km].push_back(r.gain_pct);
    }
    std::vector<Curve> curves;
    for (const auto& key : order) {
        Curve c{key.first, key.second, {}};
        for (const auto& [d, v] : acc[key]) {
            double m = 0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            double s = 0;
            for (double x : v) s += (x - m) * (x - m);
            s = v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0;
            c.points.push_back({d, m, s, static_cast<int>(v.size())});
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

std::string render_svg(const std::vector<ResultRow>& rows, const std::string& format, const std::string& title) {
    const auto curves = gain_curves(rows, format);
    const double w = 640, h = 420, ml = 70, mr = 150, mt = 40, mb = 55;
    double xmax = 0, ymin = 0, ymax = 0;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            xmax = std::max(xmax, p.distance_km);
            ymin = std::min(ymin, p.mean - p.std);
            ymax = std::max(ymax, p.mean + p.std);
        }
    }
    if (xmax <= 0) xmax = 100;
    const double ypad = std::max(0.5, 0.1 * (ymax - ymin));
    ymin -= ypad;
    ymax += ypad;
    auto sx = [&](double x) { return ml + x / xmax * (w - ml - mr); };
    auto sy = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * (h - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << (ml + (w - ml - mr) / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
       << "</text>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << sy(ymin) << "\" x2=\"" << ml << "\" y2=\"" << sy(ymax)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << sy(ymin) << "\" x2=\"" << sx(xmax) << "\" y2=\"" << sy(ymin)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(xmax) << "\" y2=\"" << sy(0)
       << "\" stroke=\"#888\" stroke-dasharray=\"2,3\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double x = xmax * i / 5.0;
        os << "<text x=\"" << sx(x) << "\" y=\"" << sy(ymin) + 18 << "\" text-anchor=\"middle\">" << num(x, 0)
           << "</text>\n";
        const double y = ymin + (ymax - ymin) * i / 5.0;
        os << "<text x=\"" << ml - 6 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">" << num(y, 1)
           << "</text>\n";
    }
    os << "<text x=\"" << (ml + (w - ml - mr) / 2) << "\" y=\"" << h - 12
       << "\" text-anchor=\"middle\">Distance [km]</text>\n";
    os << "<text transform=\"translate(18," << (mt + (h - mt - mb) / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">Net rate gain [%]</text>\n";

    const std::map<std::string, std::string> colors{{"ms1", "#1f77b4"}, {"ms2", "#2ca02c"}, {"drc", "#d62728"}};
    int legend = 0;
    for (const auto& c : curves) {
        const auto it = colors.find(c.scheme);
        const std::string col = it == colors.end() ? "#555" : it->second;
        const std::string dash = c.n_r == 0 ? " stroke-dasharray=\"6,4\"" : "";
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\"" << dash << " points=\"";
        for (const auto& p : c.points) os << sx(p.distance_km) << ',' << sy(p.mean) << ' ';
        os << "\"/>\n";
        for (const auto& p : c.points) {
            os << "<circle cx=\"" << sx(p.distance_km) << "\" cy=\"" << sy(p.mean) << "\" r=\"2.5\" fill=\"" << col
               << "\"/>\n";
            if (p.std > 0) {
                os << "<line x1=\"" << sx(p.distance_km) << "\" y1=\"" << sy(p.mean - p.std) << "\" x2=\""
                   << sx(p.distance_km) << "\" y2=\"" << sy(p.mean + p.std) << "\" stroke=\"" << col << "\"/>\n";
            }
        }
        const double ly = mt + 10 + 18 * legend++;
        os << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << w - mr + 35 << "\" y2=\"" << ly
           << "\" stroke=\"" << col << "\" stroke-width=\"1.5\"" << dash << "/>\n";
        os << "<text x=\"" << w - mr + 40 << "\" y=\"" << ly + 4 << "\">" << c.scheme << " N_r=" << c.n_r
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_outputs(const RunConfig& cfg, const std::vector<ResultRow>& rows, const std::string& verb) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    auto write = [&](const fs::path& p, const std::string& text) {
        std::ofstream os(p, std::ios::binary);
        os << text;
        if (!os) throw Error("cannot write " + p.string());
    };
    write(dir / "results.csv", format_csv(rows));
    write(dir / "fig2a.svg", render_svg(rows, "16qam", "16-QAM: net rate gain vs. independent CR"));
    write(dir / "fig2b.svg", render_svg(rows, "64qam", "64-QAM: net rate gain vs. independent CR"));

    std::ostringstream meta;
    meta << "ofcsim " << OFC_VERSION << "\n";
    meta << "verb: " << verb << "\n";
    meta << "fftw: " << fftw_version << "\n";
    meta << "overrides:";
    if (cfg.overrides.empty()) meta << " none";
    meta << "\n";
    for (const auto& o : cfg.overrides) meta << "  " << o << "\n";
    meta << "resolved:\n" << dump_config(cfg);
    write(dir / "meta.txt", meta.str());

    std::ostringstream err;
    for (const auto& r : rows) {
        if (r.error.empty()) continue;
        err << r.format << ' ' << num(r.distance_km, 1) << " km " << r.scheme << " n_r=" << r.n_r << " seed=" << r.seed
            << ": " << r.error << "\n";
    }
    const auto ep = dir / "errors.txt";
    if (!err.str().empty()) write(ep, err.str());
    else if (fs::exists(ep)) fs::remove(ep);
}

}  // namespace ofc::sim
