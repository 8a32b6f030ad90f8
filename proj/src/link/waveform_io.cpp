#include "ofc/link/waveform_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ofc/core/error.hpp"

namespace ofc::link {

namespace {

void put_f32(std::ostream& os, double v) {
    const auto f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap32(u);
    os.write(reinterpret_cast<const char*>(&u), 4);
}

float get_f32(std::istream& is) {
    std::uint32_t u;
    is.read(reinterpret_cast<char*>(&u), 4);
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap32(u);
    float f;
    std::memcpy(&f, &u, 4);
    return f;
}

}  // namespace

void write_waveform(const std::string& path, const FieldGrid& g) {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw Error("cannot write " + path);
    for (std::size_t i = 0; i < g.size(); ++i) {
        put_f32(bin, g.field.x[i].real());
        put_f32(bin, g.field.x[i].imag());
        put_f32(bin, g.field.y[i].real());
        put_f32(bin, g.field.y[i].imag());
    }
    std::ofstream meta(path + ".txt");
    meta.precision(17);
    meta << "sample_rate=" << g.sample_rate << "\n"
         << "ref_freq_offset=" << g.ref_freq_offset << "\n"
         << "n_samples=" << g.size() << "\n"
         << "layout=float32le x_re x_im y_re y_im\n";
    if (!bin || !meta) throw Error("write failed for " + path);
}

FieldGrid read_waveform(const std::string& path) {
    std::ifstream meta(path + ".txt");
    if (!meta) throw Error("missing sidecar " + path + ".txt");
    FieldGrid g;
    std::size_t n = 0;
    std::string line;
    while (std::getline(meta, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        std::istringstream val(line.substr(eq + 1));
        if (key == "sample_rate") val >> g.sample_rate;
        else if (key == "ref_freq_offset") val >> g.ref_freq_offset;
        else if (key == "n_samples") val >> n;
    }
    std::ifstream bin(path, std::ios::binary);
    if (!bin) throw Error("cannot read " + path);
    g.field = DualPol(n);
    for (std::size_t i = 0; i < n; ++i) {
        const float xr = get_f32(bin), xi = get_f32(bin), yr = get_f32(bin), yi = get_f32(bin);
        g.field.x[i] = {xr, xi};
        g.field.y[i] = {yr, yi};
    }
    if (!bin) throw InputSizeError("waveform file shorter than its sidecar says");
    return g;
}

}  // namespace ofc::link
