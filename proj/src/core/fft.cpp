#include "ofc/core/fft.hpp"

#include <fftw3.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <tuple>

namespace ofc {
namespace {

struct PlanCache {
    std::mutex mutex;
    std::map<std::tuple<std::size_t, int, bool>, fftw_plan> plans;
    bool measured = true;
    bool wisdom_loaded = false;
    std::string wisdom_path;

    PlanCache() {
        if (const char* env = std::getenv("OFC_FFTW_WISDOM")) {
            wisdom_path = env;
        } else if (const char* home = std::getenv("HOME")) {
            wisdom_path = std::string(home) + "/.cache/ofcsim/fftw.wisdom";
        }
        if (const char* env = std::getenv("OFC_FFTW_ESTIMATE")) {
            measured = std::string(env) != "1";
        }
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    void load_wisdom() {
        if (wisdom_loaded) return;
        wisdom_loaded = true;
        if (!wisdom_path.empty() && std::filesystem::exists(wisdom_path)) {
            fftw_import_wisdom_from_filename(wisdom_path.c_str());
        }
    }

    void save_wisdom() {
        if (wisdom_path.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(std::filesystem::path(wisdom_path).parent_path(), ec);
        // Write to a temporary then rename so concurrent processes never read a torn file.
        std::string tmp = wisdom_path + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(this));
        if (fftw_export_wisdom_to_filename(tmp.c_str())) {
            std::filesystem::rename(tmp, wisdom_path, ec);
        }
    }

    fftw_plan get(std::size_t n, int sign, bool aligned) {
        std::lock_guard lock(mutex);
        auto key = std::make_tuple(n, sign, aligned);
        if (auto it = plans.find(key); it != plans.end()) return it->second;

        unsigned flags = FFTW_ESTIMATE;
        if (measured) {
            load_wisdom();
            flags = FFTW_MEASURE;
        }
        if (!aligned) flags |= FFTW_UNALIGNED;
        auto* buf = fftw_alloc_complex(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, flags);
        fftw_free(buf);
        plans.emplace(key, plan);
        if (measured) save_wisdom();
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(std::span<cplx> data, int sign) {
    if (data.empty()) return;
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    bool aligned = reinterpret_cast<std::uintptr_t>(ptr) % 64 == 0;
    fftw_plan plan = cache().get(data.size(), sign, aligned);
    fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void fft(std::span<cplx> data) { execute(data, FFTW_FORWARD); }

void ifft(std::span<cplx> data) {
    execute(data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
}

CVec fft_copy(std::span<const cplx> data) {
    CVec out(data.begin(), data.end());
    fft(out);
    return out;
}

CVec ifft_copy(std::span<const cplx> data) {
    CVec out(data.begin(), data.end());
    ifft(out);
    return out;
}

void fft_set_wisdom_file(const std::string& path) {
    std::lock_guard lock(cache().mutex);
    cache().wisdom_path = path;
    cache().wisdom_loaded = false;
}

void fft_use_measured_plans(bool enabled) {
    std::lock_guard lock(cache().mutex);
    cache().measured = enabled;
}

}  // namespace ofc
