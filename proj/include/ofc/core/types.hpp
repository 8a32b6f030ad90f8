#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <vector>

namespace ofc {

using cplx = std::complex<double>;

/// 64-byte aligned allocator so every buffer can be handed to a shared FFTW plan.
template <typename T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAllocator() noexcept = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        std::size_t bytes = (n * sizeof(T) + alignment - 1) / alignment * alignment;
        void* p = std::aligned_alloc(alignment, bytes);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }

    template <typename U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using CVec = std::vector<cplx, AlignedAllocator<cplx>>;
using RVec = std::vector<double>;
using Bits = std::vector<std::uint8_t>;

/// Two polarisation tributaries of equal length.
struct DualPol {
    CVec x;
    CVec y;

    DualPol() = default;
    explicit DualPol(std::size_t n) : x(n), y(n) {}
    DualPol(CVec px, CVec py) : x(std::move(px)), y(std::move(py)) {}

    std::size_t size() const { return x.size(); }
    CVec& operator[](int p) { return p == 0 ? x : y; }
    const CVec& operator[](int p) const { return p == 0 ? x : y; }
};

inline long wrap_index(long i, long n) {
    long r = i % n;
    return r < 0 ? r + n : r;
}

}  // namespace ofc
