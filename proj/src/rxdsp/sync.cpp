#include "ofc/rxdsp/sync.hpp"

#include <algorithm>
#include <cmath>

#include "ofc/core/error.hpp"
#include "ofc/core/fft.hpp"

namespace ofc::rxdsp {

RVec sync_metric(const DualPol& rx, const DualPol& header, const SyncConfig& cfg) {
    const std::size_t n = rx.size();
    const std::size_t h_len = header.size();
    if (h_len == 0 || h_len * cfg.sps > n) throw InputSizeError("waveform shorter than the header");
    const std::size_t seg_len = h_len / cfg.n_segments;
    if (seg_len == 0) throw ParameterError("too many sync segments");

    CVec rx_spec[2] = {fft_copy(rx.x), fft_copy(rx.y)};
    CVec pw(n);
    for (std::size_t i = 0; i < n; ++i) pw[i] = std::norm(rx.x[i]) + std::norm(rx.y[i]);
    fft(pw);

    RVec metric(n, 0.0);
    CVec ref(n), acc(n), tmp(n);
    RVec corr2(n);
    for (int s = 0; s < cfg.n_segments; ++s) {
        const std::size_t n0 = s * seg_len;
        std::fill(corr2.begin(), corr2.end(), 0.0);
        // Largest eigenvalue of the 2x2 header Gram matrix bounds |C|_F^2.
        cplx gxy = 0;
        double gxx = 0, gyy = 0;
        for (std::size_t i = n0; i < n0 + seg_len; ++i) {
            gxx += std::norm(header.x[i]);
            gyy += std::norm(header.y[i]);
            gxy += header.x[i] * std::conj(header.y[i]);
        }
        const double lmax = 0.5 * (gxx + gyy) + std::sqrt(0.25 * (gxx - gyy) * (gxx - gyy) + std::norm(gxy));
        for (int q = 0; q < 2; ++q) {
            std::fill(ref.begin(), ref.end(), cplx{});
            for (std::size_t i = n0; i < n0 + seg_len; ++i) ref[i * cfg.sps] = header[q][i];
            fft(ref);
            for (int p = 0; p < 2; ++p) {
                // c(d) = sum_m r[d + m] conj(ref[m])
                for (std::size_t k = 0; k < n; ++k) tmp[k] = rx_spec[p][k] * std::conj(ref[k]);
                ifft(tmp);
                for (std::size_t d = 0; d < n; ++d) corr2[d] += std::norm(tmp[d]);
            }
        }
        // received energy under the segment's symbol instants
        std::fill(ref.begin(), ref.end(), cplx{});
        for (std::size_t i = n0; i < n0 + seg_len; ++i) ref[i * cfg.sps] = 1.0;
        fft(ref);
        for (std::size_t k = 0; k < n; ++k) acc[k] = pw[k] * std::conj(ref[k]);
        ifft(acc);
        for (std::size_t d = 0; d < n; ++d) {
            const double er = std::max(acc[d].real(), 1e-300);
            metric[d] += std::sqrt(std::min(1.0, corr2[d] / (er * lmax)));
        }
    }
    for (auto& m : metric) m /= cfg.n_segments;
    return metric;
}

SyncResult frame_sync(const DualPol& rx, const DualPol& header, const SyncConfig& cfg) {
    const RVec m = sync_metric(rx, header, cfg);
    const auto it = std::max_element(m.begin(), m.end());
    SyncResult r;
    r.frame_offset = static_cast<long>(it - m.begin());
    r.correlation_peak = *it;
    if (!(r.correlation_peak >= cfg.threshold)) {
        throw SyncFailure("header correlation peak " + std::to_string(r.correlation_peak) + " below threshold");
    }
    return r;
}

}  // namespace ofc::rxdsp
