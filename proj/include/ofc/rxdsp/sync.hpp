#pragma once

#include "ofc/core/types.hpp"

namespace ofc::rxdsp {

struct SyncResult {
    long frame_offset = 0;       // sample index of the first header symbol
    double correlation_peak = 0; // normalised, [0, 1]
};

struct SyncConfig {
    int sps = 2;
    int n_segments = 4;
    double threshold = 0.3;
};

/// Normalised correlation metric between a circular received waveform (both
/// polarisations) and the known header at every sample offset. The header is
/// split into segments correlated separately and combined by magnitude, which
/// makes the metric insensitive to a constant phase, polarisation rotation and
/// moderate frequency offsets.
RVec sync_metric(const DualPol& rx, const DualPol& header, const SyncConfig& cfg = {});

/// Offset of the strongest header occurrence. Throws SyncFailure when the
/// peak is below cfg.threshold.
SyncResult frame_sync(const DualPol& rx, const DualPol& header, const SyncConfig& cfg = {});

}  // namespace ofc::rxdsp
