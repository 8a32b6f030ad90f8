#pragma once

#include <functional>
#include <vector>

#include "ofc/cpr/phase.hpp"
#include "ofc/sigkit/constellation.hpp"

namespace ofc::cpr {

struct DpllGains {
    double kp = 0.05;
    double ki = 2e-3;
};

struct DpllResult {
    RVec psi;              // accumulated frequency phase per symbol, radians
    RVec fo;               // loop frequency per symbol, radians/symbol
    double coarse_fo = 0;  // initial acquisition, radians/symbol
};

/// Pilot-aided second-order DPLL. A coarse estimate from the phase increments
/// of pilots one block apart seeds the loop; the proportional-integral update
/// runs at every pilot. Only the frequency part is integrated into psi; the
/// residual phase is left for the phase estimator. Throws LoopDivergence when
/// the integrator leaves +-2x the pilot rate.
DpllResult dpll_fo(const DualPol& y, const PilotSet& pilots, const DpllGains& gains = {});

/// Pilot-aided stage: per-burst ML phase at the burst centroid, unwrapped,
/// linearly interpolated in between, held at the ends.
RVec pa_cpe_stage1(const DualPol& x, const PilotSet& pilots);

/// Decision-directed ML refinement over a centred window of `window` symbols.
/// Positions flagged in `known_mask` use `known` values instead of decisions.
RVec dd_ml_stage2(const DualPol& x, int window, const sigkit::ConstellationSpec& spec,
                  std::span<const std::uint8_t> known_mask = {}, const DualPol* known = nullptr);

/// Hold-based light PA-CPR: per-burst ML phase applied with zero-order hold
/// from the burst centroid until the next centroid.
RVec pa_cpr_light(const DualPol& x, const PilotSet& pilots);

/// Window candidates for the decision-directed stage.
std::vector<int> default_dd_grid();

/// Grid point with the highest score (ties go to the larger window).
int optimize_dd_window(const std::function<double(int)>& score, const std::vector<int>& grid);

}  // namespace ofc::cpr
