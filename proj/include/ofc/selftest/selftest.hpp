#pragma once

#include <string>
#include <vector>

namespace ofc::selftest {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Numerical property checks of the library (fiber, CD compensation, phase
/// noise, GMI, pilot layout, DRC separation, hold lag, back-to-back SNR).
std::vector<CheckResult> run_property_suite();

}  // namespace ofc::selftest
