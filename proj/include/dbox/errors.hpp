#pragma once

#include <stdexcept>
#include <string>

namespace dbox {

/// Bad or inconsistent user input (config files, plan parameters).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Some channel sits numerically on its open/closed threshold (a_n ~ 0).
/// The formulation assumes this never happens, so such configurations are
/// rejected instead of silently perturbed.
struct threshold_channel_error : std::runtime_error {
    threshold_channel_error(int index, double a)
        : std::runtime_error("channel n=" + std::to_string(index) +
                             " is within tolerance of its threshold (a_n = " +
                             std::to_string(a) + ")"),
          channel_index(index), a_value(a) {}
    int channel_index;
    double a_value;
};

/// Truncation order too small: the last retained channel is still open, so
/// energetically allowed outcomes would be cut off.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The discretized block system is singular or numerically so (possible
/// quasi-bound resonance or threshold configuration).
struct singular_system_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Step-doubling failed to stabilize the transfer-matrix result.
struct nonconvergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Convergence-study differences underflow; no meaningful slope to fit.
struct degenerate_fit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dbox
