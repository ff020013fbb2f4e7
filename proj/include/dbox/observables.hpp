#pragma once

// Outcome probabilities and conservation diagnostics.
//
// Only open channels (a_n < 0) carry outgoing flux, so there are finitely
// many outcomes. Normalizing the particle-1 probability flux by the incident
// flux 2 hbar k0 / (L m1) gives
//
//     p_n^+ = (k_n/k0) |Phi_n(L) + delta_{n n0} e^{i k0 L}|^2   (exit right)
//     p_n^- = (k_n/k0) |Phi_n(0)|^2                             (exit left)
//
// and exact flux conservation means sum_n (p_n^+ + p_n^-) = 1. The deviation
// from 1 -- the unitarity defect -- is the primary discretization-accuracy
// signal and is reported, never renormalized away. Outcome energies E_n are
// recomputed from (k_n, n) so that E_n = E_0 is an actual cross-check rather
// than a tautology.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dbox/nystrom.hpp"

namespace dbox {

struct ChannelOutcome {
    int n = 0;
    double k = 0.0;       // outgoing wavenumber k_n
    double energy = 0.0;  // E_n, recomputed from (k_n, n)
    double p_plus = 0.0;
    double p_minus = 0.0;
    double p_total = 0.0;
};

struct OutcomeReport {
    std::vector<ChannelOutcome> outcomes; // open channels, ascending n
    double unitarity_defect = 0.0;        // |sum_n p_n - 1|
    double flux_left = 0.0;               // F(x<0) / incident flux
    double flux_right = 0.0;              // F(x>L) / incident flux
    double incident_energy = 0.0;         // E_0
    double max_energy_mismatch = 0.0;     // max_n |E_n - E_0| / E_0
    double cond_estimate = 0.0;           // from the linear solve
};

enum class Side { left, right };

namespace detail {

inline double outcome_energy(const ProblemConfig& cfg, double k, int n) {
    const double knpi = n * std::numbers::pi / cfg.box_length;
    return cfg.hbar * cfg.hbar * k * k / (2.0 * cfg.mass1) +
           cfg.hbar * cfg.hbar * knpi * knpi / (2.0 * cfg.mass2);
}

inline std::complex<double> right_amplitude(const ScatteringSolution& sol, int n) {
    std::complex<double> amp = sol.boundary_right(n);
    if (n == sol.config.n0) {
        const double ph = sol.config.k0 * sol.config.box_length;
        amp += std::complex<double>{std::cos(ph), std::sin(ph)};
    }
    return amp;
}

} // namespace detail

/// Integrated particle-1 flux on the given side, normalized by the incident
/// flux 2 hbar k0 / (L m1). For a converged solution both sides agree.
inline double flux(const ScatteringSolution& sol, Side side) {
    const ProblemConfig& cfg = sol.config;
    const double two_over_l = 2.0 / cfg.box_length;
    const double hbar_m1 = cfg.hbar / cfg.mass1;
    double total = 0.0;
    for (const Channel& ch : sol.table.channels) {
        if (!ch.open()) continue;
        if (side == Side::right)
            total += two_over_l * hbar_m1 * ch.k *
                     std::norm(detail::right_amplitude(sol, ch.index));
        else
            total -= two_over_l * hbar_m1 * ch.k * std::norm(sol.boundary_left(ch.index));
    }
    if (side == Side::left) total += two_over_l * hbar_m1 * cfg.k0;
    const double incident = two_over_l * hbar_m1 * cfg.k0;
    return total / incident;
}

inline OutcomeReport probabilities(const ScatteringSolution& sol) {
    const ProblemConfig& cfg = sol.config;
    OutcomeReport report;
    report.incident_energy = cfg.total_energy();
    report.cond_estimate = sol.info.cond_estimate;

    double sum = 0.0;
    for (const Channel& ch : sol.table.channels) {
        if (!ch.open()) continue;
        ChannelOutcome o;
        o.n = ch.index;
        o.k = ch.k;
        o.energy = detail::outcome_energy(cfg, ch.k, ch.index);
        o.p_plus = (ch.k / cfg.k0) * std::norm(detail::right_amplitude(sol, ch.index));
        o.p_minus = (ch.k / cfg.k0) * std::norm(sol.boundary_left(ch.index));
        o.p_total = o.p_plus + o.p_minus;
        sum += o.p_total;
        report.max_energy_mismatch =
            std::max(report.max_energy_mismatch,
                     std::abs(o.energy - report.incident_energy) / report.incident_energy);
        report.outcomes.push_back(o);
    }
    report.unitarity_defect = std::abs(sum - 1.0);
    report.flux_left = flux(sol, Side::left);
    report.flux_right = flux(sol, Side::right);
    return report;
}

} // namespace dbox
