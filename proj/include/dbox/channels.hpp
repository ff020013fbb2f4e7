#pragma once

// Channel decomposition for two-particle contact scattering in 1D.
//
// Particle 1 (mass1) moves freely on the real line; particle 2 (mass2) is
// confined to the interval (0, L). Expanding the two-particle wavefunction
// in box eigenstates sin(n pi x2 / L) turns the stationary Schroedinger
// equation into coupled equations for channel amplitudes phi_n(x). Channel n
// carries the coefficient
//
//     a_n = (m1/m2) (pi/L)^2 (n^2 - n0^2) - k0^2,
//
// and is "open" (propagating outgoing wave, wavenumber k_n = sqrt(-a_n))
// when a_n < 0, "closed" (evanescent, decay rate lambda_n = sqrt(a_n)) when
// a_n > 0. Configurations with some a_n ~ 0 sit on an inelastic threshold
// and are rejected.

#include <cmath>
#include <numbers>
#include <vector>

#include "dbox/errors.hpp"

namespace dbox {

struct Dimensionless {
    double g;        // m1 * L * mu0 / hbar^2
    double lk0;      // L * k0
    double epsilon;  // g / (L k0)
    double etilde;   // (L k0)^2
};

struct ProblemConfig {
    double mass1 = 1.0;       // free particle
    double mass2 = 1.0;       // confined particle
    double box_length = 1.0;  // L
    double coupling = 0.0;    // mu0, energy*length; >0 repulsive, <0 attractive
    double hbar = 1.0;
    double k0 = 1.0;          // incident wavenumber
    int n0 = 1;               // initial box eigenstate

    void validate() const {
        if (!(mass1 > 0.0)) throw config_error("mass1 must be positive");
        if (!(mass2 > 0.0)) throw config_error("mass2 must be positive");
        if (!(box_length > 0.0)) throw config_error("box_length must be positive");
        if (!(hbar > 0.0)) throw config_error("hbar must be positive");
        if (!(k0 > 0.0)) throw config_error("k0 must be positive");
        if (n0 < 1) throw config_error("n0 must be a positive integer");
        if (!std::isfinite(coupling)) throw config_error("coupling must be finite");
    }

    /// E = hbar^2 k0^2 / (2 m1) + (hbar^2 / 2 m2) (n0 pi / L)^2
    double total_energy() const {
        const double kin1 = hbar * hbar * k0 * k0 / (2.0 * mass1);
        const double kn0 = n0 * std::numbers::pi / box_length;
        const double kin2 = hbar * hbar * kn0 * kn0 / (2.0 * mass2);
        return kin1 + kin2;
    }

    /// Natural-units construction (hbar = m1 = L = 1) from the dimensionless
    /// strength g = m1 L mu0 / hbar^2 and wavenumber L k0. mass_ratio = m1/m2.
    static ProblemConfig from_dimensionless(double g, double lk0, int n0,
                                            double mass_ratio = 1.0) {
        if (!(mass_ratio > 0.0)) throw config_error("mass ratio must be positive");
        ProblemConfig cfg;
        cfg.mass1 = 1.0;
        cfg.mass2 = 1.0 / mass_ratio;
        cfg.box_length = 1.0;
        cfg.hbar = 1.0;
        cfg.coupling = g;
        cfg.k0 = lk0;
        cfg.n0 = n0;
        cfg.validate();
        return cfg;
    }
};

/// Dimensionless parameters; conventions use m1 as the characteristic mass
/// (the equal-mass case is the usual one, and g is reported with m1 when the
/// masses differ).
inline Dimensionless to_dimensionless(const ProblemConfig& cfg) {
    cfg.validate();
    Dimensionless d;
    d.g = cfg.mass1 * cfg.box_length * cfg.coupling / (cfg.hbar * cfg.hbar);
    d.lk0 = cfg.box_length * cfg.k0;
    d.epsilon = d.g / d.lk0;
    d.etilde = d.lk0 * d.lk0;
    return d;
}

enum class ChannelKind { open, closed };

struct Channel {
    int index = 0;       // n
    double a = 0.0;      // (m1/m2)(pi/L)^2 (n^2 - n0^2) - k0^2
    ChannelKind kind = ChannelKind::closed;
    double k = 0.0;      // sqrt(-a), open channels only
    double lambda = 0.0; // sqrt(a), closed channels only

    bool open() const { return kind == ChannelKind::open; }
};

struct ChannelTable {
    std::vector<Channel> channels; // n = 1..T in order
    int open_count = 0;

    int truncation() const { return static_cast<int>(channels.size()); }
    const Channel& channel(int n) const { return channels[static_cast<size_t>(n) - 1]; }
};

inline double channel_a(const ProblemConfig& cfg, int n) {
    const double pl = std::numbers::pi / cfg.box_length;
    return (cfg.mass1 / cfg.mass2) * pl * pl *
               (double(n) * n - double(cfg.n0) * cfg.n0) -
           cfg.k0 * cfg.k0;
}

/// Scale below which |a_n| is treated as an exact threshold and rejected.
inline double threshold_tolerance(const ProblemConfig& cfg) {
    const double pl = std::numbers::pi / cfg.box_length;
    return 1e-10 * std::max(cfg.k0 * cfg.k0, pl * pl);
}

/// Classify channels n = 1..truncation.
///
/// With require_closed_tail (the default), the last channel must already be
/// closed, otherwise open outcomes would be truncated away. Passing false
/// permits deliberately truncated models (e.g. the single-channel reduction
/// used for oracle comparisons).
inline ChannelTable build_channels(const ProblemConfig& cfg, int truncation,
                                   bool require_closed_tail = true) {
    cfg.validate();
    if (truncation < cfg.n0)
        throw truncation_error("truncation order " + std::to_string(truncation) +
                               " is below the incident channel n0 = " +
                               std::to_string(cfg.n0));
    const double tol = threshold_tolerance(cfg);
    ChannelTable table;
    table.channels.reserve(static_cast<size_t>(truncation));
    for (int n = 1; n <= truncation; ++n) {
        Channel c;
        c.index = n;
        c.a = channel_a(cfg, n);
        if (std::abs(c.a) <= tol) throw threshold_channel_error(n, c.a);
        if (c.a < 0.0) {
            c.kind = ChannelKind::open;
            c.k = std::sqrt(-c.a);
            ++table.open_count;
        } else {
            c.kind = ChannelKind::closed;
            c.lambda = std::sqrt(c.a);
        }
        table.channels.push_back(c);
    }
    if (require_closed_tail && table.channels.back().open())
        throw truncation_error(
            "channel n = " + std::to_string(truncation) +
            " is still open; increase the truncation order");
    return table;
}

/// Number of open channels without enumerating: a_n < 0 iff
/// n < sqrt(n0^2 + (m2/m1)(L k0 / pi)^2).
inline int open_channel_count_closed_form(const ProblemConfig& cfg) {
    cfg.validate();
    const double lk = cfg.box_length * cfg.k0 / std::numbers::pi;
    const double r = std::sqrt(double(cfg.n0) * cfg.n0 +
                               (cfg.mass2 / cfg.mass1) * lk * lk);
    const int nearest = static_cast<int>(std::lround(r));
    if (nearest >= 1) {
        const double a = channel_a(cfg, nearest);
        if (std::abs(a) <= threshold_tolerance(cfg))
            throw threshold_channel_error(nearest, a);
    }
    return static_cast<int>(std::floor(r));
}

} // namespace dbox
