#pragma once

// Independent verification engines used by the test suites.
//
// transfer_matrix_solve treats the single-channel reduction of the problem
// as ordinary 1D potential scattering: phi'' = (u(x) - k0^2) phi with
// u(x) = (2 m1 / hbar^2) V(x), V(x) = (2 mu0 / L) sin^2(n0 pi x / L), and
// propagates a purely outgoing wave backwards through piecewise-constant
// slabs. No Green's functions, no quadrature grid -- deliberately disjoint
// from the kernel/nystrom code paths so agreement is a genuine cross-check.
//
// fine_rhs evaluates the same defining integral as kernel::rhs with its own
// arithmetic: the integration range is split at the kink x' = x, each smooth
// piece is integrated by composite trapezoid at two resolutions, and one
// Richardson step removes the leading error term.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "dbox/errors.hpp"
#include "dbox/kernel.hpp"

namespace dbox {

struct SingleChannelProblem {
    double coupling = 0.0;   // mu0
    double box_length = 1.0; // L
    int n0 = 1;
    double k0 = 1.0;
    double mass1 = 1.0;
    double hbar = 1.0;

    static SingleChannelProblem from_config(const ProblemConfig& cfg) {
        return {cfg.coupling, cfg.box_length, cfg.n0, cfg.k0, cfg.mass1, cfg.hbar};
    }

    /// V(x) = (2 mu0 / L) sin^2(n0 pi x / L); vanishes at both walls.
    double potential(double x) const {
        const double s = std::sin(n0 * std::numbers::pi * x / box_length);
        return 2.0 * coupling / box_length * s * s;
    }
};

struct ReflectionTransmission {
    std::complex<double> r;
    std::complex<double> t; // coefficient of e^{i k0 x} for x > L
    int steps = 0;          // slab count at convergence
};

namespace detail {

inline ReflectionTransmission transfer_matrix_once(const SingleChannelProblem& prob,
                                                   int slabs) {
    const std::complex<double> iu{0.0, 1.0};
    const double k0 = prob.k0;
    const double h = prob.box_length / slabs;
    // Start from a purely outgoing wave e^{i k0 (x - L)} at the right wall
    // and march slab by slab to the left.
    std::complex<double> value{1.0, 0.0};
    std::complex<double> deriv = iu * k0;
    for (int s = slabs - 1; s >= 0; --s) {
        const double xm = prob.box_length * (s + 0.5) / slabs;
        const double u = 2.0 * prob.mass1 / (prob.hbar * prob.hbar) * prob.potential(xm);
        std::complex<double> q = std::sqrt(std::complex<double>(k0 * k0 - u, 0.0));
        if (std::abs(q) < 1e-14) q = {1e-14, 0.0};
        // phi = alpha e^{i q (x - x_s)} + beta e^{-i q (x - x_s)} on the slab
        const std::complex<double> ep = std::exp(iu * q * h);
        const std::complex<double> alpha = 0.5 * (value + deriv / (iu * q)) / ep;
        const std::complex<double> beta = 0.5 * (value - deriv / (iu * q)) * ep;
        value = alpha + beta;
        deriv = iu * q * (alpha - beta);
    }
    // Decompose at x = 0 into incoming and reflected plane waves.
    const std::complex<double> c_in = 0.5 * (value + deriv / (iu * k0));
    const std::complex<double> c_out = 0.5 * (value - deriv / (iu * k0));
    ReflectionTransmission rt;
    rt.r = c_out / c_in;
    rt.t = std::exp(-iu * k0 * prob.box_length) / c_in;
    rt.steps = slabs;
    return rt;
}

} // namespace detail

/// Reflection and transmission amplitudes for e^{i k0 x} incident from the
/// left, converged by step doubling until |r| is stable to 1e-6. Throws
/// nonconvergence_error if that has not happened by 2^20 slabs.
inline ReflectionTransmission transfer_matrix_solve(const SingleChannelProblem& prob,
                                                    int steps = 100) {
    if (!(prob.k0 > 0.0) || !(prob.box_length > 0.0) || prob.n0 < 1 ||
        !(prob.mass1 > 0.0) || !(prob.hbar > 0.0))
        throw config_error("transfer_matrix_solve: invalid problem parameters");
    constexpr int cap = 1 << 20;
    int slabs = std::clamp(steps, 100, cap / 4); // leave room for two doublings
    ReflectionTransmission prev = detail::transfer_matrix_once(prob, slabs);
    while (slabs <= cap / 2) {
        slabs *= 2;
        const ReflectionTransmission next = detail::transfer_matrix_once(prob, slabs);
        if (std::abs(std::abs(next.r) - std::abs(prev.r)) <= 1e-6) return next;
        prev = next;
    }
    throw nonconvergence_error(
        "transfer_matrix_solve: |r| not stable to 1e-6 at 2^20 slabs");
}

/// Ground-truth evaluation of f_n(x) = -int_0^L G_n(x-x') A_{n n0}(x')
/// e^{i k0 x'} dx'. Self-contained on purpose; see file header.
inline std::complex<double> fine_rhs(const KernelContext& ctx, int n, double x) {
    const ProblemConfig& cfg = ctx.config;
    const double length = cfg.box_length;
    const double pi_l = std::numbers::pi / length;
    const double a = (cfg.mass1 / cfg.mass2) * pi_l * pi_l *
                         (double(n) * n - double(cfg.n0) * cfg.n0) -
                     cfg.k0 * cfg.k0;
    const double pref = 4.0 * cfg.mass1 * cfg.coupling / (cfg.hbar * cfg.hbar * length);

    auto green = [&](double d) -> std::complex<double> {
        const double ad = std::abs(d);
        if (a < 0.0) {
            const double k = std::sqrt(-a);
            return std::complex<double>(0.0, 0.5 / k) *
                   std::complex<double>(std::cos(k * ad), std::sin(k * ad));
        }
        const double lam = std::sqrt(a);
        return {std::exp(-lam * ad) / (2.0 * lam), 0.0};
    };
    auto integrand = [&](double xp) -> std::complex<double> {
        const std::complex<double> inc{std::cos(cfg.k0 * xp), std::sin(cfg.k0 * xp)};
        return green(x - xp) * pref * std::sin(n * pi_l * xp) *
               std::sin(cfg.n0 * pi_l * xp) * inc;
    };
    auto trapezoid = [&](double lo, double hi, int intervals) -> std::complex<double> {
        if (hi <= lo) return {0.0, 0.0};
        const double step = (hi - lo) / intervals;
        std::complex<double> acc = 0.5 * (integrand(lo) + integrand(hi));
        for (int j = 1; j < intervals; ++j) acc += integrand(lo + j * step);
        return acc * step;
    };
    auto both_pieces = [&](int intervals) {
        return trapezoid(0.0, x, intervals) + trapezoid(x, length, intervals);
    };
    const std::complex<double> coarse = both_pieces(6400);
    const std::complex<double> fine = both_pieces(12800);
    return -(4.0 * fine - coarse) / 3.0;
}

} // namespace dbox
