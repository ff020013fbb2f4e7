#pragma once

// Green's functions, interaction kernel and right-hand side of the coupled
// Fredholm system
//
//                        T    / L
//     Phi_n(x)    +     sum   |   G_n(x-x') A_{nn'}(x') Phi_n'(x') dx'
//                       n'=1  / 0
//
//                         / L
//                  =  -   |   G_n(x-x') A_{nn0}(x') e^{i k0 x'} dx'  =: f_n(x)
//                         / 0
//
// with  A_{nn'}(x) = (4 m1 mu0 / hbar^2 L) sin(n pi x / L) sin(n' pi x / L)
// and G_n the outgoing/decaying resolvent of -d^2/dx^2 + a_n:
//
//     a_n < 0:  G_n(x) = -e^{i k_n |x|} / (2 i k_n)
//     a_n > 0:  G_n(x) =  e^{-lambda_n |x|} / (2 lambda_n)
//
// so that -G_n'' + a_n G_n = delta(x).
//
// f_n is evaluated with the same trapezoidal rule and grid as the system
// matrix, which keeps the discrete system consistent and the observables
// cleanly second order.

#include <cmath>
#include <complex>
#include <numbers>

#include "dbox/channels.hpp"
#include "dbox/discretization.hpp"

namespace dbox {

struct KernelContext {
    ProblemConfig config;
    ChannelTable table;
    double coupling_prefactor = 0.0; // 4 m1 mu0 / (hbar^2 L)

    KernelContext(ProblemConfig cfg, ChannelTable tbl)
        : config(cfg), table(std::move(tbl)) {
        coupling_prefactor = 4.0 * config.mass1 * config.coupling /
                             (config.hbar * config.hbar * config.box_length);
    }

    static KernelContext make(const ProblemConfig& cfg, int truncation,
                              bool require_closed_tail = true) {
        return KernelContext(cfg, build_channels(cfg, truncation, require_closed_tail));
    }

    int truncation() const { return table.truncation(); }
};

/// G_n(x). Even in x; real and positive for closed channels, constant
/// modulus 1/(2 k_n) for open ones.
inline std::complex<double> greens(const Channel& c, double x) {
    const double ax = std::abs(x);
    if (c.open()) {
        // -e^{i k |x|} / (2 i k) = (i / 2k) e^{i k |x|}
        const double ph = c.k * ax;
        return std::complex<double>(0.0, 0.5 / c.k) *
               std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return {std::exp(-c.lambda * ax) / (2.0 * c.lambda), 0.0};
}

/// A_{nn'}(x) for x in [0, L]; symmetric in (n, n').
inline double interaction(const KernelContext& ctx, int n, int nprime, double x) {
    const int t = ctx.truncation();
    if (n < 1 || n > t || nprime < 1 || nprime > t)
        throw std::invalid_argument("interaction: channel index out of range");
    const double length = ctx.config.box_length;
    if (x < 0.0 || x > length)
        throw std::domain_error("interaction: x outside [0, L]");
    const double s = std::numbers::pi * x / length;
    return ctx.coupling_prefactor * std::sin(n * s) * std::sin(nprime * s);
}

/// Composite Nystrom kernel K_{n1 n2}(x_i, x_j) = G_{n1}(x_i - x_j) A_{n1 n2}(x_j).
inline std::complex<double> nystrom_kernel(const KernelContext& ctx, int n1, int n2,
                                           double xi, double xj) {
    if (xi < 0.0 || xi > ctx.config.box_length)
        throw std::domain_error("nystrom_kernel: xi outside [0, L]");
    return greens(ctx.table.channel(n1), xi - xj) * interaction(ctx, n1, n2, xj);
}

/// Trapezoidal approximation of f_n(x) on the given grid. The kink of
/// G_n(x - x') at x' = x stays on a node whenever x is one of the quadrature
/// nodes, which is how the solver uses it.
inline std::complex<double> rhs(const KernelContext& ctx, int n, double x,
                                const Discretization& quad) {
    const Channel& ch = ctx.table.channel(n);
    const double k0 = ctx.config.k0;
    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < quad.n_nodes; ++j) {
        const double xj = quad.nodes[j];
        const std::complex<double> inc{std::cos(k0 * xj), std::sin(k0 * xj)};
        acc += quad.weights[j] * greens(ch, x - xj) *
               interaction(ctx, n, ctx.config.n0, xj) * inc;
    }
    return -acc;
}

} // namespace dbox
