#pragma once

// Nystrom discretization of the truncated coupled-channel system.
//
// Collocating the T retained integral equations at the N trapezoidal nodes
// gives an NT x NT dense complex block system B Phi = f, stored channel-major
// (block (n1, n2) occupies rows (n1-1)N+1..n1 N and the matching columns):
//
//     B^{ij}_{n1 n2} = delta_ij delta_{n1 n2} + K^{ij}_{n1 n2} w_j,
//     K^{ij}_{n1 n2} = G_{n1}(x_i - x_j) A_{n1 n2}(x_j).
//
// The kink of G_n(x - x') at x' = x always lies on a node, so composite
// trapezoid keeps its O(h^2) accuracy with no diagonal correction.
//
// Two solve routes are provided:
//   * solve()           -- dense LU with partial pivoting on the full block
//                          matrix (LAPACK zgetrf/zgetrs), the reference route;
//   * solve_separable() -- exact elimination of the channel structure. The
//                          contact interaction factorizes, A_{nn'}(x) =
//                          c sin(n pi x/L) sin(n' pi x/L), so the block system
//                          reduces to an N x N system for the collapsed
//                          unknown psi(x_j) = sum_n sin(n pi x_j/L) Phi_n(x_j);
//                          the Phi_n are then recovered by back-substitution.
//                          Same discrete solution up to rounding, at a tiny
//                          fraction of the cost; intended for large sweeps.

#include <complex>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <lapacke.h>

#include "dbox/discretization.hpp"
#include "dbox/kernel.hpp"

namespace dbox {

struct BlockSystem {
    ProblemConfig config;
    ChannelTable table;
    Discretization disc;
    Eigen::MatrixXcd matrix;     // NT x NT, channel-major blocks
    Eigen::VectorXcd rhs_vector; // stacked f_n(x_i)

    Eigen::Index dimension() const { return matrix.rows(); }
};

struct SolveInfo {
    double matrix_inf_norm = 0.0;
    double min_pivot = 0.0;
    double rcond = 0.0;          // LAPACK inf-norm reciprocal condition estimate
    double cond_estimate = 0.0;  // 1 / rcond
};

struct ScatteringSolution {
    ProblemConfig config;
    ChannelTable table;
    Discretization disc;
    Eigen::MatrixXcd amplitudes; // N x T; Phi_n(x_j) = amplitudes(j, n-1)
    SolveInfo info;

    std::complex<double> boundary_left(int n) const { return amplitudes(0, n - 1); }
    std::complex<double> boundary_right(int n) const {
        return amplitudes(disc.n_nodes - 1, n - 1);
    }
};

namespace detail {

// Everything the assembly needs, tabulated once per (config, T, N):
// sines(j, n-1) = sin(n pi x_j / L), greens_dist(d, n-1) = G_n(x_d) with
// x_d = d h the node distances, incident(j) = e^{i k0 x_j}.
struct AssemblyTables {
    Eigen::MatrixXd sines;
    Eigen::MatrixXcd greens_dist;
    Eigen::VectorXcd incident;
};

inline AssemblyTables make_tables(const KernelContext& ctx, const Discretization& disc) {
    const int t = ctx.truncation();
    const int n_nodes = disc.n_nodes;
    const double length = ctx.config.box_length;
    AssemblyTables tab;
    tab.sines.resize(n_nodes, t);
    tab.greens_dist.resize(n_nodes, t);
    tab.incident.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        const double ph = ctx.config.k0 * disc.nodes[j];
        tab.incident[j] = {std::cos(ph), std::sin(ph)};
    }
    for (int n = 1; n <= t; ++n) {
        const Channel& ch = ctx.table.channel(n);
        for (int j = 0; j < n_nodes; ++j) {
            tab.sines(j, n - 1) = std::sin(n * std::numbers::pi * disc.nodes[j] / length);
            tab.greens_dist(j, n - 1) = greens(ch, disc.nodes[j]);
        }
    }
    return tab;
}

// Stacked right-hand side f_n(x_i) from the tables (matched quadrature).
inline Eigen::VectorXcd assemble_rhs(const KernelContext& ctx, const Discretization& disc,
                                     const AssemblyTables& tab) {
    const int t = ctx.truncation();
    const int n_nodes = disc.n_nodes;
    const int n0 = ctx.config.n0;
    const double pref = ctx.coupling_prefactor;
    Eigen::VectorXcd f(static_cast<Eigen::Index>(t) * n_nodes);
    for (int n = 1; n <= t; ++n) {
        const Eigen::Index base = static_cast<Eigen::Index>(n - 1) * n_nodes;
        for (int i = 0; i < n_nodes; ++i) {
            std::complex<double> acc{0.0, 0.0};
            for (int j = 0; j < n_nodes; ++j) {
                acc += disc.weights[j] * tab.greens_dist(std::abs(i - j), n - 1) *
                       tab.sines(j, n - 1) * tab.sines(j, n0 - 1) * tab.incident[j];
            }
            f[base + i] = -pref * acc;
        }
    }
    return f;
}

struct LuFactors {
    Eigen::MatrixXcd lu;
    std::vector<lapack_int> pivots;
    SolveInfo info;
};

// In-place LU with partial pivoting plus the contract checks: the matrix is
// consumed, a pivot below 1e-14 * ||B||_inf raises singular_system_error, and
// an inf-norm condition estimate is recorded.
inline LuFactors lu_factorize(Eigen::MatrixXcd matrix, const std::string& what) {
    const lapack_int n = static_cast<lapack_int>(matrix.rows());
    LuFactors fac;
    fac.info.matrix_inf_norm = LAPACKE_zlange(
        LAPACK_COL_MAJOR, 'I', n, n,
        reinterpret_cast<const lapack_complex_double*>(matrix.data()), n);
    fac.pivots.resize(static_cast<size_t>(n));
    const lapack_int ret = LAPACKE_zgetrf(
        LAPACK_COL_MAJOR, n, n,
        reinterpret_cast<lapack_complex_double*>(matrix.data()), n, fac.pivots.data());
    if (ret < 0) throw std::runtime_error(what + ": invalid argument to zgetrf");
    double min_pivot = std::numeric_limits<double>::infinity();
    for (lapack_int i = 0; i < n; ++i)
        min_pivot = std::min(min_pivot, std::abs(matrix(i, i)));
    fac.info.min_pivot = min_pivot;
    if (ret > 0 || min_pivot < 1e-14 * fac.info.matrix_inf_norm)
        throw singular_system_error(
            what + ": system is singular to working precision (min pivot " +
            std::to_string(min_pivot) + ", ||B||_inf " +
            std::to_string(fac.info.matrix_inf_norm) + ")");
    double rcond = 0.0;
    LAPACKE_zgecon(LAPACK_COL_MAJOR, 'I', n,
                   reinterpret_cast<const lapack_complex_double*>(matrix.data()), n,
                   fac.info.matrix_inf_norm, &rcond);
    fac.info.rcond = rcond;
    fac.info.cond_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    fac.lu = std::move(matrix);
    return fac;
}

inline Eigen::VectorXcd lu_solve(const LuFactors& fac, Eigen::VectorXcd rhs) {
    const lapack_int n = static_cast<lapack_int>(fac.lu.rows());
    const lapack_int ret = LAPACKE_zgetrs(
        LAPACK_COL_MAJOR, 'N', n, 1,
        reinterpret_cast<const lapack_complex_double*>(fac.lu.data()), n,
        fac.pivots.data(), reinterpret_cast<lapack_complex_double*>(rhs.data()), n);
    if (ret != 0) throw std::runtime_error("zgetrs failed");
    return rhs;
}

} // namespace detail

/// Assemble the full NT x NT block system and its right-hand side.
inline BlockSystem assemble(const KernelContext& ctx, const Discretization& disc) {
    const int t = ctx.truncation();
    const int n_nodes = disc.n_nodes;
    const Eigen::Index dim = static_cast<Eigen::Index>(t) * n_nodes;
    const detail::AssemblyTables tab = detail::make_tables(ctx, disc);
    const double pref = ctx.coupling_prefactor;

    BlockSystem sys;
    sys.config = ctx.config;
    sys.table = ctx.table;
    sys.disc = disc;
    try {
        sys.matrix.resize(dim, dim);
        sys.rhs_vector = detail::assemble_rhs(ctx, disc, tab);
    } catch (const std::bad_alloc&) {
        throw std::runtime_error("assemble: cannot allocate an NT x NT system with NT = " +
                                 std::to_string(dim));
    }

    for (int n2 = 1; n2 <= t; ++n2) {
        for (int j = 0; j < n_nodes; ++j) {
            const Eigen::Index col = static_cast<Eigen::Index>(n2 - 1) * n_nodes + j;
            auto column = sys.matrix.col(col);
            const double wj = disc.weights[j];
            for (int n1 = 1; n1 <= t; ++n1) {
                const double coeff = pref * tab.sines(j, n1 - 1) * tab.sines(j, n2 - 1) * wj;
                const Eigen::Index base = static_cast<Eigen::Index>(n1 - 1) * n_nodes;
                for (int i = 0; i < n_nodes; ++i)
                    column[base + i] = tab.greens_dist(std::abs(i - j), n1 - 1) * coeff;
            }
            column[static_cast<Eigen::Index>(n2 - 1) * n_nodes + j] += 1.0;
        }
    }
    return sys;
}

/// Dense LU solve of B Phi = f. Consumes the system (the factorization
/// overwrites the matrix).
inline ScatteringSolution solve(BlockSystem sys) {
    const int n_nodes = sys.disc.n_nodes;
    const int t = sys.table.truncation();
    detail::LuFactors fac = detail::lu_factorize(std::move(sys.matrix), "solve");
    Eigen::VectorXcd x = detail::lu_solve(fac, sys.rhs_vector);

    ScatteringSolution sol;
    sol.config = sys.config;
    sol.table = std::move(sys.table);
    sol.disc = std::move(sys.disc);
    sol.info = fac.info;
    sol.amplitudes = Eigen::Map<Eigen::MatrixXcd>(x.data(), n_nodes, t);
    return sol;
}

/// assemble + solve in one call.
inline ScatteringSolution solve_dense(const KernelContext& ctx, const Discretization& disc) {
    return solve(assemble(ctx, disc));
}

/// Exact channel-collapsed solve (see file header). Produces the same
/// discrete solution as solve(assemble(...)) up to rounding.
inline ScatteringSolution solve_separable(const KernelContext& ctx,
                                          const Discretization& disc) {
    const int t = ctx.truncation();
    const int n_nodes = disc.n_nodes;
    const double pref = ctx.coupling_prefactor;
    const detail::AssemblyTables tab = detail::make_tables(ctx, disc);

    // M psi = b with M(i,j) = delta_ij + pref w_j sum_n S_n(x_i) G_n(x_i-x_j) S_n(x_j)
    Eigen::MatrixXcd reduced(n_nodes, n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        const double wj = disc.weights[j];
        for (int i = 0; i < n_nodes; ++i) {
            std::complex<double> acc{0.0, 0.0};
            const int d = std::abs(i - j);
            for (int n = 0; n < t; ++n)
                acc += tab.sines(i, n) * tab.greens_dist(d, n) * tab.sines(j, n);
            reduced(i, j) = pref * wj * acc;
        }
        reduced(j, j) += 1.0;
    }

    const Eigen::VectorXcd f = detail::assemble_rhs(ctx, disc, tab);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n_nodes);
    for (int n = 0; n < t; ++n) {
        const Eigen::Index base = static_cast<Eigen::Index>(n) * n_nodes;
        for (int i = 0; i < n_nodes; ++i) b[i] += tab.sines(i, n) * f[base + i];
    }

    detail::LuFactors fac = detail::lu_factorize(std::move(reduced), "solve_separable");
    const Eigen::VectorXcd psi = detail::lu_solve(fac, std::move(b));

    ScatteringSolution sol;
    sol.config = ctx.config;
    sol.table = ctx.table;
    sol.disc = disc;
    sol.info = fac.info; // condition of the reduced system
    sol.amplitudes.resize(n_nodes, t);
    for (int n = 0; n < t; ++n) {
        const Eigen::Index base = static_cast<Eigen::Index>(n) * n_nodes;
        for (int i = 0; i < n_nodes; ++i) {
            std::complex<double> acc{0.0, 0.0};
            for (int j = 0; j < n_nodes; ++j)
                acc += tab.greens_dist(std::abs(i - j), n) * tab.sines(j, n) *
                       disc.weights[j] * psi[j];
            sol.amplitudes(i, n) = f[base + i] - pref * acc;
        }
    }
    return sol;
}

/// Exterior extension of the channel amplitudes: for x >= L open channels
/// carry Phi_n(L) e^{i k_n (x-L)} and closed ones Phi_n(L) e^{-lambda_n (x-L)};
/// for x <= 0 the mirrored left-going / decaying analogs with Phi_n(0). The
/// full amplitude phi_n adds delta_{n n0} e^{i k0 x} on top.
inline std::vector<std::complex<double>> extend_solution(const ScatteringSolution& sol,
                                                         double x) {
    const double length = sol.config.box_length;
    if (x > 0.0 && x < length)
        throw std::domain_error("extend_solution: interior values live on the grid");
    const int t = sol.table.truncation();
    std::vector<std::complex<double>> values(static_cast<size_t>(t));
    for (int n = 1; n <= t; ++n) {
        const Channel& ch = sol.table.channel(n);
        if (x >= length) {
            const double d = x - length;
            const std::complex<double> factor =
                ch.open() ? std::complex<double>{std::cos(ch.k * d), std::sin(ch.k * d)}
                          : std::complex<double>{std::exp(-ch.lambda * d), 0.0};
            values[n - 1] = sol.boundary_right(n) * factor;
        } else {
            const std::complex<double> factor =
                ch.open() ? std::complex<double>{std::cos(ch.k * x), -std::sin(ch.k * x)}
                          : std::complex<double>{std::exp(ch.lambda * x), 0.0};
            values[n - 1] = sol.boundary_left(n) * factor;
        }
    }
    return values;
}

/// Debug dump of B and f: 16-byte header (magic "DBOX", u32 N, u32 T, u32
/// reserved), then B as row-major little-endian (re, im) float64 pairs,
/// then f.
inline void dump_system(const BlockSystem& sys, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_system: cannot open " + path);
    const char magic[4] = {'D', 'B', 'O', 'X'};
    const std::uint32_t n = static_cast<std::uint32_t>(sys.disc.n_nodes);
    const std::uint32_t t = static_cast<std::uint32_t>(sys.table.truncation());
    const std::uint32_t reserved = 0;
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&t), 4);
    out.write(reinterpret_cast<const char*>(&reserved), 4);
    const Eigen::Index dim = sys.dimension();
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            const std::complex<double> z = sys.matrix(i, j);
            const double re = z.real(), im = z.imag();
            out.write(reinterpret_cast<const char*>(&re), 8);
            out.write(reinterpret_cast<const char*>(&im), 8);
        }
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        const std::complex<double> z = sys.rhs_vector[i];
        const double re = z.real(), im = z.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!out) throw std::runtime_error("dump_system: write failed for " + path);
}

} // namespace dbox
