#pragma once

// Experiment drivers: Lk0 sweeps producing outcome-probability tables, and
// the simultaneous (T, N = 2T) refinement study.
//
// Every grid point is an isolated solve, so points run on a small worker
// pool. Results are written into per-index slots, which makes the output
// independent of worker count and scheduling order. The pool width is capped
// so that at most W systems are resident at once within the memory budget.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "dbox/observables.hpp"

namespace dbox {

enum class SolverKind { dense, separable };

struct SweepPlan {
    std::vector<double> lk0_grid;  // dimensionless L*k0 values, strictly increasing
    double g = 1.0;                // dimensionless interaction strength
    int n0 = 1;
    double mass_ratio = 1.0;       // m1 / m2
    int truncation = 50;           // T
    int nodes = 0;                 // N; 0 means the N = 2T default
    SolverKind solver = SolverKind::dense;
    int workers = 0;               // 0 means hardware concurrency
    double memory_budget_gib = 8.0;

    int effective_nodes() const { return nodes > 0 ? nodes : 2 * truncation; }

    /// count points strictly inside (lo, hi): lo + (hi-lo) * i/(count+1).
    static std::vector<double> open_interval_grid(double lo, double hi, int count) {
        if (count < 1 || !(hi > lo))
            throw config_error("sweep grid needs count >= 1 and hi > lo");
        std::vector<double> grid(static_cast<size_t>(count));
        for (int i = 1; i <= count; ++i)
            grid[static_cast<size_t>(i) - 1] = lo + (hi - lo) * (double(i) / (count + 1));
        return grid;
    }
};

enum class PointStatus { ok, nudged, threshold_channel, singular_system, failed };

inline const char* to_string(PointStatus s) {
    switch (s) {
        case PointStatus::ok: return "ok";
        case PointStatus::nudged: return "nudged";
        case PointStatus::threshold_channel: return "threshold_channel";
        case PointStatus::singular_system: return "singular_system";
        case PointStatus::failed: return "failed";
    }
    return "unknown";
}

struct SweepPoint {
    double lk0 = 0.0;           // value actually solved (after any nudge)
    double lk0_requested = 0.0; // value from the plan grid
    PointStatus status = PointStatus::failed;
    std::string message;
    OutcomeReport report; // meaningful when status is ok or nudged
};

struct SweepResult {
    std::vector<SweepPoint> points; // one per plan point, plan order
    double wall_seconds = 0.0;

    size_t ok_count() const {
        size_t n = 0;
        for (const auto& p : points)
            if (p.status == PointStatus::ok || p.status == PointStatus::nudged) ++n;
        return n;
    }
};

namespace detail {

inline ScatteringSolution solve_with(SolverKind solver, const KernelContext& ctx,
                                     const Discretization& disc) {
    return solver == SolverKind::dense ? solve_dense(ctx, disc)
                                       : solve_separable(ctx, disc);
}

inline SweepPoint solve_sweep_point(const SweepPlan& plan, double lk0_requested,
                                    double grid_spacing) {
    SweepPoint point;
    point.lk0_requested = lk0_requested;
    point.lk0 = lk0_requested;

    const int n_nodes = plan.effective_nodes();
    // Threshold grid points are nudged by a spacing-scaled sliver (and
    // flagged) instead of dropped, so figure grids stay dense.
    const double nudge = std::max(grid_spacing, lk0_requested * 1e-3) * 1e-6;
    try {
        KernelContext ctx = [&] {
            for (int attempt = 0;; ++attempt) {
                try {
                    const ProblemConfig cfg = ProblemConfig::from_dimensionless(
                        plan.g, point.lk0, plan.n0, plan.mass_ratio);
                    return KernelContext::make(cfg, plan.truncation);
                } catch (const threshold_channel_error&) {
                    if (attempt >= 8) throw;
                    point.lk0 = lk0_requested + (attempt + 1) * nudge;
                    point.status = PointStatus::nudged;
                }
            }
        }();
        const Discretization disc = Discretization::trapezoid(n_nodes, ctx.config.box_length);
        const ScatteringSolution sol = solve_with(plan.solver, ctx, disc);
        point.report = probabilities(sol);
        if (point.status != PointStatus::nudged) point.status = PointStatus::ok;
    } catch (const threshold_channel_error& e) {
        point.status = PointStatus::threshold_channel;
        point.message = e.what();
    } catch (const singular_system_error& e) {
        point.status = PointStatus::singular_system;
        point.message = e.what();
    } catch (const std::exception& e) {
        point.status = PointStatus::failed;
        point.message = e.what();
    }
    return point;
}

inline int effective_workers(int requested, double budget_gib, double bytes_per_point,
                             size_t n_points) {
    int w = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    const double budget = budget_gib * 1024.0 * 1024.0 * 1024.0;
    const int by_memory =
        std::max(1, static_cast<int>(budget / std::max(bytes_per_point, 1.0)));
    w = std::min(w, by_memory);
    w = std::min<int>(w, static_cast<int>(n_points));
    return std::max(w, 1);
}

} // namespace detail

inline SweepResult run_sweep(const SweepPlan& plan) {
    if (plan.lk0_grid.empty()) throw config_error("sweep grid is empty");
    for (size_t i = 1; i < plan.lk0_grid.size(); ++i)
        if (!(plan.lk0_grid[i] > plan.lk0_grid[i - 1]))
            throw config_error("sweep grid must be strictly increasing");
    if (plan.truncation < 1) throw config_error("truncation must be >= 1");

    const double nt = double(plan.truncation) * plan.effective_nodes();
    const double bytes_per_point =
        plan.solver == SolverKind::dense
            ? 16.0 * nt * nt * 1.2
            : 16.0 * (double(plan.effective_nodes()) * plan.effective_nodes() + 4.0 * nt);
    const int workers = detail::effective_workers(plan.workers, plan.memory_budget_gib,
                                                  bytes_per_point, plan.lk0_grid.size());
    const double spacing =
        plan.lk0_grid.size() >= 2 ? plan.lk0_grid[1] - plan.lk0_grid[0] : 1.0;

    SweepResult result;
    result.points.resize(plan.lk0_grid.size());
    const auto start = std::chrono::steady_clock::now();

    std::atomic<size_t> next{0};
    auto work = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= plan.lk0_grid.size()) break;
            result.points[i] = detail::solve_sweep_point(plan, plan.lk0_grid[i], spacing);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

struct ConvergencePlan {
    double lk0 = 20.0;
    double g = 80.0;
    int n0 = 1;
    double mass_ratio = 1.0;
    std::vector<int> t_list; // empty means 10, 20, ..., 100
    SolverKind solver = SolverKind::dense;

    std::vector<int> effective_t_list() const {
        if (!t_list.empty()) return t_list;
        std::vector<int> ts;
        for (int t = 10; t <= 100; t += 10) ts.push_back(t);
        return ts;
    }
};

struct ConvergencePoint {
    int truncation = 0; // finer T of the refinement pair
    double diff = 0.0;  // max over common open channels of |p_n(T) - p_n(T_prev)|
};

struct ConvergenceResult {
    std::vector<ConvergencePoint> points;
    double slope = 0.0; // least-squares slope of log(diff) vs log(T)
};

/// Refinement study with N = 2T: solve at each T, difference the outcome
/// probabilities of consecutive refinements, and fit the log-log slope.
inline ConvergenceResult run_convergence(const ConvergencePlan& plan) {
    const std::vector<int> ts = plan.effective_t_list();
    if (ts.size() < 4)
        throw config_error("convergence study needs at least 4 truncation orders");
    for (size_t i = 1; i < ts.size(); ++i)
        if (ts[i] <= ts[i - 1])
            throw config_error("truncation orders must be strictly increasing");

    std::vector<std::vector<ChannelOutcome>> outcomes;
    outcomes.reserve(ts.size());
    for (int t : ts) {
        const ProblemConfig cfg =
            ProblemConfig::from_dimensionless(plan.g, plan.lk0, plan.n0, plan.mass_ratio);
        const KernelContext ctx = KernelContext::make(cfg, t);
        const Discretization disc = Discretization::trapezoid(2 * t, cfg.box_length);
        outcomes.push_back(probabilities(detail::solve_with(plan.solver, ctx, disc)).outcomes);
    }

    ConvergenceResult result;
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        double diff = 0.0;
        for (const ChannelOutcome& coarse : outcomes[i]) {
            for (const ChannelOutcome& fine : outcomes[i + 1]) {
                if (fine.n == coarse.n) {
                    diff = std::max(diff, std::abs(fine.p_total - coarse.p_total));
                    break;
                }
            }
        }
        if (diff < 1e-14)
            throw degenerate_fit_error(
                "refinement differences underflow below 1e-14 at T = " +
                std::to_string(ts[i + 1]));
        result.points.push_back({ts[i + 1], diff});
    }

    const size_t m = result.points.size();
    double sx = 0, sy = 0;
    for (const auto& p : result.points) {
        sx += std::log(double(p.truncation));
        sy += std::log(p.diff);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (const auto& p : result.points) {
        const double dx = std::log(double(p.truncation)) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(p.diff) - my);
    }
    result.slope = sxy / sxx;
    return result;
}

} // namespace dbox
