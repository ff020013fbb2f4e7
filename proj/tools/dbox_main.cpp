// Command-line front end: solve a single configuration, sweep the incident
// wavenumber, or run the (T, N = 2T) refinement study. Results go to CSV and
// JSON (plus SVG panels for sweeps); diagnostics go to standard output.
//
// Exit codes: 0 success, 1 configuration error, 2 solver/physics error.

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbox/dbox.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;
    double mem_budget_gib = 8.0;
    bool svg = true;
    long long seed = 0; // reserved; the core is deterministic
};

void add_common_flags(CLI::App* cmd, Options& opts) {
    cmd->add_option("--config", opts.config_path, "run configuration file")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
    cmd->add_option("--workers", opts.workers, "worker threads (0 = hardware)");
    cmd->add_option("--mem-budget", opts.mem_budget_gib, "memory budget in GiB");
    cmd->add_flag("--svg,!--no-svg", opts.svg, "emit SVG panels (sweep only)");
    cmd->add_option("--seed", opts.seed, "reserved");
}

std::string out_path(const Options& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / name).string();
}

dbox::ScatteringSolution solve_route(const dbox::RunConfig& cfg,
                                     const dbox::KernelContext& ctx,
                                     const dbox::Discretization& disc) {
    return cfg.solver == dbox::SolverKind::dense ? dbox::solve_dense(ctx, disc)
                                                 : dbox::solve_separable(ctx, disc);
}

int cmd_solve(const Options& opts) {
    const dbox::RunConfig cfg = dbox::parse_config_file(opts.config_path);
    const dbox::ProblemConfig problem = cfg.problem();
    const dbox::KernelContext ctx = dbox::KernelContext::make(problem, cfg.truncation);
    const dbox::Discretization disc =
        dbox::Discretization::trapezoid(cfg.effective_nodes(), problem.box_length);
    const dbox::ScatteringSolution sol = solve_route(cfg, ctx, disc);
    const dbox::OutcomeReport report = dbox::probabilities(sol);

    dbox::io::write_text(out_path(opts, "solve.csv"), dbox::io::solve_csv(report));
    dbox::io::write_text(out_path(opts, "solve.json"),
                         dbox::io::solve_json(report, cfg.raw).dump(2) + "\n");

    std::printf("open channels: %zu\n", report.outcomes.size());
    std::printf("unitarity defect: %s\n",
                dbox::io::format17(report.unitarity_defect).c_str());
    std::printf("flux left/right: %s %s\n", dbox::io::format17(report.flux_left).c_str(),
                dbox::io::format17(report.flux_right).c_str());
    std::printf("condition estimate: %.3e\n", report.cond_estimate);
    return 0;
}

int cmd_sweep(const Options& opts) {
    const dbox::RunConfig cfg = dbox::parse_config_file(opts.config_path);
    dbox::SweepPlan plan = cfg.sweep_plan();
    plan.workers = opts.workers;
    plan.memory_budget_gib = opts.mem_budget_gib;
    const dbox::SweepResult result = dbox::run_sweep(plan);

    dbox::io::write_text(out_path(opts, "sweep.csv"), dbox::io::sweep_csv(result));
    dbox::io::write_text(out_path(opts, "sweep.json"),
                         dbox::io::sweep_json(result, cfg.raw).dump(2) + "\n");

    if (opts.svg) {
        struct Panel {
            const char* file;
            const char* title;
            double dbox::ChannelOutcome::* field;
        };
        const Panel panels[] = {
            {"sweep_p_total.svg", "total outcome probability p_n", &dbox::ChannelOutcome::p_total},
            {"sweep_p_minus.svg", "reflection probability p_n^-", &dbox::ChannelOutcome::p_minus},
            {"sweep_p_plus.svg", "transmission probability p_n^+", &dbox::ChannelOutcome::p_plus},
        };
        for (const Panel& panel : panels) {
            // series indexed by outcome n; the incident channel n0 is omitted
            // from the panels, matching the usual change-of-state presentation
            std::map<int, std::vector<std::pair<double, double>>> series;
            for (const dbox::SweepPoint& p : result.points) {
                if (p.status != dbox::PointStatus::ok &&
                    p.status != dbox::PointStatus::nudged)
                    continue;
                for (const dbox::ChannelOutcome& o : p.report.outcomes)
                    if (o.n != plan.n0) series[o.n].emplace_back(p.lk0, o.*(panel.field));
            }
            dbox::svg::LineChart chart(panel.title, "L k0", "probability", cfg.svg_log_y);
            for (const auto& [n, pts] : series) chart.add_series("n = " + std::to_string(n), pts);
            chart.write(out_path(opts, panel.file));
        }
    }

    size_t nudged = 0, rows = 0, rows_ok = 0;
    for (const auto& p : result.points) {
        const bool good =
            p.status == dbox::PointStatus::ok || p.status == dbox::PointStatus::nudged;
        const size_t point_rows = good ? p.report.outcomes.size() : 1;
        rows += point_rows;
        if (good) rows_ok += point_rows;
        if (p.status == dbox::PointStatus::nudged) {
            ++nudged;
            std::fprintf(stderr, "note: Lk0 = %s nudged to %s (threshold channel)\n",
                         dbox::io::format17(p.lk0_requested).c_str(),
                         dbox::io::format17(p.lk0).c_str());
        }
    }
    std::printf("sweep points: %zu ok: %zu nudged: %zu wall: %.1fs\n",
                result.points.size(), result.ok_count(), nudged, result.wall_seconds);
    const double ok_fraction = rows > 0 ? double(rows_ok) / double(rows) : 0.0;
    return ok_fraction >= 0.99 ? 0 : 2;
}

int cmd_converge(const Options& opts) {
    const dbox::RunConfig cfg = dbox::parse_config_file(opts.config_path);
    const dbox::ConvergenceResult result = dbox::run_convergence(cfg.convergence_plan());

    dbox::io::write_text(out_path(opts, "converge.csv"), dbox::io::converge_csv(result));
    dbox::io::write_text(out_path(opts, "converge.json"),
                         dbox::io::converge_json(result, cfg.raw).dump(2) + "\n");
    std::printf("fitted slope: %s\n", dbox::io::format17(result.slope).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled-channel contact scattering off a particle in a box"};
    app.require_subcommand(1);

    Options solve_opts, sweep_opts, conv_opts;
    CLI::App* solve = app.add_subcommand("solve", "single-point solve");
    add_common_flags(solve, solve_opts);
    CLI::App* sweep = app.add_subcommand("sweep", "incident-wavenumber sweep");
    add_common_flags(sweep, sweep_opts);
    CLI::App* converge = app.add_subcommand("converge", "refinement study");
    add_common_flags(converge, conv_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts);
        if (converge->parsed()) return cmd_converge(conv_opts);
    } catch (const dbox::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
