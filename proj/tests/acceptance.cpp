// Acceptance suite: one check per shipped guarantee, each printing a single
// PASS/FAIL line. Criteria that specify the command-line surface run the
// real binary (pass its path with --cli). Exit code is the failure count.
//
// Flags:
//   --cli <path>      dbox executable (needed by criteria 1, 8, 9)
//   --scratch <dir>   working directory for configs and outputs
//   --only <k>        run a single criterion
//   --full            also run the T = 10..100 study on the dense route
//                     (needs ~7 GiB of RAM for the T = 100 block system)

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "dbox/dbox.hpp"

using namespace dbox;

namespace {

struct Args {
    std::string cli;
    std::string scratch = "acceptance_out";
    bool full = false;
    std::set<int> only;
};

int failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_cli(const Args& args, const std::string& command_tail) {
    const std::string cmd = "\"" + args.cli + "\" " + command_tail;
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream fs(line);
        std::string field;
        while (std::getline(fs, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

OutcomeReport run_point(double g, double lk0, int n0, int t, int n_nodes,
                        SolverKind solver) {
    const ProblemConfig cfg = ProblemConfig::from_dimensionless(g, lk0, n0);
    const KernelContext ctx = KernelContext::make(cfg, t);
    const Discretization disc = Discretization::trapezoid(n_nodes, cfg.box_length);
    const ScatteringSolution sol = solver == SolverKind::dense
                                       ? solve_dense(ctx, disc)
                                       : solve_separable(ctx, disc);
    return probabilities(sol);
}

// ---------------------------------------------------------------------------

void criterion_1(const Args& args) {
    const std::string dir = args.scratch + "/c1";
    std::filesystem::create_directories(dir);
    io::write_text(dir + "/run.cfg",
                   "g = 0\nlk0 = 12\nn0 = 1\ntruncation = 20\nnodes = 40\n");
    const auto start = std::chrono::steady_clock::now();
    const int code = run_cli(args, "solve --config " + dir + "/run.cfg --out " + dir +
                                       " > " + dir + "/stdout.txt 2>&1");
    const double elapsed = seconds_since(start);

    bool pass = code == 0 && elapsed < 1.0;
    std::string detail = "exit " + std::to_string(code) + ", " +
                         std::to_string(elapsed).substr(0, 5) + " s";
    const auto rows = parse_csv(read_file(dir + "/solve.csv"));
    if (rows.size() < 2) pass = false;
    double defect = 1.0;
    for (size_t i = 1; i < rows.size(); ++i) {
        const int n = std::atoi(rows[i][0].c_str());
        const double p_plus = std::strtod(rows[i][3].c_str(), nullptr);
        const double p_minus = std::strtod(rows[i][4].c_str(), nullptr);
        if (n == 1) {
            if (std::abs(p_plus - 1.0) > 1e-12 || p_minus != 0.0) pass = false;
        } else if (p_plus != 0.0 || p_minus != 0.0) {
            pass = false;
        }
    }
    const std::string js = read_file(dir + "/solve.json");
    const auto pos = js.find("\"unitarity_defect\":");
    if (pos == std::string::npos) {
        pass = false;
    } else {
        defect = std::strtod(js.c_str() + pos + 19, nullptr);
        if (defect > 1e-12) pass = false;
    }
    detail += ", defect " + io::format17(defect);
    report(1, "zero-coupling identity", pass, detail);
}

void criterion_2(const Args& args) {
    ConvergencePlan reduced;
    reduced.lk0 = 20.0;
    reduced.g = 80.0;
    reduced.n0 = 1;
    reduced.t_list = {10, 20, 30, 40, 50};
    reduced.solver = SolverKind::dense;
    const auto start = std::chrono::steady_clock::now();
    const ConvergenceResult fast = run_convergence(reduced);
    const double elapsed = seconds_since(start);

    ConvergencePlan full = reduced;
    full.t_list.clear();
    for (int t = 10; t <= 100; t += 10) full.t_list.push_back(t);
    full.solver = SolverKind::separable; // same discrete solution; the dense
                                         // T = 100 block matrix needs ~7 GiB
    const ConvergenceResult slow = run_convergence(full);

    bool pass = fast.slope >= -2.5 && fast.slope <= -1.5 && elapsed <= 180.0 &&
                slow.slope >= -2.4 && slow.slope <= -1.7;
    std::string detail = "reduced (dense) slope " + io::format17(fast.slope) + " in " +
                         std::to_string(elapsed).substr(0, 5) + " s; full slope " +
                         io::format17(slow.slope);
    if (args.full) {
        ConvergencePlan dense_full = full;
        dense_full.solver = SolverKind::dense;
        const auto t0 = std::chrono::steady_clock::now();
        const ConvergenceResult heavy = run_convergence(dense_full);
        const double t_heavy = seconds_since(t0);
        pass = pass && heavy.slope >= -2.4 && heavy.slope <= -1.7 && t_heavy <= 1800.0;
        detail += "; full dense slope " + io::format17(heavy.slope) + " in " +
                  std::to_string(t_heavy).substr(0, 6) + " s";
    }
    report(2, "second-order convergence slope", pass, detail);
}

void criterion_3(const Args&) {
    std::mt19937 rng(20260809);
    std::uniform_real_distribution<double> lk0_dist(2.0, 30.0);
    std::uniform_real_distribution<double> log_eps(std::log(0.1), std::log(10.0));
    std::uniform_int_distribution<int> n0_dist(1, 5);

    int drawn = 0, defect_ok = 0, decreased = 0;
    double worst = 0.0, bridge_gap = 0.0;
    while (drawn < 50) {
        const double lk0 = lk0_dist(rng);
        const double g = std::exp(log_eps(rng)) * lk0;
        const int n0 = n0_dist(rng);
        try {
            const OutcomeReport coarse = run_point(g, lk0, n0, 25, 50, SolverKind::separable);
            const OutcomeReport fine = run_point(g, lk0, n0, 50, 100, SolverKind::separable);
            if (drawn == 0) {
                // bridge the fast route to the dense reference at full resolution
                const OutcomeReport dense = run_point(g, lk0, n0, 50, 100, SolverKind::dense);
                for (size_t i = 0; i < dense.outcomes.size(); ++i)
                    bridge_gap = std::max(bridge_gap,
                                          std::abs(dense.outcomes[i].p_total -
                                                   fine.outcomes[i].p_total));
            }
            ++drawn;
            worst = std::max(worst, fine.unitarity_defect);
            if (fine.unitarity_defect <= 1e-2) ++defect_ok;
            if (fine.unitarity_defect > 0.0 &&
                coarse.unitarity_defect / fine.unitarity_defect >= 3.0)
                ++decreased;
        } catch (const threshold_channel_error&) {
            continue;
        }
    }
    const bool clause1 = defect_ok == 50;
    const bool clause2 = decreased >= 45;
    const bool bridge = bridge_gap <= 1e-10;
    std::string detail = "defect<=1e-2: " + std::to_string(defect_ok) + "/50 (worst " +
                         io::format17(worst) + "); >=3x decrease: " +
                         std::to_string(decreased) + "/50 (>=45 required)";
    if (!clause2)
        detail += " [the matched-quadrature discretization conserves flux exactly, so "
                  "the defect sits at the rounding floor at every resolution and does "
                  "not shrink under refinement]";
    detail += "; dense/separable gap " + io::format17(bridge_gap);
    report(3, "unitarity defect statistics", clause1 && clause2 && bridge, detail);
}

void criterion_4(const Args&) {
    const auto start = std::chrono::steady_clock::now();
    const auto grid = SweepPlan::open_interval_grid(0.5, 5.4, 20);
    double worst = 0.0;
    for (const double g : {1.0, -1.0, 5.0, -5.0}) {
        for (const double lk0 : grid) {
            const ProblemConfig cfg = ProblemConfig::from_dimensionless(g, lk0, 1);
            const KernelContext ctx = KernelContext::make(cfg, 1, false);
            const OutcomeReport rep =
                probabilities(solve_dense(ctx, Discretization::trapezoid(1201, 1.0)));
            const ReflectionTransmission rt =
                transfer_matrix_solve(SingleChannelProblem::from_config(cfg));
            worst = std::max(worst, std::abs(rep.outcomes[0].p_minus - std::norm(rt.r)));
            worst = std::max(worst, std::abs(rep.outcomes[0].p_plus - std::norm(rt.t)));
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst <= 1e-4 && elapsed < 120.0;
    report(4, "single-channel oracle equivalence", pass,
           "max |p - |r,t|^2| = " + io::format17(worst) + " over 80 runs, " +
               std::to_string(elapsed).substr(0, 5) + " s");
}

void criterion_5(const Args&) {
    const auto grid = SweepPlan::open_interval_grid(1.0, 30.0, 50);
    double worst = 0.0;
    for (const int n0 : {1, 5}) {
        for (const double lk0 : grid) {
            const OutcomeReport plus = run_point(1e4, lk0, n0, 50, 100, SolverKind::separable);
            const OutcomeReport minus =
                run_point(-1e4, lk0, n0, 50, 100, SolverKind::separable);
            for (size_t i = 0; i < plus.outcomes.size(); ++i)
                worst = std::max(worst, std::abs(plus.outcomes[i].p_total -
                                                 minus.outcomes[i].p_total));
        }
    }
    report(5, "strong-coupling sign symmetry", worst <= 1e-3,
           "max |p(+g) - p(-g)| = " + io::format17(worst));
}

void criterion_6(const Args&) {
    const OutcomeReport one = run_point(1e-8, 10.0, 1, 50, 100, SolverKind::dense);
    const OutcomeReport two = run_point(2e-8, 10.0, 1, 50, 100, SolverKind::dense);
    bool pass = one.outcomes.size() == two.outcomes.size() && one.outcomes.size() > 1;
    std::string detail = "ratios";
    for (size_t i = 0; i < one.outcomes.size() && pass; ++i) {
        if (one.outcomes[i].n == 1) continue;
        const double ratio = two.outcomes[i].p_total / one.outcomes[i].p_total;
        detail += " n=" + std::to_string(one.outcomes[i].n) + ": " +
                  io::format17(ratio).substr(0, 8);
        if (!(ratio >= 3.96 && ratio <= 4.04)) pass = false;
    }
    report(6, "weak-coupling epsilon^2 scaling", pass, detail);
}

void criterion_7(const Args&) {
    const double threshold = std::numbers::pi * std::sqrt(3.0);
    SweepPlan plan;
    plan.lk0_grid = SweepPlan::open_interval_grid(5.0, 5.9, 24);
    plan.g = 2.0;
    plan.n0 = 1;
    plan.truncation = 50;
    plan.solver = SolverKind::separable;
    const SweepResult result = run_sweep(plan);

    bool pass = true;
    std::string detail;
    for (const SweepPoint& p : result.points) {
        if (p.status != PointStatus::ok) { pass = false; break; }
        const size_t count = p.report.outcomes.size();
        const size_t expected = p.lk0 < threshold ? 1 : 2;
        if (count != expected) pass = false;
        if (p.lk0 < threshold) {
            const double p1 = p.report.outcomes[0].p_total;
            if (std::abs(p1 - 1.0) > p.report.unitarity_defect + 1e-12) pass = false;
            if (p.report.unitarity_defect > 1e-2) pass = false;
        }
    }
    for (size_t i = 0; i + 1 < result.points.size(); ++i) {
        const auto& a = result.points[i];
        const auto& b = result.points[i + 1];
        if (a.report.outcomes.size() == 1 && b.report.outcomes.size() == 2) {
            if (!(a.lk0 < threshold && threshold < b.lk0)) pass = false;
            detail = "count steps 1->2 between Lk0 = " + io::format17(a.lk0) + " and " +
                     io::format17(b.lk0) + " (threshold " + io::format17(threshold) + ")";
        }
    }
    if (detail.empty()) { pass = false; detail = "no channel-count step found"; }
    report(7, "threshold structure", pass, detail);
}

void criterion_8(const Args& args) {
    double worst = 0.0;
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> lk0_dist(2.0, 28.0);
    std::uniform_real_distribution<double> g_dist(-20.0, 20.0);
    std::uniform_int_distribution<int> n0_dist(1, 4);
    int done = 0;
    while (done < 12) {
        try {
            const OutcomeReport rep = run_point(g_dist(rng), lk0_dist(rng), n0_dist(rng),
                                                40, 80, SolverKind::separable);
            worst = std::max(worst, rep.max_energy_mismatch);
            ++done;
        } catch (const threshold_channel_error&) {
            continue;
        }
    }

    // plus the rows actually emitted by the CLI
    const std::string dir = args.scratch + "/c8";
    std::filesystem::create_directories(dir);
    io::write_text(dir + "/run.cfg",
                   "g = 2.7\nlk0 = 15.3\nn0 = 2\ntruncation = 30\nnodes = 60\n");
    bool pass = run_cli(args, "solve --config " + dir + "/run.cfg --out " + dir +
                                  " > " + dir + "/stdout.txt 2>&1") == 0;
    const auto rows = parse_csv(read_file(dir + "/solve.csv"));
    const double e0 = (15.3 * 15.3 + std::pow(2 * std::numbers::pi, 2)) / 2.0;
    if (rows.size() < 2) pass = false;
    for (size_t i = 1; i < rows.size(); ++i) {
        const double en = std::strtod(rows[i][2].c_str(), nullptr);
        worst = std::max(worst, std::abs(en - e0) / e0);
    }
    pass = pass && worst <= 1e-12;
    report(8, "energy conservation of emitted outcomes", pass,
           "max |E_n - E_0|/E_0 = " + io::format17(worst));
}

void criterion_9(const Args& args) {
    const std::string dir = args.scratch + "/c9";
    std::filesystem::create_directories(dir);
    io::write_text(dir + "/run.cfg",
                   "g = 3\nn0 = 2\nlk0_min = 2\nlk0_max = 28\nsweep_points = 40\n"
                   "truncation = 16\nnodes = 32\nsolver = dense\n");
    bool pass = true;
    for (const auto& [name, workers] :
         std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 1}, {"c", 4}}) {
        const int code =
            run_cli(args, "sweep --config " + dir + "/run.cfg --out " + dir + "/" + name +
                              " --workers " + std::to_string(workers) + " --no-svg > " +
                              dir + "/" + name + ".log 2>&1");
        if (code != 0) pass = false;
    }
    const std::string a = read_file(dir + "/a/sweep.csv");
    const std::string b = read_file(dir + "/b/sweep.csv");
    const std::string c = read_file(dir + "/c/sweep.csv");
    pass = pass && !a.empty() && a == b && a == c;
    report(9, "byte-identical sweeps across runs and worker counts", pass,
           std::to_string(a.size()) + " bytes compared");
}

} // namespace

int main(int argc, char** argv) {
    Args args;
    for (int i = 1; i < argc; ++i) {
        const std::string flag = argv[i];
        if (flag == "--cli" && i + 1 < argc) args.cli = argv[++i];
        else if (flag == "--scratch" && i + 1 < argc) args.scratch = argv[++i];
        else if (flag == "--full") args.full = true;
        else if (flag == "--only" && i + 1 < argc) args.only.insert(std::atoi(argv[++i]));
        else {
            std::fprintf(stderr, "unknown flag: %s\n", flag.c_str());
            return 64;
        }
    }
    std::filesystem::create_directories(args.scratch);

    const auto want = [&](int k) { return args.only.empty() || args.only.count(k) > 0; };
    const bool needs_cli = want(1) || want(8) || want(9);
    if (needs_cli && args.cli.empty()) {
        std::fprintf(stderr, "--cli <path to dbox binary> is required for criteria 1, 8, 9\n");
        return 64;
    }

    if (want(1)) criterion_1(args);
    if (want(2)) criterion_2(args);
    if (want(3)) criterion_3(args);
    if (want(4)) criterion_4(args);
    if (want(5)) criterion_5(args);
    if (want(6)) criterion_6(args);
    if (want(7)) criterion_7(args);
    if (want(8)) criterion_8(args);
    if (want(9)) criterion_9(args);

    if (args.only.empty())
        std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
