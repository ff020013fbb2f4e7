#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "dbox/observables.hpp"
#include "dbox/oracle.hpp"

using namespace dbox;
using Catch::Approx;

TEST_CASE("transfer matrix: free propagation") {
    SingleChannelProblem prob{0.0, 1.0, 1, 2.3, 1.0, 1.0};
    const ReflectionTransmission rt = transfer_matrix_solve(prob);
    CHECK(std::abs(rt.r) <= 1e-12);
    CHECK(std::abs(rt.t - 1.0) <= 1e-10);
}

TEST_CASE("transfer matrix: unitarity") {
    for (double g : {1.0, -1.0, 5.0, -5.0}) {
        for (double lk0 : {0.8, 2.1, 4.9}) {
            SingleChannelProblem prob{g, 1.0, 1, lk0, 1.0, 1.0};
            const ReflectionTransmission rt = transfer_matrix_solve(prob);
            CHECK(std::norm(rt.r) + std::norm(rt.t) == Approx(1.0).margin(1e-8));
        }
    }
}

TEST_CASE("transfer matrix: stable under further step doubling") {
    SingleChannelProblem prob{3.0, 1.0, 1, 2.0, 1.0, 1.0};
    const ReflectionTransmission rt = transfer_matrix_solve(prob);
    const ReflectionTransmission finer = detail::transfer_matrix_once(prob, 2 * rt.steps);
    CHECK(std::abs(std::abs(finer.r) - std::abs(rt.r)) <= 1e-6);
}

TEST_CASE("transfer matrix: invalid problems are rejected") {
    SingleChannelProblem prob{1.0, 1.0, 1, -2.0, 1.0, 1.0};
    CHECK_THROWS_AS(transfer_matrix_solve(prob), config_error);
}

TEST_CASE("transfer matrix agrees with the single-channel solve") {
    const ProblemConfig cfg = ProblemConfig::from_dimensionless(1.0, 3.0, 1);
    const KernelContext ctx = KernelContext::make(cfg, 1, false);
    const OutcomeReport rep =
        probabilities(solve_dense(ctx, Discretization::trapezoid(801, 1.0)));
    const ReflectionTransmission rt =
        transfer_matrix_solve(SingleChannelProblem::from_config(cfg));
    REQUIRE(rep.outcomes.size() == 1);
    CHECK(std::abs(rep.outcomes[0].p_minus - std::norm(rt.r)) <= 1e-4);
    CHECK(std::abs(rep.outcomes[0].p_plus - std::norm(rt.t)) <= 1e-4);
}

TEST_CASE("fine-grid rhs oracle") {
    SECTION("zero coupling") {
        const ProblemConfig cfg = ProblemConfig::from_dimensionless(0.0, 3.0, 1);
        const KernelContext ctx = KernelContext::make(cfg, 3, false);
        CHECK(fine_rhs(ctx, 1, 0.5) == std::complex<double>{0.0, 0.0});
    }
    SECTION("agrees with the production quadrature at N = 401") {
        const ProblemConfig cfg = ProblemConfig::from_dimensionless(1.0, 3.0, 1);
        const KernelContext ctx = KernelContext::make(cfg, 3, false);
        const Discretization quad = Discretization::trapezoid(401, 1.0);
        for (double x : {0.25, 0.5, 1.0}) {
            for (int n : {1, 2, 3}) {
                const auto exact = fine_rhs(ctx, n, x);
                const auto approx = rhs(ctx, n, x, quad);
                CHECK(std::abs(approx - exact) <= 1e-4 * std::max(std::abs(exact), 1e-6));
            }
        }
    }
    SECTION("open channels pick up a phase from the outgoing wave") {
        const ProblemConfig cfg = ProblemConfig::from_dimensionless(2.0, 3.0, 1);
        const KernelContext ctx = KernelContext::make(cfg, 3, false);
        CHECK(std::abs(fine_rhs(ctx, 1, 0.37).imag()) > 1e-6);
    }
}
