#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cdmaseq/interference.hpp"
#include "cdmaseq/optimizer.hpp"
#include "cdmaseq/sequences.hpp"
#include "cdmaseq/spectral.hpp"
#include "oracles.hpp"

using namespace cdmaseq;

TEST_CASE("realify and complexify") {
    ComplexVector x(2);
    x << Complex{1.0, 2.0}, 3.0;
    RealVector expected(4);
    expected << 1.0, 3.0, 2.0, 0.0;
    CHECK((realify(x) - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK((complexify(expected) - x).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(complexify(RealVector::Zero(3)), std::domain_error);

    std::mt19937_64 rng(43);
    for (int n : {2, 5, 16}) {
        const ComplexMatrix m = ComplexMatrix::Random(n, n);
        const ComplexVector v = oracle::random_complex(n, rng);
        CHECK((realify(m) * realify(v) - realify(ComplexVector(m * v))).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((complexify(realify(v)) - v).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("real coupling matrices are orthogonal, N = 2..64") {
    for (int n = 2; n <= 64; ++n) {
        const RealCouplingMatrices r = real_coupling_matrices(n);
        const RealMatrix id = RealMatrix::Identity(2 * n, 2 * n);
        CHECK((r.phi_r.transpose() * r.phi_r - id).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((r.phi_hat_r.transpose() * r.phi_hat_r - id).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((r.phi_r * r.phi_hat_r - id).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("objective equals the complex S_m sum") {
    std::mt19937_64 rng(47);
    for (int n : {3, 8, 31}) {
        const ComplexVector a1 = oracle::random_feasible(n, rng);
        const ComplexVector a2 = oracle::random_feasible(n, rng);
        const SpectralCoeffs c1 = from_alpha(a1);
        const SpectralCoeffs c2 = from_alpha(a2);
        const double expected = s_m_terms(c1, c2).sum();
        CHECK(objective(realify(a1), realify(a2), n) == doctest::Approx(expected).epsilon(1e-12));
        // And the time-domain SNR agrees with the objective route.
        const std::vector<ChipSequence> seqs{sequence_from_coeffs(c1, "a"), sequence_from_coeffs(c2, "b")};
        CHECK(*snr(CdmaConfig(n, 2), seqs, 0).snr == doctest::Approx(snr_from_objective(expected, n)).epsilon(1e-10));
    }
}

TEST_CASE("objective symmetry and zero gradient at the origin") {
    std::mt19937_64 rng(53);
    const int n = 8;
    const RealVector a1 = realify(oracle::random_feasible(n, rng));
    const RealVector a2 = realify(oracle::random_feasible(n, rng));
    CHECK(objective(a1, a2, n) == doctest::Approx(objective(a2, a1, n)).epsilon(1e-14));

    const auto [g1, g2] = objective_gradient(RealVector::Zero(2 * n), RealVector::Zero(2 * n), n);
    CHECK(g1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g2.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(objective(a1, RealVector::Zero(2 * n + 2), n), std::domain_error);
}

TEST_CASE("analytic gradient matches central differences") {
    std::mt19937_64 rng(59);
    int points = 0;
    for (int n : {4, 8, 16, 31}) {
        for (int trial = 0; trial < 5; ++trial, ++points) {
            const RealVector a1 = realify(oracle::random_feasible(n, rng));
            const RealVector a2 = realify(oracle::random_feasible(n, rng));
            const auto [g1, g2] = objective_gradient(a1, a2, n);
            RealVector x(4 * n);
            x << a1, a2;
            const auto f = [n](const RealVector& v) { return objective(v.head(2 * n), v.tail(2 * n), n); };
            const RealVector fd = oracle::central_difference(f, x, 1e-5);
            RealVector g(4 * n);
            g << g1, g2;
            const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
            CHECK((g - fd).cwiseAbs().maxCoeff() <= 1e-6 * scale);
        }
    }
    CHECK(points == 20);
}

TEST_CASE("feasibility errors") {
    std::mt19937_64 rng(61);
    const int n = 10;
    const RealCouplingMatrices r = real_coupling_matrices(n);
    const RealVector a = realify(oracle::random_feasible(n, rng));
    for (double c : {0.5, 0.9, 1.0, 1.3}) {
        const std::vector<RealVector> alphas{c * a};
        const std::vector<RealVector> betas{c * (r.phi_hat_r * a)};
        const FeasibilityErrors fe = feasibility_errors(alphas, betas, r.phi_hat_r);
        CHECK(fe.e1 == doctest::Approx(n * std::abs(1.0 - c * c)).epsilon(1e-10));
        CHECK(fe.e2 <= 1e-12);
        CHECK(reverse_coupling_error(alphas, betas, r.phi_r) <= 1e-12);
    }
    const std::vector<RealVector> alphas{a};
    const std::vector<RealVector> wrong{a};
    CHECK(feasibility_errors(alphas, wrong, r.phi_hat_r).e2 > 1e-3);
}

TEST_CASE("solve_local converges with a monotone trace") {
    const int n = 8;
    SolverConfig cfg;
    cfg.record_trace = true;
    const auto start = random_feasible_point(n, 2, 3);
    const SolveReport r = solve_local(start, cfg);
    CHECK(r.converged());
    CHECK(r.e1 <= 1e-8);
    CHECK(r.e2 <= 1e-8);
    CHECK(r.kkt_residual <= cfg.kkt_tolerance);
    CHECK(r.objective <= r.initial_objective);
    REQUIRE(r.objective_trace.size() == static_cast<std::size_t>(r.iterations) + 1);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) CHECK(r.objective_trace[i] < r.objective_trace[i - 1]);

    // Restarting at the returned point needs no further iterations.
    std::vector<SpectralCoeffs> again;
    for (int k = 0; k < 2; ++k) again.push_back({complexify(r.best_alpha[k]), complexify(r.best_beta[k])});
    const SolveReport r2 = solve_local(again, SolverConfig{});
    CHECK(r2.converged());
    CHECK(r2.iterations == 0);

    // Reconstructed sequences reproduce the reported SNR.
    const std::vector<ChipSequence> seqs{r.best_sequences[0], r.best_sequences[1]};
    CHECK(*snr(CdmaConfig(n, 2), seqs, 0).snr == doctest::Approx(r.snr).epsilon(1e-6));
}

TEST_CASE("solve_local rejects infeasible starts and bad configs") {
    auto start = random_feasible_point(6, 2, 1);
    start[0].alpha *= 1.01;
    CHECK_THROWS_AS(solve_local(start, SolverConfig{}), std::domain_error);
    auto three = random_feasible_point(6, 3, 1);
    CHECK_THROWS_AS(solve_local(three, SolverConfig{}), std::domain_error);
    SolverConfig bad;
    bad.restarts = 0;
    CHECK_THROWS_AS(solve_multistart(6, bad), std::invalid_argument);
}

TEST_CASE("iteration limit is reported") {
    SolverConfig cfg;
    cfg.max_iterations = 2;
    const SolveReport r = solve_local(random_feasible_point(16, 2, 4), cfg);
    CHECK(r.status == SolveStatus::iteration_limit);
    CHECK(r.iterations == 2);
    CHECK(to_string(r.status) == "iteration_limit");
}

TEST_CASE("solve_multistart: single restart, determinism, thread independence") {
    const int n = 8;
    SolverConfig cfg;
    cfg.seed = 11;
    cfg.restarts = 1;
    const SolveReport one = solve_multistart(n, cfg);
    const SolveReport local = solve_local(random_feasible_point(n, 2, restart_seed(11, 1)), cfg);
    CHECK(one.objective == local.objective);
    CHECK(one.iterations == local.iterations);

    cfg.restarts = 6;
    cfg.threads = 1;
    const SolveReport a = solve_multistart(n, cfg);
    cfg.threads = 3;
    const SolveReport b = solve_multistart(n, cfg);
    CHECK(a.restart_snrs == b.restart_snrs);
    CHECK(a.best_restart == b.best_restart);
    CHECK((a.best_alpha[0] - b.best_alpha[0]).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.restart_snrs.size() == 6);
    CHECK(a.restart_converged.size() == 6);
    for (std::size_t t = 0; t < 6; ++t)
        if (a.restart_converged[t]) CHECK(a.restart_snrs[t] <= a.snr);
}

TEST_CASE("no converged restart is flagged") {
    SolverConfig cfg;
    cfg.restarts = 3;
    cfg.max_iterations = 1;
    const SolveReport r = solve_multistart(16, cfg);
    CHECK(r.status == SolveStatus::no_converged_restart);
    CHECK(r.converged_restarts == 0);
    CHECK(r.restart_snrs.size() == 3);
}
