#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cdmaseq/metrics.hpp"
#include "cdmaseq/sequences.hpp"
#include "cdmaseq/spectral.hpp"
#include "oracles.hpp"

using namespace cdmaseq;

TEST_CASE("spectral correlations equal brute-force time-domain sums, N <= 8") {
    std::mt19937_64 rng(19);
    for (int n = 2; n <= 8; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const ComplexVector u = oracle::random_complex(n, rng, trial % 2 == 1);
            const ComplexVector v = oracle::random_complex(n, rng);
            const SpectralCoeffs cu = decompose(u);
            const SpectralCoeffs cv = decompose(v);
            for (int l = 0; l < n; ++l) {
                CHECK(std::abs(periodic_correlation(cu, cv, l) - oracle::circular_correlation(u, v, l)) <= 1e-10);
                CHECK(std::abs(aperiodic_correlation(cu, cv, l) - oracle::negacyclic_correlation(u, v, l)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("autocorrelation at zero shift is the energy, and lag symmetry") {
    std::mt19937_64 rng(21);
    const int n = 9;
    const ComplexVector u = oracle::random_complex(n, rng);
    const ComplexVector v = oracle::random_complex(n, rng);
    const SpectralCoeffs cu = decompose(u);
    const SpectralCoeffs cv = decompose(v);
    CHECK(periodic_correlation(cu, cu, 0).real() == doctest::Approx(u.squaredNorm()).epsilon(1e-12));
    CHECK(std::abs(periodic_correlation(cu, cu, 0).imag()) < 1e-12);
    for (int l = 1; l < n; ++l) {
        // theta(u,v)(l) = conj(theta(v,u)(N-l))
        CHECK(std::abs(periodic_correlation(cu, cv, l) - std::conj(periodic_correlation(cv, cu, n - l))) < 1e-12);
        // negacyclic: theta-hat(u,v)(l) = -conj(theta-hat(v,u)(N-l))
        CHECK(std::abs(aperiodic_correlation(cu, cv, l) + std::conj(aperiodic_correlation(cv, cu, n - l))) < 1e-12);
    }
    CHECK_THROWS_AS(periodic_correlation(cu, cv, n), std::domain_error);
    CHECK_THROWS_AS(aperiodic_correlation(cu, cv, -1), std::domain_error);
}

TEST_CASE("correlation_peaks") {
    const std::vector<SpectralCoeffs> fzc{decompose(fzc_sequence(31, 1)), decompose(fzc_sequence(31, 2))};
    const CorrelationPeaks p = correlation_peaks(fzc);
    CHECK(p.theta_a <= 1e-9);
    CHECK(p.theta_c == doctest::Approx(std::sqrt(31.0)).epsilon(1e-9));
    CHECK(p.has_cross);

    const std::vector<SpectralCoeffs> single{fzc[0]};
    const CorrelationPeaks q = correlation_peaks(single);
    CHECK_FALSE(q.has_cross);
    CHECK(q.theta_c == 0.0);

    // Adding members can only raise the crosscorrelation peak.
    const auto gold = gold_family(5);
    std::vector<SpectralCoeffs> set;
    double prev = 0.0;
    for (int i = 0; i < 6; ++i) {
        set.push_back(decompose(gold[i]));
        const double now = correlation_peaks(set).theta_c;
        CHECK(now >= prev);
        prev = now;
    }
}

TEST_CASE("Sarwate check examples") {
    const double n = 31.0;
    const SarwateReport fzc = sarwate_check({0.0, std::sqrt(n), 0.0, std::sqrt(n), true}, 31, 2);
    CHECK(fzc.lhs_periodic == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fzc.periodic_satisfied);

    const SarwateReport gold = sarwate_check({9.0, 9.0, 9.0, 9.0, true}, 31, 2);
    CHECK(gold.lhs_periodic == doctest::Approx(81.0 / n + (30.0 / n) * (81.0 / n)));
    CHECK(gold.lhs_periodic == doctest::Approx(5.142).epsilon(1e-3));

    const SarwateReport tone = sarwate_check({n, 0.0, n, 0.0, true}, 31, 2);
    CHECK(tone.lhs_periodic == doctest::Approx(30.0).epsilon(1e-12));

    const SarwateReport bad = sarwate_check({0.0, 1.0, 0.0, 1.0, true}, 31, 2);
    CHECK_FALSE(bad.periodic_satisfied);
    CHECK_FALSE(bad.aperiodic_satisfied);

    CHECK_THROWS_AS(sarwate_check({}, 31, 1), std::domain_error);
}

TEST_CASE("actual baseline sets satisfy both Sarwate inequalities") {
    const auto gold = gold_family(5);
    const std::vector<std::vector<ChipSequence>> sets{
        {gold[0], gold[1]},
        {fzc_sequence(31, 1), fzc_sequence(31, 2)},
        {single_tone_sequence(31, 1), single_tone_sequence(31, 2)},
    };
    for (const auto& s : sets) {
        std::vector<SpectralCoeffs> c;
        for (const auto& x : s) c.push_back(decompose(x));
        const SarwateReport r = sarwate_check(correlation_peaks(c), 31, 2);
        CHECK(r.periodic_satisfied);
        CHECK(r.aperiodic_satisfied);
    }
}
