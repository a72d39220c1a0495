#include <doctest.h>

#include <random>
#include <stdexcept>

#include "cdmaseq/spectral.hpp"
#include "oracles.hpp"

using namespace cdmaseq;

namespace {
double max_abs(const ComplexVector& v) { return v.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("basis_vector evaluates the exponential entries") {
    const ComplexVector ones = basis_vector(4, 0.0, 4);
    CHECK(max_abs(ones - ComplexVector::Ones(4)) < 1e-15);

    ComplexVector alt(4);
    alt << 1.0, -1.0, 1.0, -1.0;
    CHECK(max_abs(basis_vector(2, 0.0, 4) - alt) < 1e-15);

    ComplexVector shifted(2);
    shifted << 1.0, Complex{0.0, -1.0};
    CHECK(max_abs(basis_vector(1, 0.25, 2) - shifted) < 1e-15);

    CHECK_THROWS_AS(basis_vector(0, 0.0, 4), std::domain_error);
    CHECK_THROWS_AS(basis_vector(5, 0.0, 4), std::domain_error);
}

TEST_CASE("basis vectors are orthogonal with squared norm N, N <= 64") {
    for (int n = 2; n <= 64; ++n) {
        for (double eta : {0.0, half_chip_offset(n)}) {
            ComplexMatrix w(n, n);
            for (int m = 1; m <= n; ++m) w.col(m - 1) = basis_vector(m, eta, n);
            CHECK(w.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-14));
            const ComplexMatrix gram = w.adjoint() * w - n * ComplexMatrix::Identity(n, n);
            CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("decompose concentrates single basis vectors") {
    const SpectralCoeffs c1 = decompose(basis_vector(1, 0.0, 4));
    ComplexVector expected = ComplexVector::Zero(4);
    expected(0) = 2.0;
    CHECK(max_abs(c1.alpha - expected) < 1e-14);

    const SpectralCoeffs c_ones = decompose(ComplexVector::Ones(4));
    expected.setZero();
    expected(3) = 2.0;
    CHECK(max_abs(c_ones.alpha - expected) < 1e-14);

    CHECK_THROWS_AS(decompose(ComplexVector::Ones(1)), std::domain_error);
}

TEST_CASE("decompose/reconstruct round trip and isometry") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 31;
        const ComplexVector s = oracle::random_complex(n, rng, trial % 2 == 0);
        const SpectralCoeffs c = decompose(s);
        CHECK(max_abs(reconstruct(c, Basis::alpha) - s) < 1e-12);
        CHECK(max_abs(reconstruct(c, Basis::beta) - s) < 1e-12);
        CHECK(c.alpha.norm() == doctest::Approx(s.norm()).epsilon(1e-10));
        CHECK(c.beta.norm() == doctest::Approx(s.norm()).epsilon(1e-10));
        if (trial % 2 == 0) CHECK(c.alpha.squaredNorm() == doctest::Approx(n).epsilon(1e-12));
    }
}

TEST_CASE("reconstruct trivial inputs") {
    SpectralCoeffs c{ComplexVector::Zero(4), ComplexVector::Zero(4)};
    c.alpha(0) = 2.0;
    CHECK(max_abs(reconstruct(c, Basis::alpha) - basis_vector(1, 0.0, 4)) < 1e-14);
    c.alpha.setZero();
    CHECK(max_abs(reconstruct(c, Basis::alpha)) == 0.0);
}

TEST_CASE("coupling matrices for N=2 match direct evaluation") {
    const auto cm = coupling_matrices(2);
    const Complex a{0.5, 0.5};
    const Complex b{0.5, -0.5};
    CHECK(std::abs(cm.phi(0, 0) - a) < 1e-15);
    CHECK(std::abs(cm.phi(0, 1) - b) < 1e-15);
    CHECK(std::abs(cm.phi(1, 0) - b) < 1e-15);
    CHECK(std::abs(cm.phi(1, 1) - a) < 1e-15);
}

TEST_CASE("coupling matrices are unitary and mutually inverse, N = 2..64") {
    for (int n = 2; n <= 64; ++n) {
        const auto cm = coupling_matrices(n);
        CHECK(unitarity_error(cm.phi) <= 1e-10);
        CHECK(unitarity_error(cm.phi_hat) <= 1e-10);
        CHECK((cm.phi_hat - cm.phi.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("coupling matrices link the two coordinate systems") {
    std::mt19937_64 rng(5);
    for (int n : {4, 8, 16, 31}) {
        const auto cm = coupling_matrices(n);
        for (int trial = 0; trial < 10; ++trial) {
            const SpectralCoeffs c = decompose(oracle::random_complex(n, rng));
            CHECK(max_abs(cm.phi_hat * c.alpha - c.beta) <= 1e-10);
            CHECK(max_abs(cm.phi * c.beta - c.alpha) <= 1e-10);
        }
    }
    // Feasible alpha at N=16: from_alpha agrees with decompose of its sequence.
    const ComplexVector alpha = oracle::random_feasible(16, rng);
    const SpectralCoeffs built = from_alpha(alpha);
    const SpectralCoeffs seen = decompose(reconstruct(built, Basis::alpha));
    CHECK(max_abs(built.beta - seen.beta) <= 1e-10);
}
