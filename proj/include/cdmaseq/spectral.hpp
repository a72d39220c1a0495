#pragma once

#include "cdmaseq/types.hpp"

namespace cdmaseq {

/// Basis w_m(eta): entry n (1-based) is exp(2*pi*j*(n-1)*(m/N + eta)).
/// Throws std::domain_error unless 1 <= m <= n_chips.
ComplexVector basis_vector(int m, double eta, int n_chips);

/// Offset of the shifted basis used for the beta coordinates.
inline double half_chip_offset(int n_chips) { return 1.0 / (2.0 * n_chips); }

/// alpha_m = <w_m(0), s>/sqrt(N), beta_m = <w_m(1/(2N)), s>/sqrt(N), with the
/// inner product conjugate-linear in its first argument.
SpectralCoeffs decompose(const ComplexVector& chips);
SpectralCoeffs decompose(const ChipSequence& s);

enum class Basis { alpha, beta };

/// (1/sqrt(N)) * sum_m c_m w_m(eta) over the selected coefficient set.
ComplexVector reconstruct(const SpectralCoeffs& c, Basis basis);

/// Complete coefficient pair from alpha alone (beta = phi_hat * alpha).
SpectralCoeffs from_alpha(const ComplexVector& alpha);

struct CouplingMatrices {
    ComplexMatrix phi;      // alpha = phi * beta
    ComplexMatrix phi_hat;  // beta = phi_hat * alpha
};

/// Direct O(N^2) evaluation of the alpha/beta coupling matrices.
CouplingMatrices coupling_matrices(int n_chips);

/// max |M^* M - I| entrywise.
double unitarity_error(const ComplexMatrix& m);

}  // namespace cdmaseq
