#include "cdmaseq/spectral.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace cdmaseq {

namespace {

void require_length(int n) {
    if (n < 2)
        throw std::domain_error("sequence length must be at least 2, got " + std::to_string(n));
}

using Wide = std::complex<long double>;
using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;

// exp(-j pi r / N) with r reduced mod 2N first, so large k*m products do not
// lose bits in the argument.
Wide half_turn(long r, int n) {
    const long two_n = 2L * n;
    r %= two_n;
    if (r < 0) r += two_n;
    return std::polar(1.0L, -3.14159265358979323846264338327950288L * static_cast<long double>(r) / n);
}

// Rows are conj(w_m(eta))/sqrt(N), eta = 0 or 1/(2N), so that
// coeffs = analysis * s. The phase k(m/N + eta) is kept as the integer
// k(2m) or k(2m+1) over 2N. Extended precision keeps small coefficients
// accurate after a round trip through the chips.
WideMatrix analysis_matrix(int n, bool shifted) {
    WideMatrix a(n, n);
    const long double scale = 1.0L / std::sqrt(static_cast<long double>(n));
    for (int m = 1; m <= n; ++m)
        for (int k = 0; k < n; ++k)
            a(m - 1, k) = scale * half_turn(static_cast<long>(k) * (2L * m + (shifted ? 1 : 0)), n);
    return a;
}

ComplexVector multiply_wide(const WideMatrix& a, const ComplexVector& x) {
    const WideMatrix y = a * x.cast<Wide>();
    ComplexVector out(y.rows());
    for (Eigen::Index r = 0; r < y.rows(); ++r)
        out(r) = Complex(static_cast<double>(y(r, 0).real()), static_cast<double>(y(r, 0).imag()));
    return out;
}

// 2 / (N * (1 - exp(2*pi*j*x)))
Complex coupling_entry(int n, double x) {
    const Complex denom = 1.0 - std::polar(1.0, 2.0 * kPi * x);
    return 2.0 / (static_cast<double>(n) * denom);
}

}  // namespace

ComplexVector basis_vector(int m, double eta, int n_chips) {
    if (n_chips < 1 || m < 1 || m > n_chips)
        throw std::domain_error("basis index m=" + std::to_string(m) + " outside 1.." +
                                std::to_string(n_chips));
    ComplexVector w(n_chips);
    const double freq = static_cast<double>(m) / n_chips + eta;
    for (int k = 0; k < n_chips; ++k)
        w(k) = std::polar(1.0, 2.0 * kPi * k * freq);
    return w;
}

SpectralCoeffs decompose(const ComplexVector& chips) {
    const int n = static_cast<int>(chips.size());
    require_length(n);
    return {multiply_wide(analysis_matrix(n, false), chips), multiply_wide(analysis_matrix(n, true), chips)};
}

SpectralCoeffs decompose(const ChipSequence& s) { return decompose(s.entries); }

ComplexVector reconstruct(const SpectralCoeffs& c, Basis basis) {
    const int n = c.size();
    require_length(n);
    if (basis == Basis::alpha)
        return multiply_wide(analysis_matrix(n, false).adjoint(), c.alpha);
    if (c.beta.size() != n)
        throw std::domain_error("beta coefficients have wrong length");
    return multiply_wide(analysis_matrix(n, true).adjoint(), c.beta);
}

SpectralCoeffs from_alpha(const ComplexVector& alpha) {
    const int n = static_cast<int>(alpha.size());
    require_length(n);
    return {alpha, coupling_matrices(n).phi_hat * alpha};
}

CouplingMatrices coupling_matrices(int n_chips) {
    require_length(n_chips);
    const int n = n_chips;
    const double offset = half_chip_offset(n);
    CouplingMatrices out{ComplexMatrix(n, n), ComplexMatrix(n, n)};
    for (int m = 1; m <= n; ++m) {
        for (int k = 1; k <= n; ++k) {
            const double base = static_cast<double>(k - m) / n;
            out.phi(m - 1, k - 1) = coupling_entry(n, base + offset);
            out.phi_hat(m - 1, k - 1) = coupling_entry(n, base - offset);
        }
    }
    return out;
}

double unitarity_error(const ComplexMatrix& m) {
    const ComplexMatrix d = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff();
}

}  // namespace cdmaseq
