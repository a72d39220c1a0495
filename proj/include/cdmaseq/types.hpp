#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cdmaseq {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// One user's spreading sequence. Entry n-1 holds chip s_{k,n} (chips are
/// numbered 1..N in all documentation, stored 0-based).
struct ChipSequence {
    ComplexVector entries;
    std::string label;

    [[nodiscard]] int size() const { return static_cast<int>(entries.size()); }
};

/// Coordinates of a sequence in the exponential basis w_m(0) (alpha) and in
/// the half-chip shifted basis w_m(1/(2N)) (beta). Entry m-1 holds index m.
struct SpectralCoeffs {
    ComplexVector alpha;
    ComplexVector beta;

    [[nodiscard]] int size() const { return static_cast<int>(alpha.size()); }
};

}  // namespace cdmaseq
