#pragma once

#include <cstdint>
#include <vector>

#include "cdmaseq/types.hpp"

namespace cdmaseq {

/// Fibonacci LFSR over GF(2). `taps` lists the exponents of the feedback
/// polynomial below the leading term (0 included for the constant term), so
/// x^5 + x^2 + 1 is {degree 5, taps {2, 0}} and the recurrence is
/// a_{k+5} = a_{k+2} + a_k.
class LfsrSpec {
public:
    /// Throws std::invalid_argument unless the register has maximal period
    /// 2^degree - 1 from `init_state`.
    LfsrSpec(int degree, std::vector<int> taps, std::vector<int> init_state);
    LfsrSpec(int degree, std::vector<int> taps);  // all-ones initial state

    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int period() const { return (1 << degree_) - 1; }
    [[nodiscard]] const std::vector<int>& taps() const { return taps_; }

    /// One full period of output bits.
    [[nodiscard]] std::vector<int> sequence() const;

private:
    [[nodiscard]] std::vector<int> run(int length) const;

    int degree_;
    std::vector<int> taps_;
    std::vector<int> init_state_;
};

/// Preferred polynomial pair for a supported Gold degree (5, 6 or 7).
std::pair<LfsrSpec, LfsrSpec> gold_preferred_pair(int degree);

/// Full Gold family of length N = 2^degree - 1: the N combinations
/// u XOR shift_j(v) for j = 0..N-1 first, then the two m-sequences u and v.
/// Chips map bit 0 to +1 and bit 1 to -1. Throws std::invalid_argument for an
/// unsupported degree.
std::vector<ChipSequence> gold_family(int degree = 5);

/// Frank-Zadoff-Chu sequence, chips n = 1..N:
/// exp(-j pi M n^2 / N) for even N, exp(-j pi M n (n+1) / N) for odd N.
/// Throws std::domain_error unless gcd(M, N) = 1.
ChipSequence fzc_sequence(int n_chips, int m_param);

/// Single-tone sequence s_n = exp(2 pi j k n / N), 0 <= k <= N-1.
ChipSequence single_tone_sequence(int n_chips, int k_param);

/// Random power-feasible coefficient sets: alpha drawn isotropically and
/// rescaled to squared norm N, beta = phi_hat * alpha.
std::vector<SpectralCoeffs> random_feasible_point(int n_chips, int n_users, std::uint64_t seed);

/// Sequence reconstructed from its alpha coordinates.
ChipSequence sequence_from_coeffs(const SpectralCoeffs& c, std::string label);

}  // namespace cdmaseq
