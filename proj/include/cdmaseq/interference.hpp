#pragma once

#include <optional>
#include <span>
#include <utility>

#include "cdmaseq/types.hpp"

namespace cdmaseq {

/// System parameters of the asynchronous DS-CDMA link. The chip duration is
/// always derived as symbol_duration / n_chips.
class CdmaConfig {
public:
    CdmaConfig(int n_chips, int n_users, double power = 1.0, double symbol_duration = 1.0,
               double noise_density = 0.0);

    [[nodiscard]] int n_chips() const { return n_chips_; }
    [[nodiscard]] int n_users() const { return n_users_; }
    [[nodiscard]] double power() const { return power_; }
    [[nodiscard]] double symbol_duration() const { return symbol_duration_; }
    [[nodiscard]] double chip_duration() const { return symbol_duration_ / n_chips_; }
    /// N_0; the two-sided noise density is N_0 / 2.
    [[nodiscard]] double noise_density() const { return noise_density_; }

private:
    int n_chips_;
    int n_users_;
    double power_;
    double symbol_duration_;
    double noise_density_;
};

/// Data bits (b_{k,-1}, b_{k,0}) of an interfering user that overlap one
/// symbol of the desired user.
struct BitWindow {
    int prev = 1;
    int cur = 1;

    BitWindow() = default;
    BitWindow(int prev_bit, int cur_bit);

    static constexpr int kCount = 4;
    /// The four equiprobable sign pairs, index 0..3.
    static BitWindow enumerate(int index);
};

/// B^{(l)}: b_prev * E_l in the top-right block, b_cur * E_{N-l} bottom-left.
RealMatrix shift_matrix(int n_chips, int l, BitWindow bits);

/// lambda_m^{(l)} = exp(-2 pi j l m / N)
Complex spectral_phase(int l, int m, int n_chips);
/// lambda-hat_m^{(l)} = exp(-2 pi j l (m/N + 1/(2N)))
Complex spectral_phase_hat(int l, int m, int n_chips);

/// (s_i^* B^{(l)} s_k, s_i^* B^{(l+1)} s_k) evaluated as direct sums. These
/// are the brackets multiplying the delay weights in R and R-hat.
std::pair<Complex, Complex> partial_sums(const ComplexVector& s_i, const ComplexVector& s_k,
                                         BitWindow bits, int l);

/// Integral of Gamma over tau in [l T_c, (l+1) T_c):
/// (T_c^3 / 3) (|A_l|^2 + |A_{l+1}|^2 + Re[A_l conj(A_{l+1})]).
double gamma_integral(const ComplexVector& s_i, const ComplexVector& s_k, BitWindow bits, int l,
                      double chip_duration);

/// Var{I_i} from the time-domain form: (P/(4T)) sum_{k != i} E_b sum_l int Gamma.
/// The bit expectation is the exact average over the four sign pairs.
double interference_variance_direct(const CdmaConfig& cfg, std::span<const ChipSequence> sequences,
                                    int user);

/// Per-frequency interference terms S_m^{i,k}, m = 1..N stored 0-based.
RealVector s_m_terms(const SpectralCoeffs& c_i, const SpectralCoeffs& c_k);

/// Var{I_i} = (P T^2 / (12 N^2)) sum_{k != i} sum_m S_m^{i,k}.
double interference_variance_spectral(const CdmaConfig& cfg,
                                      std::span<const ChipSequence> sequences, int user);

struct SnrBreakdown {
    double interference_variance = 0.0;
    double noise_variance = 0.0;
    double s_m_sum = 0.0;
    /// Empty when the denominator vanishes (single user, N_0 = 0).
    std::optional<double> snr;

    [[nodiscard]] bool unbounded() const { return !snr.has_value(); }
};

/// SNR of user `user` (0-based):
/// (sum_{k != i} sum_m S_m / (6 N^2) + N_0 / (2 P T))^{-1/2}.
SnrBreakdown snr(const CdmaConfig& cfg, std::span<const ChipSequence> sequences, int user);

/// SNR from an already-summed S_m total.
std::optional<double> snr_from_s_sum(double s_m_sum, const CdmaConfig& cfg);

}  // namespace cdmaseq
