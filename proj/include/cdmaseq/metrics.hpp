#pragma once

#include <span>

#include "cdmaseq/types.hpp"

namespace cdmaseq {

/// Periodic correlation theta(u,v)(l) = sum_m lambda_m^{(l)} conj(alpha_m^u) alpha_m^v.
/// In chip terms this is sum_n conj(s_{u,n}) s_{v,n-l} with cyclic wrap.
/// Throws std::domain_error unless 0 <= l <= N-1.
Complex periodic_correlation(const SpectralCoeffs& c_u, const SpectralCoeffs& c_v, int l);

/// theta-hat(u,v)(l) = sum_m lambda-hat_m^{(l)} conj(beta_m^u) beta_m^v.
/// In chip terms this is the negacyclic correlation: as the periodic one, but
/// products whose v index wraps (n <= l) enter with a minus sign.
Complex aperiodic_correlation(const SpectralCoeffs& c_u, const SpectralCoeffs& c_v, int l);

struct CorrelationPeaks {
    double theta_a = 0.0;      // max |theta(u,u)(l)|, 0 < l <= N-1
    double theta_c = 0.0;      // max |theta(u,v)(l)|, u != v, 0 <= l <= N-1
    double theta_hat_a = 0.0;
    double theta_hat_c = 0.0;
    bool has_cross = false;    // false for a single-sequence set (theta_c reported as 0)
};

CorrelationPeaks correlation_peaks(std::span<const SpectralCoeffs> set);

struct SarwateReport {
    double lhs_periodic = 0.0;
    double lhs_aperiodic = 0.0;
    bool periodic_satisfied = false;
    bool aperiodic_satisfied = false;
};

inline constexpr double kSarwateSlack = 1e-9;

/// theta_c^2/N + (N-1)/(N(K-1)) * theta_a^2/N for both correlation kinds;
/// satisfied when lhs >= 1 - kSarwateSlack. Throws std::domain_error for K < 2.
SarwateReport sarwate_check(const CorrelationPeaks& peaks, int n_chips, int n_users);

}  // namespace cdmaseq
