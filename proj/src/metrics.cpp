#include "cdmaseq/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cdmaseq/interference.hpp"

namespace cdmaseq {

namespace {

void check_shift(int n, int l) {
    if (l < 0 || l > n - 1)
        throw std::domain_error("shift l=" + std::to_string(l) + " outside 0..N-1");
}

}  // namespace

Complex periodic_correlation(const SpectralCoeffs& c_u, const SpectralCoeffs& c_v, int l) {
    const int n = c_u.size();
    if (c_v.size() != n) throw std::domain_error("coefficient lengths differ");
    check_shift(n, l);
    Complex acc{0.0, 0.0};
    for (int m = 1; m <= n; ++m)
        acc += spectral_phase(l, m, n) * std::conj(c_u.alpha(m - 1)) * c_v.alpha(m - 1);
    return acc;
}

Complex aperiodic_correlation(const SpectralCoeffs& c_u, const SpectralCoeffs& c_v, int l) {
    const int n = c_u.size();
    if (c_v.size() != n || c_u.beta.size() != n || c_v.beta.size() != n)
        throw std::domain_error("coefficient lengths differ");
    check_shift(n, l);
    Complex acc{0.0, 0.0};
    for (int m = 1; m <= n; ++m)
        acc += spectral_phase_hat(l, m, n) * std::conj(c_u.beta(m - 1)) * c_v.beta(m - 1);
    return acc;
}

CorrelationPeaks correlation_peaks(std::span<const SpectralCoeffs> set) {
    CorrelationPeaks peaks;
    const int users = static_cast<int>(set.size());
    if (users == 0) return peaks;
    const int n = set[0].size();
    for (int u = 0; u < users; ++u) {
        for (int v = 0; v < users; ++v) {
            const int first = u == v ? 1 : 0;
            for (int l = first; l < n; ++l) {
                const double p = std::abs(periodic_correlation(set[u], set[v], l));
                const double a = std::abs(aperiodic_correlation(set[u], set[v], l));
                if (u == v) {
                    peaks.theta_a = std::max(peaks.theta_a, p);
                    peaks.theta_hat_a = std::max(peaks.theta_hat_a, a);
                } else {
                    peaks.theta_c = std::max(peaks.theta_c, p);
                    peaks.theta_hat_c = std::max(peaks.theta_hat_c, a);
                }
            }
        }
    }
    peaks.has_cross = users >= 2;
    return peaks;
}

SarwateReport sarwate_check(const CorrelationPeaks& peaks, int n_chips, int n_users) {
    if (n_users < 2) throw std::domain_error("Sarwate limit needs at least two users");
    if (n_chips < 2) throw std::domain_error("n_chips must be >= 2");
    const double n = n_chips;
    const double weight = (n - 1.0) / (n * (n_users - 1));
    auto lhs = [&](double cross, double autoc) {
        return cross * cross / n + weight * autoc * autoc / n;
    };
    SarwateReport r;
    r.lhs_periodic = lhs(peaks.theta_c, peaks.theta_a);
    r.lhs_aperiodic = lhs(peaks.theta_hat_c, peaks.theta_hat_a);
    r.periodic_satisfied = r.lhs_periodic >= 1.0 - kSarwateSlack;
    r.aperiodic_satisfied = r.lhs_aperiodic >= 1.0 - kSarwateSlack;
    return r;
}

}  // namespace cdmaseq
