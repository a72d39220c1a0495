#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdmaseq/types.hpp"

namespace cdmaseq {

/// Real stacking (Re x; Im x) of a complex vector, length 2N.
using RealStackedVector = RealVector;

RealStackedVector realify(const ComplexVector& x);
/// Inverse of realify. Throws std::domain_error on odd length.
ComplexVector complexify(const RealStackedVector& v);
/// [[Re M, -Im M], [Im M, Re M]], so realify(M x) = realify(M) realify(x).
RealMatrix realify(const ComplexMatrix& m);

struct RealCouplingMatrices {
    RealMatrix phi_r;
    RealMatrix phi_hat_r;
};

RealCouplingMatrices real_coupling_matrices(int n_chips);

/// Two-user interference objective sum_m S-hat_m^{1,2} over the real stacked
/// alpha coordinates, with beta' = phi_hat' alpha' substituted. Caches the
/// coupling matrix and frequency weights for repeated evaluation.
class TwoUserObjective {
public:
    explicit TwoUserObjective(int n_chips);

    [[nodiscard]] int n_chips() const { return n_chips_; }
    [[nodiscard]] const RealMatrix& phi_hat_r() const { return phi_hat_r_; }
    [[nodiscard]] RealStackedVector beta(const RealStackedVector& alpha) const;

    [[nodiscard]] double value(const RealStackedVector& a1, const RealStackedVector& a2) const;
    /// Value plus exact gradient with respect to a1 and a2.
    double value_and_gradient(const RealStackedVector& a1, const RealStackedVector& a2,
                              RealStackedVector& g1, RealStackedVector& g2) const;

private:
    void check(const RealStackedVector& a1, const RealStackedVector& a2) const;

    int n_chips_;
    RealMatrix phi_hat_r_;
    RealVector weight_;      // 1 + cos(2 pi m / N) / 2
    RealVector weight_hat_;  // 1 + cos(2 pi (m/N + 1/(2N))) / 2
};

double objective(const RealStackedVector& a1, const RealStackedVector& a2, int n_chips);
std::pair<RealStackedVector, RealStackedVector> objective_gradient(const RealStackedVector& a1,
                                                                   const RealStackedVector& a2,
                                                                   int n_chips);

struct FeasibilityErrors {
    double e1 = 0.0;  // max_k max(|N - |alpha_k|^2|, |N - |beta_k|^2|)
    double e2 = 0.0;  // max_k |beta_k - phi_hat' alpha_k|_inf
};

FeasibilityErrors feasibility_errors(std::span<const RealStackedVector> alphas,
                                     std::span<const RealStackedVector> betas,
                                     const RealMatrix& phi_hat_r);

/// max_k |alpha_k - phi' beta_k|_inf: the alpha = phi' beta constraint of the
/// unreduced problem, which the reduced solver never enforces directly.
double reverse_coupling_error(std::span<const RealStackedVector> alphas,
                              std::span<const RealStackedVector> betas, const RealMatrix& phi_r);

struct SolverConfig {
    int restarts = 1;
    int max_iterations = 5000;
    double kkt_tolerance = 1e-9;         // |grad L|_inf at exit
    double constraint_tolerance = 1e-10; // max_k |(|alpha_k|^2 - N)| at exit
    std::uint64_t seed = 0;
    int threads = 0;                     // 0: hardware concurrency
    double armijo = 1e-4;                // sufficient decrease on the l1 merit
    double backtrack = 0.5;
    double min_step = 1e-12;
    bool record_trace = false;
};

enum class SolveStatus { converged, iteration_limit, stalled, no_converged_restart };

std::string to_string(SolveStatus status);

struct SolveReport {
    SolveStatus status = SolveStatus::stalled;
    std::array<RealStackedVector, 2> best_alpha;
    std::array<RealStackedVector, 2> best_beta;
    std::array<ChipSequence, 2> best_sequences;
    double objective = 0.0;
    double snr = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double reverse_coupling = 0.0;
    double kkt_residual = 0.0;
    double initial_objective = 0.0;
    int iterations = 0;
    int best_restart = 0;          // 1-based restart index of the reported solution
    int converged_restarts = 0;
    std::vector<double> restart_snrs;
    std::vector<bool> restart_converged;
    std::vector<FeasibilityErrors> restart_feasibility;
    std::vector<double> objective_trace;  // accepted objective values, when recorded

    [[nodiscard]] bool converged() const { return status == SolveStatus::converged; }
};

/// SNR for a two-user objective value with N_0 = 0: (objective / (6 N^2))^{-1/2}.
double snr_from_objective(double objective, int n_chips);

/// One SQP run minimising the two-user objective subject to |alpha_k|^2 = N.
/// `initial` holds the two users' coefficients and must be feasible
/// (e1, e2 <= 1e-10), otherwise std::domain_error is thrown. A run that hits
/// the iteration limit or stalls returns its best iterate with the matching
/// status.
SolveReport solve_local(std::span<const SpectralCoeffs> initial, const SolverConfig& cfg);

/// Seed of the random starting point used by restart `index` (1-based).
std::uint64_t restart_seed(std::uint64_t master, int index);

/// solve_local from random_feasible_point(restart_seed(cfg.seed, t)) for
/// t = 1..restarts; keeps the converged run with the highest SNR (lowest
/// index on ties). Status is no_converged_restart when nothing converged.
SolveReport solve_multistart(int n_chips, const SolverConfig& cfg);

}  // namespace cdmaseq
