#include "cdmaseq/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cdmaseq/random.hpp"
#include "cdmaseq/sequences.hpp"
#include "cdmaseq/spectral.hpp"

namespace cdmaseq {

RealStackedVector realify(const ComplexVector& x) {
    const Eigen::Index n = x.size();
    RealStackedVector v(2 * n);
    v.head(n) = x.real();
    v.tail(n) = x.imag();
    return v;
}

ComplexVector complexify(const RealStackedVector& v) {
    if (v.size() % 2 != 0) throw std::domain_error("stacked vector must have even length");
    const Eigen::Index n = v.size() / 2;
    ComplexVector x(n);
    x.real() = v.head(n);
    x.imag() = v.tail(n);
    return x;
}

RealMatrix realify(const ComplexMatrix& m) {
    const Eigen::Index r = m.rows();
    const Eigen::Index c = m.cols();
    RealMatrix out(2 * r, 2 * c);
    out.topLeftCorner(r, c) = m.real();
    out.topRightCorner(r, c) = -m.imag();
    out.bottomLeftCorner(r, c) = m.imag();
    out.bottomRightCorner(r, c) = m.real();
    return out;
}

RealCouplingMatrices real_coupling_matrices(int n_chips) {
    const auto c = coupling_matrices(n_chips);
    return {realify(c.phi), realify(c.phi_hat)};
}

TwoUserObjective::TwoUserObjective(int n_chips)
    : n_chips_(n_chips),
      phi_hat_r_(real_coupling_matrices(n_chips).phi_hat_r),
      weight_(n_chips),
      weight_hat_(n_chips) {
    for (int m = 1; m <= n_chips; ++m) {
        weight_(m - 1) = 1.0 + 0.5 * std::cos(2.0 * kPi * m / n_chips);
        weight_hat_(m - 1) =
            1.0 + 0.5 * std::cos(2.0 * kPi * (static_cast<double>(m) / n_chips + half_chip_offset(n_chips)));
    }
}

void TwoUserObjective::check(const RealStackedVector& a1, const RealStackedVector& a2) const {
    if (a1.size() != 2 * n_chips_ || a2.size() != 2 * n_chips_)
        throw std::domain_error("stacked coefficient vectors must have length 2N");
}

RealStackedVector TwoUserObjective::beta(const RealStackedVector& alpha) const {
    return phi_hat_r_ * alpha;
}

namespace {

// |x_m|^2 for a stacked vector.
RealVector power_spectrum(const RealStackedVector& v, int n) {
    return v.head(n).array().square() + v.tail(n).array().square();
}

// d/dv sum_m w_m |v_m|^2 |u_m|^2 given the partner's power spectrum.
RealStackedVector power_gradient(const RealStackedVector& v, const RealVector& partner,
                                 const RealVector& w, int n) {
    RealStackedVector g(2 * n);
    const RealVector scale = 2.0 * w.cwiseProduct(partner);
    g.head(n) = v.head(n).cwiseProduct(scale);
    g.tail(n) = v.tail(n).cwiseProduct(scale);
    return g;
}

}  // namespace

double TwoUserObjective::value(const RealStackedVector& a1, const RealStackedVector& a2) const {
    check(a1, a2);
    const int n = n_chips_;
    const RealVector p1 = power_spectrum(a1, n);
    const RealVector p2 = power_spectrum(a2, n);
    const RealVector q1 = power_spectrum(beta(a1), n);
    const RealVector q2 = power_spectrum(beta(a2), n);
    return (weight_.cwiseProduct(p1).cwiseProduct(p2)).sum() +
           (weight_hat_.cwiseProduct(q1).cwiseProduct(q2)).sum();
}

double TwoUserObjective::value_and_gradient(const RealStackedVector& a1,
                                            const RealStackedVector& a2, RealStackedVector& g1,
                                            RealStackedVector& g2) const {
    check(a1, a2);
    const int n = n_chips_;
    const RealStackedVector b1 = beta(a1);
    const RealStackedVector b2 = beta(a2);
    const RealVector p1 = power_spectrum(a1, n);
    const RealVector p2 = power_spectrum(a2, n);
    const RealVector q1 = power_spectrum(b1, n);
    const RealVector q2 = power_spectrum(b2, n);
    g1 = power_gradient(a1, p2, weight_, n) +
         phi_hat_r_.transpose() * power_gradient(b1, q2, weight_hat_, n);
    g2 = power_gradient(a2, p1, weight_, n) +
         phi_hat_r_.transpose() * power_gradient(b2, q1, weight_hat_, n);
    return (weight_.cwiseProduct(p1).cwiseProduct(p2)).sum() +
           (weight_hat_.cwiseProduct(q1).cwiseProduct(q2)).sum();
}

double objective(const RealStackedVector& a1, const RealStackedVector& a2, int n_chips) {
    return TwoUserObjective(n_chips).value(a1, a2);
}

std::pair<RealStackedVector, RealStackedVector> objective_gradient(const RealStackedVector& a1,
                                                                   const RealStackedVector& a2,
                                                                   int n_chips) {
    std::pair<RealStackedVector, RealStackedVector> g;
    TwoUserObjective(n_chips).value_and_gradient(a1, a2, g.first, g.second);
    return g;
}

FeasibilityErrors feasibility_errors(std::span<const RealStackedVector> alphas,
                                     std::span<const RealStackedVector> betas,
                                     const RealMatrix& phi_hat_r) {
    if (alphas.size() != betas.size()) throw std::domain_error("alpha/beta user counts differ");
    FeasibilityErrors e;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const double n = static_cast<double>(alphas[k].size()) / 2.0;
        e.e1 = std::max({e.e1, std::abs(n - alphas[k].squaredNorm()),
                         std::abs(n - betas[k].squaredNorm())});
        e.e2 = std::max(e.e2, (betas[k] - phi_hat_r * alphas[k]).lpNorm<Eigen::Infinity>());
    }
    return e;
}

double reverse_coupling_error(std::span<const RealStackedVector> alphas,
                              std::span<const RealStackedVector> betas, const RealMatrix& phi_r) {
    if (alphas.size() != betas.size()) throw std::domain_error("alpha/beta user counts differ");
    double err = 0.0;
    for (std::size_t k = 0; k < alphas.size(); ++k)
        err = std::max(err, (alphas[k] - phi_r * betas[k]).lpNorm<Eigen::Infinity>());
    return err;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::iteration_limit: return "iteration_limit";
        case SolveStatus::stalled: return "stalled";
        case SolveStatus::no_converged_restart: return "no_converged_restart";
    }
    return "unknown";
}

double snr_from_objective(double objective, int n_chips) {
    const double n = n_chips;
    return 1.0 / std::sqrt(objective / (6.0 * n * n));
}

namespace {

constexpr double kInitialFeasibility = 1e-10;

// Decision vector x = (a1; a2), each block of length 2N, constrained to
// |a_k|^2 = N.
class SqpSolver {
public:
    SqpSolver(const TwoUserObjective& objective, const SolverConfig& cfg)
        : obj_(objective), cfg_(cfg), n_(objective.n_chips()), block_(2 * n_), dim_(4 * n_) {}

    SolveReport run(RealVector x) {
        SolveReport report;
        project(x);
        RealVector g(dim_);
        double f = evaluate(x, g);
        report.initial_objective = f;
        if (cfg_.record_trace) report.objective_trace.push_back(f);

        RealMatrix hess = RealMatrix::Identity(dim_, dim_);
        bool hess_is_identity = true;
        bool scaled = false;
        double rho = 0.0;
        report.status = SolveStatus::iteration_limit;

        int iter = 0;
        for (;; ++iter) {
            const Eigen::Vector2d h = constraints(x);
            report.kkt_residual = kkt_residual(x, g);
            if (report.kkt_residual <= cfg_.kkt_tolerance &&
                h.lpNorm<Eigen::Infinity>() <= cfg_.constraint_tolerance) {
                report.status = SolveStatus::converged;
                break;
            }
            if (iter >= cfg_.max_iterations) break;

            // Equality-constrained QP via the Schur complement of the two
            // linearised sphere constraints.
            const RealMatrix jac_t = jacobian_transpose(x);
            Eigen::LLT<RealMatrix> llt(hess);
            if (llt.info() != Eigen::Success) {
                hess.setIdentity();
                hess_is_identity = true;
                llt.compute(hess);
            }
            const RealVector hg = llt.solve(g);
            const RealMatrix ha = llt.solve(jac_t);
            const Eigen::Matrix2d schur = jac_t.transpose() * ha;
            const Eigen::Vector2d mu = schur.ldlt().solve(h - jac_t.transpose() * hg);
            const RealVector d = -(hg + ha * mu);

            rho = std::max(rho, 1.5 * mu.lpNorm<Eigen::Infinity>());
            const double merit = f + rho * h.lpNorm<1>();
            const double slope = g.dot(d) - rho * h.lpNorm<1>();
            if (!(slope < 0.0)) {
                if (hess_is_identity) {
                    report.status = SolveStatus::stalled;
                    break;
                }
                hess.setIdentity();
                hess_is_identity = true;
                continue;
            }

            double step = 1.0;
            RealVector trial(dim_);
            RealVector g_trial(dim_);
            double f_trial = 0.0;
            bool accepted = false;
            while (step >= cfg_.min_step) {
                trial = x + step * d;
                project(trial);  // second-order correction back onto the spheres
                f_trial = evaluate(trial, g_trial);
                if (f_trial <= merit + cfg_.armijo * step * slope && f_trial < f) {
                    accepted = true;
                    break;
                }
                step *= cfg_.backtrack;
            }
            if (!accepted) {
                if (hess_is_identity) {
                    report.status = SolveStatus::stalled;
                    break;
                }
                hess.setIdentity();
                hess_is_identity = true;
                continue;
            }

            const RealVector s = trial - x;
            RealVector y = g_trial - g;
            for (int k = 0; k < 2; ++k) y.segment(k * block_, block_) += 2.0 * mu(k) * s.segment(k * block_, block_);

            const double sy_raw = s.dot(y);
            if (!scaled && sy_raw > 0.0) {
                hess *= y.squaredNorm() / sy_raw;
                scaled = true;
            }
            const RealVector hs = hess * s;
            const double shs = s.dot(hs);
            if (shs > 0.0) {
                // Powell damping keeps the approximation positive definite.
                double sy = s.dot(y);
                if (sy < 0.2 * shs) {
                    const double theta = 0.8 * shs / (shs - sy);
                    y = theta * y + (1.0 - theta) * hs;
                    sy = s.dot(y);
                }
                hess += (y * y.transpose()) / sy - (hs * hs.transpose()) / shs;
                hess_is_identity = false;
            }

            x = trial;
            f = f_trial;
            g = g_trial;
            if (cfg_.record_trace) report.objective_trace.push_back(f);
        }
        report.iterations = iter;
        finish(x, f, report);
        return report;
    }

private:
    double evaluate(const RealVector& x, RealVector& g) const {
        RealStackedVector g1;
        RealStackedVector g2;
        const double f = obj_.value_and_gradient(x.head(block_), x.tail(block_), g1, g2);
        g.head(block_) = g1;
        g.tail(block_) = g2;
        return f;
    }

    Eigen::Vector2d constraints(const RealVector& x) const {
        return {x.head(block_).squaredNorm() - n_, x.tail(block_).squaredNorm() - n_};
    }

    RealMatrix jacobian_transpose(const RealVector& x) const {
        RealMatrix jt = RealMatrix::Zero(dim_, 2);
        jt.col(0).head(block_) = 2.0 * x.head(block_);
        jt.col(1).tail(block_) = 2.0 * x.tail(block_);
        return jt;
    }

    // |grad f + sum_k lambda_k grad h_k|_inf with least-squares multipliers.
    double kkt_residual(const RealVector& x, const RealVector& g) const {
        double r = 0.0;
        for (int k = 0; k < 2; ++k) {
            const auto a = x.segment(k * block_, block_);
            const auto gk = g.segment(k * block_, block_);
            const RealVector tangent = gk - (gk.dot(a) / a.squaredNorm()) * a;
            r = std::max(r, tangent.lpNorm<Eigen::Infinity>());
        }
        return r;
    }

    void project(RealVector& x) const {
        const double radius = std::sqrt(static_cast<double>(n_));
        for (int k = 0; k < 2; ++k) {
            auto a = x.segment(k * block_, block_);
            const double norm = a.norm();
            if (norm > 0.0) a *= radius / norm;
        }
    }

    void finish(const RealVector& x, double f, SolveReport& report) const {
        const RealCouplingMatrices real = real_coupling_matrices(n_);
        for (int k = 0; k < 2; ++k) {
            report.best_alpha[k] = x.segment(k * block_, block_);
            report.best_beta[k] = real.phi_hat_r * report.best_alpha[k];
            const SpectralCoeffs c{complexify(report.best_alpha[k]), complexify(report.best_beta[k])};
            report.best_sequences[k] =
                sequence_from_coeffs(c, "optimized(N=" + std::to_string(n_) + "):user" + std::to_string(k + 1));
        }
        const auto fe = feasibility_errors(report.best_alpha, report.best_beta, real.phi_hat_r);
        report.e1 = fe.e1;
        report.e2 = fe.e2;
        report.reverse_coupling = reverse_coupling_error(report.best_alpha, report.best_beta, real.phi_r);
        report.objective = f;
        report.snr = snr_from_objective(f, n_);
        report.restart_snrs = {report.snr};
        report.restart_converged = {report.converged()};
        report.restart_feasibility = {fe};
        report.converged_restarts = report.converged() ? 1 : 0;
        report.best_restart = 1;
    }

    const TwoUserObjective& obj_;
    const SolverConfig& cfg_;
    int n_;
    int block_;
    int dim_;
};

void validate(const SolverConfig& cfg) {
    if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (cfg.max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
    if (!(cfg.kkt_tolerance > 0.0) || !(cfg.constraint_tolerance > 0.0))
        throw std::invalid_argument("tolerances must be positive");
    if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0))
        throw std::invalid_argument("backtrack factor must lie in (0, 1)");
}

SolveReport solve_from(const TwoUserObjective& obj, std::span<const SpectralCoeffs> initial,
                       const SolverConfig& cfg) {
    if (initial.size() != 2) throw std::domain_error("two-user solver needs exactly two users");
    const int n = obj.n_chips();
    std::array<RealStackedVector, 2> alphas;
    std::array<RealStackedVector, 2> betas;
    for (int k = 0; k < 2; ++k) {
        if (initial[k].size() != n || initial[k].beta.size() != n)
            throw std::domain_error("initial coefficients have wrong length");
        alphas[k] = realify(initial[k].alpha);
        betas[k] = realify(initial[k].beta);
    }
    const auto fe = feasibility_errors(alphas, betas, obj.phi_hat_r());
    if (fe.e1 > kInitialFeasibility || fe.e2 > kInitialFeasibility)
        throw std::domain_error("initial point is not feasible (e1=" + std::to_string(fe.e1) +
                                ", e2=" + std::to_string(fe.e2) + ")");
    RealVector x(4 * n);
    x.head(2 * n) = alphas[0];
    x.tail(2 * n) = alphas[1];
    return SqpSolver(obj, cfg).run(std::move(x));
}

int resolve_threads(int requested, int work) {
    const int hw = std::max(1U, std::thread::hardware_concurrency());
    return std::clamp(requested > 0 ? requested : hw, 1, std::max(1, work));
}

}  // namespace

SolveReport solve_local(std::span<const SpectralCoeffs> initial, const SolverConfig& cfg) {
    validate(cfg);
    if (initial.empty()) throw std::domain_error("no initial point");
    const TwoUserObjective obj(initial[0].size());
    return solve_from(obj, initial, cfg);
}

std::uint64_t restart_seed(std::uint64_t master, int index) {
    return stream_seed(master, static_cast<std::uint64_t>(index));
}

SolveReport solve_multistart(int n_chips, const SolverConfig& cfg) {
    validate(cfg);
    if (n_chips < 2) throw std::invalid_argument("n_chips must be >= 2");
    const TwoUserObjective obj(n_chips);
    std::vector<SolveReport> runs(static_cast<std::size_t>(cfg.restarts));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < cfg.restarts; t = next++) {
            const auto start = random_feasible_point(n_chips, 2, restart_seed(cfg.seed, t + 1));
            runs[static_cast<std::size_t>(t)] = solve_from(obj, start, cfg);
        }
    };
    const int threads = resolve_threads(cfg.threads, cfg.restarts);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    }

    int best = -1;
    int converged = 0;
    for (int t = 0; t < cfg.restarts; ++t) {
        const auto& r = runs[static_cast<std::size_t>(t)];
        if (!r.converged()) continue;
        ++converged;
        if (best < 0 || r.snr > runs[static_cast<std::size_t>(best)].snr) best = t;
    }

    std::vector<double> snrs;
    std::vector<bool> flags;
    std::vector<FeasibilityErrors> feas;
    for (const auto& r : runs) {
        snrs.push_back(r.snr);
        flags.push_back(r.converged());
        feas.push_back({r.e1, r.e2});
    }

    SolveReport report;
    if (best >= 0) {
        report = std::move(runs[static_cast<std::size_t>(best)]);
        report.best_restart = best + 1;
    } else {
        // Nothing converged: surface the run that got closest to stationarity.
        int closest = 0;
        for (int t = 1; t < cfg.restarts; ++t)
            if (runs[static_cast<std::size_t>(t)].kkt_residual < runs[static_cast<std::size_t>(closest)].kkt_residual)
                closest = t;
        report = runs[static_cast<std::size_t>(closest)];
        report.best_restart = closest + 1;
        report.status = SolveStatus::no_converged_restart;
    }
    report.converged_restarts = converged;
    report.restart_snrs = std::move(snrs);
    report.restart_converged = std::move(flags);
    report.restart_feasibility = std::move(feas);
    return report;
}

}  // namespace cdmaseq
