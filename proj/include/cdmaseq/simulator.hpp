#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "cdmaseq/interference.hpp"
#include "cdmaseq/types.hpp"

namespace cdmaseq {

/// Random state of one interfering user during one symbol of the desired user.
struct MonteCarloDraw {
    double tau = 0.0;  // delay in [0, T)
    double psi = 0.0;  // effective phase in [0, 2 pi)
    BitWindow bits;
};

struct SimulationEstimate {
    double var_interference_mean = 0.0;
    double var_interference_stderr = 0.0;
    std::optional<double> snr_estimate;
    long trials = 0;
    std::uint64_t seed = 0;
};

struct SimulationOptions {
    long trials = 100000;
    std::uint64_t seed = 1;
    /// 0 selects std::thread::hardware_concurrency().
    int threads = 0;
    /// Forces psi = 0 on every draw.
    bool zero_phase = false;
};

inline constexpr long kMinTrials = 100;

/// |I~_{i,k}|^2 for one draw. The receiver integral over [0, T) is evaluated
/// exactly by splitting every chip of user i at the chip boundary of the
/// delayed user-k waveform; chips delayed past t = 0 carry b_{k,-1}.
/// Throws std::domain_error unless 0 <= tau < T.
double interference_sample(const CdmaConfig& cfg, const ComplexVector& s_i,
                           const ComplexVector& s_k, const MonteCarloDraw& draw);

/// Draws one MonteCarloDraw from `engine`.
template <typename Engine>
MonteCarloDraw draw_interferer(const CdmaConfig& cfg, Engine& engine);

/// Monte Carlo estimate of Var{I_i} and the resulting SNR. Each trial draws an
/// independent (tau, psi, bits) per interfering user from its own stream, so
/// results depend only on (inputs, seed, trials). Throws std::invalid_argument
/// when trials < kMinTrials.
SimulationEstimate estimate_snr(const CdmaConfig& cfg, std::span<const ChipSequence> sequences,
                                int user, const SimulationOptions& options);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace cdmaseq

#include "cdmaseq/random.hpp"

namespace cdmaseq {

template <typename Engine>
MonteCarloDraw draw_interferer(const CdmaConfig& cfg, Engine& engine) {
    MonteCarloDraw d;
    d.tau = uniform01(engine) * cfg.symbol_duration();
    if (d.tau >= cfg.symbol_duration()) d.tau = std::nextafter(cfg.symbol_duration(), 0.0);
    d.psi = uniform01(engine) * 2.0 * kPi;
    const auto bits = engine();
    d.bits = BitWindow{(bits & 1U) ? -1 : 1, (bits & 2U) ? -1 : 1};
    return d;
}

}  // namespace cdmaseq
