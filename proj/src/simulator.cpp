#include "cdmaseq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "cdmaseq/random.hpp"

namespace cdmaseq {

namespace {

int chip_index(double t, double tc, int n) {
    const auto idx = static_cast<long>(std::floor(t / tc));
    const long wrapped = ((idx % n) + n) % n;
    return static_cast<int>(wrapped);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace

double interference_sample(const CdmaConfig& cfg, const ComplexVector& s_i,
                           const ComplexVector& s_k, const MonteCarloDraw& draw) {
    const double period = cfg.symbol_duration();
    if (!(draw.tau >= 0.0 && draw.tau < period))
        throw std::domain_error("delay tau must lie in [0, T)");
    const int n = cfg.n_chips();
    if (s_i.size() != n || s_k.size() != n) throw std::domain_error("sequence length mismatch");
    const double tc = cfg.chip_duration();

    // Breakpoints: chip edges of user i and of the delayed user-k waveform.
    std::vector<double> edges;
    edges.reserve(3 * n + 2);
    for (int c = 0; c <= n; ++c) edges.push_back(c * tc);
    for (int c = -n; c <= n; ++c) {
        const double e = draw.tau + c * tc;
        if (e > 0.0 && e < period) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());

    Complex acc{0.0, 0.0};
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double width = edges[e + 1] - edges[e];
        if (width <= 0.0) continue;
        const double mid = 0.5 * (edges[e] + edges[e + 1]);
        const double delayed = mid - draw.tau;
        const int bit = delayed < 0.0 ? draw.bits.prev : draw.bits.cur;
        acc += width * static_cast<double>(bit) * s_k(chip_index(delayed, tc, n)) *
               std::conj(s_i(chip_index(mid, tc, n)));
    }
    return std::norm(acc * std::polar(1.0, draw.psi));
}

double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (const double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

SimulationEstimate estimate_snr(const CdmaConfig& cfg, std::span<const ChipSequence> sequences,
                                int user, const SimulationOptions& options) {
    if (options.trials < kMinTrials)
        throw std::invalid_argument("trials must be >= " + std::to_string(kMinTrials));
    if (user < 0 || user >= static_cast<int>(sequences.size()))
        throw std::domain_error("user index out of range");
    for (const auto& s : sequences)
        if (s.size() != cfg.n_chips()) throw std::domain_error("sequence length mismatch");

    const long trials = options.trials;
    const double scale = cfg.power() / 4.0;
    std::vector<double> samples(static_cast<std::size_t>(trials), 0.0);

    auto run_range = [&](long begin, long end) {
        for (long t = begin; t < end; ++t) {
            SplitMix64 engine(stream_seed(options.seed, static_cast<std::uint64_t>(t)));
            double value = 0.0;
            for (int k = 0; k < static_cast<int>(sequences.size()); ++k) {
                if (k == user) continue;
                MonteCarloDraw draw = draw_interferer(cfg, engine);
                if (options.zero_phase) draw.psi = 0.0;
                value += interference_sample(cfg, sequences[user].entries, sequences[k].entries, draw);
            }
            samples[static_cast<std::size_t>(t)] = scale * value;
        }
    };

    const int threads = std::min<long>(resolve_threads(options.threads), trials);
    if (threads <= 1) {
        run_range(0, trials);
    } else {
        std::vector<std::jthread> workers;
        const long chunk = (trials + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const long begin = w * chunk;
            const long end = std::min(trials, begin + chunk);
            if (begin < end) workers.emplace_back(run_range, begin, end);
        }
    }

    SimulationEstimate out;
    out.trials = trials;
    out.seed = options.seed;
    const double mean = compensated_sum(samples) / static_cast<double>(trials);
    std::vector<double> sq(samples.size());
    std::transform(samples.begin(), samples.end(), sq.begin(),
                   [mean](double v) { return (v - mean) * (v - mean); });
    const double var = compensated_sum(sq) / static_cast<double>(trials - 1);
    out.var_interference_mean = mean;
    out.var_interference_stderr = std::sqrt(var / static_cast<double>(trials));

    const double t = cfg.symbol_duration();
    const double signal = cfg.power() * t * t / 2.0;
    const double denom = mean + cfg.noise_density() * t / 4.0;
    if (denom > 0.0) out.snr_estimate = std::sqrt(signal / denom);
    return out;
}

}  // namespace cdmaseq
