#include "cdmaseq/sequences.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cdmaseq/random.hpp"
#include "cdmaseq/spectral.hpp"

namespace cdmaseq {

LfsrSpec::LfsrSpec(int degree, std::vector<int> taps)
    : LfsrSpec(degree, std::move(taps), std::vector<int>(static_cast<std::size_t>(degree), 1)) {}

LfsrSpec::LfsrSpec(int degree, std::vector<int> taps, std::vector<int> init_state)
    : degree_(degree), taps_(std::move(taps)), init_state_(std::move(init_state)) {
    if (degree_ < 2 || degree_ > 30) throw std::invalid_argument("LFSR degree out of range");
    if (static_cast<int>(init_state_.size()) != degree_)
        throw std::invalid_argument("LFSR initial state has wrong length");
    for (int t : taps_)
        if (t < 0 || t >= degree_) throw std::invalid_argument("LFSR tap out of range");
    bool nonzero = false;
    for (int& b : init_state_) {
        b &= 1;
        nonzero = nonzero || b != 0;
    }
    if (!nonzero) throw std::invalid_argument("LFSR initial state must be nonzero");

    // Maximal length: the state first recurs after exactly 2^degree - 1 steps.
    const auto bits = run(period() + degree_);
    for (int shift = 1; shift <= period(); ++shift) {
        bool same = true;
        for (int i = 0; i < degree_ && same; ++i) same = bits[shift + i] == bits[i];
        if (same && shift < period())
            throw std::invalid_argument("feedback polynomial is not primitive (period " +
                                        std::to_string(shift) + ")");
        if (same) return;
    }
    throw std::invalid_argument("LFSR does not return to its initial state");
}

std::vector<int> LfsrSpec::run(int length) const {
    std::vector<int> a(init_state_);
    a.reserve(static_cast<std::size_t>(std::max(length, degree_)));
    while (static_cast<int>(a.size()) < length) {
        const std::size_t k = a.size() - degree_;
        int next = 0;
        for (int t : taps_) next ^= a[k + t];
        a.push_back(next);
    }
    a.resize(static_cast<std::size_t>(length));
    return a;
}

std::vector<int> LfsrSpec::sequence() const { return run(period()); }

std::pair<LfsrSpec, LfsrSpec> gold_preferred_pair(int degree) {
    switch (degree) {
        case 5: return {LfsrSpec(5, {2, 0}), LfsrSpec(5, {4, 3, 2, 0})};
        case 6: return {LfsrSpec(6, {1, 0}), LfsrSpec(6, {5, 2, 1, 0})};
        case 7: return {LfsrSpec(7, {3, 0}), LfsrSpec(7, {3, 2, 1, 0})};
        default:
            throw std::invalid_argument("unsupported Gold degree " + std::to_string(degree) +
                                        " (supported: 5, 6, 7)");
    }
}

namespace {

ChipSequence binary_chips(const std::vector<int>& bits, std::string label) {
    ChipSequence s{ComplexVector(static_cast<Eigen::Index>(bits.size())), std::move(label)};
    for (std::size_t i = 0; i < bits.size(); ++i) s.entries(static_cast<Eigen::Index>(i)) = bits[i] ? -1.0 : 1.0;
    return s;
}

}  // namespace

std::vector<ChipSequence> gold_family(int degree) {
    const auto [first, second] = gold_preferred_pair(degree);
    const auto u = first.sequence();
    const auto v = second.sequence();
    const int n = first.period();
    const std::string tag = "gold(degree=" + std::to_string(degree) + ")";

    std::vector<ChipSequence> family;
    family.reserve(static_cast<std::size_t>(n + 2));
    for (int shift = 0; shift < n; ++shift) {
        std::vector<int> bits(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) bits[i] = u[i] ^ v[(i + shift) % n];
        family.push_back(binary_chips(bits, tag + ":shift=" + std::to_string(shift)));
    }
    family.push_back(binary_chips(u, tag + ":m-sequence-u"));
    family.push_back(binary_chips(v, tag + ":m-sequence-v"));
    return family;
}

ChipSequence fzc_sequence(int n_chips, int m_param) {
    if (n_chips < 2) throw std::domain_error("FZC length must be >= 2");
    if (std::gcd(m_param, n_chips) != 1)
        throw std::domain_error("FZC parameter M=" + std::to_string(m_param) +
                                " is not relatively prime to N=" + std::to_string(n_chips));
    ChipSequence s{ComplexVector(n_chips),
                   "fzc(N=" + std::to_string(n_chips) + ",M=" + std::to_string(m_param) + ")"};
    const bool odd = n_chips % 2 != 0;
    for (long n = 1; n <= n_chips; ++n) {
        // Reduce the integer exponent mod 2N before scaling to keep the phase exact.
        const long q = odd ? n * (n + 1) : n * n;
        const long r = (static_cast<long>(m_param) * q) % (2L * n_chips);
        s.entries(n - 1) = std::polar(1.0, -kPi * static_cast<double>(r) / n_chips);
    }
    return s;
}

ChipSequence single_tone_sequence(int n_chips, int k_param) {
    if (n_chips < 2) throw std::domain_error("tone length must be >= 2");
    if (k_param < 0 || k_param >= n_chips)
        throw std::domain_error("tone index k=" + std::to_string(k_param) + " outside 0..N-1");
    ChipSequence s{ComplexVector(n_chips),
                   "tone(N=" + std::to_string(n_chips) + ",k=" + std::to_string(k_param) + ")"};
    for (long n = 1; n <= n_chips; ++n) {
        const long r = (static_cast<long>(k_param) * n) % n_chips;
        s.entries(n - 1) = std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / n_chips);
    }
    return s;
}

std::vector<SpectralCoeffs> random_feasible_point(int n_chips, int n_users, std::uint64_t seed) {
    if (n_chips < 2) throw std::domain_error("n_chips must be >= 2");
    if (n_users < 1) throw std::domain_error("n_users must be >= 1");
    const ComplexMatrix phi_hat = coupling_matrices(n_chips).phi_hat;
    SplitMix64 engine(seed);
    std::vector<SpectralCoeffs> out;
    out.reserve(static_cast<std::size_t>(n_users));
    for (int k = 0; k < n_users; ++k) {
        ComplexVector alpha(n_chips);
        for (int m = 0; m < n_chips; ++m) {
            const double re = standard_normal(engine);
            const double im = standard_normal(engine);
            alpha(m) = Complex{re, im};
        }
        alpha *= std::sqrt(static_cast<double>(n_chips)) / alpha.norm();
        ComplexVector beta = phi_hat * alpha;
        out.push_back({std::move(alpha), std::move(beta)});
    }
    return out;
}

ChipSequence sequence_from_coeffs(const SpectralCoeffs& c, std::string label) {
    return {reconstruct(c, Basis::alpha), std::move(label)};
}

}  // namespace cdmaseq
