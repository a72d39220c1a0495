#include "cdmaseq/interference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cdmaseq/spectral.hpp"

namespace cdmaseq {

namespace {

void check_user(std::span<const ChipSequence> sequences, int user) {
    if (user < 0 || user >= static_cast<int>(sequences.size()))
        throw std::domain_error("user index " + std::to_string(user) + " out of range");
}

void check_sequences(const CdmaConfig& cfg, std::span<const ChipSequence> sequences) {
    for (const auto& s : sequences)
        if (s.size() != cfg.n_chips())
            throw std::domain_error("sequence '" + s.label + "' has length " +
                                    std::to_string(s.size()) + ", expected " +
                                    std::to_string(cfg.n_chips()));
}

// s_i^* B^{(l)} s_k for 0 <= l <= N.
Complex shifted_product(const ComplexVector& s_i, const ComplexVector& s_k, BitWindow bits,
                        int l) {
    const int n = static_cast<int>(s_i.size());
    Complex wrapped{0.0, 0.0};
    for (int m = 0; m < l; ++m)
        wrapped += std::conj(s_i(m)) * s_k(n - l + m);
    Complex aligned{0.0, 0.0};
    for (int m = 0; m < n - l; ++m)
        aligned += std::conj(s_i(l + m)) * s_k(m);
    return static_cast<double>(bits.prev) * wrapped + static_cast<double>(bits.cur) * aligned;
}

}  // namespace

CdmaConfig::CdmaConfig(int n_chips, int n_users, double power, double symbol_duration,
                       double noise_density)
    : n_chips_(n_chips),
      n_users_(n_users),
      power_(power),
      symbol_duration_(symbol_duration),
      noise_density_(noise_density) {
    if (n_chips < 2) throw std::invalid_argument("n_chips must be >= 2");
    if (n_users < 1) throw std::invalid_argument("n_users must be >= 1");
    if (!(power > 0.0)) throw std::invalid_argument("power must be positive");
    if (!(symbol_duration > 0.0)) throw std::invalid_argument("symbol duration must be positive");
    if (!(noise_density >= 0.0)) throw std::invalid_argument("noise density must be >= 0");
}

BitWindow::BitWindow(int prev_bit, int cur_bit) : prev(prev_bit), cur(cur_bit) {
    if ((prev != 1 && prev != -1) || (cur != 1 && cur != -1))
        throw std::domain_error("bits must be +1 or -1");
}

BitWindow BitWindow::enumerate(int index) {
    return BitWindow{(index & 1) ? -1 : 1, (index & 2) ? -1 : 1};
}

RealMatrix shift_matrix(int n_chips, int l, BitWindow bits) {
    if (l < 0 || l > n_chips) throw std::domain_error("shift l out of range 0..N");
    RealMatrix b = RealMatrix::Zero(n_chips, n_chips);
    for (int r = 0; r < l; ++r) b(r, n_chips - l + r) = bits.prev;
    for (int r = 0; r < n_chips - l; ++r) b(l + r, r) = bits.cur;
    return b;
}

Complex spectral_phase(int l, int m, int n_chips) {
    return std::polar(1.0, -2.0 * kPi * l * static_cast<double>(m) / n_chips);
}

Complex spectral_phase_hat(int l, int m, int n_chips) {
    return std::polar(1.0, -2.0 * kPi * l * (static_cast<double>(m) / n_chips + half_chip_offset(n_chips)));
}

std::pair<Complex, Complex> partial_sums(const ComplexVector& s_i, const ComplexVector& s_k,
                                         BitWindow bits, int l) {
    const int n = static_cast<int>(s_i.size());
    if (s_k.size() != n) throw std::domain_error("sequence lengths differ");
    if (l < 0 || l > n - 1)
        throw std::domain_error("chip offset l=" + std::to_string(l) + " outside 0..N-1");
    return {shifted_product(s_i, s_k, bits, l), shifted_product(s_i, s_k, bits, l + 1)};
}

double gamma_integral(const ComplexVector& s_i, const ComplexVector& s_k, BitWindow bits, int l,
                      double chip_duration) {
    if (!(chip_duration > 0.0)) throw std::domain_error("chip duration must be positive");
    const auto [a0, a1] = partial_sums(s_i, s_k, bits, l);
    const double tc3 = chip_duration * chip_duration * chip_duration;
    return tc3 / 3.0 * (std::norm(a0) + std::norm(a1) + std::real(a0 * std::conj(a1)));
}

double interference_variance_direct(const CdmaConfig& cfg, std::span<const ChipSequence> sequences,
                                    int user) {
    check_user(sequences, user);
    check_sequences(cfg, sequences);
    const int n = cfg.n_chips();
    double total = 0.0;
    for (int k = 0; k < static_cast<int>(sequences.size()); ++k) {
        if (k == user) continue;
        double expected = 0.0;
        for (int b = 0; b < BitWindow::kCount; ++b) {
            const BitWindow bits = BitWindow::enumerate(b);
            for (int l = 0; l < n; ++l)
                expected += gamma_integral(sequences[user].entries, sequences[k].entries, bits, l,
                                           cfg.chip_duration());
        }
        total += expected / BitWindow::kCount;
    }
    return cfg.power() / (4.0 * cfg.symbol_duration()) * total;
}

RealVector s_m_terms(const SpectralCoeffs& c_i, const SpectralCoeffs& c_k) {
    const int n = c_i.size();
    if (c_k.size() != n || c_i.beta.size() != n || c_k.beta.size() != n)
        throw std::domain_error("coefficient vectors differ in length");
    RealVector s(n);
    for (int m = 1; m <= n; ++m) {
        const double w = 1.0 + 0.5 * std::cos(2.0 * kPi * m / n);
        const double w_hat = 1.0 + 0.5 * std::cos(2.0 * kPi * (static_cast<double>(m) / n + half_chip_offset(n)));
        s(m - 1) = std::norm(c_i.alpha(m - 1)) * std::norm(c_k.alpha(m - 1)) * w +
                   std::norm(c_i.beta(m - 1)) * std::norm(c_k.beta(m - 1)) * w_hat;
    }
    return s;
}

namespace {

double s_m_total(std::span<const ChipSequence> sequences, int user) {
    const SpectralCoeffs c_i = decompose(sequences[user]);
    double sum = 0.0;
    for (int k = 0; k < static_cast<int>(sequences.size()); ++k) {
        if (k == user) continue;
        sum += s_m_terms(c_i, decompose(sequences[k])).sum();
    }
    return sum;
}

}  // namespace

double interference_variance_spectral(const CdmaConfig& cfg,
                                      std::span<const ChipSequence> sequences, int user) {
    check_user(sequences, user);
    check_sequences(cfg, sequences);
    const double n = cfg.n_chips();
    const double t = cfg.symbol_duration();
    return cfg.power() * t * t / (12.0 * n * n) * s_m_total(sequences, user);
}

std::optional<double> snr_from_s_sum(double s_m_sum, const CdmaConfig& cfg) {
    const double n = cfg.n_chips();
    const double denom =
        s_m_sum / (6.0 * n * n) + cfg.noise_density() / (2.0 * cfg.power() * cfg.symbol_duration());
    if (!(denom > 0.0)) return std::nullopt;
    return 1.0 / std::sqrt(denom);
}

SnrBreakdown snr(const CdmaConfig& cfg, std::span<const ChipSequence> sequences, int user) {
    check_user(sequences, user);
    check_sequences(cfg, sequences);
    SnrBreakdown out;
    const double n = cfg.n_chips();
    const double t = cfg.symbol_duration();
    out.s_m_sum = s_m_total(sequences, user);
    out.interference_variance = cfg.power() * t * t / (12.0 * n * n) * out.s_m_sum;
    out.noise_variance = cfg.noise_density() * t / 4.0;
    out.snr = snr_from_s_sum(out.s_m_sum, cfg);
    return out;
}

}  // namespace cdmaseq
