#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cdmaseq/interference.hpp"
#include "cdmaseq/metrics.hpp"
#include "cdmaseq/optimizer.hpp"
#include "cdmaseq/sequence_io.hpp"
#include "cdmaseq/sequences.hpp"
#include "cdmaseq/simulator.hpp"
#include "cdmaseq/spectral.hpp"

namespace py = pybind11;
using namespace cdmaseq;

namespace {

std::vector<SpectralCoeffs> coeffs_of(const std::vector<ChipSequence>& seqs) {
    std::vector<SpectralCoeffs> out;
    for (const auto& s : seqs) out.push_back(decompose(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral CDMA sequence analysis and SNR optimisation";

    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

    py::class_<ChipSequence>(m, "ChipSequence")
        .def(py::init([](ComplexVector entries, std::string label) {
                 return ChipSequence{std::move(entries), std::move(label)};
             }),
             py::arg("entries"), py::arg("label") = "")
        .def_readwrite("entries", &ChipSequence::entries)
        .def_readwrite("label", &ChipSequence::label)
        .def("__len__", &ChipSequence::size)
        .def("__repr__", [](const ChipSequence& s) {
            return "ChipSequence(label='" + s.label + "', n_chips=" + std::to_string(s.size()) + ")";
        });

    py::class_<SpectralCoeffs>(m, "SpectralCoeffs")
        .def(py::init([](ComplexVector a, ComplexVector b) { return SpectralCoeffs{std::move(a), std::move(b)}; }),
             py::arg("alpha"), py::arg("beta"))
        .def_readwrite("alpha", &SpectralCoeffs::alpha)
        .def_readwrite("beta", &SpectralCoeffs::beta);

    py::enum_<Basis>(m, "Basis").value("alpha", Basis::alpha).value("beta", Basis::beta);

    py::class_<CdmaConfig>(m, "CdmaConfig")
        .def(py::init<int, int, double, double, double>(), py::arg("n_chips"), py::arg("n_users"),
             py::arg("power") = 1.0, py::arg("symbol_duration") = 1.0, py::arg("noise_density") = 0.0)
        .def_property_readonly("n_chips", &CdmaConfig::n_chips)
        .def_property_readonly("n_users", &CdmaConfig::n_users)
        .def_property_readonly("power", &CdmaConfig::power)
        .def_property_readonly("symbol_duration", &CdmaConfig::symbol_duration)
        .def_property_readonly("chip_duration", &CdmaConfig::chip_duration)
        .def_property_readonly("noise_density", &CdmaConfig::noise_density);

    m.def("decompose", py::overload_cast<const ComplexVector&>(&decompose), py::arg("chips"));
    m.def("reconstruct", &reconstruct, py::arg("coeffs"), py::arg("basis") = Basis::alpha);
    m.def(
        "coupling_matrices",
        [](int n) {
            const auto c = coupling_matrices(n);
            return py::make_tuple(c.phi, c.phi_hat);
        },
        py::arg("n_chips"), "Returns (phi, phi_hat).");

    py::class_<SnrBreakdown>(m, "SnrBreakdown")
        .def_readonly("interference_variance", &SnrBreakdown::interference_variance)
        .def_readonly("noise_variance", &SnrBreakdown::noise_variance)
        .def_readonly("s_m_sum", &SnrBreakdown::s_m_sum)
        .def_readonly("snr", &SnrBreakdown::snr)
        .def_property_readonly("unbounded", &SnrBreakdown::unbounded);

    m.def(
        "snr", [](const CdmaConfig& cfg, const std::vector<ChipSequence>& s, int user) { return snr(cfg, s, user); },
        py::arg("cfg"), py::arg("sequences"), py::arg("user") = 0);
    m.def(
        "interference_variance_direct",
        [](const CdmaConfig& cfg, const std::vector<ChipSequence>& s, int user) {
            return interference_variance_direct(cfg, s, user);
        },
        py::arg("cfg"), py::arg("sequences"), py::arg("user") = 0);
    m.def(
        "interference_variance_spectral",
        [](const CdmaConfig& cfg, const std::vector<ChipSequence>& s, int user) {
            return interference_variance_spectral(cfg, s, user);
        },
        py::arg("cfg"), py::arg("sequences"), py::arg("user") = 0);

    m.def("gold_family", &gold_family, py::arg("degree") = 5);
    m.def("fzc_sequence", &fzc_sequence, py::arg("n_chips"), py::arg("m_param"));
    m.def("single_tone_sequence", &single_tone_sequence, py::arg("n_chips"), py::arg("k_param"));
    m.def("random_feasible_point", &random_feasible_point, py::arg("n_chips"), py::arg("n_users"), py::arg("seed"));

    m.def("periodic_correlation", &periodic_correlation, py::arg("c_u"), py::arg("c_v"), py::arg("l"));
    m.def("aperiodic_correlation", &aperiodic_correlation, py::arg("c_u"), py::arg("c_v"), py::arg("l"));

    py::class_<CorrelationPeaks>(m, "CorrelationPeaks")
        .def_readonly("theta_a", &CorrelationPeaks::theta_a)
        .def_readonly("theta_c", &CorrelationPeaks::theta_c)
        .def_readonly("theta_hat_a", &CorrelationPeaks::theta_hat_a)
        .def_readonly("theta_hat_c", &CorrelationPeaks::theta_hat_c)
        .def_readonly("has_cross", &CorrelationPeaks::has_cross);
    m.def(
        "correlation_peaks", [](const std::vector<ChipSequence>& s) { return correlation_peaks(coeffs_of(s)); },
        py::arg("sequences"));

    py::class_<SarwateReport>(m, "SarwateReport")
        .def_readonly("lhs_periodic", &SarwateReport::lhs_periodic)
        .def_readonly("lhs_aperiodic", &SarwateReport::lhs_aperiodic)
        .def_readonly("periodic_satisfied", &SarwateReport::periodic_satisfied)
        .def_readonly("aperiodic_satisfied", &SarwateReport::aperiodic_satisfied);
    m.def("sarwate_check", &sarwate_check, py::arg("peaks"), py::arg("n_chips"), py::arg("n_users"));

    m.def("objective", &objective, py::arg("a1"), py::arg("a2"), py::arg("n_chips"));
    m.def("objective_gradient", &objective_gradient, py::arg("a1"), py::arg("a2"), py::arg("n_chips"));

    py::class_<SolveReport>(m, "SolveReport")
        .def_property_readonly("status", [](const SolveReport& r) { return to_string(r.status); })
        .def_property_readonly("converged", &SolveReport::converged)
        .def_property_readonly("best_sequences",
                               [](const SolveReport& r) {
                                   return std::vector<ChipSequence>{r.best_sequences[0], r.best_sequences[1]};
                               })
        .def_readonly("objective", &SolveReport::objective)
        .def_readonly("snr", &SolveReport::snr)
        .def_readonly("e1", &SolveReport::e1)
        .def_readonly("e2", &SolveReport::e2)
        .def_readonly("kkt_residual", &SolveReport::kkt_residual)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("best_restart", &SolveReport::best_restart)
        .def_readonly("converged_restarts", &SolveReport::converged_restarts)
        .def_readonly("restart_snrs", &SolveReport::restart_snrs)
        .def_readonly("restart_converged", &SolveReport::restart_converged);
    m.def(
        "solve_multistart",
        [](int n, int restarts, std::uint64_t seed, int threads, int max_iterations) {
            SolverConfig cfg;
            cfg.restarts = restarts;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.max_iterations = max_iterations;
            py::gil_scoped_release release;
            return solve_multistart(n, cfg);
        },
        py::arg("n_chips"), py::arg("restarts") = 1, py::arg("seed") = 0, py::arg("threads") = 0,
        py::arg("max_iterations") = SolverConfig{}.max_iterations);

    py::class_<SimulationEstimate>(m, "SimulationEstimate")
        .def_readonly("var_interference_mean", &SimulationEstimate::var_interference_mean)
        .def_readonly("var_interference_stderr", &SimulationEstimate::var_interference_stderr)
        .def_readonly("snr_estimate", &SimulationEstimate::snr_estimate)
        .def_readonly("trials", &SimulationEstimate::trials)
        .def_readonly("seed", &SimulationEstimate::seed);
    m.def(
        "estimate_snr",
        [](const CdmaConfig& cfg, const std::vector<ChipSequence>& s, int user, long trials, std::uint64_t seed,
           int threads) {
            SimulationOptions opt;
            opt.trials = trials;
            opt.seed = seed;
            opt.threads = threads;
            py::gil_scoped_release release;
            return estimate_snr(cfg, s, user, opt);
        },
        py::arg("cfg"), py::arg("sequences"), py::arg("user") = 0, py::arg("trials") = 100000, py::arg("seed") = 1,
        py::arg("threads") = 0);

    m.def(
        "read_sequence_set", [](const std::filesystem::path& p) { return read_sequence_set(p).sequences; },
        py::arg("path"));
    m.def(
        "write_sequence_set",
        [](const std::filesystem::path& p, std::vector<ChipSequence> s) {
            write_sequence_set(p, make_sequence_set(std::move(s)));
        },
        py::arg("path"), py::arg("sequences"));
}
