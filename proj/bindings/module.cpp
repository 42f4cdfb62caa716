#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "syknqs/compress.hpp"
#include "syknqs/config.hpp"
#include "syknqs/harness.hpp"

namespace py = pybind11;
using namespace syknqs;

namespace {

std::shared_ptr<SectorBasis> half_filling_basis(int num_sites) {
    return std::make_shared<SectorBasis>(num_sites, num_sites / 2);
}

Activation parse_activation(const std::string& name) {
    if (name == "selu") return Activation::Selu;
    if (name == "tanh") return Activation::Tanh;
    throw std::invalid_argument("unknown activation: " + name);
}

LossKind parse_loss(const std::string& name) {
    if (name == "overlap") return LossKind::Overlap;
    if (name == "voe") return LossKind::Voe;
    throw std::invalid_argument("unknown loss: " + name);
}

}  // namespace

PYBIND11_MODULE(_syknqs, m) {
    m.doc() = "neural quantum states for the SYK and Heisenberg models";

    py::class_<SectorBasis, std::shared_ptr<SectorBasis>>(m, "SectorBasis")
        .def(py::init<int, int>(), py::arg("num_sites"), py::arg("num_particles"))
        .def("__len__", &SectorBasis::size)
        .def_property_readonly("num_sites", &SectorBasis::num_sites)
        .def_property_readonly("num_particles", &SectorBasis::num_particles)
        .def("word", &SectorBasis::word, py::arg("rank"))
        .def("rank", &SectorBasis::rank, py::arg("word"));

    py::class_<CouplingTensor>(m, "CouplingTensor")
        .def_static("sample", &CouplingTensor::sample, py::arg("num_sites"), py::arg("seed"))
        .def_property_readonly("num_sites", &CouplingTensor::num_sites)
        .def_property_readonly("seed", &CouplingTensor::seed)
        .def("at", &CouplingTensor::at, py::arg("i"), py::arg("j"), py::arg("k"), py::arg("l"));

    py::class_<SparseHamiltonian>(m, "SparseHamiltonian")
        .def_property_readonly("dim", &SparseHamiltonian::dim)
        .def_property_readonly("nonzeros", &SparseHamiltonian::nonzeros)
        .def("dense", &SparseHamiltonian::dense)
        .def("apply", &SparseHamiltonian::apply, py::arg("vector"))
        .def("expectation", &SparseHamiltonian::expectation, py::arg("vector"));

    m.def(
        "build_syk",
        [](int num_sites, std::uint64_t seed) {
            auto basis = half_filling_basis(num_sites);
            return build_syk_hamiltonian(CouplingTensor::sample(num_sites, seed), basis);
        },
        py::arg("num_sites"), py::arg("seed"));
    m.def(
        "build_heisenberg",
        [](int num_sites) { return build_heisenberg(num_sites, half_filling_basis(num_sites)); },
        py::arg("num_sites"));

    py::class_<GroundStateSolution>(m, "GroundStateSolution")
        .def_readonly("energy", &GroundStateSolution::energy)
        .def_readonly("vector", &GroundStateSolution::vector)
        .def_readonly("residual", &GroundStateSolution::residual);

    m.def("ground_state", &ground_state, py::arg("hamiltonian"), py::arg("tol") = 1e-12,
          py::arg("max_iter") = 10000, py::arg("start_seed") = 7);
    m.def(
        "bipartite_entropy",
        [](const Eigen::VectorXcd& state, const SectorBasis& basis) {
            return bipartite_entropy(state, basis);
        },
        py::arg("state"), py::arg("basis"));
    m.def("page_value", &page_value, py::arg("num_sites"));
    m.def("derive_seed", &derive_seed, py::arg("master_seed"), py::arg("stream_name"));

    py::class_<Architecture>(m, "Architecture")
        .def(py::init([](int num_sites, int alpha, int mu, const std::string& activation,
                         int skip_blocks) {
                 Architecture arch;
                 arch.num_sites = num_sites;
                 arch.alpha = alpha;
                 arch.num_layers = mu;
                 arch.activation = parse_activation(activation);
                 if (skip_blocks > 0) arch.skip = SkipBlocks{skip_blocks, mu / skip_blocks};
                 arch.validate();
                 return arch;
             }),
             py::arg("num_sites"), py::arg("alpha"), py::arg("mu"),
             py::arg("activation") = "selu", py::arg("skip_blocks") = 0)
        .def_readonly("num_sites", &Architecture::num_sites)
        .def_readonly("alpha", &Architecture::alpha)
        .def_property_readonly("mu", [](const Architecture& a) { return a.num_layers; })
        .def_property_readonly("hidden", &Architecture::hidden)
        .def_property_readonly("num_params", &Architecture::num_params);

    py::class_<NetworkParams>(m, "NetworkParams")
        .def_static("zeros", &NetworkParams::zeros, py::arg("arch"))
        .def_static("init", &NetworkParams::init, py::arg("arch"), py::arg("seed"))
        .def_readonly("arch", &NetworkParams::arch)
        .def("to_flat", &NetworkParams::to_flat)
        .def("from_flat", &NetworkParams::from_flat, py::arg("flat"))
        .def("save", &NetworkParams::save, py::arg("path"), py::arg("seed_lineage") = 0)
        .def_static(
            "load", [](const std::string& path) { return NetworkParams::load(path); },
            py::arg("path"));

    m.def(
        "log_amplitudes",
        [](const NetworkParams& params, const SectorBasis& basis) {
            return log_amplitudes(params, basis);
        },
        py::arg("params"), py::arg("basis"));
    m.def(
        "amplitudes",
        [](const NetworkParams& params, const SectorBasis& basis) {
            return amplitudes(params, basis);
        },
        py::arg("params"), py::arg("basis"));

    m.def(
        "overlap_loss",
        [](const NetworkParams& params, const Eigen::VectorXcd& psi_gs,
           const SectorBasis& basis) { return overlap_loss(params, psi_gs, basis).value; },
        py::arg("params"), py::arg("psi_gs"), py::arg("basis"));
    m.def(
        "voe_loss",
        [](const NetworkParams& params, const SparseHamiltonian& hamiltonian) {
            return voe_loss(params, hamiltonian).value;
        },
        py::arg("params"), py::arg("hamiltonian"));
    m.def(
        "loss_gradient",
        [](const NetworkParams& params, const std::string& loss,
           const SparseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi_gs) {
            LossGradient lg = loss_gradient(params, parse_loss(loss), hamiltonian.basis(),
                                            &hamiltonian, &psi_gs);
            return py::make_tuple(lg.value.value, lg.grad);
        },
        py::arg("params"), py::arg("loss"), py::arg("hamiltonian"), py::arg("psi_gs"));

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_property(
            "loss", [](const TrainConfig& c) { return c.loss == LossKind::Voe ? "voe" : "overlap"; },
            [](TrainConfig& c, const std::string& name) { c.loss = parse_loss(name); })
        .def_readwrite("t_max", &TrainConfig::t_max)
        .def_readwrite("threshold", &TrainConfig::threshold)
        .def_readwrite("stop_at_threshold", &TrainConfig::stop_at_threshold)
        .def_readwrite("enable_truncation", &TrainConfig::enable_truncation)
        .def_readwrite("trunc_floor", &TrainConfig::trunc_floor)
        .def_readwrite("trunc_interval", &TrainConfig::trunc_interval)
        .def_readwrite("smooth_window", &TrainConfig::smooth_window)
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("init_seed", &TrainConfig::init_seed);

    py::class_<TrainingRecord>(m, "TrainingRecord")
        .def_readonly("delta_o", &TrainingRecord::delta_o)
        .def_readonly("delta_e", &TrainingRecord::delta_e)
        .def_readonly("best_delta_e", &TrainingRecord::best_delta_e)
        .def_readonly("best_step", &TrainingRecord::best_step)
        .def_readonly("best_params", &TrainingRecord::best_params)
        .def_property_readonly("verdict",
                               [](const TrainingRecord& r) { return verdict_name(r.verdict); })
        .def_readonly("wall_seconds", &TrainingRecord::wall_seconds)
        .def_readonly("failure", &TrainingRecord::failure);

    m.def("train", &train, py::arg("arch"), py::arg("hamiltonian"), py::arg("ground"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::class_<CompressionReport>(m, "CompressionReport")
        .def_readonly("svd_threshold", &CompressionReport::svd_threshold)
        .def_readonly("retained_ranks", &CompressionReport::retained_ranks)
        .def_readonly("total_ranks", &CompressionReport::total_ranks)
        .def_readonly("retained_fraction", &CompressionReport::retained_fraction)
        .def_readonly("delta_e_before", &CompressionReport::delta_e_before)
        .def_readonly("delta_e_after", &CompressionReport::delta_e_after);

    m.def("svd_truncate", &svd_truncate, py::arg("params"), py::arg("svd_threshold"),
          py::arg("hamiltonian"), py::arg("energy_gs"));
}
