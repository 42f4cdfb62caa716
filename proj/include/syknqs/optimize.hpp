#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "syknqs/hamiltonian.hpp"
#include "syknqs/network.hpp"

namespace syknqs {

enum class LossKind { Overlap, Voe };

struct LossValue {
    LossKind kind = LossKind::Overlap;
    double value = 0.0;
    double energy = 0.0;      // Rayleigh quotient of the variational state
    double delta_e = 0.0;     // relative energy error against e_gs, when known
    double infidelity = 0.0;  // overlap infidelity, when psi_gs is known
};

/// (E - E_GS) / |E_GS|; nonnegative for variational energies.
double relative_energy_error(double energy, double energy_gs);

/// Infidelity 1 - |<psi_theta|psi_gs>| / ||psi_theta||, evaluated by full
/// summation over the sector basis. psi_gs must be unit norm. When a
/// Hamiltonian is supplied, the energy and delta_e are computed alongside.
LossValue overlap_loss(const NetworkParams& params, const Eigen::VectorXcd& psi_gs,
                       const SectorBasis& basis, const SparseHamiltonian* hamiltonian = nullptr,
                       double energy_gs = 0.0);

/// Variational energy <psi|H|psi> / <psi|psi> as the loss itself.
LossValue voe_loss(const NetworkParams& params, const SparseHamiltonian& hamiltonian,
                   double energy_gs = 0.0);

struct LossGradient {
    LossValue value;
    /// Gradient over the real-decomposed parameter vector, congruent with
    /// NetworkParams::to_flat (Re/Im interleaved).
    Eigen::VectorXd grad;
};

/// Reverse-mode gradient of the chosen loss through the complex network.
/// For Overlap, psi_gs is required; for Voe, hamiltonian is required.
LossGradient loss_gradient(const NetworkParams& params, LossKind kind, const SectorBasis& basis,
                           const SparseHamiltonian* hamiltonian,
                           const Eigen::VectorXcd* psi_gs, double energy_gs = 0.0);

/// Piecewise-constant learning rate: segments of (start step, rate).
struct LearningRateSchedule {
    std::vector<std::pair<std::size_t, double>> segments{{0, 1e-3}};
    double at(std::size_t step) const;
};

/// Bias-corrected Adam over the real-decomposed parameter vector.
struct AdamState {
    Eigen::VectorXd first_moment;
    Eigen::VectorXd second_moment;
    std::size_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    LearningRateSchedule schedule;

    explicit AdamState(std::size_t num_real_params);
    void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad);
};

}  // namespace syknqs
