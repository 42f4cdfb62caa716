#include "syknqs/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace syknqs {

double relative_energy_error(double energy, double energy_gs) {
    if (energy_gs == 0.0) {
        throw std::invalid_argument("relative_energy_error: E_GS must be nonzero");
    }
    return (energy - energy_gs) / std::abs(energy_gs);
}

namespace {

struct AmplitudeEval {
    ForwardCache cache;
    Eigen::VectorXcd psi;  // exp(log_amp - max Re log_amp)
};

AmplitudeEval evaluate(const NetworkParams& params, const SectorBasis& basis) {
    AmplitudeEval eval;
    eval.psi = amplitudes(params, basis, &eval.cache);
    if (!eval.psi.allFinite()) {
        throw std::runtime_error("amplitude evaluation overflowed despite max-log shift");
    }
    return eval;
}

double rayleigh_energy(const SparseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi) {
    const std::complex<double> quotient = hamiltonian.expectation(psi);
    const double tolerance = 1e-10 * std::max(1.0, std::abs(quotient.real()));
    if (std::abs(quotient.imag()) > tolerance) {
        throw std::runtime_error("Rayleigh quotient has a non-negligible imaginary part");
    }
    return quotient.real();
}

double overlap_value(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& psi_gs) {
    return 1.0 - std::abs(psi.dot(psi_gs)) / psi.norm();
}

// Backpropagates the adjoint of the amplitude vector through the logsumexp
// head and the layers. `amp_adjoint[x]` carries dLoss/dRe(psi_x) + i*Im.
Eigen::VectorXd backward(const NetworkParams& params, const AmplitudeEval& eval,
                         const Eigen::VectorXcd& amp_adjoint) {
    const Architecture& arch = params.arch;
    const ForwardCache& cache = eval.cache;
    const Eigen::Index dim = eval.psi.size();
    const Activation kind = arch.activation;
    const int block_len = arch.skip ? arch.skip->layers_per_block : 0;

    // psi = exp(log_amp - shift) and the logsumexp head are holomorphic, so
    // adjoints pull back by the conjugated derivative.
    Eigen::VectorXcd log_adjoint(dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        log_adjoint[x] = std::conj(eval.psi[x]) * amp_adjoint[x];
    }

    Eigen::MatrixXcd signal_adjoint(cache.output.rows(), dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        for (Eigen::Index i = 0; i < cache.output.rows(); ++i) {
            const std::complex<double> softmax = std::exp(cache.output(i, x) - cache.log_amp[x]);
            signal_adjoint(i, x) = std::conj(softmax) * log_adjoint[x];
        }
    }

    std::vector<Eigen::MatrixXcd> weight_grad(params.weights.size());
    std::vector<Eigen::VectorXcd> bias_grad(params.biases.size());
    Eigen::MatrixXcd residual_adjoint;
    if (arch.skip) residual_adjoint = Eigen::MatrixXcd::Zero(cache.output.rows(), dim);

    for (int l = arch.num_layers - 1; l >= 0; --l) {
        const auto layer = static_cast<std::size_t>(l);
        if (arch.skip && (l + 1) % block_len == 0) residual_adjoint += signal_adjoint;

        const Eigen::MatrixXcd& z = cache.preact[layer];
        Eigen::MatrixXcd preact_adjoint(z.rows(), z.cols());
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            for (Eigen::Index r = 0; r < z.rows(); ++r) {
                const std::complex<double> a = signal_adjoint(r, c);
                preact_adjoint(r, c) = std::complex<double>(
                    activation_derivative(z(r, c).real(), kind) * a.real(),
                    activation_derivative(z(r, c).imag(), kind) * a.imag());
            }
        }
        if (arch.skip && l == 0) preact_adjoint += residual_adjoint;

        weight_grad[layer] = preact_adjoint * cache.layer_in[layer].adjoint();
        bias_grad[layer] = preact_adjoint.rowwise().sum();
        if (l > 0) signal_adjoint = params.weights[layer].adjoint() * preact_adjoint;
    }

    Eigen::VectorXd grad(static_cast<Eigen::Index>(params.num_real_params()));
    Eigen::Index pos = 0;
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        const auto& wg = weight_grad[l];
        for (Eigen::Index r = 0; r < wg.rows(); ++r) {
            for (Eigen::Index c = 0; c < wg.cols(); ++c) {
                grad[pos++] = wg(r, c).real();
                grad[pos++] = wg(r, c).imag();
            }
        }
        const auto& bg = bias_grad[l];
        for (Eigen::Index r = 0; r < bg.size(); ++r) {
            grad[pos++] = bg[r].real();
            grad[pos++] = bg[r].imag();
        }
    }
    return grad;
}

Eigen::VectorXcd overlap_amp_adjoint(const Eigen::VectorXcd& psi,
                                     const Eigen::VectorXcd& psi_gs) {
    const std::complex<double> overlap = psi.dot(psi_gs);
    const double overlap_abs = std::abs(overlap);
    const double norm = psi.norm();
    Eigen::VectorXcd adjoint(psi.size());
    if (overlap_abs < 1e-300) {
        // Exactly orthogonal: the infidelity is at its maximum and the phase
        // of the overlap is undefined; take the norm term alone.
        adjoint = Eigen::VectorXcd::Zero(psi.size());
        return adjoint;
    }
    const std::complex<double> phase_factor = std::conj(overlap) / (overlap_abs * norm);
    const double norm_factor = overlap_abs / (norm * norm * norm);
    for (Eigen::Index x = 0; x < psi.size(); ++x) {
        adjoint[x] = -phase_factor * psi_gs[x] + norm_factor * psi[x];
    }
    return adjoint;
}

Eigen::VectorXcd voe_amp_adjoint(const SparseHamiltonian& hamiltonian,
                                 const Eigen::VectorXcd& psi, double energy) {
    const Eigen::VectorXcd h_psi = hamiltonian.apply(psi);
    const double norm2 = psi.squaredNorm();
    return 2.0 * (h_psi - energy * psi) / norm2;
}

}  // namespace

LossValue overlap_loss(const NetworkParams& params, const Eigen::VectorXcd& psi_gs,
                       const SectorBasis& basis, const SparseHamiltonian* hamiltonian,
                       double energy_gs) {
    AmplitudeEval eval = evaluate(params, basis);
    LossValue result;
    result.kind = LossKind::Overlap;
    result.value = overlap_value(eval.psi, psi_gs);
    result.infidelity = result.value;
    if (hamiltonian) {
        result.energy = rayleigh_energy(*hamiltonian, eval.psi);
        if (energy_gs != 0.0) result.delta_e = relative_energy_error(result.energy, energy_gs);
    }
    return result;
}

LossValue voe_loss(const NetworkParams& params, const SparseHamiltonian& hamiltonian,
                   double energy_gs) {
    AmplitudeEval eval = evaluate(params, hamiltonian.basis());
    LossValue result;
    result.kind = LossKind::Voe;
    result.energy = rayleigh_energy(hamiltonian, eval.psi);
    result.value = result.energy;
    if (energy_gs != 0.0) result.delta_e = relative_energy_error(result.energy, energy_gs);
    return result;
}

LossGradient loss_gradient(const NetworkParams& params, LossKind kind, const SectorBasis& basis,
                           const SparseHamiltonian* hamiltonian, const Eigen::VectorXcd* psi_gs,
                           double energy_gs) {
    AmplitudeEval eval = evaluate(params, basis);
    LossGradient result;
    result.value.kind = kind;
    Eigen::VectorXcd amp_adjoint;
    if (kind == LossKind::Overlap) {
        if (!psi_gs) throw std::invalid_argument("loss_gradient: overlap loss needs psi_gs");
        result.value.value = overlap_value(eval.psi, *psi_gs);
        result.value.infidelity = result.value.value;
        amp_adjoint = overlap_amp_adjoint(eval.psi, *psi_gs);
        if (hamiltonian) {
            result.value.energy = rayleigh_energy(*hamiltonian, eval.psi);
            if (energy_gs != 0.0) {
                result.value.delta_e = relative_energy_error(result.value.energy, energy_gs);
            }
        }
    } else {
        if (!hamiltonian) throw std::invalid_argument("loss_gradient: voe loss needs H");
        result.value.energy = rayleigh_energy(*hamiltonian, eval.psi);
        result.value.value = result.value.energy;
        if (energy_gs != 0.0) {
            result.value.delta_e = relative_energy_error(result.value.energy, energy_gs);
        }
        if (psi_gs) result.value.infidelity = overlap_value(eval.psi, *psi_gs);
        amp_adjoint = voe_amp_adjoint(*hamiltonian, eval.psi, result.value.energy);
    }
    result.grad = backward(params, eval, amp_adjoint);
    return result;
}

double LearningRateSchedule::at(std::size_t step) const {
    double rate = segments.empty() ? 1e-3 : segments.front().second;
    for (const auto& [start, value] : segments) {
        if (step >= start) rate = value;
    }
    return rate;
}

AdamState::AdamState(std::size_t num_real_params)
    : first_moment(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_real_params))),
      second_moment(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_real_params))) {}

void AdamState::step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad) {
    if (theta.size() != first_moment.size() || grad.size() != first_moment.size()) {
        throw std::invalid_argument("AdamState::step: shape mismatch");
    }
    const double lr = schedule.at(t);
    ++t;
    first_moment = beta1 * first_moment + (1.0 - beta1) * grad;
    second_moment = beta2 * second_moment + (1.0 - beta2) * grad.cwiseProduct(grad);
    const double bias1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bias2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double m_hat = first_moment[i] / bias1;
        const double v_hat = second_moment[i] / bias2;
        theta[i] -= lr * m_hat / (std::sqrt(v_hat) + epsilon);
    }
}

}  // namespace syknqs
