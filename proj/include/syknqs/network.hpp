#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "syknqs/basis.hpp"

namespace syknqs {

enum class Activation { Selu, Tanh };

/// Residual structure: the network is split into `num_blocks` blocks of
/// `layers_per_block` layers each; after every block the first layer's
/// affine output is added to the block output.
struct SkipBlocks {
    int num_blocks = 1;
    int layers_per_block = 1;
};

struct Architecture {
    int num_sites = 0;
    int alpha = 1;
    int num_layers = 1;
    Activation activation = Activation::Selu;
    std::optional<SkipBlocks> skip;

    int hidden() const { return alpha * num_sites; }
    /// Exact complex parameter count: (aL*L + aL) + (mu-1)*(aL*aL + aL).
    std::size_t num_params() const;
    void validate() const;
};

/// SELU constants of the self-normalizing form lambda*x (x>0),
/// lambda*a*(e^x - 1) (x<=0).
constexpr double kSeluLambda = 1.0507009873554805;
constexpr double kSeluAlpha = 1.6732632423543772;

double selu(double x);
double selu_derivative(double x);
double activation_scalar(double x, Activation kind);
double activation_derivative(double x, Activation kind);

/// Applies the scalar activation separately to real and imaginary parts.
std::complex<double> complex_activation(std::complex<double> z, Activation kind);

struct NetworkParams {
    Architecture arch;
    std::vector<Eigen::MatrixXcd> weights;  // first layer aL x L, later aL x aL
    std::vector<Eigen::VectorXcd> biases;   // length aL each

    static NetworkParams zeros(const Architecture& arch);
    /// Fan-in-scaled complex Gaussian weights (variance 1/fan_in split evenly
    /// across real and imaginary parts), zero biases. Deterministic per seed.
    static NetworkParams init(const Architecture& arch, std::uint64_t seed);

    std::size_t num_real_params() const { return 2 * arch.num_params(); }
    /// Flat real view, per layer: Re/Im interleaved, W row-major then b.
    Eigen::VectorXd to_flat() const;
    void from_flat(const Eigen::VectorXd& flat);

    void save(const std::string& path, std::uint64_t seed_lineage = 0) const;
    static NetworkParams load(const std::string& path, std::uint64_t* seed_lineage = nullptr);
};

/// Per-layer intermediates kept for reverse-mode differentiation.
/// Column x of every matrix belongs to basis word x.
struct ForwardCache {
    Eigen::MatrixXcd input;                 // L x D, occupation bits as 0/1
    std::vector<Eigen::MatrixXcd> layer_in;  // input fed to each layer
    std::vector<Eigen::MatrixXcd> preact;    // affine outputs z^(l)
    Eigen::MatrixXcd output;                 // final aL x D signal
    Eigen::VectorXcd log_amp;                // logsumexp per column
};

/// Complex log-amplitude of a single occupation word (Eq. of the logsumexp
/// head over the final layer outputs).
std::complex<double> log_amplitude(const NetworkParams& params, Word x);

/// Batched evaluation over a whole sector basis.
Eigen::VectorXcd log_amplitudes(const NetworkParams& params, const SectorBasis& basis,
                                ForwardCache* cache = nullptr);

/// Amplitudes exp(log_amp - max Re log_amp); the global shift is a gauge.
Eigen::VectorXcd amplitudes(const NetworkParams& params, const SectorBasis& basis,
                            ForwardCache* cache = nullptr);

/// Numerically stable complex logsumexp (max-subtraction on real parts).
std::complex<double> log_sum_exp(const Eigen::VectorXcd& values);

}  // namespace syknqs
