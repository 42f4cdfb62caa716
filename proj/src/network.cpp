#include "syknqs/network.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

namespace syknqs {

void Architecture::validate() const {
    if (num_sites < 1 || alpha < 1 || num_layers < 1) {
        throw std::invalid_argument("Architecture: dimensions must be positive");
    }
    if (skip && skip->num_blocks * skip->layers_per_block != num_layers) {
        throw std::invalid_argument("Architecture: skip blocks must tile the layers");
    }
}

std::size_t Architecture::num_params() const {
    const std::size_t h = static_cast<std::size_t>(hidden());
    const std::size_t L = static_cast<std::size_t>(num_sites);
    return (h * L + h) + static_cast<std::size_t>(num_layers - 1) * (h * h + h);
}

double selu(double x) {
    return x > 0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * std::expm1(x);
}

double selu_derivative(double x) {
    // Right limit at 0.
    return x > 0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
}

std::complex<double> complex_activation(std::complex<double> z, Activation kind) {
    switch (kind) {
        case Activation::Selu:
            return {selu(z.real()), selu(z.imag())};
        case Activation::Tanh:
            return {std::tanh(z.real()), std::tanh(z.imag())};
    }
    throw std::logic_error("unknown activation");
}

double activation_scalar(double x, Activation kind) {
    return kind == Activation::Selu ? selu(x) : std::tanh(x);
}

double activation_derivative(double x, Activation kind) {
    if (kind == Activation::Selu) return selu_derivative(x);
    const double t = std::tanh(x);
    return 1.0 - t * t;
}

NetworkParams NetworkParams::zeros(const Architecture& arch) {
    arch.validate();
    NetworkParams params;
    params.arch = arch;
    const int h = arch.hidden();
    for (int l = 0; l < arch.num_layers; ++l) {
        const int fan_in = l == 0 ? arch.num_sites : h;
        params.weights.emplace_back(Eigen::MatrixXcd::Zero(h, fan_in));
        params.biases.emplace_back(Eigen::VectorXcd::Zero(h));
    }
    return params;
}

NetworkParams NetworkParams::init(const Architecture& arch, std::uint64_t seed) {
    NetworkParams params = zeros(arch);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& w : params.weights) {
        const double spread = std::sqrt(0.5 / static_cast<double>(w.cols()));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = std::complex<double>(normal(rng) * spread, normal(rng) * spread);
            }
        }
    }
    return params;
}

Eigen::VectorXd NetworkParams::to_flat() const {
    Eigen::VectorXd flat(static_cast<Eigen::Index>(num_real_params()));
    Eigen::Index pos = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto& w = weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                flat[pos++] = w(r, c).real();
                flat[pos++] = w(r, c).imag();
            }
        }
        const auto& b = biases[l];
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            flat[pos++] = b[r].real();
            flat[pos++] = b[r].imag();
        }
    }
    return flat;
}

void NetworkParams::from_flat(const Eigen::VectorXd& flat) {
    if (flat.size() != static_cast<Eigen::Index>(num_real_params())) {
        throw std::invalid_argument("from_flat: size mismatch");
    }
    Eigen::Index pos = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        auto& w = weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = std::complex<double>(flat[pos], flat[pos + 1]);
                pos += 2;
            }
        }
        auto& b = biases[l];
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            b[r] = std::complex<double>(flat[pos], flat[pos + 1]);
            pos += 2;
        }
    }
}

std::complex<double> log_sum_exp(const Eigen::VectorXcd& values) {
    double max_re = values[0].real();
    for (Eigen::Index i = 1; i < values.size(); ++i) {
        max_re = std::max(max_re, values[i].real());
    }
    std::complex<double> sum = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        sum += std::exp(values[i] - max_re);
    }
    return max_re + std::log(sum);
}

namespace {

// Shared forward pass over a batch of input columns.
void forward(const NetworkParams& params, const Eigen::MatrixXcd& input, ForwardCache& cache) {
    const Architecture& arch = params.arch;
    const Activation kind = arch.activation;
    const int block_len = arch.skip ? arch.skip->layers_per_block : 0;

    cache.input = input;
    cache.layer_in.clear();
    cache.preact.clear();
    Eigen::MatrixXcd signal = input;
    Eigen::MatrixXcd residual;
    for (int l = 0; l < arch.num_layers; ++l) {
        cache.layer_in.push_back(signal);
        Eigen::MatrixXcd z = params.weights[static_cast<std::size_t>(l)] * signal;
        z.colwise() += params.biases[static_cast<std::size_t>(l)];
        cache.preact.push_back(z);
        if (l == 0 && arch.skip) residual = z;
        signal = z.unaryExpr([kind](std::complex<double> v) {
            return std::complex<double>(activation_scalar(v.real(), kind),
                                        activation_scalar(v.imag(), kind));
        });
        if (arch.skip && (l + 1) % block_len == 0) signal += residual;
    }
    cache.output = std::move(signal);

    cache.log_amp.resize(input.cols());
    for (Eigen::Index x = 0; x < input.cols(); ++x) {
        cache.log_amp[x] = log_sum_exp(cache.output.col(x));
    }
}

Eigen::MatrixXcd basis_input(const NetworkParams& params, const SectorBasis& basis) {
    const int L = params.arch.num_sites;
    if (basis.num_sites() != L) {
        throw std::invalid_argument("log_amplitudes: basis/network size mismatch");
    }
    Eigen::MatrixXcd input(L, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t x = 0; x < basis.size(); ++x) {
        const Word w = basis.word(x);
        for (int site = 0; site < L; ++site) {
            input(site, static_cast<Eigen::Index>(x)) = ((w >> site) & 1u) ? 1.0 : 0.0;
        }
    }
    return input;
}

}  // namespace

std::complex<double> log_amplitude(const NetworkParams& params, Word x) {
    const int L = params.arch.num_sites;
    Eigen::MatrixXcd input(L, 1);
    for (int site = 0; site < L; ++site) {
        input(site, 0) = ((x >> site) & 1u) ? 1.0 : 0.0;
    }
    ForwardCache cache;
    forward(params, input, cache);
    return cache.log_amp[0];
}

Eigen::VectorXcd log_amplitudes(const NetworkParams& params, const SectorBasis& basis,
                                ForwardCache* cache) {
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    forward(params, basis_input(params, basis), c);
    return c.log_amp;
}

Eigen::VectorXcd amplitudes(const NetworkParams& params, const SectorBasis& basis,
                            ForwardCache* cache) {
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    forward(params, basis_input(params, basis), c);
    double max_re = c.log_amp[0].real();
    for (Eigen::Index i = 1; i < c.log_amp.size(); ++i) {
        max_re = std::max(max_re, c.log_amp[i].real());
    }
    Eigen::VectorXcd psi(c.log_amp.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        psi[i] = std::exp(c.log_amp[i] - max_re);
    }
    return psi;
}

namespace {
constexpr std::uint32_t kCkptMagic = 0x53594b50;  // checkpoint
constexpr std::uint32_t kCkptVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
}
}  // namespace

void NetworkParams::save(const std::string& path, std::uint64_t seed_lineage) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        write_pod(out, kCkptMagic);
        write_pod(out, kCkptVersion);
        write_pod(out, static_cast<std::int32_t>(arch.num_sites));
        write_pod(out, static_cast<std::int32_t>(arch.alpha));
        write_pod(out, static_cast<std::int32_t>(arch.num_layers));
        write_pod(out, static_cast<std::int32_t>(arch.activation));
        const std::int32_t blocks = arch.skip ? arch.skip->num_blocks : 0;
        write_pod(out, blocks);
        write_pod(out, seed_lineage);
        Eigen::VectorXd flat = to_flat();
        const std::uint64_t count = static_cast<std::uint64_t>(flat.size());
        write_pod(out, count);
        out.write(reinterpret_cast<const char*>(flat.data()),
                  static_cast<std::streamsize>(count * sizeof(double)));
    }
    std::filesystem::rename(tmp, path);
}

NetworkParams NetworkParams::load(const std::string& path, std::uint64_t* seed_lineage) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::uint32_t magic = 0, version = 0;
    read_pod(in, magic);
    read_pod(in, version);
    if (magic != kCkptMagic || version != kCkptVersion) {
        throw std::runtime_error("not a checkpoint file: " + path);
    }
    Architecture arch;
    std::int32_t num_sites, alpha, num_layers, activation, blocks;
    read_pod(in, num_sites);
    read_pod(in, alpha);
    read_pod(in, num_layers);
    read_pod(in, activation);
    read_pod(in, blocks);
    arch.num_sites = num_sites;
    arch.alpha = alpha;
    arch.num_layers = num_layers;
    arch.activation = static_cast<Activation>(activation);
    if (blocks > 0) arch.skip = SkipBlocks{blocks, num_layers / blocks};
    std::uint64_t lineage = 0, count = 0;
    read_pod(in, lineage);
    if (seed_lineage) *seed_lineage = lineage;
    read_pod(in, count);
    Eigen::VectorXd flat(static_cast<Eigen::Index>(count));
    in.read(reinterpret_cast<char*>(flat.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    NetworkParams params = zeros(arch);
    params.from_flat(flat);
    return params;
}

}  // namespace syknqs
