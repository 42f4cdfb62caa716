#include "syknqs/ed.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

namespace syknqs {

namespace {

Eigen::VectorXcd seeded_start(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = std::complex<double>(normal(rng), normal(rng));
    }
    v.normalize();
    return v;
}

}  // namespace

GroundStateSolution ground_state(const SparseHamiltonian& hamiltonian, double tol, int max_iter,
                                 std::uint64_t start_seed) {
    const std::size_t dim = hamiltonian.dim();
    if (dim == 0) throw std::invalid_argument("ground_state: empty Hamiltonian");
    if (dim == 1) {
        GroundStateSolution sol;
        sol.energy = hamiltonian.entry(0, 0).real();
        sol.vector = Eigen::VectorXcd::Ones(1);
        sol.residual = 0.0;
        return sol;
    }

    const int krylov_cap = static_cast<int>(std::min<std::size_t>(dim, 200));
    Eigen::VectorXcd v = seeded_start(dim, start_seed);
    double best_residual = std::numeric_limits<double>::infinity();
    GroundStateSolution best;

    int iterations = 0;
    while (iterations < max_iter) {
        // One Lanczos pass with full re-orthogonalization; restart from the
        // current Ritz vector until the residual converges.
        std::vector<Eigen::VectorXcd> krylov;
        std::vector<double> alpha, beta;
        krylov.push_back(v);
        Eigen::VectorXcd w;
        for (int m = 0; m < krylov_cap && iterations < max_iter; ++m, ++iterations) {
            hamiltonian.matvec(krylov.back(), w);
            alpha.push_back(std::real(krylov.back().dot(w)));
            for (const auto& q : krylov) w -= q.dot(w) * q;
            for (const auto& q : krylov) w -= q.dot(w) * q;  // second sweep
            const double norm = w.norm();
            if (norm < 1e-14 || m + 1 == krylov_cap ||
                static_cast<std::size_t>(m + 1) == dim) {
                if (norm >= 1e-14 && static_cast<std::size_t>(m + 1) < dim) {
                    beta.push_back(norm);
                    krylov.push_back(w / norm);
                }
                break;
            }
            beta.push_back(norm);
            krylov.push_back(w / norm);
        }

        const auto k = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            tri(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < k) {
                tri(i, i + 1) = beta[static_cast<std::size_t>(i)];
                tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
        const Eigen::VectorXd ritz_coeff = eig.eigenvectors().col(0);
        const double energy = eig.eigenvalues()[0];

        Eigen::VectorXcd ritz = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < k; ++i) {
            ritz += ritz_coeff[i] * krylov[static_cast<std::size_t>(i)];
        }
        ritz.normalize();

        hamiltonian.matvec(ritz, w);
        const double residual = (w - energy * ritz).norm();
        if (residual < best_residual) {
            best_residual = residual;
            best.energy = energy;
            best.vector = ritz;
            best.residual = residual;
        }
        if (residual < tol) return best;
        v = ritz;
    }
    throw SolverError("ground_state: no convergence after max_iter", best_residual);
}

double bipartite_entropy(const Eigen::VectorXcd& psi, const SectorBasis& basis) {
    const int L = basis.num_sites();
    if (L % 2 != 0) throw std::invalid_argument("bipartite_entropy: num_sites must be even");
    if (psi.size() != static_cast<Eigen::Index>(basis.size())) {
        throw std::invalid_argument("bipartite_entropy: vector/basis size mismatch");
    }
    if (std::abs(psi.norm() - 1.0) > 1e-8) {
        throw std::invalid_argument("bipartite_entropy: state not normalized");
    }
    const int half = L / 2;
    const Word mask = (Word{1} << half) - 1;
    Eigen::MatrixXcd coeff =
        Eigen::MatrixXcd::Zero(Eigen::Index{1} << half, Eigen::Index{1} << half);
    for (std::size_t r = 0; r < basis.size(); ++r) {
        const Word w = basis.word(r);
        coeff(static_cast<Eigen::Index>(w & mask), static_cast<Eigen::Index>(w >> half)) =
            psi[static_cast<Eigen::Index>(r)];
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(coeff);
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double s = svd.singularValues()[i];
        if (s < 1e-14) continue;
        const double p = s * s;
        entropy -= p * std::log(p);
    }
    return entropy;
}

double page_value(int num_sites) {
    if (num_sites % 2 != 0) throw std::invalid_argument("page_value: num_sites must be even");
    return (num_sites / 2) * std::log(2.0) - 0.5;
}

std::string ground_state_filename(const std::string& model, std::uint64_t seed, int num_sites) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "gs_%s_L%d_seed%llu.bin", model.c_str(), num_sites,
                  static_cast<unsigned long long>(seed));
    return buf;
}

namespace {
constexpr std::uint32_t kGsMagic = 0x53594b47;  // "GKYS"
constexpr std::uint32_t kGsVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
}
}  // namespace

void save_ground_state(const std::string& path, const std::string& model, std::uint64_t seed,
                       int num_sites, const GroundStateSolution& solution) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        write_pod(out, kGsMagic);
        write_pod(out, kGsVersion);
        std::uint32_t model_len = static_cast<std::uint32_t>(model.size());
        write_pod(out, model_len);
        out.write(model.data(), static_cast<std::streamsize>(model.size()));
        write_pod(out, seed);
        std::int32_t L = num_sites;
        write_pod(out, L);
        write_pod(out, solution.energy);
        write_pod(out, solution.residual);
        std::uint64_t dim = static_cast<std::uint64_t>(solution.vector.size());
        write_pod(out, dim);
        out.write(reinterpret_cast<const char*>(solution.vector.data()),
                  static_cast<std::streamsize>(dim * sizeof(std::complex<double>)));
    }
    std::filesystem::rename(tmp, path);
}

GroundStateSolution load_ground_state(const std::string& path, const std::string& model,
                                      std::uint64_t seed, int num_sites) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open ground-state record: " + path);
    std::uint32_t magic = 0, version = 0, model_len = 0;
    read_pod(in, magic);
    read_pod(in, version);
    if (magic != kGsMagic || version != kGsVersion) {
        throw std::runtime_error("not a ground-state record: " + path);
    }
    read_pod(in, model_len);
    std::string stored_model(model_len, '\0');
    in.read(stored_model.data(), model_len);
    std::uint64_t stored_seed = 0;
    std::int32_t stored_L = 0;
    read_pod(in, stored_seed);
    read_pod(in, stored_L);
    if (stored_model != model || stored_seed != seed || stored_L != num_sites) {
        throw std::runtime_error("ground-state record key mismatch: " + path);
    }
    GroundStateSolution sol;
    read_pod(in, sol.energy);
    read_pod(in, sol.residual);
    std::uint64_t dim = 0;
    read_pod(in, dim);
    sol.vector.resize(static_cast<Eigen::Index>(dim));
    in.read(reinterpret_cast<char*>(sol.vector.data()),
            static_cast<std::streamsize>(dim * sizeof(std::complex<double>)));
    if (!in) throw std::runtime_error("truncated ground-state record: " + path);
    return sol;
}

}  // namespace syknqs
