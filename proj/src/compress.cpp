#include "syknqs/compress.hpp"

#include <Eigen/SVD>
#include <fstream>
#include <stdexcept>

#include "syknqs/optimize.hpp"

namespace syknqs {

std::pair<NetworkParams, CompressionReport> svd_truncate(const NetworkParams& params,
                                                         double svd_threshold,
                                                         const SparseHamiltonian& hamiltonian,
                                                         double energy_gs) {
    if (svd_threshold < 0.0 || svd_threshold >= 1.0) {
        throw std::invalid_argument("svd_truncate: threshold must be in [0, 1)");
    }
    CompressionReport report;
    report.svd_threshold = svd_threshold;
    report.delta_e_before =
        relative_energy_error(voe_loss(params, hamiltonian).energy, energy_gs);

    NetworkParams truncated = params;
    int retained_total = 0, total = 0;
    for (auto& w : truncated.weights) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sigma = svd.singularValues();
        const double largest = sigma.size() > 0 ? sigma[0] : 0.0;
        int rank = 0;
        Eigen::VectorXd kept = sigma;
        for (Eigen::Index i = 0; i < sigma.size(); ++i) {
            if (largest > 0.0 && sigma[i] / largest < svd_threshold) {
                kept[i] = 0.0;
            } else {
                ++rank;
            }
        }
        w = svd.matrixU() * kept.asDiagonal() * svd.matrixV().adjoint();
        report.retained_ranks.push_back(rank);
        report.total_ranks.push_back(static_cast<int>(sigma.size()));
        retained_total += rank;
        total += static_cast<int>(sigma.size());
    }
    report.retained_fraction = static_cast<double>(retained_total) / static_cast<double>(total);
    report.delta_e_after =
        relative_energy_error(voe_loss(truncated, hamiltonian).energy, energy_gs);
    return {std::move(truncated), report};
}

void write_compression_csv(const std::string& path,
                           const std::vector<CompressionReport>& reports) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "lambda_svd,q,delta_e_before,delta_e_after,ranks\n";
    for (const auto& report : reports) {
        out << report.svd_threshold << "," << report.retained_fraction << ","
            << report.delta_e_before << "," << report.delta_e_after << ",";
        for (std::size_t i = 0; i < report.retained_ranks.size(); ++i) {
            if (i) out << ";";
            out << report.retained_ranks[i] << "/" << report.total_ranks[i];
        }
        out << "\n";
    }
}

}  // namespace syknqs
