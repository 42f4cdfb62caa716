#pragma once

#include <string>
#include <vector>

#include "syknqs/ed.hpp"
#include "syknqs/network.hpp"

namespace syknqs {

struct CompressionReport {
    double svd_threshold = 0.0;  // relative cutoff on singular values
    std::vector<int> retained_ranks;
    std::vector<int> total_ranks;
    double retained_fraction = 1.0;  // q = retained / total over all layers
    double delta_e_before = 0.0;
    double delta_e_after = 0.0;
};

/// Low-rank truncation of every weight matrix: singular values with
/// sigma_i / sigma_1 < threshold are zeroed (uniform threshold per layer),
/// biases untouched. The truncated network is re-densified, so its
/// evaluation path is identical to the original.
std::pair<NetworkParams, CompressionReport> svd_truncate(const NetworkParams& params,
                                                         double svd_threshold,
                                                         const SparseHamiltonian& hamiltonian,
                                                         double energy_gs);

/// CSV rows: lambda_svd, q, delta_e_before, delta_e_after, per-layer ranks.
void write_compression_csv(const std::string& path,
                           const std::vector<CompressionReport>& reports);

}  // namespace syknqs
