#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "syknqs/hamiltonian.hpp"

namespace syknqs {

struct GroundStateSolution {
    double energy = 0.0;
    Eigen::VectorXcd vector;
    double residual = 0.0;
};

/// Thrown when the Lanczos iteration fails to reach the requested residual.
class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual(best_residual) {}
    double best_residual;
};

/// Lowest eigenpair by Lanczos with full re-orthogonalization and restarts,
/// from a seeded pseudo-random start vector.
GroundStateSolution ground_state(const SparseHamiltonian& hamiltonian, double tol = 1e-12,
                                 int max_iter = 10000, std::uint64_t start_seed = 7);

/// Von Neumann entropy (natural log) of the reduced density matrix on sites
/// {0, ..., L/2-1}, for a normalized sector vector.
double bipartite_entropy(const Eigen::VectorXcd& psi, const SectorBasis& basis);

/// Average half-system entanglement of a random pure state: (L/2) ln 2 - 1/2.
double page_value(int num_sites);

/// Binary persistence of ground-state records keyed by (model, seed, L).
void save_ground_state(const std::string& path, const std::string& model, std::uint64_t seed,
                       int num_sites, const GroundStateSolution& solution);
GroundStateSolution load_ground_state(const std::string& path, const std::string& model,
                                      std::uint64_t seed, int num_sites);

/// Canonical file name for a ground-state record.
std::string ground_state_filename(const std::string& model, std::uint64_t seed, int num_sites);

}  // namespace syknqs
