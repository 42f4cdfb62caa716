#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "syknqs/basis.hpp"
#include "syknqs/couplings.hpp"

namespace syknqs {

/// Sector-projected Hermitian operator in compressed sparse row form with
/// sorted column indices, so the matvec order is deterministic.
class SparseHamiltonian {
  public:
    SparseHamiltonian(std::shared_ptr<const SectorBasis> basis,
                      std::vector<std::size_t> row_ptr, std::vector<std::size_t> col,
                      std::vector<std::complex<double>> val);

    std::size_t dim() const { return basis_->size(); }
    const SectorBasis& basis() const { return *basis_; }
    std::shared_ptr<const SectorBasis> basis_ptr() const { return basis_; }
    std::size_t nonzeros() const { return val_.size(); }

    std::complex<double> entry(std::size_t row, std::size_t column) const;

    void matvec(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Eigen::MatrixXcd dense() const;

    /// Rayleigh quotient <x|H|x> / <x|x>.
    std::complex<double> expectation(const Eigen::VectorXcd& x) const;

  private:
    std::shared_ptr<const SectorBasis> basis_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> col_;
    std::vector<std::complex<double>> val_;
};

SparseHamiltonian build_syk_hamiltonian(const CouplingTensor& couplings,
                                        std::shared_ptr<const SectorBasis> basis);

/// Heisenberg chain with periodic boundaries in Pauli normalization,
/// projected onto the zero-magnetization (half-filled) sector.
SparseHamiltonian build_heisenberg(int num_sites, std::shared_ptr<const SectorBasis> basis);

}  // namespace syknqs
