#include "syknqs/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace syknqs {

SparseHamiltonian::SparseHamiltonian(std::shared_ptr<const SectorBasis> basis,
                                     std::vector<std::size_t> row_ptr,
                                     std::vector<std::size_t> col,
                                     std::vector<std::complex<double>> val)
    : basis_(std::move(basis)),
      row_ptr_(std::move(row_ptr)),
      col_(std::move(col)),
      val_(std::move(val)) {
    if (row_ptr_.size() != basis_->size() + 1) {
        throw std::invalid_argument("SparseHamiltonian: row_ptr size mismatch");
    }
}

std::complex<double> SparseHamiltonian::entry(std::size_t row, std::size_t column) const {
    auto begin = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
    auto end = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
    auto it = std::lower_bound(begin, end, column);
    if (it == end || *it != column) return 0.0;
    return val_[static_cast<std::size_t>(it - col_.begin())];
}

void SparseHamiltonian::matvec(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    const auto n = static_cast<Eigen::Index>(dim());
    if (x.size() != n) throw std::invalid_argument("matvec: dimension mismatch");
    y.resize(n);
    for (std::size_t r = 0; r < dim(); ++r) {
        std::complex<double> acc = 0.0;
        for (std::size_t idx = row_ptr_[r]; idx < row_ptr_[r + 1]; ++idx) {
            acc += val_[idx] * x[static_cast<Eigen::Index>(col_[idx])];
        }
        y[static_cast<Eigen::Index>(r)] = acc;
    }
}

Eigen::VectorXcd SparseHamiltonian::apply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y;
    matvec(x, y);
    return y;
}

Eigen::MatrixXcd SparseHamiltonian::dense() const {
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t idx = row_ptr_[r]; idx < row_ptr_[r + 1]; ++idx) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col_[idx])) = val_[idx];
        }
    }
    return m;
}

std::complex<double> SparseHamiltonian::expectation(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd hx = apply(x);
    return x.dot(hx) / x.squaredNorm();
}

namespace {

constexpr double kDropTolerance = 1e-15;

SparseHamiltonian from_row_maps(std::shared_ptr<const SectorBasis> basis,
                                std::vector<std::map<std::size_t, std::complex<double>>> rows) {
    std::vector<std::size_t> row_ptr(basis->size() + 1, 0);
    std::vector<std::size_t> col;
    std::vector<std::complex<double>> val;
    for (std::size_t r = 0; r < basis->size(); ++r) {
        for (const auto& [c, amp] : rows[r]) {
            if (std::abs(amp) < kDropTolerance) continue;
            col.push_back(c);
            val.push_back(amp);
        }
        row_ptr[r + 1] = col.size();
    }
    return SparseHamiltonian(std::move(basis), std::move(row_ptr), std::move(col),
                             std::move(val));
}

}  // namespace

SparseHamiltonian build_syk_hamiltonian(const CouplingTensor& couplings,
                                        std::shared_ptr<const SectorBasis> basis) {
    const int L = basis->num_sites();
    if (couplings.num_sites() != L) {
        throw std::invalid_argument("build_syk_hamiltonian: site count mismatch");
    }
    const double prefactor = std::pow(2.0 * L, -1.5);
    std::vector<std::map<std::size_t, std::complex<double>>> rows(basis->size());

    // The ordered sum over i != j, k != l collapses onto unordered pairs:
    // swapping either pair flips both the coupling and the fermionic sign,
    // so the four orderings of each (i<j, k<l) contribute identically.
    for (std::size_t c = 0; c < basis->size(); ++c) {
        const Word w = basis->word(c);
        for (int k = 0; k < L; ++k) {
            if (!((w >> k) & 1u)) continue;
            for (int l = k + 1; l < L; ++l) {
                if (!((w >> l) & 1u)) continue;
                const Word mid = w & ~(Word{1} << k) & ~(Word{1} << l);
                for (int i = 0; i < L; ++i) {
                    if ((mid >> i) & 1u) continue;
                    for (int j = i + 1; j < L; ++j) {
                        if ((mid >> j) & 1u) continue;
                        SignedState out = apply_two_body(w, i, j, k, l, L);
                        if (out.annihilated) continue;
                        std::complex<double> amp = 4.0 * prefactor *
                                                   couplings.at(i, j, k, l) *
                                                   static_cast<double>(out.sign);
                        rows[basis->rank(out.word)][c] += amp;  // <out|H|w>

                    }
                }
            }
        }
    }
    return from_row_maps(std::move(basis), std::move(rows));
}

SparseHamiltonian build_heisenberg(int num_sites, std::shared_ptr<const SectorBasis> basis) {
    const int L = num_sites;
    if (basis->num_sites() != L || basis->num_particles() != L / 2 || L % 2 != 0) {
        throw std::invalid_argument("build_heisenberg: basis must be the half-filled sector");
    }
    std::vector<std::map<std::size_t, std::complex<double>>> rows(basis->size());
    for (std::size_t r = 0; r < basis->size(); ++r) {
        const Word w = basis->word(r);
        double diag = 0.0;
        for (int site = 0; site < L; ++site) {
            const int next = (site + 1) % L;
            const int zi = ((w >> site) & 1u) ? +1 : -1;
            const int zj = ((w >> next) & 1u) ? +1 : -1;
            diag += zi * zj;
            if (zi != zj) {
                // sx.sx + sy.sy exchanges antialigned neighbors with weight 2.
                const Word flipped = w ^ (Word{1} << site) ^ (Word{1} << next);
                rows[r][basis->rank(flipped)] += 2.0;
            }
        }
        rows[r][r] += diag;
    }
    return from_row_maps(std::move(basis), std::move(rows));
}

}  // namespace syknqs
