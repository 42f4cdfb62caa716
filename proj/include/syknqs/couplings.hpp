#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace syknqs {

/// Random SYK vertex tensor J_{ij;kl} with the symmetries
/// J*_{ij;kl} = J_{lk;ji} and antisymmetry under i<->j and k<->l.
///
/// Only entries with i<j and k<l are independent; collecting those into a
/// matrix over site pairs, the two symmetries make that pair matrix
/// Hermitian, so the canonical data is its upper triangle.
class CouplingTensor {
  public:
    static CouplingTensor sample(int num_sites, std::uint64_t seed);

    int num_sites() const { return num_sites_; }
    std::uint64_t seed() const { return seed_; }
    int num_pairs() const { return num_pairs_; }

    /// Fully expanded entry, any index order. Zero when i==j or k==l.
    std::complex<double> at(int i, int j, int k, int l) const;

    /// Canonical entry J_{(i<j);(k<l)} by pair indices.
    std::complex<double> pair_entry(int p, int q) const { return pair_matrix_[p * num_pairs_ + q]; }

    int pair_index(int i, int j) const;  // requires i < j

    /// Plain-text record (seed, L, canonical entries); round-trips exactly
    /// via hex-encoded doubles.
    void save(std::ostream& out) const;
    void save(const std::string& path) const;
    static CouplingTensor load(std::istream& in);
    static CouplingTensor load(const std::string& path);

  private:
    CouplingTensor(int num_sites, std::uint64_t seed);

    int num_sites_;
    std::uint64_t seed_;
    int num_pairs_;
    std::vector<std::complex<double>> pair_matrix_;
};

}  // namespace syknqs
