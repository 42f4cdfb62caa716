#pragma once

#include <cstdint>
#include <vector>

namespace syknqs {

/// Occupation word: site p is the p-th least significant bit.
using Word = std::uint32_t;

std::uint64_t binomial(int n, int k);

/// Result of applying a fermionic operator string: either a basis word with
/// an accumulated Jordan-Wigner sign, or the zero vector.
struct SignedState {
    Word word = 0;
    int sign = +1;
    bool annihilated = false;

    static SignedState zero() { return {0, +1, true}; }
};

/// Ordered enumeration of all occupation words with a fixed particle number.
/// Words are listed in increasing integer order; lookup is by combinadic
/// ranking, so no hash table is needed.
class SectorBasis {
  public:
    SectorBasis(int num_sites, int num_particles);

    int num_sites() const { return num_sites_; }
    int num_particles() const { return num_particles_; }
    std::size_t size() const { return states_.size(); }
    Word word(std::size_t index) const { return states_[index]; }
    const std::vector<Word>& states() const { return states_; }

    /// Position of `w` in the enumeration. `w` must have the sector's
    /// particle number.
    std::size_t rank(Word w) const;

  private:
    int num_sites_;
    int num_particles_;
    std::vector<Word> states_;
};

/// Applies the normal-ordered string c+_i c+_j c_k c_l to a word, rightmost
/// operator first. Each operator at site p picks up a sign
/// (-1)^(occupied sites below p at the moment it acts).
SignedState apply_two_body(Word w, int i, int j, int k, int l, int num_sites);

}  // namespace syknqs
