#include "syknqs/basis.hpp"

#include <bit>
#include <stdexcept>

namespace syknqs {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

SectorBasis::SectorBasis(int num_sites, int num_particles)
    : num_sites_(num_sites), num_particles_(num_particles) {
    if (num_sites < 1 || num_sites > 30) {
        throw std::invalid_argument("SectorBasis: num_sites must be in [1, 30]");
    }
    if (num_particles < 0 || num_particles > num_sites) {
        throw std::invalid_argument("SectorBasis: num_particles must be in [0, num_sites]");
    }
    states_.reserve(binomial(num_sites, num_particles));
    if (num_particles == 0) {
        states_.push_back(0);
        return;
    }
    // Gosper's hack: next word with the same popcount, in increasing order.
    Word w = (Word{1} << num_particles) - 1;
    const Word limit = Word{1} << num_sites;
    while (w < limit) {
        states_.push_back(w);
        Word t = w | (w - 1);
        w = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(w) + 1));
    }
}

std::size_t SectorBasis::rank(Word w) const {
    // Combinadic rank: sum of C(p_m, m) over the m-th lowest set bit p_m.
    std::size_t r = 0;
    int m = 1;
    while (w != 0) {
        int p = std::countr_zero(w);
        r += binomial(p, m);
        ++m;
        w &= w - 1;
    }
    return r;
}

namespace {

inline int jw_sign(Word w, int p) {
    Word below = w & ((Word{1} << p) - 1);
    return (std::popcount(below) & 1) ? -1 : +1;
}

inline bool annihilate(Word& w, int p, int& sign) {
    if (((w >> p) & 1u) == 0) return false;
    sign *= jw_sign(w, p);
    w &= ~(Word{1} << p);
    return true;
}

inline bool create(Word& w, int p, int& sign) {
    if ((w >> p) & 1u) return false;
    sign *= jw_sign(w, p);
    w |= Word{1} << p;
    return true;
}

}  // namespace

SignedState apply_two_body(Word w, int i, int j, int k, int l, int num_sites) {
    for (int p : {i, j, k, l}) {
        if (p < 0 || p >= num_sites) {
            throw std::invalid_argument("apply_two_body: site index out of range");
        }
    }
    int sign = +1;
    if (!annihilate(w, l, sign)) return SignedState::zero();
    if (!annihilate(w, k, sign)) return SignedState::zero();
    if (!create(w, j, sign)) return SignedState::zero();
    if (!create(w, i, sign)) return SignedState::zero();
    return {w, sign, false};
}

}  // namespace syknqs
