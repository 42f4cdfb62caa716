#pragma once

// Test-only symbolic oracle for fermionic operator strings. States are kept
// as explicit lists of creation operators applied to the vacuum; operators
// are applied by literal anticommutation ({c_p, c+_q} = delta_pq), not by
// bit tricks, so it is an independent check of the production sign
// convention.

#include <algorithm>
#include <map>
#include <vector>

#include "syknqs/basis.hpp"

namespace fermion_oracle {

// A state is a sum of terms: ordered creation-site list -> coefficient.
using State = std::map<std::vector<int>, int>;

inline State from_word(syknqs::Word w, int num_sites) {
    std::vector<int> sites;
    for (int p = 0; p < num_sites; ++p) {
        if ((w >> p) & 1u) sites.push_back(p);
    }
    return {{sites, 1}};
}

// c_p c+_{s1} ... c+_{sk} |0> = sum_m (-1)^(m-1) delta_{p,s_m} (list minus s_m)|0>,
// obtained by anticommuting c_p through the string term by term.
inline State apply_annihilation(const State& state, int p) {
    State out;
    for (const auto& [sites, coeff] : state) {
        int sign = 1;
        for (std::size_t m = 0; m < sites.size(); ++m) {
            if (sites[m] == p) {
                std::vector<int> rest = sites;
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(m));
                out[rest] += coeff * sign;
                break;  // each site appears at most once
            }
            sign = -sign;
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second == 0 ? out.erase(it) : std::next(it);
    }
    return out;
}

// Prepend c+_p, then bubble the list back into increasing order, counting
// transpositions. A repeated site kills the term.
inline State apply_creation(const State& state, int p) {
    State out;
    for (const auto& [sites, coeff] : state) {
        if (std::find(sites.begin(), sites.end(), p) != sites.end()) continue;
        std::vector<int> extended;
        extended.push_back(p);
        extended.insert(extended.end(), sites.begin(), sites.end());
        int sign = 1;
        for (std::size_t i = 1; i < extended.size(); ++i) {
            std::size_t j = i;
            while (j > 0 && extended[j - 1] > extended[j]) {
                std::swap(extended[j - 1], extended[j]);
                sign = -sign;
                --j;
            }
        }
        out[extended] += coeff * sign;
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second == 0 ? out.erase(it) : std::next(it);
    }
    return out;
}

// c+_i c+_j c_k c_l applied rightmost first.
inline State apply_two_body(syknqs::Word w, int i, int j, int k, int l, int num_sites) {
    State state = from_word(w, num_sites);
    state = apply_annihilation(state, l);
    state = apply_annihilation(state, k);
    state = apply_creation(state, j);
    state = apply_creation(state, i);
    return state;
}

inline syknqs::Word to_word(const std::vector<int>& sites) {
    syknqs::Word w = 0;
    for (int p : sites) w |= syknqs::Word{1} << p;
    return w;
}

}  // namespace fermion_oracle
