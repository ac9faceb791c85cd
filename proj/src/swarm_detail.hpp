#pragma once

// Shared population bookkeeping for the EPMC family.

#include <algorithm>
#include <numeric>
#include <vector>

#include "asopt/epmc.hpp"

namespace asopt::detail {

// Stable ascending sort by fitness. Returns perm with new[a] = old[perm[a]];
// the feel matrix is permuted on both axes so rows follow their owners.
template <class Aux>
std::vector<std::size_t> sort_population(std::vector<ClusterIndividual>& members, FeelMatrix& feel,
                                         std::vector<Aux>* aux)
{
    std::vector<std::size_t> perm(members.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return members[a].fit < members[b].fit; });
    std::vector<ClusterIndividual> sorted;
    sorted.reserve(members.size());
    for (std::size_t p : perm) {
        sorted.push_back(std::move(members[p]));
    }
    members = std::move(sorted);
    if (aux != nullptr) {
        std::vector<Aux> a;
        a.reserve(aux->size());
        for (std::size_t p : perm) {
            a.push_back(std::move((*aux)[p]));
        }
        *aux = std::move(a);
    }
    const auto n = static_cast<Eigen::Index>(perm.size());
    FeelMatrix out(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            out(r, c) = feel(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(r)]),
                             static_cast<Eigen::Index>(perm[static_cast<std::size_t>(c)]));
        }
    }
    feel = std::move(out);
    return perm;
}

inline double mean_fit(const std::vector<ClusterIndividual>& members)
{
    double s = 0.0;
    for (const auto& m : members) {
        s += m.fit;
    }
    return members.empty() ? 0.0 : s / static_cast<double>(members.size());
}

struct Targets {
    std::size_t m = 0; // population-wide learning target
    std::size_t e = 0; // neighbor
};

// Draws the two learning targets for individual i (two uniforms from rng).
inline Targets pick_targets(const FeelMatrix& feel, std::size_t i, const std::vector<double>& pool_probs,
                            std::size_t radius, Rng& rng)
{
    Targets t;
    t.m = roulette(pool_probs, rng);
    const NeighborProbs nb = neighbor_probs(feel, i, radius);
    if (nb.indices.empty()) {
        t.e = i;
        rng.uniform();
    } else {
        t.e = nb.indices[roulette(nb.probs, rng)];
    }
    return t;
}

inline std::vector<double> pool_probs(std::size_t np, std::size_t n_elite, bool elite_pool)
{
    return learn_probs(rank_weights(elite_pool ? std::min(n_elite, np) : np));
}

} // namespace asopt::detail
