#pragma once

#include <cstdint>
#include <vector>

#include "botsim/graph.hpp"

namespace botsim {

enum class LimitRegime {
    vanishing,  // T (1 - p) -> 0
    finite,     // T (1 - p) -> c in (0, inf)
    diverging,  // T (1 - p) -> inf
};

// Limiting belief of a uniform agent: theta, theta (1 - e^{-c eta}) / (c eta),
// or 0 depending on the regime. c is used only in the finite regime.
double limit_belief(LimitRegime regime, double c, double theta, double eta);

// Empirical degree-triple distributions backing the branching process: the
// root draws uniformly (f*), every other node proportional to out-degree (f).
// Kept as the exact triple list with alias tables, not binned histograms.
class DegreeSampler {
public:
    explicit DegreeSampler(const DegreeSequence& seq);

    // Index into the underlying sequence.
    int64_t sample_root(Rng& rng) const;
    int64_t sample_child(Rng& rng) const;
    const DegreeSequence& seq() const { return *seq_; }

private:
    const DegreeSequence* seq_;
    AliasTable uniform_;
    AliasTable size_biased_;
};

// Layered branching-process tree. layers[l] holds the agents of generation l;
// bots are implicit in their parents' in_bot counts (they are absorbing
// leaves, so only their multiplicity matters). Layers 0..depth-1 are
// expanded; the final layer carries sampled degrees but no children.
struct TreeSample {
    struct Node {
        int64_t out = 0, in_a = 0, in_b = 0;
        int64_t parent = -1;  // index into the previous layer, -1 for the root
    };
    std::vector<std::vector<Node>> layers;

    int64_t depth() const { return static_cast<int64_t>(layers.size()) - 1; }
    int64_t total_agents() const;
    std::vector<int64_t> layer_sizes() const;
};

// Root degrees from f*, all others from f. Aborts with ResourceError once the
// node count (agents + bots) passes `node_cap`.
TreeSample sample_tree(const DegreeSampler& dist, int64_t depth, uint64_t seed,
                       int64_t node_cap = 10'000'000);

// E[belief of the root at T | tree] = (theta/T) sum_{t<T} sum_{l<=t}
// C(t,l) eta^l (1-eta)^{t-l} Y_l, with Y_l the sum over generation-l agents of
// the product of inverse in-degrees along their ancestry. Computed by
// propagating path-weight sums layer by layer.
double conditional_mean_belief(const TreeSample& tree, double theta, double eta, int64_t horizon);

// P(a single walk from the root is still in the agent set after l steps).
double hit_prob_single(const DegreeStats& stats, int64_t l);

// P(two conditionally independent walks are both in the agent set after l and
// l' steps, l <= l'): the coalesce/split decomposition at depth l, carried
// forward by survive_step^(l'-l).
double hit_prob_pair(const DegreeStats& stats, int64_t l, int64_t lp);

// Closed form of the tree-mean belief: two geometric series in
// (1 - eta (1 - p)) and (1 - eta). Degenerates gracefully at p == 1.
double closed_form_mean(const DegreeStats& stats, double theta, double eta, int64_t horizon);

struct LayerWeightMoments {
    double mean_l = 0.0;       // E[Y_l]
    double mean_lp = 0.0;      // E[Y_l']
    double second_cross = 0.0; // E[Y_l Y_l']
    double cov = 0.0;
};

LayerWeightMoments layer_weight_moments(const DegreeStats& stats, int64_t l, int64_t lp);

}  // namespace botsim
