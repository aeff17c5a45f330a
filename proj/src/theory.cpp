#include "botsim/theory.hpp"

#include <cmath>
#include <numeric>

#include "botsim/errors.hpp"

namespace botsim {

double limit_belief(LimitRegime regime, double c, double theta, double eta) {
    if (!(theta > 0.0) || !(theta < 1.0)) throw ConfigError("limit_belief: theta must lie in (0, 1)");
    if (!(eta > 0.0) || !(eta < 1.0)) throw ConfigError("limit_belief: eta must lie in (0, 1)");
    switch (regime) {
        case LimitRegime::vanishing:
            return theta;
        case LimitRegime::finite:
            if (!(c > 0.0)) throw ConfigError("limit_belief: finite regime needs c > 0");
            return theta * (1.0 - std::exp(-c * eta)) / (c * eta);
        case LimitRegime::diverging:
            return 0.0;
    }
    throw ConfigError("limit_belief: unknown regime");
}

DegreeSampler::DegreeSampler(const DegreeSequence& seq) : seq_(&seq) {
    seq.validate(false);
    const int64_t n = seq.size();
    std::vector<double> uni(n, 1.0), biased(n);
    for (int64_t i = 0; i < n; ++i) biased[i] = static_cast<double>(seq.out_degree[i]);
    uniform_ = AliasTable(uni);
    size_biased_ = AliasTable(biased);
}

int64_t DegreeSampler::sample_root(Rng& rng) const { return static_cast<int64_t>(uniform_.sample(rng)); }
int64_t DegreeSampler::sample_child(Rng& rng) const { return static_cast<int64_t>(size_biased_.sample(rng)); }

int64_t TreeSample::total_agents() const {
    int64_t total = 0;
    for (const auto& layer : layers) total += static_cast<int64_t>(layer.size());
    return total;
}

std::vector<int64_t> TreeSample::layer_sizes() const {
    std::vector<int64_t> sizes;
    sizes.reserve(layers.size());
    for (const auto& layer : layers) sizes.push_back(static_cast<int64_t>(layer.size()));
    return sizes;
}

TreeSample sample_tree(const DegreeSampler& dist, int64_t depth, uint64_t seed, int64_t node_cap) {
    if (depth < 0) throw ConfigError("sample_tree: depth must be >= 0");
    Rng rng(seed);
    const DegreeSequence& seq = dist.seq();
    TreeSample tree;
    int64_t nodes = 0;
    auto make_node = [&](int64_t idx, int64_t parent) {
        TreeSample::Node node;
        node.out = seq.out_degree[idx];
        node.in_a = seq.in_agent[idx];
        node.in_b = seq.in_bot[idx];
        node.parent = parent;
        nodes += 1 + node.in_b;  // the agent and its bot children
        if (nodes > node_cap)
            throw ResourceError("sample_tree: node cap " + std::to_string(node_cap) +
                                " exceeded at depth " + std::to_string(tree.layers.size()));
        return node;
    };
    tree.layers.emplace_back();
    tree.layers[0].push_back(make_node(dist.sample_root(rng), -1));
    for (int64_t l = 0; l < depth; ++l) {
        const auto& current = tree.layers[l];
        std::vector<TreeSample::Node> next;
        for (size_t p = 0; p < current.size(); ++p)
            for (int64_t j = 0; j < current[p].in_a; ++j)
                next.push_back(make_node(dist.sample_child(rng), static_cast<int64_t>(p)));
        tree.layers.push_back(std::move(next));
    }
    return tree;
}

namespace {

// Y_l per layer: the sum over generation-l agents of the inverse in-degree
// product along their ancestry.
std::vector<double> layer_weights(const TreeSample& tree, int64_t max_layer) {
    std::vector<double> y;
    y.reserve(max_layer + 1);
    std::vector<double> w = {1.0};
    y.push_back(1.0);
    for (int64_t l = 1; l <= max_layer; ++l) {
        const auto& parents = tree.layers[l - 1];
        const auto& layer = tree.layers[l];
        std::vector<double> next(layer.size());
        double sum = 0.0;
        for (size_t k = 0; k < layer.size(); ++k) {
            const auto& par = parents[layer[k].parent];
            next[k] = w[layer[k].parent] / static_cast<double>(par.in_a + par.in_b);
            sum += next[k];
        }
        y.push_back(sum);
        w.swap(next);
    }
    return y;
}

}  // namespace

double conditional_mean_belief(const TreeSample& tree, double theta, double eta, int64_t horizon) {
    if (horizon < 1) throw ConfigError("conditional_mean_belief: horizon must be >= 1");
    if (tree.depth() < horizon)
        throw ConfigError("conditional_mean_belief: tree depth below the horizon");
    if (!(eta > 0.0) || !(eta < 1.0))
        throw ConfigError("conditional_mean_belief: eta must lie in (0, 1)");
    const std::vector<double> y = layer_weights(tree, horizon - 1);
    double total = 0.0;
    for (int64_t t = 0; t < horizon; ++t) {
        // Binomial pmf over l via the running recurrence; every factor stays
        // inside [0, 1] for the horizons in play.
        double b = std::pow(1.0 - eta, static_cast<double>(t));
        double row = 0.0;
        for (int64_t l = 0; l <= t; ++l) {
            row += b * y[l];
            b *= eta * static_cast<double>(t - l) / ((1.0 - eta) * static_cast<double>(l + 1));
        }
        total += row;
    }
    return theta * total / static_cast<double>(horizon);
}

double hit_prob_single(const DegreeStats& stats, int64_t l) {
    if (l < 0) throw ConfigError("hit_prob_single: l must be >= 0");
    if (l == 0) return 1.0;
    return stats.survive_first * std::pow(stats.survive_step, static_cast<double>(l - 1));
}

double hit_prob_pair(const DegreeStats& stats, int64_t l, int64_t lp) {
    if (l < 0 || l > lp) throw ConfigError("hit_prob_pair: need 0 <= l <= l'");
    if (l == 0) return lp == 0 ? 1.0 : hit_prob_single(stats, lp);
    double diag;
    if (l == 1) {
        diag = stats.split_first + stats.coalesce_first;
    } else {
        diag = stats.split_first * std::pow(stats.survive_step, static_cast<double>(2 * (l - 1)));
        for (int64_t t = 2; t <= l; ++t)
            diag += stats.coalesce_first * std::pow(stats.coalesce_step, static_cast<double>(t - 2)) *
                    stats.split_step * std::pow(stats.survive_step, static_cast<double>(2 * (l - t)));
        diag += stats.coalesce_first * std::pow(stats.coalesce_step, static_cast<double>(l - 1));
    }
    return diag * std::pow(stats.survive_step, static_cast<double>(lp - l));
}

double closed_form_mean(const DegreeStats& stats, double theta, double eta, int64_t horizon) {
    if (horizon < 1) throw ConfigError("closed_form_mean: horizon must be >= 1");
    if (!(eta > 0.0) || !(eta < 1.0)) throw ConfigError("closed_form_mean: eta must lie in (0, 1)");
    const double p = stats.survive_step;
    const double ps = stats.survive_first;
    const double t = static_cast<double>(horizon);
    double first;
    if (std::abs(1.0 - p) < 1e-12) {
        first = t;  // the geometric series collapses to its term count
    } else {
        first = (1.0 - std::pow(1.0 - eta * (1.0 - p), t)) / (eta * (1.0 - p));
    }
    const double second = (1.0 - std::pow(1.0 - eta, t)) / eta;
    return (theta / t) * (ps / p) * first + (theta / t) * (1.0 - ps / p) * second;
}

LayerWeightMoments layer_weight_moments(const DegreeStats& stats, int64_t l, int64_t lp) {
    if (l > lp) throw ConfigError("layer_weight_moments: need l <= l'");
    LayerWeightMoments m;
    m.mean_l = hit_prob_single(stats, l);
    m.mean_lp = hit_prob_single(stats, lp);
    m.second_cross = hit_prob_pair(stats, l, lp);
    m.cov = m.second_cross - m.mean_l * m.mean_lp;
    return m;
}

}  // namespace botsim
