// Independent reference implementations the tests check the library against.
// Everything here is written for clarity, not speed, and deliberately avoids
// the library's code paths (direct formula evaluation, exhaustive
// enumeration, ancestor-walk path products).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "botsim/graph.hpp"
#include "botsim/theory.hpp"

namespace oracles {

// Direct evaluation of the survival objective, term by term.
inline double ptilde(const botsim::DegreeSequence& seq, const std::vector<int64_t>& d) {
    double m = 0.0;
    for (int64_t o : seq.out_degree) m += static_cast<double>(o);
    double total = 0.0;
    for (int64_t i = 0; i < seq.size(); ++i) {
        const double ja = static_cast<double>(seq.in_agent[i]);
        const double di = static_cast<double>(d[i]);
        total += ja / (ja + di) * static_cast<double>(seq.out_degree[i]) / m;
    }
    return total;
}

// Visits every composition of `budget` into seq.size() nonnegative parts.
inline void for_each_composition(int64_t n, int64_t budget,
                                 const std::function<void(const std::vector<int64_t>&)>& visit) {
    std::vector<int64_t> d(n, 0);
    std::function<void(int64_t, int64_t)> rec = [&](int64_t i, int64_t left) {
        if (i == n - 1) {
            d[i] = left;
            visit(d);
            return;
        }
        for (int64_t k = 0; k <= left; ++k) {
            d[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, budget);
}

inline double enumerate_min_ptilde(const botsim::DegreeSequence& seq, int64_t budget) {
    double best = 2.0;
    for_each_composition(seq.size(), budget, [&](const std::vector<int64_t>& d) {
        best = std::min(best, ptilde(seq, d));
    });
    return best;
}

// Exact binomial coefficients via Pascal's triangle (fits doubles for the
// horizons the tests use).
inline std::vector<std::vector<double>> pascal(int64_t tmax) {
    std::vector<std::vector<double>> c(tmax + 1);
    for (int64_t t = 0; t <= tmax; ++t) {
        c[t].assign(t + 1, 1.0);
        for (int64_t l = 1; l < t; ++l) c[t][l] = c[t - 1][l - 1] + c[t - 1][l];
    }
    return c;
}

// Conditional mean belief by brute force: for every agent, walk its ancestry
// up to the root and multiply inverse in-degrees, then assemble the full
// triple sum with exact binomials.
inline double conditional_mean(const botsim::TreeSample& tree, double theta, double eta,
                               int64_t horizon) {
    std::vector<double> y(horizon, 0.0);
    for (int64_t l = 0; l < horizon; ++l) {
        for (size_t k = 0; k < tree.layers[l].size(); ++k) {
            double w = 1.0;
            int64_t layer = l;
            int64_t idx = static_cast<int64_t>(k);
            while (layer > 0) {
                const int64_t p = tree.layers[layer][idx].parent;
                const auto& par = tree.layers[layer - 1][p];
                w /= static_cast<double>(par.in_a + par.in_b);
                idx = p;
                --layer;
            }
            y[l] += w;
        }
    }
    const auto c = pascal(horizon);
    double total = 0.0;
    for (int64_t t = 0; t < horizon; ++t)
        for (int64_t l = 0; l <= t; ++l)
            total += c[t][l] * std::pow(eta, static_cast<double>(l)) *
                     std::pow(1.0 - eta, static_cast<double>(t - l)) * y[l];
    return theta * total / static_cast<double>(horizon);
}

// Random balanced degree sequence with degrees in [1, max_degree] and
// optional bot in-degrees in [0, max_bot].
inline botsim::DegreeSequence random_sequence(int64_t n, int64_t max_degree, int64_t max_bot,
                                              std::mt19937_64& rng) {
    botsim::DegreeSequence seq;
    seq.in_agent.resize(n);
    seq.in_bot.resize(n);
    std::uniform_int_distribution<int64_t> deg(1, max_degree);
    std::uniform_int_distribution<int64_t> bot(0, max_bot);
    while (true) {
        int64_t total_in = 0;
        for (int64_t i = 0; i < n; ++i) {
            seq.in_agent[i] = deg(rng);
            seq.in_bot[i] = bot(rng);
            total_in += seq.in_agent[i];
        }
        // Random composition of the outstubs with every part in range.
        seq.out_degree.assign(n, 1);
        int64_t left = total_in - n;
        bool ok = true;
        for (int64_t k = 0; k < left;) {
            const int64_t i = std::uniform_int_distribution<int64_t>(0, n - 1)(rng);
            if (seq.out_degree[i] < max_degree) {
                seq.out_degree[i]++;
                ++k;
            } else if (std::all_of(seq.out_degree.begin(), seq.out_degree.end(),
                                   [&](int64_t o) { return o >= max_degree; })) {
                ok = false;
                break;
            }
        }
        if (ok && total_in >= n && total_in <= n * max_degree) return seq;
    }
}

// The tree-mean belief assembled the long way: the full binomial double sum
// over (t, l) with exact Pascal coefficients and the per-step survival
// probabilities, before any series is collapsed.
inline double mean_belief_binomial_sum(double survive_first, double survive_step, double theta,
                                       double eta, int64_t horizon) {
    const auto c = pascal(horizon);
    double total = 0.0;
    for (int64_t t = 0; t < horizon; ++t) {
        double row = std::pow(1.0 - eta, static_cast<double>(t));  // l = 0 term
        for (int64_t l = 1; l <= t; ++l)
            row += c[t][l] * std::pow(eta, static_cast<double>(l)) *
                   std::pow(1.0 - eta, static_cast<double>(t - l)) * survive_first *
                   std::pow(survive_step, static_cast<double>(l - 1));
        total += row;
    }
    return theta * total / static_cast<double>(horizon);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracles
