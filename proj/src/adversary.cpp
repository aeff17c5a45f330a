#include "botsim/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "botsim/errors.hpp"

namespace botsim {

namespace {

constexpr double kImprovementTol = 1e-12;

void check_alloc(const DegreeSequence& seq, size_t len, const char* who) {
    if (static_cast<int64_t>(len) != seq.size())
        throw ConfigError(std::string(who) + ": allocation length mismatch");
}

// Every adversary formula divides by d_in_A somewhere.
void check_in_agent(const DegreeSequence& seq, const char* who) {
    for (int64_t i = 0; i < seq.size(); ++i)
        if (seq.in_agent[i] < 1)
            throw ConfigError(std::string(who) + ": agent " + std::to_string(i) +
                              " has no agent in-edges");
}

}  // namespace

int64_t BotAllocation::total() const {
    return std::accumulate(counts.begin(), counts.end(), int64_t{0});
}

double survival_objective(const DegreeSequence& seq, const BotAllocation& alloc) {
    check_alloc(seq, alloc.counts.size(), "survival_objective");
    check_in_agent(seq, "survival_objective");
    const double m = static_cast<double>(seq.total_out());
    double total = 0.0;
    for (int64_t i = 0; i < seq.size(); ++i) {
        if (alloc.counts[i] < 0) throw ConfigError("survival_objective: negative bot count");
        const double ja = static_cast<double>(seq.in_agent[i]);
        total += ja / (ja + static_cast<double>(alloc.counts[i])) *
                 static_cast<double>(seq.out_degree[i]) / m;
    }
    return total;
}

double survival_objective(const DegreeSequence& seq, const std::vector<double>& d) {
    check_alloc(seq, d.size(), "survival_objective");
    check_in_agent(seq, "survival_objective");
    const double m = static_cast<double>(seq.total_out());
    double total = 0.0;
    for (int64_t i = 0; i < seq.size(); ++i) {
        if (d[i] < 0.0) throw ConfigError("survival_objective: negative bot mass");
        const double ja = static_cast<double>(seq.in_agent[i]);
        total += ja / (ja + d[i]) * static_cast<double>(seq.out_degree[i]) / m;
    }
    return total;
}

double exchange_delta(const DegreeSequence& seq, const BotAllocation& alloc, int64_t i, int64_t j) {
    check_alloc(seq, alloc.counts.size(), "exchange_delta");
    if (i == j) throw ConfigError("exchange_delta: i and j must differ");
    if (i < 0 || i >= seq.size() || j < 0 || j >= seq.size())
        throw ConfigError("exchange_delta: index out of range");
    if (alloc.counts[i] < 1) throw ConfigError("exchange_delta: no bot to move away from i");
    const double m = static_cast<double>(seq.total_out());
    const double mu_i = static_cast<double>(seq.out_degree[i]) * static_cast<double>(seq.in_agent[i]) / m;
    const double mu_j = static_cast<double>(seq.out_degree[j]) * static_cast<double>(seq.in_agent[j]) / m;
    const double ki = static_cast<double>(seq.in_agent[i] + alloc.counts[i]);
    const double kj = static_cast<double>(seq.in_agent[j] + alloc.counts[j]);
    return mu_i / ((ki - 1.0) * ki) - mu_j / ((kj + 1.0) * kj);
}

ExactSolveResult exact_solve(const DegreeSequence& seq, int64_t budget,
                             std::optional<BotAllocation> warm_start, uint64_t warm_seed) {
    if (budget < 0) throw ConfigError("exact_solve: budget must be >= 0");
    const int64_t n = seq.size();
    ExactSolveResult res;
    if (budget == 0) {
        res.alloc = BotAllocation::zeros(n);
        res.objective = survival_objective(seq, res.alloc);
        return res;
    }

    BotAllocation d;
    if (warm_start) {
        check_alloc(seq, warm_start->counts.size(), "exact_solve");
        if (warm_start->total() != budget)
            throw ConfigError("exact_solve: warm start does not spend the budget");
        for (int64_t c : warm_start->counts)
            if (c < 0) throw ConfigError("exact_solve: negative warm start entry");
        d = *warm_start;
    } else {
        d = randomized_round(relaxed_solve(seq, budget), budget, warm_seed);
    }

    const double m = static_cast<double>(seq.total_out());
    std::vector<double> mu(n), kappa(n);
    for (int64_t i = 0; i < n; ++i) {
        mu[i] = static_cast<double>(seq.out_degree[i]) * static_cast<double>(seq.in_agent[i]) / m;
        kappa[i] = static_cast<double>(seq.in_agent[i] + d.counts[i]);
    }
    // Removing a bot from i raises the objective by gain(i); adding one to j
    // lowers it by loss(j). The best exchange pairs the smallest gain with the
    // largest loss, so one linear scan per iteration suffices.
    auto gain = [&](int64_t i) { return mu[i] / ((kappa[i] - 1.0) * kappa[i]); };
    auto loss = [&](int64_t j) { return mu[j] / ((kappa[j] + 1.0) * kappa[j]); };

    const int64_t cap = 10 * budget + 10;
    while (true) {
        if (res.iterations > cap)
            throw ResourceError("exact_solve: iteration cap exceeded; descent failed to terminate");
        // Top-2 loss candidates (value descending, index ascending on ties).
        int64_t j1 = -1, j2 = -1;
        double l1 = -1.0, l2 = -1.0;
        for (int64_t j = 0; j < n; ++j) {
            const double lj = loss(j);
            if (lj > l1) {
                j2 = j1;
                l2 = l1;
                j1 = j;
                l1 = lj;
            } else if (lj > l2) {
                j2 = j;
                l2 = lj;
            }
        }
        int64_t best_i = -1, best_j = -1;
        double best_delta = std::numeric_limits<double>::infinity();
        for (int64_t i = 0; i < n; ++i) {
            if (d.counts[i] < 1) continue;
            const int64_t j = (i == j1) ? j2 : j1;
            if (j < 0) continue;
            const double delta = gain(i) - loss(j);
            if (delta < best_delta) {
                best_delta = delta;
                best_i = i;
                best_j = j;
            }
        }
        if (best_i < 0 || best_delta >= -kImprovementTol) break;
        d.counts[best_i]--;
        d.counts[best_j]++;
        kappa[best_i] -= 1.0;
        kappa[best_j] += 1.0;
        res.iterations++;
        res.objective_trace.push_back(survival_objective(seq, d));
    }
    res.alloc = std::move(d);
    res.objective = survival_objective(seq, res.alloc);
    return res;
}

RelaxedSolution relaxed_solve(const DegreeSequence& seq, int64_t budget) {
    if (budget < 1) throw ConfigError("relaxed_solve: budget must be >= 1");
    check_in_agent(seq, "relaxed_solve");
    const int64_t n = seq.size();

    // Distinct ratios descending; h is constant between consecutive ones.
    std::vector<int64_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto ratio = [&](int64_t i) {
        return static_cast<double>(seq.out_degree[i]) / static_cast<double>(seq.in_agent[i]);
    };
    std::sort(order.begin(), order.end(), [&](int64_t a, int64_t b) { return ratio(a) > ratio(b); });

    double h_star = 0.0;
    double num = 0.0, den = static_cast<double>(budget);
    size_t k = 0;
    while (k < order.size()) {
        const double r = ratio(order[k]);
        while (k < order.size() && ratio(order[k]) == r) {
            const int64_t i = order[k];
            num += std::sqrt(static_cast<double>(seq.out_degree[i]) *
                             static_cast<double>(seq.in_agent[i]));
            den += static_cast<double>(seq.in_agent[i]);
            ++k;
        }
        h_star = std::max(h_star, num / den);
    }
    if (!(h_star > 0.0)) throw ConfigError("relaxed_solve: threshold function vanished");

    RelaxedSolution sol;
    sol.h_star = h_star;
    sol.d_rel.assign(n, 0.0);
    const double h2 = h_star * h_star;
    for (int64_t i = 0; i < n; ++i) {
        if (ratio(i) >= h2) sol.support.push_back(i);
        const double fill = std::sqrt(ratio(i)) / h_star - 1.0;
        if (fill > 0.0) sol.d_rel[i] = static_cast<double>(seq.in_agent[i]) * fill;
    }

    // h(h*) = h* and budget equality are structural; fail loudly if floating
    // point ever breaks them.
    double check_num = 0.0, check_den = static_cast<double>(budget), spent = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        if (ratio(i) >= h2) {
            check_num += std::sqrt(static_cast<double>(seq.out_degree[i]) *
                                   static_cast<double>(seq.in_agent[i]));
            check_den += static_cast<double>(seq.in_agent[i]);
        }
        spent += sol.d_rel[i];
    }
    if (std::abs(check_num / check_den - h_star) > 1e-12 * std::max(1.0, h_star))
        throw ResourceError("relaxed_solve: fixed point h(h*) = h* violated");
    if (std::abs(spent - static_cast<double>(budget)) > 1e-9 * std::max<double>(1.0, budget))
        throw ResourceError("relaxed_solve: relaxed budget not met with equality");
    return sol;
}

std::vector<int64_t> sample_indices(const std::vector<double>& weights, int64_t budget, uint64_t seed) {
    if (budget < 1) throw ConfigError("sample_indices: budget must be >= 1");
    AliasTable table(weights);  // rejects all-zero weights
    Rng rng(seed);
    std::vector<int64_t> draws(budget);
    for (int64_t j = 0; j < budget; ++j) draws[j] = static_cast<int64_t>(table.sample(rng));
    return draws;
}

BotAllocation randomized_round(const RelaxedSolution& rel, int64_t budget, uint64_t seed) {
    BotAllocation alloc = BotAllocation::zeros(static_cast<int64_t>(rel.d_rel.size()));
    for (int64_t i : sample_indices(rel.d_rel, budget, seed)) alloc.counts[i]++;
    return alloc;
}

namespace {

double max_ratio(const DegreeSequence& seq) {
    double r = 0.0;
    for (int64_t i = 0; i < seq.size(); ++i)
        r = std::max(r, static_cast<double>(seq.out_degree[i]) / static_cast<double>(seq.in_agent[i]));
    return r;
}

}  // namespace

double normalized_gain(const DegreeSequence& seq, const std::vector<int64_t>& draws) {
    std::vector<int64_t> count(seq.size(), 0);
    for (int64_t w : draws) {
        if (w < 0 || w >= seq.size()) throw ConfigError("normalized_gain: index out of range");
        count[w]++;
    }
    const double rbar = max_ratio(seq);
    double total = 0.0;
    for (int64_t w : draws)
        total += static_cast<double>(seq.out_degree[w]) /
                 (static_cast<double>(seq.in_agent[w]) + static_cast<double>(count[w]));
    return total / rbar;
}

double normalized_gain_without(const DegreeSequence& seq, const std::vector<int64_t>& draws,
                               size_t skip) {
    if (skip >= draws.size()) throw ConfigError("normalized_gain_without: skip out of range");
    std::vector<int64_t> count(seq.size(), 0);
    for (size_t k = 0; k < draws.size(); ++k)
        if (k != skip) count[draws[k]]++;
    const double rbar = max_ratio(seq);
    double total = 0.0;
    for (size_t k = 0; k < draws.size(); ++k) {
        if (k == skip) continue;
        const int64_t w = draws[k];
        total += static_cast<double>(seq.out_degree[w]) /
                 (static_cast<double>(seq.in_agent[w]) + static_cast<double>(count[w]));
    }
    return total / rbar;
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "exact") return Strategy::exact;
    if (name == "randomized") return Strategy::randomized;
    if (name == "uniform") return Strategy::uniform;
    if (name == "out_degree") return Strategy::out_degree;
    if (name == "in_degree") return Strategy::in_degree;
    if (name == "ratio") return Strategy::ratio;
    if (name == "pagerank") return Strategy::pagerank;
    throw ConfigError("unknown strategy: " + name);
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::exact: return "exact";
        case Strategy::randomized: return "randomized";
        case Strategy::uniform: return "uniform";
        case Strategy::out_degree: return "out_degree";
        case Strategy::in_degree: return "in_degree";
        case Strategy::ratio: return "ratio";
        case Strategy::pagerank: return "pagerank";
    }
    throw ConfigError("unknown strategy enum");
}

int64_t pagerank_num_terms_for_tail(double eps, double tail) {
    // Smallest count J+1 with (1-eps)^{J+1} <= tail; the dropped series mass
    // is exactly that power since each summand carries l1 mass eps (1-eps)^j.
    return static_cast<int64_t>(std::ceil(std::log(tail) / std::log(1.0 - eps)));
}

int64_t pagerank_num_terms(double eps, PagerankRule rule) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("pagerank: eps must lie in (0, 1)");
    if (rule == PagerankRule::tail_mass) return pagerank_num_terms_for_tail(eps, 0.01);
    return static_cast<int64_t>(std::ceil(std::log(0.99) / std::log(1.0 - eps)));
}

std::vector<double> pagerank_series(const MultiDigraph& agents, double eps, int64_t num_terms) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("pagerank: eps must lie in (0, 1)");
    if (agents.num_bots != 0) throw ConfigError("pagerank: expected the agent sub-graph");
    if (agents.min_in_degree < 1) throw ConfigError("pagerank: every agent needs in-degree >= 1");
    if (num_terms < 1) throw ConfigError("pagerank: need at least one summand");
    const int64_t n = agents.num_agents;
    std::vector<double> term(n, eps / static_cast<double>(n));
    std::vector<double> total = term;
    std::vector<double> next(n);
    for (int64_t j = 1; j < num_terms; ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        // term <- (1-eps) * term * P_A^T: mass flows from each node to its
        // in-neighbors, scaled by the target's agent in-degree.
        for (int64_t v = 0; v < n; ++v) {
            const double mass = (1.0 - eps) * term[v] / static_cast<double>(agents.in_deg[v]);
            if (mass == 0.0) continue;
            for (int64_t e = agents.in_offset[v]; e < agents.in_offset[v + 1]; ++e)
                next[agents.in_src[e]] += static_cast<double>(agents.in_mult[e]) * mass;
        }
        term.swap(next);
        for (int64_t v = 0; v < n; ++v) total[v] += term[v];
    }
    return total;
}

std::vector<double> pagerank(const MultiDigraph& agents, double eps, PagerankRule rule) {
    return pagerank_series(agents, eps, pagerank_num_terms(eps, rule));
}

BotAllocation heuristic_allocate(const DegreeSequence& seq, const MultiDigraph* agent_graph,
                                 int64_t budget, Strategy strategy, double pagerank_eps,
                                 PagerankRule rule, uint64_t seed) {
    if (budget < 1) throw ConfigError("heuristic_allocate: budget must be >= 1");
    const int64_t n = seq.size();
    std::vector<double> weights(n);
    switch (strategy) {
        case Strategy::uniform:
            std::fill(weights.begin(), weights.end(), 1.0);
            break;
        case Strategy::out_degree:
            for (int64_t i = 0; i < n; ++i) weights[i] = static_cast<double>(seq.out_degree[i]);
            break;
        case Strategy::in_degree:
            for (int64_t i = 0; i < n; ++i) weights[i] = static_cast<double>(seq.in_agent[i]);
            break;
        case Strategy::ratio:
            for (int64_t i = 0; i < n; ++i)
                weights[i] = static_cast<double>(seq.out_degree[i]) /
                             static_cast<double>(seq.in_agent[i]);
            break;
        case Strategy::pagerank:
            if (!agent_graph) throw ConfigError("heuristic_allocate: pagerank needs the agent graph");
            weights = pagerank(*agent_graph, pagerank_eps, rule);
            break;
        default:
            throw ConfigError("heuristic_allocate: " + strategy_name(strategy) +
                              " is not a sampling heuristic");
    }
    BotAllocation alloc = BotAllocation::zeros(n);
    for (int64_t i : sample_indices(weights, budget, seed)) alloc.counts[i]++;
    return alloc;
}

MConvexityReport mconvexity_probe(const DegreeSequence& seq, int64_t budget, int64_t trials,
                                  uint64_t seed) {
    if (budget < 1) throw ConfigError("mconvexity_probe: budget must be >= 1");
    const int64_t n = seq.size();
    Rng rng(seed);
    std::uniform_int_distribution<int64_t> pick(0, n - 1);
    auto throw_budget = [&]() {
        BotAllocation d = BotAllocation::zeros(n);
        for (int64_t k = 0; k < budget; ++k) d.counts[pick(rng)]++;
        return d;
    };
    MConvexityReport rep;
    rep.probes = trials;
    for (int64_t trial = 0; trial < trials; ++trial) {
        BotAllocation d = throw_budget();
        BotAllocation dp = throw_budget();
        std::vector<int64_t> above;
        for (int64_t i = 0; i < n; ++i)
            if (d.counts[i] > dp.counts[i]) above.push_back(i);
        if (above.empty()) continue;  // d == d': nothing to probe
        rep.checked++;
        const int64_t i = above[std::uniform_int_distribution<size_t>(0, above.size() - 1)(rng)];
        const double base = survival_objective(seq, d) + survival_objective(seq, dp);
        bool found = false;
        for (int64_t j = 0; j < n && !found; ++j) {
            if (dp.counts[j] <= d.counts[j]) continue;
            BotAllocation dx = d, dpx = dp;
            dx.counts[i]--;
            dx.counts[j]++;
            dpx.counts[i]++;
            dpx.counts[j]--;
            const double moved = survival_objective(seq, dx) + survival_objective(seq, dpx);
            if (moved <= base + kImprovementTol) found = true;
        }
        if (!found) rep.violations++;
    }
    return rep;
}

}  // namespace botsim
