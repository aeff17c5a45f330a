#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "botsim/graph.hpp"

namespace botsim {

// The adversary's decision variable: how many bot in-edges each agent gets.
struct BotAllocation {
    std::vector<int64_t> counts;

    int64_t total() const;
    static BotAllocation zeros(int64_t n) { return BotAllocation{std::vector<int64_t>(n, 0)}; }
};

// The adversary's objective: post-allocation one-step agent-survival
// probability sum_i [inA_i / (inA_i + d_i)] * out_i / m_n. Componentwise
// non-increasing in d.
double survival_objective(const DegreeSequence& seq, const BotAllocation& alloc);
double survival_objective(const DegreeSequence& seq, const std::vector<double>& d);

// Objective change of the exchange d -> d - e_i + e_j in O(1) via the two
// affected terms. Requires i != j and counts[i] >= 1.
double exchange_delta(const DegreeSequence& seq, const BotAllocation& alloc, int64_t i, int64_t j);

struct ExactSolveResult {
    BotAllocation alloc;
    double objective = 1.0;
    int64_t iterations = 0;             // accepted exchanges
    std::vector<double> objective_trace;  // strictly decreasing, one entry per accepted exchange
};

// Steepest-descent exchange minimization. The objective is M-convex, so the
// exchange-optimal point this terminates at is a global minimizer. Ties break
// on the lexicographically smallest (i, j); exchanges must improve by more
// than 1e-12 to be accepted. Default warm start rounds the relaxed solution
// (seeded by warm_seed); pass an allocation to override.
ExactSolveResult exact_solve(const DegreeSequence& seq, int64_t budget,
                             std::optional<BotAllocation> warm_start = std::nullopt,
                             uint64_t warm_seed = 0);

// Water-filling solution of the continuous relaxation:
// d_rel(i) = inA_i (sqrt(r_i)/h* - 1)_+ with r_i = out_i/inA_i and h* the
// maximum (and fixed point) of the threshold function h.
struct RelaxedSolution {
    std::vector<double> d_rel;
    double h_star = 0.0;
    std::vector<int64_t> support;  // {i : r(i) >= h*^2}
};

// h is piecewise constant between the candidate thresholds sqrt(r(i)), so one
// descending prefix-sum sweep over the distinct ratios evaluates it
// everywhere. Asserts the fixed point h(h*) = h* and budget equality.
RelaxedSolution relaxed_solve(const DegreeSequence& seq, int64_t budget);

// b i.i.d. indices with P(W = i) proportional to weights[i]; O(1) per draw
// after alias-table preprocessing.
std::vector<int64_t> sample_indices(const std::vector<double>& weights, int64_t budget, uint64_t seed);

// Rounds the relaxed solution by drawing b indices from d_rel / b and
// counting hits. Budget holds with equality.
BotAllocation randomized_round(const RelaxedSolution& rel, int64_t budget, uint64_t seed);

// The rounding objective in normalized form:
// g(w) = (1/r_max) sum_j out(w_j) / (inA(w_j) + #{k : w_k = w_j}).
// Satisfies g(w) = (m_n / r_max)(1 - survival_objective(d(w))) exactly and is
// self-bounding, which yields the approximation guarantee.
double normalized_gain(const DegreeSequence& seq, const std::vector<int64_t>& draws);

// g with draw `skip` removed everywhere (the self-bounding auxiliary).
double normalized_gain_without(const DegreeSequence& seq, const std::vector<int64_t>& draws,
                               size_t skip);

enum class Strategy {
    exact,
    randomized,  // relaxed solve + randomized rounding
    uniform,
    out_degree,
    in_degree,
    ratio,
    pagerank,
};

Strategy strategy_from_name(const std::string& name);
std::string strategy_name(Strategy s);

enum class PagerankRule {
    tail_mass,  // smallest J with (1-eps)^{J+1} <= 0.01; provably meets the l1 target
    literal,    // ceil(log 0.99 / log(1-eps)) summands
};

// Truncated series eps/n * 1 * sum_j (1-eps)^j (P_A^T)^j on the agent
// sub-graph, with the term count chosen by `rule`.
std::vector<double> pagerank(const MultiDigraph& agents, double eps, PagerankRule rule);
std::vector<double> pagerank_series(const MultiDigraph& agents, double eps, int64_t num_terms);
int64_t pagerank_num_terms(double eps, PagerankRule rule);
int64_t pagerank_num_terms_for_tail(double eps, double tail);

// Samples b indices through the rounding loop with the strategy's weights.
// The pagerank strategy needs the agent graph; the others only use degrees.
BotAllocation heuristic_allocate(const DegreeSequence& seq, const MultiDigraph* agent_graph,
                                 int64_t budget, Strategy strategy, double pagerank_eps,
                                 PagerankRule rule, uint64_t seed);

struct MConvexityReport {
    int64_t probes = 0;
    int64_t checked = 0;     // probes with d != d'
    int64_t violations = 0;  // must be 0
};

// Samples feasible pairs (d, d') and a coordinate i with d(i) > d'(i), then
// verifies some j with d'(j) > d(j) satisfies the exchange inequality.
// Test-scale probe; quadratic in n per check.
MConvexityReport mconvexity_probe(const DegreeSequence& seq, int64_t budget, int64_t trials,
                                  uint64_t seed);

}  // namespace botsim
