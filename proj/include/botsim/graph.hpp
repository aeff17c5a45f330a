#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "botsim/rng.hpp"

namespace botsim {

struct BotAllocation;  // adversary.hpp

// Prescribed degree triples (d_out, d_in_A, d_in_B) per agent. The generative
// contract for the directed configuration model: every agent needs at least
// one outstub and one agent instub, and sum out-degree must equal sum agent
// in-degree so the instub/outstub pairing can complete.
struct DegreeSequence {
    std::vector<int64_t> out_degree;
    std::vector<int64_t> in_agent;
    std::vector<int64_t> in_bot;

    int64_t size() const { return static_cast<int64_t>(out_degree.size()); }
    int64_t total_out() const;      // m_n
    int64_t total_in_agent() const;
    int64_t total_in_bot() const;

    // Equal column lengths and nonnegative entries.
    void validate_shape() const;
    // Shape plus sum(out) == sum(in_agent). With `for_dcm` additionally
    // requires out_degree >= 1 and in_agent >= 1 everywhere (SNAP ingests may
    // carry zero out-degree nodes, which the solvers tolerate; the adversary
    // objective is defined for unbalanced degree data too).
    void validate(bool for_dcm) const;
};

// Draws the synthetic sequence used throughout the experiments:
// d_in_A = 1 + Poisson(lambda_a - 1); one outstub per agent plus
// sum(in_agent) - n extras assigned uniformly; d_in_B = Poisson(lambda_b)
// with lambda_b = lambda_a * (1 - p_target) / p_target.
DegreeSequence generate_degree_sequence(int64_t n, double lambda_a, double p_target, uint64_t seed);

// Directed multigraph over agents [0, num_agents) and bots
// [num_agents, num_agents + num_bots). In-edges are stored folded by target
// with multiplicities. Immutable once built; safe to share across threads.
struct MultiDigraph {
    int64_t num_agents = 0;
    int64_t num_bots = 0;
    std::vector<int64_t> in_offset;  // size num_nodes() + 1
    std::vector<int64_t> in_src;
    std::vector<int64_t> in_mult;
    std::vector<int64_t> in_deg;     // total in-degree (with multiplicity) per node
    int64_t min_in_degree = 0;

    int64_t num_nodes() const { return num_agents + num_bots; }
    bool is_agent(int64_t v) const { return v < num_agents; }
    int64_t num_edges() const;  // total multiplicity

    // Folds a raw (src, dst) edge list, sorting within each target's bucket.
    static MultiDigraph from_edges(int64_t num_agents, int64_t num_bots,
                                   std::vector<std::pair<int64_t, int64_t>> edges);

    // Recounted (d_out, d_in_A, d_in_B) per agent from the edge multiset.
    DegreeSequence realized_degrees() const;
};

// Record of the breadth-first pairing. `tau` is the first BFS layer at which
// an already-seen outstub was sampled while growing the component of i_star
// (-1 if that never happened). tau > T certifies the T-step in-neighborhood
// of i_star is a tree apart from bot self-loops.
struct ConstructionTrace {
    int64_t tau = -1;
    std::vector<std::vector<int64_t>> agent_layers;  // layers of the i_star component
    std::vector<std::vector<int64_t>> bot_layers;

    bool tree_like_to(int64_t horizon) const { return tau < 0 || tau > horizon; }
    std::string tau_report(int64_t horizon) const;
};

struct DcmResult {
    MultiDigraph graph;
    ConstructionTrace trace;
    int64_t i_star = 0;
};

// Breadth-first instub/outstub pairing from a uniformly drawn i_star.
// Sampled outstubs are redrawn while already paired; bots are appended
// sequentially as the agents demanding them are processed. Multi-edges and
// agent self-loops are permitted. Deterministic per seed.
DcmResult build_dcm(const DegreeSequence& seq, uint64_t seed);

// Appends one bot per requested instub to an agents-only graph, in agent-id
// order (bot-to-instub pairing is arbitrary in the model, so a deterministic
// order is fine). Each bot gets a self-loop plus one edge to its agent.
MultiDigraph attach_bots(const MultiDigraph& agents, const BotAllocation& alloc);

struct SnapGraph {
    MultiDigraph graph;        // agents only
    DegreeSequence seq;        // in_bot all zero
    std::vector<int64_t> original_id;  // compact id -> id in the file
};

// Reads a whitespace-separated "src dst" edge list ('#' lines are comments).
// File edge (u, v) becomes influence edge u -> v. Node ids are compacted by
// first appearance; duplicate lines become multi-edges; nodes with in-degree
// zero receive a self-loop so the belief update stays well-defined.
SnapGraph load_snap(const std::string& path);

// Walk statistics of the empirical degree distributions. "first" variants
// average over a uniform agent (the walk's first step from i_star), "step"
// variants over an agent sampled proportional to out-degree (every later
// step). survive: the walk stays in the agent set; coalesce: two walks take
// the same in-edge target; split: two walks land on distinct agents.
struct DegreeStats {
    double survive_first = 0.0;   // in (0, 1]
    double survive_step = 0.0;
    double coalesce_first = 0.0;
    double coalesce_step = 0.0;
    double split_first = 0.0;
    double split_step = 0.0;
    double nu1 = 0.0;  // mean out-degree
    double nu2 = 0.0;  // mean squared out-degree
    double nu3 = 0.0;  // mean out-degree * agent in-degree
    int64_t total_out = 0;  // m_n
};

// If `alloc` is given it overrides the sequence's in_bot column.
DegreeStats degree_stats(const DegreeSequence& seq, const BotAllocation* alloc = nullptr);

// Advisory diagnostics for the sparse-regime assumptions: empirical moments,
// the maximum horizon zeta * log(n) / log(nu3/nu1) at zeta = 0.49, and the
// degenerate line-graph case nu3 == nu1. Never blocks execution.
struct AssumptionReport {
    double nu1 = 0.0, nu2 = 0.0, nu3 = 0.0;
    bool nu3_gt_nu1 = false;
    bool degenerate = false;      // nu3 == nu1: branching process is a line
    double max_horizon = 0.0;     // +inf when degenerate flag is unset and ratio == 1
    int64_t horizon = 0;
    bool horizon_ok = false;
};

AssumptionReport assumption_check(const DegreeSequence& seq, int64_t horizon);

}  // namespace botsim
