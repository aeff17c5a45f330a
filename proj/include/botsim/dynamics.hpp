#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "botsim/graph.hpp"

namespace botsim {

// Initial belief parameters. Agents start at (alpha0, beta0); bots are pinned
// at (0, beta_bar). alpha_bar/beta_bar bound the priors and enter the
// signal-average sandwich.
struct Priors {
    double alpha0 = 0.5;
    double beta0 = 0.5;
    double alpha_bar = 1.0;
    double beta_bar = 1.0;

    void validate() const;
};

// Bernoulli(theta) signals for agents, identically zero for bots. The default
// mode derives each bit from (seed, t, node) with a stateless hash, so a
// simulation and the signal-average evaluation can replay the same stream
// without storing it. A stored-stream mode exists for tests.
class SignalSource {
public:
    SignalSource(uint64_t seed, double theta);
    static SignalSource from_stream(std::vector<std::vector<uint8_t>> stream, double theta);

    // t in [1, T]; node must be an agent id.
    int agent_signal(int64_t t, int64_t node) const;
    double theta() const { return theta_; }
    // Largest t the source can serve (INT64_MAX for the counter mode).
    int64_t horizon() const;

private:
    uint64_t seed_ = 0;
    double theta_ = 0.5;
    bool stored_mode_ = false;
    std::vector<std::vector<uint8_t>> stream_;  // stream_[t-1][node]
};

struct BeliefState {
    std::vector<double> alpha;  // indexed by node id
    std::vector<double> beta;
    int64_t t = 0;

    static BeliefState init(const MultiDigraph& g, const Priors& priors);
};

// alpha / (alpha + beta); 0.5 when both are zero.
double belief(double alpha, double beta);

inline double belief(const BeliefState& s, int64_t node) { return belief(s.alpha[node], s.beta[node]); }

// One update round: each node mixes its own Bayesian-style signal update with
// the multiplicity-weighted average of its in-neighbors' parameters. Bots
// reproduce their closed form through their self-loop. Throws ConfigError if
// any node has in-degree zero.
void step(BeliefState& state, const MultiDigraph& g, const SignalSource& signals, double eta);

struct SimulationResult {
    std::vector<double> mean_belief;  // over agents, t = 0..T
    std::vector<double> std_belief;
    std::vector<int64_t> tracked_nodes;
    std::vector<std::vector<double>> tracked_beliefs;  // [node][t]
    std::vector<double> final_belief;  // per agent, at t = T
    int64_t nonlearn_count = 0;        // |{agent : belief_T > eps}|
    double eps_nonlearn = 0.1;
    // Signal-average values and their sandwich, evaluated on the same stream.
    std::vector<double> signal_average;  // per agent
    int64_t sandwich_violations = 0;     // must be 0
};

// Runs T rounds and evaluates the signal-average approximation for every
// agent on the shared stream. `track` lists node ids whose full trajectory is
// kept; empty tracks nothing, {-1} tracks all agents.
SimulationResult simulate(const MultiDigraph& g, double theta, double eta, int64_t horizon,
                          const Priors& priors, uint64_t seed, const std::vector<int64_t>& track,
                          double eps_nonlearn = 0.1);

struct SignalAverage {
    double value = 0.0;  // in [0, 1]
    double lower = 0.0;  // value / (1 + (abar+bbar)/((1-eta) T))
    double upper = 0.0;  // value + abar / ((1-eta) T)
};

// vartheta_T(i) = (1/T) sum_t s_{T-t} Q^t e_i^T, evaluated by propagating e_i
// backwards through Q and accumulating signal inner products (Q^t is never
// materialized). The bounds sandwich the recursion's belief at i for any
// priors within [0, alpha_bar] x [0, beta_bar].
SignalAverage signal_average_belief(const MultiDigraph& g, const SignalSource& signals,
                                    int64_t node, int64_t horizon, double eta,
                                    const Priors& priors);

// Same quantity for every node at once via a Horner pass over the signal
// stream; one row of work per time step instead of per node.
std::vector<double> signal_average_all(const MultiDigraph& g, const SignalSource& signals,
                                       int64_t horizon, double eta);

}  // namespace botsim
