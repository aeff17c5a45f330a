#include "botsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "botsim/errors.hpp"

namespace botsim {

void Priors::validate() const {
    if (!(alpha_bar > 0.0) || !(beta_bar > 0.0))
        throw ConfigError("priors: alpha_bar and beta_bar must be positive");
    if (alpha0 < 0.0 || alpha0 > alpha_bar || beta0 < 0.0 || beta0 > beta_bar)
        throw ConfigError("priors: initial parameters must lie in [0, alpha_bar] x [0, beta_bar]");
}

SignalSource::SignalSource(uint64_t seed, double theta) : seed_(seed), theta_(theta) {
    if (!(theta >= 0.0) || !(theta <= 1.0)) throw ConfigError("signals: theta must lie in [0, 1]");
}

SignalSource SignalSource::from_stream(std::vector<std::vector<uint8_t>> stream, double theta) {
    SignalSource s(0, theta);
    s.stored_mode_ = true;
    s.stream_ = std::move(stream);
    return s;
}

int SignalSource::agent_signal(int64_t t, int64_t node) const {
    if (stored_mode_) {
        if (t < 1 || t > static_cast<int64_t>(stream_.size()))
            throw ConfigError("signals: time " + std::to_string(t) + " outside the stored stream");
        return stream_[t - 1][node];
    }
    return to_unit(mix64(seed_, static_cast<uint64_t>(t), static_cast<uint64_t>(node))) < theta_ ? 1 : 0;
}

int64_t SignalSource::horizon() const {
    return stored_mode_ ? static_cast<int64_t>(stream_.size()) : std::numeric_limits<int64_t>::max();
}

BeliefState BeliefState::init(const MultiDigraph& g, const Priors& priors) {
    priors.validate();
    BeliefState s;
    s.alpha.assign(g.num_nodes(), 0.0);
    s.beta.assign(g.num_nodes(), 0.0);
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        if (g.is_agent(v)) {
            s.alpha[v] = priors.alpha0;
            s.beta[v] = priors.beta0;
        } else {
            s.alpha[v] = 0.0;
            s.beta[v] = priors.beta_bar;
        }
    }
    return s;
}

double belief(double alpha, double beta) {
    const double tot = alpha + beta;
    if (tot == 0.0) return 0.5;
    return alpha / tot;
}

void step(BeliefState& state, const MultiDigraph& g, const SignalSource& signals, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("step: eta must lie in [0, 1]");
    if (g.min_in_degree < 1)
        throw ConfigError("step: every node needs in-degree >= 1 (bots get theirs via self-loops)");
    const int64_t total = g.num_nodes();
    const int64_t t = state.t + 1;
    std::vector<double> alpha_next(total), beta_next(total);
    for (int64_t v = 0; v < total; ++v) {
        double acc_a = 0.0, acc_b = 0.0;
        for (int64_t e = g.in_offset[v]; e < g.in_offset[v + 1]; ++e) {
            const double w = static_cast<double>(g.in_mult[e]);
            acc_a += w * state.alpha[g.in_src[e]];
            acc_b += w * state.beta[g.in_src[e]];
        }
        const double din = static_cast<double>(g.in_deg[v]);
        const int s = g.is_agent(v) ? signals.agent_signal(t, v) : 0;
        alpha_next[v] = (1.0 - eta) * (state.alpha[v] + s) + eta * acc_a / din;
        beta_next[v] = (1.0 - eta) * (state.beta[v] + (1 - s)) + eta * acc_b / din;
    }
    state.alpha.swap(alpha_next);
    state.beta.swap(beta_next);
    state.t = t;
}

namespace {

// Column action w <- Q w with Q = (1-eta) I + eta P and P the
// column-normalized (multiplicity-weighted) adjacency: mass at a node is
// scattered backwards to its in-neighbors. This walks the graph the way a
// belief dependency does, from an observer towards who it observes.
void propagate_to_sources(const MultiDigraph& g, double eta, const std::vector<double>& w,
                          std::vector<double>& out) {
    const int64_t total = g.num_nodes();
    out.assign(total, 0.0);
    for (int64_t v = 0; v < total; ++v) {
        const double mass = eta * w[v] / static_cast<double>(g.in_deg[v]);
        out[v] += (1.0 - eta) * w[v];
        if (mass == 0.0) continue;
        for (int64_t e = g.in_offset[v]; e < g.in_offset[v + 1]; ++e)
            out[g.in_src[e]] += static_cast<double>(g.in_mult[e]) * mass;
    }
}

// Row action u <- u Q: each node gathers from its in-neighbors, the same
// direction the belief recursion itself mixes.
void propagate_to_targets(const MultiDigraph& g, double eta, const std::vector<double>& u,
                          std::vector<double>& out) {
    const int64_t total = g.num_nodes();
    out.assign(total, 0.0);
    for (int64_t v = 0; v < total; ++v) {
        double acc = 0.0;
        for (int64_t e = g.in_offset[v]; e < g.in_offset[v + 1]; ++e)
            acc += static_cast<double>(g.in_mult[e]) * u[g.in_src[e]];
        out[v] = (1.0 - eta) * u[v] + eta * acc / static_cast<double>(g.in_deg[v]);
    }
}

void check_propagation_inputs(const MultiDigraph& g, const SignalSource& signals, int64_t horizon,
                              double eta) {
    if (horizon < 1) throw ConfigError("signal average: horizon must be >= 1");
    if (!(eta >= 0.0) || !(eta < 1.0)) throw ConfigError("signal average: eta must lie in [0, 1)");
    if (g.min_in_degree < 1) throw ConfigError("signal average: every node needs in-degree >= 1");
    if (signals.horizon() < horizon)
        throw ConfigError("signal average: stored stream shorter than the horizon");
}

}  // namespace

std::vector<double> signal_average_all(const MultiDigraph& g, const SignalSource& signals,
                                       int64_t horizon, double eta) {
    check_propagation_inputs(g, signals, horizon, eta);
    const int64_t total = g.num_nodes();
    // Horner form of sum_{t=0}^{T-1} s_{T-t} Q^t: seed with s_1, then
    // alternate u <- u Q and adding the next signal row.
    std::vector<double> u(total, 0.0), scratch;
    for (int64_t v = 0; v < g.num_agents; ++v) u[v] = signals.agent_signal(1, v);
    for (int64_t tau = 2; tau <= horizon; ++tau) {
        propagate_to_targets(g, eta, u, scratch);
        u.swap(scratch);
        for (int64_t v = 0; v < g.num_agents; ++v) u[v] += signals.agent_signal(tau, v);
    }
    for (double& x : u) x /= static_cast<double>(horizon);
    return u;
}

SignalAverage signal_average_belief(const MultiDigraph& g, const SignalSource& signals,
                                    int64_t node, int64_t horizon, double eta,
                                    const Priors& priors) {
    check_propagation_inputs(g, signals, horizon, eta);
    priors.validate();
    if (node < 0 || node >= g.num_nodes()) throw ConfigError("signal average: node out of range");
    const int64_t total = g.num_nodes();
    std::vector<double> w(total, 0.0), scratch;
    w[node] = 1.0;
    double acc = 0.0;
    for (int64_t t = 0; t < horizon; ++t) {
        if (t > 0) {
            propagate_to_sources(g, eta, w, scratch);
            w.swap(scratch);
        }
        double dot = 0.0;
        for (int64_t v = 0; v < g.num_agents; ++v)
            if (w[v] != 0.0) dot += w[v] * signals.agent_signal(horizon - t, v);
        acc += dot;
    }
    SignalAverage out;
    out.value = acc / static_cast<double>(horizon);
    const double scale = (1.0 - eta) * static_cast<double>(horizon);
    out.lower = out.value / (1.0 + (priors.alpha_bar + priors.beta_bar) / scale);
    out.upper = out.value + priors.alpha_bar / scale;
    return out;
}

SimulationResult simulate(const MultiDigraph& g, double theta, double eta, int64_t horizon,
                          const Priors& priors, uint64_t seed, const std::vector<int64_t>& track,
                          double eps_nonlearn) {
    if (horizon < 1) throw ConfigError("simulate: horizon must be >= 1");
    if (!(eta >= 0.0) || !(eta < 1.0)) throw ConfigError("simulate: eta must lie in [0, 1)");
    priors.validate();
    SignalSource signals(seed, theta);

    SimulationResult res;
    res.eps_nonlearn = eps_nonlearn;
    bool track_all = false;
    for (int64_t v : track) {
        if (v == -1) {
            track_all = true;
        } else if (v < 0 || v >= g.num_nodes()) {
            throw ConfigError("simulate: tracked node out of range");
        }
    }
    if (track_all) {
        res.tracked_nodes.resize(g.num_agents);
        for (int64_t v = 0; v < g.num_agents; ++v) res.tracked_nodes[v] = v;
    } else {
        res.tracked_nodes = track;
    }
    res.tracked_beliefs.assign(res.tracked_nodes.size(), {});

    BeliefState state = BeliefState::init(g, priors);
    auto record = [&]() {
        double sum = 0.0, sumsq = 0.0;
        for (int64_t v = 0; v < g.num_agents; ++v) {
            const double th = belief(state, v);
            sum += th;
            sumsq += th * th;
        }
        const double mean = sum / static_cast<double>(g.num_agents);
        res.mean_belief.push_back(mean);
        const double var = std::max(0.0, sumsq / static_cast<double>(g.num_agents) - mean * mean);
        res.std_belief.push_back(std::sqrt(var));
        for (size_t k = 0; k < res.tracked_nodes.size(); ++k)
            res.tracked_beliefs[k].push_back(belief(state, res.tracked_nodes[k]));
    };
    record();
    for (int64_t t = 1; t <= horizon; ++t) {
        step(state, g, signals, eta);
        record();
    }

    res.final_belief.resize(g.num_agents);
    for (int64_t v = 0; v < g.num_agents; ++v) {
        res.final_belief[v] = belief(state, v);
        if (res.final_belief[v] > eps_nonlearn) res.nonlearn_count++;
    }

    // Replay the same stream for the signal-average values and the sandwich.
    res.signal_average = signal_average_all(g, signals, horizon, eta);
    res.signal_average.resize(g.num_agents);
    const double scale = (1.0 - eta) * static_cast<double>(horizon);
    constexpr double kTol = 1e-9;
    for (int64_t v = 0; v < g.num_agents; ++v) {
        const double value = res.signal_average[v];
        const double lower = value / (1.0 + (priors.alpha_bar + priors.beta_bar) / scale);
        const double upper = value + priors.alpha_bar / scale;
        const double th = res.final_belief[v];
        if (th < lower - kTol * std::max(1.0, std::abs(lower)) ||
            th > upper + kTol * std::max(1.0, std::abs(upper)))
            res.sandwich_violations++;
    }
    return res;
}

}  // namespace botsim
