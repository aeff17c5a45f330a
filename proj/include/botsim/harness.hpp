#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "botsim/adversary.hpp"
#include "botsim/dynamics.hpp"
#include "botsim/graph.hpp"
#include "botsim/theory.hpp"

namespace botsim {

// Either an absolute bot budget or a fraction of the agent edge count
// (b = ceil(fraction * |E|)). Exactly one must be set.
struct BudgetRule {
    std::optional<double> fraction;
    std::optional<int64_t> absolute;

    int64_t resolve(int64_t num_edges) const;
};

struct SyntheticSpec {
    int64_t n = 10000;
    double lambda_a = 2.1;
    double p_target = 1.0;
};

struct ExperimentConfig {
    int schema_version = 1;
    double theta = 0.5;
    double eta = 0.9;
    int64_t horizon = 101;
    BudgetRule budget;
    std::vector<std::string> strategies;
    int64_t trials = 5;
    uint64_t seed = 1;
    std::string dataset;              // SNAP path; empty means synthetic
    SyntheticSpec synthetic;
    double eps_nonlearn = 0.1;
    double pagerank_eps = 0.15;
    std::string pagerank_rule = "tail_mass";
    Priors priors;

    void validate() const;
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

// One (strategy, trial) outcome plus the seed chain that reproduces it.
struct ResultRecord {
    std::string strategy;
    int64_t trial = 0;
    uint64_t seed_alloc = 0;
    uint64_t seed_sim = 0;
    uint64_t seed_istar = 0;
    int64_t istar = 0;
    int64_t budget = 0;
    double ptilde = 1.0;            // objective after allocation
    double theta_T_istar = 0.0;
    double mean_theta_T = 0.0;
    int64_t nonlearn_count = 0;
    int64_t sandwich_violations = 0;
    double wall_time = 0.0;         // seconds; 0 unless timing was requested
    std::vector<double> mean_traj;  // length horizon + 1
    std::vector<double> std_traj;
    std::vector<double> istar_traj;
};

struct ExperimentResult {
    ExperimentConfig config;
    int64_t num_edges = 0;
    int64_t budget = 0;
    std::vector<ResultRecord> records;  // sorted by (strategy, trial)
};

// For each strategy and trial: allocate bots, attach them to the shared agent
// graph, simulate, and record. i_star and the signal stream are drawn per
// trial and shared across strategies so comparisons are paired. Deterministic
// given the config seed; wall times are recorded only when `timing` is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool timing = false);

// How the bot density scales with the horizon in a convergence study:
// either p_n = p fixed, or 1 - p_n = c * T^exponent.
struct RegimeSpec {
    enum class Kind { constant_p, horizon_power };
    Kind kind = Kind::constant_p;
    double p = 0.9;
    double c = 1.9;
    double exponent = -1.0;

    double p_n(int64_t horizon) const;
    // The limiting belief this regime converges to.
    double limit(double theta, double eta) const;
};

struct ConvergenceRow {
    int64_t horizon = 0;
    int64_t n = 0;
    double p_n = 0.0;
    double limit = 0.0;
    double mean_value = 0.0;  // mean conditional-mean belief over trials
    double mean_err = 0.0;    // mean |value - limit|
    double var_err = 0.0;
    int64_t trials = 0;
};

// For each T in [t_lo, t_hi]: n = ceil(lambda_a^{2T}) (range truncated at
// n_cap), draw a fresh degree sequence per trial, sample one tree, and
// compare the conditional mean belief against the regime's limit.
std::vector<ConvergenceRow> convergence_study(double lambda_a, const RegimeSpec& regime,
                                              int64_t t_lo, int64_t t_hi, int64_t trials,
                                              double theta, double eta, uint64_t seed,
                                              int64_t n_cap = 2'000'000);

struct ScatterResult {
    std::vector<std::pair<double, double>> points;  // (ptilde, theta_T_istar)
    double pearson = 0.0;
    bool defined = false;  // false when either column is constant
};

// Requires at least 3 records.
ScatterResult objective_belief_scatter(const std::vector<ResultRecord>& records);

// CSV/JSON emission for the CLI; all byte-deterministic.
std::string records_to_csv(const ExperimentResult& result);
std::vector<ResultRecord> records_from_csv(const std::string& text);
std::string trajectories_to_csv(const ExperimentResult& result);
std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows);
std::string scatter_to_csv(const ScatterResult& s);

}  // namespace botsim
