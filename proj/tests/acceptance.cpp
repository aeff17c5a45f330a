// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Runs the solvers, dynamics, and theory predictions against their
// independent oracles at the tolerances fixed below, and checks the CLI for
// byte-identical reruns (set BOTSIM_CLI to the binary; defaults to
// ../tools/botsim next to this executable).
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "botsim/adversary.hpp"
#include "botsim/dynamics.hpp"
#include "botsim/graph.hpp"
#include "botsim/harness.hpp"
#include "botsim/io.hpp"
#include "botsim/theory.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace botsim;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1. Exact solver vs exhaustive enumeration -------------------------------

Outcome exact_solver_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240801);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const int64_t n = 2 + static_cast<int64_t>(rng() % 5);  // up to 6
        const auto seq = oracles::random_sequence(n, 5, 0, rng);
        const int64_t budget = 1 + static_cast<int64_t>(rng() % 4);
        const auto res = exact_solve(seq, budget);
        const double best = oracles::enumerate_min_ptilde(seq, budget);
        worst = std::max(worst, std::abs(res.objective - best));
        if (std::abs(res.objective - best) > 1e-12)
            return {false, "instance " + std::to_string(rep) + " off by " +
                               format_double(res.objective - best)};
        if (res.alloc.total() != budget) return {false, "budget not spent"};
    }
    const double secs = seconds_since(t0);
    if (secs >= 30.0) return {false, "took " + format_double(secs) + " s (limit 30)"};
    return {true, "200 instances, max gap " + format_double(worst) + ", " +
                      format_double(secs) + " s"};
}

// --- 2. Exchange delta vs full re-evaluation ---------------------------------

Outcome exchange_delta_probes() {
    std::mt19937_64 rng(20240802);
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const int64_t n = 2 + static_cast<int64_t>(rng() % 11);
        const auto seq = oracles::random_sequence(n, 6, 0, rng);
        const int64_t budget = 1 + static_cast<int64_t>(rng() % 6);
        BotAllocation d = BotAllocation::zeros(n);
        for (int64_t k = 0; k < budget; ++k) d.counts[rng() % n]++;
        std::vector<int64_t> holders;
        for (int64_t i = 0; i < n; ++i)
            if (d.counts[i] > 0) holders.push_back(i);
        const int64_t i = holders[rng() % holders.size()];
        int64_t j = static_cast<int64_t>(rng() % n);
        if (j == i) j = (j + 1) % n;
        BotAllocation moved = d;
        moved.counts[i]--;
        moved.counts[j]++;
        const double direct = survival_objective(seq, moved) - survival_objective(seq, d);
        const double err = std::abs(exchange_delta(seq, d, i, j) - direct);
        worst = std::max(worst, err);
        if (err > 1e-12)
            return {false, "probe " + std::to_string(rep) + " error " + format_double(err)};
    }
    return {true, "10000 probes, max error " + format_double(worst)};
}

// --- 3. M-convexity probe ----------------------------------------------------

Outcome mconvexity() {
    std::mt19937_64 rng(20240803);
    const auto seq = oracles::random_sequence(6, 5, 0, rng);
    const auto rep = mconvexity_probe(seq, 4, 1000, 20240804);
    if (rep.violations != 0)
        return {false, std::to_string(rep.violations) + " violations in " +
                           std::to_string(rep.checked) + " checks"};
    return {true, std::to_string(rep.checked) + " non-degenerate probes, 0 violations"};
}

// --- 4. Relaxed-solution certificates ----------------------------------------

Outcome relaxed_certificates() {
    std::mt19937_64 rng(20240805);
    double worst_fix = 0.0, worst_budget = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        int64_t n;
        DegreeSequence seq;
        if (rep % 10 == 0) {
            n = 10000;
            seq = generate_degree_sequence(n, 2.1, 1.0, rng());
        } else {
            n = 10 + static_cast<int64_t>(rng() % 2000);
            seq = generate_degree_sequence(n, 2.1, 1.0, rng());
        }
        const int64_t budget = 1 + static_cast<int64_t>(rng() % 50);
        const auto rel = relaxed_solve(seq, budget);
        // Fixed point.
        double num = 0.0, den = static_cast<double>(budget), spent = 0.0;
        const double h2 = rel.h_star * rel.h_star;
        for (int64_t i = 0; i < n; ++i) {
            const double r = static_cast<double>(seq.out_degree[i]) /
                             static_cast<double>(seq.in_agent[i]);
            if (r >= h2) {
                num += std::sqrt(static_cast<double>(seq.out_degree[i]) *
                                 static_cast<double>(seq.in_agent[i]));
                den += static_cast<double>(seq.in_agent[i]);
            }
            spent += rel.d_rel[i];
        }
        worst_fix = std::max(worst_fix, std::abs(num / den - rel.h_star));
        worst_budget = std::max(worst_budget, std::abs(spent - static_cast<double>(budget)));
        if (std::abs(num / den - rel.h_star) > 1e-12)
            return {false, "fixed point off by " + format_double(num / den - rel.h_star)};
        if (std::abs(spent - static_cast<double>(budget)) > 1e-9)
            return {false, "budget off by " + format_double(spent - budget)};
        // Relaxed value never exceeds the integer optimum.
        const auto ex = exact_solve(seq, budget);
        if (survival_objective(seq, rel.d_rel) > ex.objective + 1e-12)
            return {false, "relaxed value above the exact optimum at instance " +
                               std::to_string(rep)};
    }
    return {true, "100 instances; |h(h*)-h*| <= " + format_double(worst_fix) +
                      ", budget gap <= " + format_double(worst_budget)};
}

// --- 5. Rounding approximation-ratio event frequency --------------------------

Outcome approximation_event_frequency() {
    const auto seq = generate_degree_sequence(1000, 2.1, 1.0, 20240806);
    const int64_t budget = 50;
    const double delta = 0.1;
    const auto ex = exact_solve(seq, budget);
    const auto rel = relaxed_solve(seq, budget);
    int hold = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto rand_alloc = randomized_round(rel, budget, 5000 + trial);
        const double lhs = 1.0 - survival_objective(seq, rand_alloc);
        const double rhs = (1.0 - ex.objective) / (2.0 + delta);
        if (lhs > rhs) ++hold;
    }
    if (hold < 95) return {false, "event held in only " + std::to_string(hold) + "/100 trials"};
    return {true, "event held in " + std::to_string(hold) + "/100 trials"};
}

// --- 6. Normalized-gain identity and self-bounding ---------------------------

Outcome gn_identity() {
    std::mt19937_64 rng(20240807);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int64_t n = 20 + static_cast<int64_t>(rng() % 400);
        const auto seq = generate_degree_sequence(n, 2.1, 1.0, rng());
        const int64_t budget = 1 + static_cast<int64_t>(rng() % 30);
        const auto rel = relaxed_solve(seq, budget);
        const auto draws = sample_indices(rel.d_rel, budget, rng());
        BotAllocation induced = BotAllocation::zeros(n);
        for (int64_t w : draws) induced.counts[w]++;
        double rbar = 0.0;
        for (int64_t i = 0; i < n; ++i)
            rbar = std::max(rbar, static_cast<double>(seq.out_degree[i]) /
                                      static_cast<double>(seq.in_agent[i]));
        const double lhs = normalized_gain(seq, draws);
        const double rhs = static_cast<double>(seq.total_out()) / rbar *
                           (1.0 - survival_objective(seq, induced));
        worst = std::max(worst, std::abs(lhs - rhs));
        if (std::abs(lhs - rhs) > 1e-12)
            return {false, "identity off by " + format_double(lhs - rhs)};
        double diff_sum = 0.0;
        for (size_t k = 0; k < draws.size(); ++k) {
            const double diff = lhs - normalized_gain_without(seq, draws, k);
            if (!(diff > 0.0) || diff > 1.0 + 1e-12)
                return {false, "self-bounding coordinate difference " + format_double(diff)};
            diff_sum += diff;
        }
        if (diff_sum > lhs + 1e-12)
            return {false, "difference sum " + format_double(diff_sum) + " exceeds g = " +
                               format_double(lhs)};
    }
    return {true, "100 randomized runs; max identity error " + format_double(worst)};
}

// --- 7. Signal-average sandwich ----------------------------------------------

Outcome signal_average_sandwich() {
    std::mt19937_64 rng(20240808);
    int64_t checked = 0, violations = 0;
    struct Setting {
        double p_target, eta, theta;
        int64_t n, horizon;
    };
    const std::vector<Setting> settings = {
        {1.0, 0.9, 0.5, 400, 40}, {0.8, 0.9, 0.5, 400, 40},  {0.7, 0.5, 0.3, 300, 60},
        {0.9, 0.2, 0.7, 300, 25}, {0.85, 0.95, 0.5, 500, 30},
    };
    for (const auto& s : settings) {
        const auto seq = generate_degree_sequence(s.n, 2.1, s.p_target, rng());
        const auto g = build_dcm(seq, rng()).graph;
        Priors priors{0.3, 0.6, 1.0, 1.0};
        const auto sim = simulate(g, s.theta, s.eta, s.horizon, priors, rng(), {});
        checked += g.num_agents;
        violations += sim.sandwich_violations;
    }
    if (violations != 0)
        return {false, std::to_string(violations) + " violations over " + std::to_string(checked) +
                           " node checks"};
    return {true, "0 violations over " + std::to_string(checked) + " node checks"};
}

// --- 8. Closed-form mean vs tree Monte Carlo ---------------------------------

Outcome closed_form_vs_mc() {
    const auto t0 = std::chrono::steady_clock::now();
    struct Setting {
        double p_target;
        int64_t horizon;
    };
    // p_target values chosen so the realized survive_step spans ~0.7/0.9/0.99.
    const std::vector<Setting> settings = {
        {0.68, 5}, {0.89, 5}, {0.99, 5}, {0.89, 10}, {0.99, 10}};
    std::ostringstream detail;
    std::mt19937_64 rng(20240809);
    for (const auto& s : settings) {
        const auto seq = generate_degree_sequence(2000, 2.1, s.p_target, rng());
        const auto st = degree_stats(seq);
        const DegreeSampler dist(seq);
        const double theta = 0.5, eta = 0.9;
        const int trials = 10000;
        double sum = 0.0, sumsq = 0.0;
        for (int t = 0; t < trials; ++t) {
            const auto tree = sample_tree(dist, s.horizon, rng());
            const double v = conditional_mean_belief(tree, theta, eta, s.horizon);
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / trials;
        const double se = std::sqrt(std::max(0.0, sumsq / trials - mean * mean) / trials);
        const double closed = closed_form_mean(st, theta, eta, s.horizon);
        if (std::abs(mean - closed) > 3.0 * se)
            return {false, "p~=" + format_double(st.survive_step) + " T=" +
                               std::to_string(s.horizon) + ": |" + format_double(mean) + " - " +
                               format_double(closed) + "| > 3 SE (" + format_double(se) + ")"};
        detail << " (p=" << format_double(st.survive_step).substr(0, 5)
               << ",T=" << s.horizon << ": " << format_double(std::abs(mean - closed) / se).substr(0, 4)
               << " SE)";
    }
    const double secs = seconds_since(t0);
    if (secs >= 120.0) return {false, "took " + format_double(secs) + " s (limit 120)"};
    return {true, "5 settings within 3 SE" + detail.str() + ", " + format_double(secs) + " s"};
}

// --- 9. Hitting probabilities vs Monte Carlo walks ---------------------------

Outcome hitting_probs_vs_walks() {
    const auto seq = generate_degree_sequence(1500, 2.1, 0.8, 20240810);
    const auto st = degree_stats(seq);
    const DegreeSampler dist(seq);
    Rng rng(20240811);
    const int trials = 10000;
    const int64_t depth = 6;
    std::vector<int64_t> single_hits(depth + 1, 0);
    std::map<std::pair<int64_t, int64_t>, int64_t> pair_hits;
    for (int64_t l = 0; l <= depth; ++l)
        for (int64_t lp = l; lp <= depth; ++lp) pair_hits[{l, lp}] = 0;

    for (int rep = 0; rep < trials; ++rep) {
        const auto tree = sample_tree(dist, depth, rng());
        // children lookup per layer
        std::vector<std::vector<std::vector<int64_t>>> children(tree.layers.size());
        for (size_t l = 1; l < tree.layers.size(); ++l) {
            children[l - 1].assign(tree.layers[l - 1].size(), {});
            for (size_t k = 0; k < tree.layers[l].size(); ++k)
                children[l - 1][tree.layers[l][k].parent].push_back(static_cast<int64_t>(k));
        }
        int64_t idx1 = 0, idx2 = 0;
        bool alive1 = true, alive2 = true;
        std::vector<bool> in1(depth + 1), in2(depth + 1);
        in1[0] = in2[0] = true;
        for (int64_t l = 0; l < depth; ++l) {
            auto advance = [&](int64_t& idx, bool& alive) {
                if (!alive) return;
                const auto& node = tree.layers[l][idx];
                const int64_t total = node.in_a + node.in_b;
                const int64_t c = std::uniform_int_distribution<int64_t>(0, total - 1)(rng);
                if (c < node.in_a)
                    idx = children[l][idx][c];
                else
                    alive = false;
            };
            advance(idx1, alive1);
            advance(idx2, alive2);
            in1[l + 1] = alive1;
            in2[l + 1] = alive2;
        }
        for (int64_t l = 0; l <= depth; ++l) single_hits[l] += in1[l] ? 1 : 0;
        for (int64_t l = 0; l <= depth; ++l)
            for (int64_t lp = l; lp <= depth; ++lp)
                pair_hits[{l, lp}] += (in1[l] && in2[lp]) ? 1 : 0;
    }
    double worst_z = 0.0;
    for (int64_t l = 1; l <= depth; ++l) {
        const double p = hit_prob_single(st, l);
        const double freq = static_cast<double>(single_hits[l]) / trials;
        const double se = std::sqrt(p * (1.0 - p) / trials);
        worst_z = std::max(worst_z, std::abs(freq - p) / se);
        if (std::abs(freq - p) > 3.0 * se)
            return {false, "single walk l=" + std::to_string(l) + ": freq " +
                               format_double(freq) + " vs " + format_double(p)};
    }
    for (int64_t l = 0; l <= depth; ++l)
        for (int64_t lp = l; lp <= depth; ++lp) {
            if (l == 0 && lp == 0) continue;
            const double p = hit_prob_pair(st, l, lp);
            const double freq = static_cast<double>(pair_hits[{l, lp}]) / trials;
            const double se = std::sqrt(p * (1.0 - p) / trials);
            worst_z = std::max(worst_z, std::abs(freq - p) / se);
            if (std::abs(freq - p) > 3.0 * se)
                return {false, "pair (" + std::to_string(l) + "," + std::to_string(lp) +
                                   "): freq " + format_double(freq) + " vs " + format_double(p)};
        }
    return {true, "all l, l' <= 6 within 3 SE (worst " + format_double(worst_z).substr(0, 4) +
                      " SE, 10000 trees)"};
}

// --- 10. Horizon regimes at desk scale ---------------------------------------

Outcome horizon_regime_limits() {
    const auto t0 = std::chrono::steady_clock::now();
    const double lambda_a = 2.1, theta = 0.5, eta = 0.9;
    const int64_t trials = 100;

    RegimeSpec constant;
    constant.kind = RegimeSpec::Kind::constant_p;
    constant.p = 0.9;
    const auto rows_const = convergence_study(lambda_a, constant, 2, 9, trials, theta, eta,
                                              20240812);
    double err3 = -1.0, err9 = -1.0;
    for (const auto& row : rows_const) {
        if (row.horizon == 3) err3 = row.mean_err;
        if (row.horizon == 9) err9 = row.mean_err;
    }
    if (err3 < 0.0 || err9 < 0.0) return {false, "horizon range truncated before T = 9"};
    if (!(err9 < err3))
        return {false, "constant-p error did not shrink: T=3 " + format_double(err3) + ", T=9 " +
                           format_double(err9)};

    RegimeSpec finite;
    finite.kind = RegimeSpec::Kind::horizon_power;
    finite.c = 1.9;
    finite.exponent = -1.0;
    const auto rows_fin = convergence_study(lambda_a, finite, 2, 9, trials, theta, eta, 20240813);
    const auto& last = rows_fin.back();
    const double predicted = limit_belief(LimitRegime::finite, 1.9, theta, eta);
    const double gap = std::abs(last.mean_value - predicted);
    if (last.horizon != 9) return {false, "finite-c range truncated before T = 9"};
    if (gap > 0.05)
        return {false, "finite-c gap " + format_double(gap) + " at T = 9 (limit 0.05)"};
    const double secs = seconds_since(t0);
    if (secs >= 600.0) return {false, "took " + format_double(secs) + " s (limit 600)"};
    return {true, "p=0.9 err T3 " + format_double(err3).substr(0, 6) + " -> T9 " +
                      format_double(err9).substr(0, 6) + "; finite-c gap " +
                      format_double(gap).substr(0, 6) + "; " + format_double(secs) + " s"};
}

// --- 11/12. Strategy ordering and correlation --------------------------------

const ExperimentResult& ordering_run() {
    static const ExperimentResult result = [] {
        ExperimentConfig cfg;
        cfg.theta = 0.5;
        cfg.eta = 0.9;
        cfg.horizon = 101;
        cfg.budget.fraction = 1.0 / 400.0;
        cfg.strategies = {"exact", "randomized", "uniform", "out_degree", "in_degree", "ratio",
                          "pagerank"};
        cfg.trials = 5;
        cfg.seed = 20240814;
        cfg.synthetic = {10000, 2.1, 1.0};
        return run_experiment(cfg);
    }();
    return result;
}

Outcome strategy_ordering() {
    const ExperimentResult& ordering_result = ordering_run();
    const int64_t trials = ordering_result.config.trials;

    std::map<std::string, double> mean_ptilde, mean_belief;
    double exact_ptilde = 2.0;
    for (const auto& r : ordering_result.records) {
        mean_ptilde[r.strategy] += r.ptilde / static_cast<double>(trials);
        mean_belief[r.strategy] += r.theta_T_istar / static_cast<double>(trials);
        if (r.strategy == "exact") exact_ptilde = std::min(exact_ptilde, r.ptilde);
        if (r.sandwich_violations != 0) return {false, "sandwich violation inside the run"};
    }
    // Exact is a global minimizer: pointwise no record may beat it.
    for (const auto& r : ordering_result.records)
        if (r.ptilde < exact_ptilde - 1e-12)
            return {false, r.strategy + " beat the exact objective"};
    // Randomized rounding beats every heuristic on average.
    for (const auto& name : {"uniform", "out_degree", "in_degree", "ratio", "pagerank"})
        if (!(mean_ptilde["randomized"] <= mean_ptilde[name]))
            return {false, std::string("randomized mean objective above ") + name};
    if (!(mean_belief["exact"] <= mean_belief["uniform"]))
        return {false, "mean final belief ordering exact vs uniform failed: " +
                           format_double(mean_belief["exact"]) + " vs " +
                           format_double(mean_belief["uniform"])};
    std::ostringstream detail;
    detail << "objective exact " << format_double(mean_ptilde["exact"]).substr(0, 6)
           << " <= randomized " << format_double(mean_ptilde["randomized"]).substr(0, 6)
           << " <= heuristics; belief exact " << format_double(mean_belief["exact"]).substr(0, 6)
           << " <= uniform " << format_double(mean_belief["uniform"]).substr(0, 6);
    return {true, detail.str()};
}

Outcome correlation() {
    const auto s = objective_belief_scatter(ordering_run().records);
    if (!s.defined) return {false, "correlation undefined"};
    if (s.pearson < 0.8) return {false, "pearson r = " + format_double(s.pearson)};
    return {true, "pearson r = " + format_double(s.pearson).substr(0, 6) + " over " +
                      std::to_string(s.points.size()) + " records"};
}

// --- 13. PageRank truncation --------------------------------------------------

Outcome pagerank_truncation() {
    const auto seq = generate_degree_sequence(6301, 2.1, 1.0, 20240815);
    const auto g = build_dcm(seq, 20240816).graph;
    const double eps = 0.15;
    const auto shipped = pagerank(g, eps, PagerankRule::tail_mass);
    const auto reference = pagerank_series(g, eps, pagerank_num_terms_for_tail(eps, 1e-6));
    double l1 = 0.0;
    for (size_t i = 0; i < shipped.size(); ++i) l1 += std::abs(shipped[i] - reference[i]);
    if (l1 > 0.01) return {false, "l1 distance " + format_double(l1)};
    return {true, "l1 distance " + format_double(l1).substr(0, 8) + " <= 0.01 (" +
                      std::to_string(pagerank_num_terms(eps, PagerankRule::tail_mass)) +
                      " vs " + std::to_string(pagerank_num_terms_for_tail(eps, 1e-6)) +
                      " terms)"};
}

// --- 14. CLI determinism -------------------------------------------------------

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool dirs_identical(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(a)) names.push_back(entry.path().filename());
    for (const auto& name : names) {
        if (!fs::exists(b / name)) {
            why = "missing " + name.string();
            return false;
        }
        if (file_bytes(a / name) != file_bytes(b / name)) {
            why = name.string() + " differs";
            return false;
        }
    }
    return true;
}

std::string g_cli_path;  // resolved in main

Outcome determinism() {
    const std::string& cli = g_cli_path;
    if (cli.empty() || !fs::exists(cli))
        return {false, "CLI binary not found (set BOTSIM_CLI)"};
    const fs::path work = fs::temp_directory_path() / "botsim_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string w = work.string();

    // Shared inputs.
    {
        std::ofstream cfgf(work / "cfg.json");
        cfgf << "{\"schema_version\":1,\"theta\":0.5,\"eta\":0.9,\"horizon\":15,"
                "\"budget\":{\"absolute\":8},\"strategies\":[\"exact\",\"randomized\","
                "\"uniform\"],\"trials\":2,\"seed\":77,"
                "\"synthetic\":{\"n\":300,\"lambda_a\":2.1,\"p_target\":1.0}}\n";
    }
    struct Step {
        std::string name;
        std::string args;
    };
    const std::vector<Step> steps = {
        {"generate", "generate --n 300 --lambda-a 2.1 --p-target 1.0 --seed 5 --out {}"},
        {"stats", "stats --graph-dir " + w + "/generate_1 --horizon 10 --out {}"},
        {"allocate",
         "allocate --graph-dir " + w + "/generate_1 --strategy randomized --budget 8 --seed 3 "
         "--out {}"},
        {"simulate", "simulate --graph-dir " + w + "/generate_1 --allocation " + w +
                         "/allocate_1/allocation.csv --horizon 20 --seed 11 --out {}"},
        {"theory", "theory --synthetic-n 400 --p-target 0.85 --horizon 5 --trials 200 --seed 13 "
                   "--out {}"},
        {"experiment", "experiment --config " + w + "/cfg.json --out {}"},
        {"scatter", "scatter --records " + w + "/experiment_1/records.csv --out {}"},
    };
    for (const auto& step : steps) {
        for (int run = 1; run <= 2; ++run) {
            std::string args = step.args;
            const std::string out = w + "/" + step.name + "_" + std::to_string(run);
            args.replace(args.find("{}"), 2, out);
            const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) return {false, step.name + " exited nonzero"};
        }
        std::string why;
        if (!dirs_identical(work / (step.name + "_1"), work / (step.name + "_2"), why))
            return {false, step.name + ": " + why};
    }
    return {true, std::to_string(steps.size()) + " subcommands byte-identical across reruns"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string filter = argc > 1 ? argv[1] : "";
    if (const char* env = std::getenv("BOTSIM_CLI")) {
        g_cli_path = env;
    } else {
        // Default layout: this binary in build/tests, the CLI in build/tools.
        g_cli_path = (fs::path(argv[0]).parent_path() / "../tools/botsim").lexically_normal()
                         .string();
    }
    struct Criterion {
        std::string name;
        Outcome (*run)();
    };
    const std::vector<Criterion> criteria = {
        {"exact-solver-oracle-equivalence", exact_solver_oracle},
        {"exchange-delta-correctness", exchange_delta_probes},
        {"m-convexity-probe", mconvexity},
        {"relaxed-solution-certificates", relaxed_certificates},
        {"rounding-approximation-event", approximation_event_frequency},
        {"gn-identity-and-self-bounding", gn_identity},
        {"signal-average-sandwich", signal_average_sandwich},
        {"closed-form-vs-monte-carlo", closed_form_vs_mc},
        {"hitting-probs-vs-walks", hitting_probs_vs_walks},
        {"horizon-regime-limits", horizon_regime_limits},
        {"strategy-ordering", strategy_ordering},
        {"objective-belief-correlation", correlation},
        {"pagerank-truncation", pagerank_truncation},
        {"determinism", determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (!filter.empty() && c.name.find(filter) == std::string::npos) continue;
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << c.name << " -- " << out.detail << "\n"
                  << std::flush;
        if (!out.pass) ++failures;
    }
    if (failures > 0) std::cout << failures << " criteria failed\n";
    return failures == 0 ? 0 : 1;
}
