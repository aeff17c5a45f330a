// Command-line front end: generate / stats / allocate / simulate / theory /
// experiment / scatter. All outputs land in --out as CSV/JSON and are
// byte-identical across reruns with the same seed (timing fields stay zero
// unless --timing is passed). Exit codes: 0 success, 2 config error, 3 I/O.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "botsim/adversary.hpp"
#include "botsim/dynamics.hpp"
#include "botsim/errors.hpp"
#include "botsim/graph.hpp"
#include "botsim/harness.hpp"
#include "botsim/io.hpp"
#include "botsim/theory.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace botsim;

namespace {

struct GraphInputs {
    std::string snap;
    std::string degrees;
    std::string graph_dir;
    mutable std::optional<SnapGraph> snap_cache;

    const SnapGraph& snap_graph() const {
        if (!snap_cache) snap_cache = load_snap(snap);
        return *snap_cache;
    }

    // Sidecar mapping compact ids back to the ids in the SNAP file.
    void write_idmap(const std::string& out_dir) const {
        if (snap.empty()) return;
        std::ostringstream out;
        out << "compact_id,original_id\n";
        const auto& ids = snap_graph().original_id;
        for (size_t i = 0; i < ids.size(); ++i) out << i << ',' << ids[i] << '\n';
        write_text_file(out_dir + "/idmap.csv", out.str());
    }

    void add_options(CLI::App* cmd, bool need_topology) {
        cmd->add_option("--snap", snap, "SNAP edge-list file (src dst per line, # comments)");
        cmd->add_option("--graph-dir", graph_dir,
                        "directory with edges.csv + header.json from `generate`");
        if (!need_topology)
            cmd->add_option("--degrees", degrees, "degrees CSV (agent_id,d_out,d_in_A,d_in_B)");
    }

    // Degree sequence only (allocate/stats/theory paths).
    DegreeSequence load_sequence() const {
        if (!degrees.empty()) return read_degrees_csv(degrees);
        if (!snap.empty()) return snap_graph().seq;
        if (!graph_dir.empty())
            return read_graph_csv(graph_dir + "/edges.csv", graph_dir + "/header.json")
                .realized_degrees();
        throw ConfigError("no input: pass --snap, --degrees, or --graph-dir");
    }

    // Agent topology (simulate/pagerank paths).
    MultiDigraph load_graph() const {
        if (!snap.empty()) return snap_graph().graph;
        if (!graph_dir.empty())
            return read_graph_csv(graph_dir + "/edges.csv", graph_dir + "/header.json");
        throw ConfigError("no graph input: pass --snap or --graph-dir");
    }
};

void ensure_out(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir);
}

json stats_to_json(const DegreeStats& st, const DegreeSequence& seq) {
    json j;
    j["survive_first"] = st.survive_first;
    j["survive_step"] = st.survive_step;
    j["coalesce_first"] = st.coalesce_first;
    j["coalesce_step"] = st.coalesce_step;
    j["split_first"] = st.split_first;
    j["split_step"] = st.split_step;
    j["nu1"] = st.nu1;
    j["nu2"] = st.nu2;
    j["nu3"] = st.nu3;
    j["total_out"] = st.total_out;
    // Both circulating definitions of the bot-density parameter; neither is
    // canonical, so report them side by side.
    const double in_a = static_cast<double>(seq.total_in_agent());
    const double in_b = static_cast<double>(seq.total_in_bot());
    j["p_mean_ratio"] = in_a / (in_a + in_b);
    return j;
}

PagerankRule rule_from_name(const std::string& name) {
    if (name == "tail_mass") return PagerankRule::tail_mass;
    if (name == "literal") return PagerankRule::literal;
    throw ConfigError("pagerank rule must be tail_mass or literal");
}

int run_generate(const std::string& out_dir, int64_t n, double lambda_a, double p_target,
                 uint64_t seed, int64_t horizon) {
    ensure_out(out_dir);
    const auto seq = generate_degree_sequence(n, lambda_a, p_target, seed);
    const auto res = build_dcm(seq, derive_seed(seed, "dcm"));
    write_degrees_csv(seq, out_dir + "/degrees.csv");
    write_graph_csv(res.graph, out_dir + "/edges.csv", out_dir + "/header.json", seed);
    json trace;
    trace["i_star"] = res.i_star;
    trace["tau"] = res.trace.tau;
    trace["tau_report"] = res.trace.tau_report(horizon);
    trace["tree_like_to_horizon"] = res.trace.tree_like_to(horizon);
    json layer_sizes = json::array();
    for (const auto& layer : res.trace.agent_layers) layer_sizes.push_back(layer.size());
    trace["agent_layer_sizes"] = layer_sizes;
    write_text_file(out_dir + "/trace.json", trace.dump(2) + "\n");
    std::cout << "generated n=" << n << " agents, " << res.graph.num_bots << " bots -> " << out_dir
              << "\n";
    return 0;
}

int run_stats(const GraphInputs& in, const std::string& allocation, const std::string& out_dir,
              int64_t horizon) {
    ensure_out(out_dir);
    const auto seq = in.load_sequence();
    in.write_idmap(out_dir);
    std::optional<BotAllocation> alloc;
    if (!allocation.empty()) alloc = read_allocation_csv(allocation);
    const auto st = degree_stats(seq, alloc ? &*alloc : nullptr);
    json j = stats_to_json(st, seq);
    const auto rep = assumption_check(seq, horizon);
    json a;
    a["nu1"] = rep.nu1;
    a["nu2"] = rep.nu2;
    a["nu3"] = rep.nu3;
    a["nu3_gt_nu1"] = rep.nu3_gt_nu1;
    a["degenerate"] = rep.degenerate;
    a["max_horizon"] = rep.degenerate ? json() : json(rep.max_horizon);
    a["horizon"] = rep.horizon;
    a["horizon_ok"] = rep.horizon_ok;
    j["assumptions"] = a;
    j["n"] = seq.size();
    write_text_file(out_dir + "/stats.json", j.dump(2) + "\n");
    std::cout << "stats written to " << out_dir << "/stats.json\n";
    return 0;
}

int run_allocate(const GraphInputs& in, const std::string& out_dir, const std::string& strategy,
                 std::optional<int64_t> budget, std::optional<double> budget_frac, uint64_t seed,
                 double pr_eps, const std::string& pr_rule, bool timing) {
    ensure_out(out_dir);
    const auto seq = in.load_sequence();
    in.write_idmap(out_dir);
    BudgetRule rule;
    rule.absolute = budget;
    rule.fraction = budget_frac;
    const int64_t b = rule.resolve(seq.total_out());
    const Strategy strat = strategy_from_name(strategy);

    const auto t0 = std::chrono::steady_clock::now();
    BotAllocation alloc;
    json report;
    switch (strat) {
        case Strategy::exact: {
            const auto res = exact_solve(seq, b);
            alloc = res.alloc;
            report["iterations"] = res.iterations;
            break;
        }
        case Strategy::randomized: {
            const auto rel = relaxed_solve(seq, b);
            alloc = randomized_round(rel, b, seed);
            report["h_star"] = rel.h_star;
            report["iterations"] = 0;
            break;
        }
        default: {
            std::optional<MultiDigraph> g;
            if (strat == Strategy::pagerank) g = in.load_graph();
            alloc = heuristic_allocate(seq, g ? &*g : nullptr, b, strat, pr_eps,
                                       rule_from_name(pr_rule), seed);
            report["iterations"] = 0;
            break;
        }
    }
    double wall = 0.0;
    if (timing)
        wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    report["strategy"] = strategy;
    report["objective"] = survival_objective(seq, alloc);
    report["budget"] = b;
    report["seed"] = seed;
    report["wall_time"] = wall;
    write_allocation_csv(alloc, out_dir + "/allocation.csv");
    write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
    std::cout << strategy << ": objective " << format_double(survival_objective(seq, alloc))
              << " with budget " << b << " -> " << out_dir << "\n";
    return 0;
}

int run_simulate(const GraphInputs& in, const std::string& allocation, const std::string& out_dir,
                 double theta, double eta, int64_t horizon, uint64_t seed,
                 const std::string& track, double eps, const Priors& priors) {
    ensure_out(out_dir);
    MultiDigraph g = in.load_graph();
    in.write_idmap(out_dir);
    if (!allocation.empty()) {
        if (g.num_bots != 0)
            throw ConfigError("simulate: graph already carries bots; --allocation must start "
                              "from an agents-only graph");
        g = attach_bots(g, read_allocation_csv(allocation));
    }
    std::vector<int64_t> tracked;
    const uint64_t istar_seed = derive_seed(seed, "istar");
    if (track == "istar") {
        Rng rng(istar_seed);
        tracked = {std::uniform_int_distribution<int64_t>(0, g.num_agents - 1)(rng)};
    } else if (track == "all") {
        tracked = {-1};
    } else if (track != "none") {
        throw ConfigError("simulate: --track must be istar, all, or none");
    }
    const auto res = simulate(g, theta, eta, horizon, priors, seed, tracked, eps);

    std::ostringstream csv;
    csv << "t,mean_belief,std_belief,tracked_node,belief\n";
    for (int64_t t = 0; t <= horizon; ++t) {
        if (res.tracked_nodes.empty()) {
            csv << t << ',' << format_double(res.mean_belief[t]) << ','
                << format_double(res.std_belief[t]) << ",,\n";
        } else {
            for (size_t k = 0; k < res.tracked_nodes.size(); ++k)
                csv << t << ',' << format_double(res.mean_belief[t]) << ','
                    << format_double(res.std_belief[t]) << ',' << res.tracked_nodes[k] << ','
                    << format_double(res.tracked_beliefs[k][t]) << '\n';
        }
    }
    write_text_file(out_dir + "/trajectory.csv", csv.str());

    json summary;
    summary["final_mean"] = res.mean_belief.back();
    summary["sandwich_violations"] = res.sandwich_violations;
    summary["nonlearn_count"] = res.nonlearn_count;
    summary["eps_nonlearn"] = res.eps_nonlearn;
    summary["horizon"] = horizon;
    summary["theta"] = theta;
    summary["eta"] = eta;
    summary["seed"] = seed;
    if (track == "istar") summary["i_star"] = res.tracked_nodes[0];
    write_text_file(out_dir + "/summary.json", summary.dump(2) + "\n");
    std::cout << "final mean belief " << format_double(res.mean_belief.back()) << ", "
              << res.nonlearn_count << " agents above eps -> " << out_dir << "\n";
    return 0;
}

int run_convergence(const std::string& out_dir, double lambda_a, const std::string& regime,
                    double p, double c, double exponent, int64_t t_lo, int64_t t_hi,
                    int64_t trials, double theta, double eta, uint64_t seed, int64_t n_cap) {
    ensure_out(out_dir);
    RegimeSpec spec;
    if (regime == "constant") {
        spec.kind = RegimeSpec::Kind::constant_p;
        spec.p = p;
    } else if (regime == "power") {
        spec.kind = RegimeSpec::Kind::horizon_power;
        spec.c = c;
        spec.exponent = exponent;
    } else {
        throw ConfigError("theory: --regime must be constant or power");
    }
    const auto rows = convergence_study(lambda_a, spec, t_lo, t_hi, trials, theta, eta, seed, n_cap);
    write_text_file(out_dir + "/convergence.csv", convergence_to_csv(rows));
    std::cout << rows.size() << " horizons -> " << out_dir << "/convergence.csv\n";
    return 0;
}

int run_theory(const GraphInputs& in, std::optional<int64_t> synth_n, double lambda_a,
               double p_target, const std::string& out_dir, double theta, double eta,
               int64_t horizon, int64_t trials, uint64_t seed) {
    ensure_out(out_dir);
    DegreeSequence seq;
    if (synth_n) {
        seq = generate_degree_sequence(*synth_n, lambda_a, p_target, derive_seed(seed, "degrees"));
    } else {
        seq = in.load_sequence();
    }
    const auto st = degree_stats(seq);
    const DegreeSampler dist(seq);
    double sum = 0.0, sumsq = 0.0;
    for (int64_t trial = 0; trial < trials; ++trial) {
        const auto tree = sample_tree(dist, horizon, derive_seed(seed, "tree", trial));
        const double v = conditional_mean_belief(tree, theta, eta, horizon);
        sum += v;
        sumsq += v * v;
    }
    const double mc_mean = sum / static_cast<double>(trials);
    const double mc_var = std::max(0.0, sumsq / static_cast<double>(trials) - mc_mean * mc_mean);

    json j;
    j["stats"] = stats_to_json(st, seq);
    j["T"] = horizon;
    j["closed_form_mean"] = closed_form_mean(st, theta, eta, horizon);
    const double c_hat = static_cast<double>(horizon) * (1.0 - st.survive_step);
    json limits;
    limits["vanishing"] = limit_belief(LimitRegime::vanishing, 0.0, theta, eta);
    limits["finite"] = c_hat > 0.0 ? limit_belief(LimitRegime::finite, c_hat, theta, eta) : theta;
    limits["finite_c"] = c_hat;
    limits["diverging"] = limit_belief(LimitRegime::diverging, 0.0, theta, eta);
    j["limit_belief"] = limits;
    j["mc_mean"] = mc_mean;
    j["mc_se"] = std::sqrt(mc_var / static_cast<double>(trials));
    j["trials"] = trials;
    j["theta"] = theta;
    j["eta"] = eta;
    j["seed"] = seed;
    write_text_file(out_dir + "/theory.json", j.dump(2) + "\n");
    std::cout << "closed form " << format_double(closed_form_mean(st, theta, eta, horizon))
              << ", Monte Carlo " << format_double(mc_mean) << " -> " << out_dir << "\n";
    return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_dir, bool timing) {
    ensure_out(out_dir);
    const auto cfg = ExperimentConfig::from_json_text(read_text_file(config_path));
    const auto result = run_experiment(cfg, timing);
    write_text_file(out_dir + "/records.csv", records_to_csv(result));
    write_text_file(out_dir + "/trajectories.csv", trajectories_to_csv(result));
    json summary;
    summary["num_edges"] = result.num_edges;
    summary["budget"] = result.budget;
    summary["records"] = result.records.size();
    summary["config"] = json::parse(cfg.to_json_text());
    write_text_file(out_dir + "/summary.json", summary.dump(2) + "\n");
    std::cout << result.records.size() << " records, budget " << result.budget << " -> " << out_dir
              << "\n";
    return 0;
}

int run_scatter(const std::string& records_path, const std::string& out_dir) {
    ensure_out(out_dir);
    const auto records = records_from_csv(read_text_file(records_path));
    const auto s = objective_belief_scatter(records);
    write_text_file(out_dir + "/scatter.csv", scatter_to_csv(s));
    json j;
    j["points"] = s.points.size();
    j["defined"] = s.defined;
    j["pearson"] = s.defined ? json(s.pearson) : json();
    write_text_file(out_dir + "/correlation.json", j.dump(2) + "\n");
    if (s.defined)
        std::cout << "pearson r = " << format_double(s.pearson) << " over " << s.points.size()
                  << " records -> " << out_dir << "\n";
    else
        std::cout << "correlation undefined (constant column) -> " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social learning with stubborn agents: simulation, theory, bot placement"};
    app.require_subcommand(1);
    bool timing = false;
    app.add_flag("--timing", timing, "record wall times (makes outputs non-deterministic)");

    // generate
    auto* gen = app.add_subcommand("generate", "draw a degree sequence and build the DCM");
    int64_t gen_n = 10000;
    double gen_lambda = 2.1, gen_p = 1.0;
    uint64_t gen_seed = 1;
    int64_t gen_horizon = 10;
    std::string gen_out = "results/generate";
    gen->add_option("--n", gen_n, "number of agents");
    gen->add_option("--lambda-a", gen_lambda, "mean agent in-degree (> 1)");
    gen->add_option("--p-target", gen_p, "target agent-edge fraction in (0, 1]");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--horizon", gen_horizon, "horizon used in the trace report");
    gen->add_option("--out", gen_out, "output directory");

    // stats
    auto* stats = app.add_subcommand("stats", "walk statistics and assumption diagnostics");
    GraphInputs stats_in;
    stats_in.add_options(stats, false);
    std::string stats_alloc;
    int64_t stats_horizon = 101;
    std::string stats_out = "results/stats";
    stats->add_option("--allocation", stats_alloc, "allocation CSV overriding d_in_B");
    stats->add_option("--horizon", stats_horizon, "horizon for the growth-bound check");
    stats->add_option("--out", stats_out, "output directory");

    // allocate
    auto* alloc_cmd = app.add_subcommand("allocate", "place the bot budget on agents");
    GraphInputs alloc_in;
    alloc_in.add_options(alloc_cmd, false);
    std::string alloc_strategy = "exact";
    std::optional<int64_t> alloc_budget;
    std::optional<double> alloc_frac;
    uint64_t alloc_seed = 1;
    double alloc_pr_eps = 0.15;
    std::string alloc_pr_rule = "tail_mass";
    std::string alloc_out = "results/allocate";
    alloc_cmd->add_option("--strategy", alloc_strategy,
                          "exact | randomized | uniform | out_degree | in_degree | ratio | pagerank");
    alloc_cmd->add_option("--budget", alloc_budget, "absolute bot budget");
    alloc_cmd->add_option("--budget-frac", alloc_frac, "budget as a fraction of agent edges");
    alloc_cmd->add_option("--seed", alloc_seed, "RNG seed");
    alloc_cmd->add_option("--pagerank-eps", alloc_pr_eps, "pagerank restart probability");
    alloc_cmd->add_option("--pagerank-rule", alloc_pr_rule, "tail_mass | literal");
    alloc_cmd->add_option("--out", alloc_out, "output directory");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the belief dynamics");
    GraphInputs sim_in;
    sim_in.add_options(sim, true);
    std::string sim_alloc;
    double sim_theta = 0.5, sim_eta = 0.9, sim_eps = 0.1;
    int64_t sim_horizon = 101;
    uint64_t sim_seed = 1;
    std::string sim_track = "istar";
    std::string sim_out = "results/simulate";
    Priors sim_priors;
    sim->add_option("--allocation", sim_alloc, "attach bots per this allocation CSV");
    sim->add_option("--theta", sim_theta, "true state in (0, 1)");
    sim->add_option("--eta", sim_eta, "network weight in (0, 1)");
    sim->add_option("--horizon", sim_horizon, "rounds to simulate");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--track", sim_track, "istar | all | none");
    sim->add_option("--eps", sim_eps, "non-learning threshold");
    sim->add_option("--alpha0", sim_priors.alpha0, "agent prior alpha");
    sim->add_option("--beta0", sim_priors.beta0, "agent prior beta");
    sim->add_option("--alpha-bar", sim_priors.alpha_bar, "prior alpha bound");
    sim->add_option("--beta-bar", sim_priors.beta_bar, "prior beta bound");
    sim->add_option("--out", sim_out, "output directory");

    // theory
    auto* theory = app.add_subcommand("theory", "branching-process predictions vs Monte Carlo");
    GraphInputs theory_in;
    theory_in.add_options(theory, false);
    std::optional<int64_t> theory_n;
    double theory_lambda = 2.1, theory_p = 0.9;
    double theory_theta = 0.5, theory_eta = 0.9;
    int64_t theory_horizon = 6, theory_trials = 1000;
    uint64_t theory_seed = 1;
    std::string theory_out = "results/theory";
    theory->add_option("--synthetic-n", theory_n, "draw a synthetic sequence of this size");
    theory->add_option("--lambda-a", theory_lambda, "synthetic mean in-degree");
    theory->add_option("--p-target", theory_p, "synthetic agent-edge fraction");
    theory->add_option("--theta", theory_theta, "true state");
    theory->add_option("--eta", theory_eta, "network weight");
    theory->add_option("--horizon", theory_horizon, "tree depth / horizon");
    theory->add_option("--trials", theory_trials, "Monte Carlo trees");
    theory->add_option("--seed", theory_seed, "RNG seed");
    theory->add_option("--out", theory_out, "output directory");
    bool theory_convergence = false;
    std::string theory_regime = "constant";
    double theory_reg_p = 0.9, theory_reg_c = 1.9, theory_reg_exp = -1.0;
    int64_t theory_t_lo = 2, theory_t_hi = 9, theory_n_cap = 2000000;
    theory->add_flag("--convergence", theory_convergence,
                     "run the horizon-regime convergence study instead of the report");
    theory->add_option("--regime", theory_regime, "constant | power (1 - p_n = c T^exponent)");
    theory->add_option("--regime-p", theory_reg_p, "constant regime p");
    theory->add_option("--regime-c", theory_reg_c, "power regime coefficient");
    theory->add_option("--regime-exponent", theory_reg_exp, "power regime exponent");
    theory->add_option("--t-lo", theory_t_lo, "smallest horizon");
    theory->add_option("--t-hi", theory_t_hi, "largest horizon");
    theory->add_option("--n-cap", theory_n_cap, "truncate the range once ceil(lambda^2T) passes this");

    // experiment
    auto* exp = app.add_subcommand("experiment", "full strategy-comparison pipeline");
    std::string exp_config;
    std::string exp_out = "results/experiment";
    exp->add_option("--config", exp_config, "experiment config JSON")->required();
    exp->add_option("--out", exp_out, "output directory");

    // scatter
    auto* scat = app.add_subcommand("scatter", "objective vs final belief correlation");
    std::string scat_records;
    std::string scat_out = "results/scatter";
    scat->add_option("--records", scat_records, "records.csv from `experiment`")->required();
    scat->add_option("--out", scat_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_generate(gen_out, gen_n, gen_lambda, gen_p, gen_seed, gen_horizon);
        if (stats->parsed()) return run_stats(stats_in, stats_alloc, stats_out, stats_horizon);
        if (alloc_cmd->parsed())
            return run_allocate(alloc_in, alloc_out, alloc_strategy, alloc_budget, alloc_frac,
                                alloc_seed, alloc_pr_eps, alloc_pr_rule, timing);
        if (sim->parsed())
            return run_simulate(sim_in, sim_alloc, sim_out, sim_theta, sim_eta, sim_horizon,
                                sim_seed, sim_track, sim_eps, sim_priors);
        if (theory->parsed()) {
            if (theory_convergence)
                return run_convergence(theory_out, theory_lambda, theory_regime, theory_reg_p,
                                       theory_reg_c, theory_reg_exp, theory_t_lo, theory_t_hi,
                                       theory_trials, theory_theta, theory_eta, theory_seed,
                                       theory_n_cap);
            return run_theory(theory_in, theory_n, theory_lambda, theory_p, theory_out,
                              theory_theta, theory_eta, theory_horizon, theory_trials,
                              theory_seed);
        }
        if (exp->parsed()) return run_experiment_cmd(exp_config, exp_out, timing);
        if (scat->parsed()) return run_scatter(scat_records, scat_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
