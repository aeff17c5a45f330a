#include "botsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "botsim/errors.hpp"
#include "botsim/io.hpp"
#include "json.hpp"

namespace botsim {

int64_t BudgetRule::resolve(int64_t num_edges) const {
    if (fraction.has_value() == absolute.has_value())
        throw ConfigError("budget: set exactly one of fraction or absolute");
    int64_t b;
    if (fraction) {
        if (!(*fraction > 0.0) || *fraction > 1.0)
            throw ConfigError("budget: fraction must lie in (0, 1]");
        b = static_cast<int64_t>(std::ceil(*fraction * static_cast<double>(num_edges)));
    } else {
        b = *absolute;
    }
    if (b < 1) throw ConfigError("budget: resolved to " + std::to_string(b) + ", need >= 1");
    if (b > num_edges)
        throw ConfigError("budget: " + std::to_string(b) + " exceeds the agent edge count " +
                          std::to_string(num_edges));
    return b;
}

void ExperimentConfig::validate() const {
    if (schema_version != 1) throw ConfigError("config: unsupported schema_version");
    if (!(theta > 0.0) || !(theta < 1.0)) throw ConfigError("config: theta must lie in (0, 1)");
    if (!(eta > 0.0) || !(eta < 1.0)) throw ConfigError("config: eta must lie in (0, 1)");
    if (horizon < 1) throw ConfigError("config: horizon must be >= 1");
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (strategies.empty()) throw ConfigError("config: no strategies listed");
    for (const auto& s : strategies) strategy_from_name(s);
    if (!(eps_nonlearn > 0.0)) throw ConfigError("config: eps_nonlearn must be positive");
    if (pagerank_rule != "tail_mass" && pagerank_rule != "literal")
        throw ConfigError("config: pagerank_rule must be tail_mass or literal");
    priors.validate();
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        cfg.schema_version = j.value("schema_version", 1);
        cfg.theta = j.value("theta", cfg.theta);
        cfg.eta = j.value("eta", cfg.eta);
        cfg.horizon = j.value("horizon", cfg.horizon);
        if (j.contains("budget")) {
            const auto& b = j.at("budget");
            if (b.contains("fraction")) cfg.budget.fraction = b.at("fraction").get<double>();
            if (b.contains("absolute")) cfg.budget.absolute = b.at("absolute").get<int64_t>();
        }
        cfg.strategies = j.value("strategies", std::vector<std::string>{});
        cfg.trials = j.value("trials", cfg.trials);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.dataset = j.value("dataset", std::string{});
        if (j.contains("synthetic")) {
            const auto& s = j.at("synthetic");
            cfg.synthetic.n = s.value("n", cfg.synthetic.n);
            cfg.synthetic.lambda_a = s.value("lambda_a", cfg.synthetic.lambda_a);
            cfg.synthetic.p_target = s.value("p_target", cfg.synthetic.p_target);
        }
        cfg.eps_nonlearn = j.value("eps_nonlearn", cfg.eps_nonlearn);
        cfg.pagerank_eps = j.value("pagerank_eps", cfg.pagerank_eps);
        cfg.pagerank_rule = j.value("pagerank_rule", cfg.pagerank_rule);
        if (j.contains("priors")) {
            const auto& p = j.at("priors");
            cfg.priors.alpha0 = p.value("alpha0", cfg.priors.alpha0);
            cfg.priors.beta0 = p.value("beta0", cfg.priors.beta0);
            cfg.priors.alpha_bar = p.value("alpha_bar", cfg.priors.alpha_bar);
            cfg.priors.beta_bar = p.value("beta_bar", cfg.priors.beta_bar);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: bad field: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json_text() const {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["theta"] = theta;
    j["eta"] = eta;
    j["horizon"] = horizon;
    if (budget.fraction) j["budget"]["fraction"] = *budget.fraction;
    if (budget.absolute) j["budget"]["absolute"] = *budget.absolute;
    j["strategies"] = strategies;
    j["trials"] = trials;
    j["seed"] = seed;
    j["dataset"] = dataset;
    j["synthetic"] = {{"n", synthetic.n},
                      {"lambda_a", synthetic.lambda_a},
                      {"p_target", synthetic.p_target}};
    j["eps_nonlearn"] = eps_nonlearn;
    j["pagerank_eps"] = pagerank_eps;
    j["pagerank_rule"] = pagerank_rule;
    j["priors"] = {{"alpha0", priors.alpha0},
                   {"beta0", priors.beta0},
                   {"alpha_bar", priors.alpha_bar},
                   {"beta_bar", priors.beta_bar}};
    return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool timing) {
    cfg.validate();

    // One shared agent graph for the whole experiment.
    MultiDigraph agents;
    DegreeSequence seq;
    if (!cfg.dataset.empty()) {
        SnapGraph snap = load_snap(cfg.dataset);
        agents = std::move(snap.graph);
        seq = std::move(snap.seq);
    } else {
        seq = generate_degree_sequence(cfg.synthetic.n, cfg.synthetic.lambda_a,
                                       cfg.synthetic.p_target, derive_seed(cfg.seed, "degrees"));
        // The adversary supplies the bots; the base graph carries none.
        std::fill(seq.in_bot.begin(), seq.in_bot.end(), 0);
        agents = build_dcm(seq, derive_seed(cfg.seed, "graph")).graph;
    }

    ExperimentResult result;
    result.config = cfg;
    result.num_edges = seq.total_out();
    result.budget = cfg.budget.resolve(result.num_edges);
    const PagerankRule pr_rule =
        cfg.pagerank_rule == "literal" ? PagerankRule::literal : PagerankRule::tail_mass;

    // Per-trial draws shared across strategies so comparisons are paired.
    std::vector<int64_t> istars(cfg.trials);
    std::vector<uint64_t> sim_seeds(cfg.trials), istar_seeds(cfg.trials);
    for (int64_t trial = 0; trial < cfg.trials; ++trial) {
        istar_seeds[trial] = derive_seed(cfg.seed, "istar", trial);
        Rng rng(istar_seeds[trial]);
        istars[trial] = std::uniform_int_distribution<int64_t>(0, agents.num_agents - 1)(rng);
        sim_seeds[trial] = derive_seed(cfg.seed, "signals", trial);
    }

    for (size_t s_idx = 0; s_idx < cfg.strategies.size(); ++s_idx) {
        const Strategy strategy = strategy_from_name(cfg.strategies[s_idx]);
        for (int64_t trial = 0; trial < cfg.trials; ++trial) {
            const auto t0 = std::chrono::steady_clock::now();
            ResultRecord rec;
            rec.strategy = cfg.strategies[s_idx];
            rec.trial = trial;
            rec.seed_alloc = derive_seed(cfg.seed, rec.strategy.c_str(), trial);
            rec.seed_sim = sim_seeds[trial];
            rec.seed_istar = istar_seeds[trial];
            rec.istar = istars[trial];
            rec.budget = result.budget;

            BotAllocation alloc;
            switch (strategy) {
                case Strategy::exact:
                    alloc = exact_solve(seq, result.budget).alloc;
                    break;
                case Strategy::randomized:
                    alloc = randomized_round(relaxed_solve(seq, result.budget), result.budget,
                                             rec.seed_alloc);
                    break;
                default:
                    alloc = heuristic_allocate(seq, &agents, result.budget, strategy,
                                               cfg.pagerank_eps, pr_rule, rec.seed_alloc);
                    break;
            }
            rec.ptilde = survival_objective(seq, alloc);

            const MultiDigraph g = attach_bots(agents, alloc);
            SimulationResult sim = simulate(g, cfg.theta, cfg.eta, cfg.horizon, cfg.priors,
                                            rec.seed_sim, {rec.istar}, cfg.eps_nonlearn);
            rec.theta_T_istar = sim.final_belief[rec.istar];
            rec.mean_theta_T = sim.mean_belief.back();
            rec.nonlearn_count = sim.nonlearn_count;
            rec.sandwich_violations = sim.sandwich_violations;
            rec.mean_traj = std::move(sim.mean_belief);
            rec.std_traj = std::move(sim.std_belief);
            rec.istar_traj = std::move(sim.tracked_beliefs[0]);
            if (timing) {
                const auto t1 = std::chrono::steady_clock::now();
                rec.wall_time = std::chrono::duration<double>(t1 - t0).count();
            }
            result.records.push_back(std::move(rec));
        }
    }
    std::sort(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
        return std::tie(a.strategy, a.trial) < std::tie(b.strategy, b.trial);
    });
    return result;
}

double RegimeSpec::p_n(int64_t horizon) const {
    if (kind == Kind::constant_p) return p;
    return 1.0 - c * std::pow(static_cast<double>(horizon), exponent);
}

double RegimeSpec::limit(double theta, double eta) const {
    if (kind == Kind::constant_p) return 0.0;  // T (1-p) -> infinity
    if (exponent < -1.0) return theta;         // T (1-p) -> 0
    if (exponent > -1.0) return 0.0;           // T (1-p) -> infinity
    if (theta == 0.0) return 0.0;
    return limit_belief(LimitRegime::finite, c, theta, eta);
}

std::vector<ConvergenceRow> convergence_study(double lambda_a, const RegimeSpec& regime,
                                              int64_t t_lo, int64_t t_hi, int64_t trials,
                                              double theta, double eta, uint64_t seed,
                                              int64_t n_cap) {
    if (t_lo < 1 || t_hi < t_lo) throw ConfigError("convergence_study: bad horizon range");
    if (trials < 1) throw ConfigError("convergence_study: trials must be >= 1");
    std::vector<ConvergenceRow> rows;
    for (int64_t horizon = t_lo; horizon <= t_hi; ++horizon) {
        const double n_real = std::ceil(std::pow(lambda_a, 2.0 * static_cast<double>(horizon)));
        if (n_real > static_cast<double>(n_cap)) break;  // truncate the range at the cap
        const int64_t n = std::max<int64_t>(2, static_cast<int64_t>(n_real));
        const double p_n = regime.p_n(horizon);
        if (!(p_n > 0.0) || p_n > 1.0)
            throw ConfigError("convergence_study: regime gives p_n outside (0, 1] at T = " +
                              std::to_string(horizon));
        ConvergenceRow row;
        row.horizon = horizon;
        row.n = n;
        row.p_n = p_n;
        row.limit = regime.limit(theta, eta);
        row.trials = trials;
        double sum_err = 0.0, sum_err_sq = 0.0, sum_val = 0.0;
        for (int64_t trial = 0; trial < trials; ++trial) {
            const uint64_t trial_seed = derive_seed(seed, "convergence", horizon * 1000003 + trial);
            const DegreeSequence seq =
                generate_degree_sequence(n, lambda_a, p_n, derive_seed(trial_seed, "degrees"));
            const DegreeSampler dist(seq);
            const TreeSample tree = sample_tree(dist, horizon, derive_seed(trial_seed, "tree"));
            const double value = conditional_mean_belief(tree, theta, eta, horizon);
            const double err = std::abs(value - row.limit);
            sum_val += value;
            sum_err += err;
            sum_err_sq += err * err;
        }
        row.mean_value = sum_val / static_cast<double>(trials);
        row.mean_err = sum_err / static_cast<double>(trials);
        row.var_err = std::max(0.0, sum_err_sq / static_cast<double>(trials) - row.mean_err * row.mean_err);
        rows.push_back(row);
    }
    return rows;
}

ScatterResult objective_belief_scatter(const std::vector<ResultRecord>& records) {
    if (records.size() < 3) throw ConfigError("scatter: need at least 3 records");
    ScatterResult out;
    out.points.reserve(records.size());
    for (const auto& r : records) out.points.emplace_back(r.ptilde, r.theta_T_istar);
    const double n = static_cast<double>(out.points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : out.points) {
        mx += x / n;
        my += y / n;
    }
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : out.points) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        out.defined = false;  // a constant column leaves the correlation undefined
        out.pearson = 0.0;
    } else {
        out.defined = true;
        out.pearson = sxy / std::sqrt(sxx * syy);
    }
    return out;
}

std::string records_to_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "strategy,trial,seed_alloc,seed_sim,seed_istar,istar,budget,ptilde,theta_T_istar,"
           "mean_theta_T,nonlearn_count,sandwich_violations,wall_time\n";
    for (const auto& r : result.records) {
        out << r.strategy << ',' << r.trial << ',' << r.seed_alloc << ',' << r.seed_sim << ','
            << r.seed_istar << ',' << r.istar << ',' << r.budget << ',' << format_double(r.ptilde)
            << ',' << format_double(r.theta_T_istar) << ',' << format_double(r.mean_theta_T) << ','
            << r.nonlearn_count << ',' << r.sandwich_violations << ','
            << format_double(r.wall_time) << '\n';
    }
    return out.str();
}

std::vector<ResultRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::vector<ResultRecord> records;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;
        }
        std::vector<std::string> cells;
        size_t start = 0;
        while (true) {
            const size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cells.size() != 13) throw IoError("records csv: expected 13 columns");
        ResultRecord r;
        try {
            r.strategy = cells[0];
            r.trial = std::stoll(cells[1]);
            r.seed_alloc = std::stoull(cells[2]);
            r.seed_sim = std::stoull(cells[3]);
            r.seed_istar = std::stoull(cells[4]);
            r.istar = std::stoll(cells[5]);
            r.budget = std::stoll(cells[6]);
            r.ptilde = std::stod(cells[7]);
            r.theta_T_istar = std::stod(cells[8]);
            r.mean_theta_T = std::stod(cells[9]);
            r.nonlearn_count = std::stoll(cells[10]);
            r.sandwich_violations = std::stoll(cells[11]);
            r.wall_time = std::stod(cells[12]);
        } catch (const std::exception&) {
            throw IoError("records csv: bad value in row for strategy '" + cells[0] + "'");
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::string trajectories_to_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "strategy,trial,t,mean_belief,std_belief,tracked_node,belief\n";
    for (const auto& r : result.records) {
        for (size_t t = 0; t < r.mean_traj.size(); ++t) {
            out << r.strategy << ',' << r.trial << ',' << t << ',' << format_double(r.mean_traj[t])
                << ',' << format_double(r.std_traj[t]) << ',' << r.istar << ','
                << format_double(r.istar_traj[t]) << '\n';
        }
    }
    return out.str();
}

std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream out;
    out << "T,n,p_n,limit,mean_value,mean_err,var_err,trials\n";
    for (const auto& r : rows) {
        out << r.horizon << ',' << r.n << ',' << format_double(r.p_n) << ','
            << format_double(r.limit) << ',' << format_double(r.mean_value) << ','
            << format_double(r.mean_err) << ',' << format_double(r.var_err) << ',' << r.trials
            << '\n';
    }
    return out.str();
}

std::string scatter_to_csv(const ScatterResult& s) {
    std::ostringstream out;
    out << "ptilde,theta_T_istar\n";
    for (const auto& [x, y] : s.points) out << format_double(x) << ',' << format_double(y) << '\n';
    return out.str();
}

}  // namespace botsim
