// Python bindings for the core operations: degree sequences, DCM
// construction, belief dynamics, branching-process predictions, and the bot
// placement solvers.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "botsim/adversary.hpp"
#include "botsim/dynamics.hpp"
#include "botsim/graph.hpp"
#include "botsim/harness.hpp"
#include "botsim/theory.hpp"

namespace py = pybind11;
using namespace botsim;

namespace {

LimitRegime regime_from_name(const std::string& name) {
    if (name == "vanishing") return LimitRegime::vanishing;
    if (name == "finite") return LimitRegime::finite;
    if (name == "diverging") return LimitRegime::diverging;
    throw ConfigError("regime must be vanishing, finite, or diverging");
}

py::dict stats_dict(const DegreeStats& st) {
    py::dict d;
    d["survive_first"] = st.survive_first;
    d["survive_step"] = st.survive_step;
    d["coalesce_first"] = st.coalesce_first;
    d["coalesce_step"] = st.coalesce_step;
    d["split_first"] = st.split_first;
    d["split_step"] = st.split_step;
    d["nu1"] = st.nu1;
    d["nu2"] = st.nu2;
    d["nu3"] = st.nu3;
    d["total_out"] = st.total_out;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Social learning with stubborn agents: simulation, theory, bot placement";

    py::register_exception<ConfigError>(m, "BotsimConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "BotsimIoError", PyExc_IOError);
    py::register_exception<ResourceError>(m, "BotsimResourceError", PyExc_RuntimeError);

    py::class_<DegreeSequence>(m, "DegreeSequence")
        .def(py::init([](std::vector<int64_t> out, std::vector<int64_t> in_a,
                         std::vector<int64_t> in_b) {
                 DegreeSequence seq{std::move(out), std::move(in_a), std::move(in_b)};
                 seq.validate_shape();
                 return seq;
             }),
             py::arg("out_degree"), py::arg("in_agent"), py::arg("in_bot"))
        .def_readonly("out_degree", &DegreeSequence::out_degree)
        .def_readonly("in_agent", &DegreeSequence::in_agent)
        .def_readonly("in_bot", &DegreeSequence::in_bot)
        .def("__len__", &DegreeSequence::size)
        .def("total_out", &DegreeSequence::total_out);

    py::class_<MultiDigraph>(m, "MultiDigraph")
        .def_readonly("num_agents", &MultiDigraph::num_agents)
        .def_readonly("num_bots", &MultiDigraph::num_bots)
        .def("num_edges", &MultiDigraph::num_edges)
        .def("realized_degrees", &MultiDigraph::realized_degrees)
        .def("in_degree", [](const MultiDigraph& g, int64_t v) { return g.in_deg.at(v); });

    py::class_<BotAllocation>(m, "BotAllocation")
        .def(py::init([](std::vector<int64_t> counts) { return BotAllocation{std::move(counts)}; }),
             py::arg("counts"))
        .def_readonly("counts", &BotAllocation::counts)
        .def("total", &BotAllocation::total);

    py::class_<Priors>(m, "Priors")
        .def(py::init<>())
        .def(py::init([](double a0, double b0, double abar, double bbar) {
                 Priors p{a0, b0, abar, bbar};
                 p.validate();
                 return p;
             }),
             py::arg("alpha0"), py::arg("beta0"), py::arg("alpha_bar") = 1.0,
             py::arg("beta_bar") = 1.0)
        .def_readonly("alpha0", &Priors::alpha0)
        .def_readonly("beta0", &Priors::beta0)
        .def_readonly("alpha_bar", &Priors::alpha_bar)
        .def_readonly("beta_bar", &Priors::beta_bar);

    m.def("generate_degree_sequence", &generate_degree_sequence, py::arg("n"), py::arg("lambda_a"),
          py::arg("p_target"), py::arg("seed"));

    m.def(
        "build_dcm",
        [](const DegreeSequence& seq, uint64_t seed) {
            auto res = build_dcm(seq, seed);
            py::dict trace;
            trace["tau"] = res.trace.tau;
            std::vector<size_t> sizes;
            for (const auto& layer : res.trace.agent_layers) sizes.push_back(layer.size());
            trace["agent_layer_sizes"] = sizes;
            return py::make_tuple(std::move(res.graph), trace, res.i_star);
        },
        py::arg("seq"), py::arg("seed"), "Returns (graph, trace, i_star).");

    m.def(
        "load_snap",
        [](const std::string& path) {
            auto snap = load_snap(path);
            return py::make_tuple(std::move(snap.graph), std::move(snap.seq), snap.original_id);
        },
        py::arg("path"), "Returns (graph, degree_sequence, original_ids).");

    m.def(
        "degree_stats",
        [](const DegreeSequence& seq, std::optional<BotAllocation> alloc) {
            return stats_dict(degree_stats(seq, alloc ? &*alloc : nullptr));
        },
        py::arg("seq"), py::arg("alloc") = std::nullopt);

    m.def("attach_bots", &attach_bots, py::arg("agents"), py::arg("alloc"));

    m.def(
        "simulate",
        [](const MultiDigraph& g, double theta, double eta, int64_t horizon, uint64_t seed,
           const Priors& priors, std::vector<int64_t> track, double eps) {
            const auto res = simulate(g, theta, eta, horizon, priors, seed, track, eps);
            py::dict d;
            d["mean_belief"] = res.mean_belief;
            d["std_belief"] = res.std_belief;
            d["tracked_nodes"] = res.tracked_nodes;
            d["tracked_beliefs"] = res.tracked_beliefs;
            d["final_belief"] = res.final_belief;
            d["nonlearn_count"] = res.nonlearn_count;
            d["sandwich_violations"] = res.sandwich_violations;
            d["signal_average"] = res.signal_average;
            return d;
        },
        py::arg("graph"), py::arg("theta"), py::arg("eta"), py::arg("horizon"), py::arg("seed"),
        py::arg("priors") = Priors{}, py::arg("track") = std::vector<int64_t>{},
        py::arg("eps_nonlearn") = 0.1);

    m.def(
        "signal_average_belief",
        [](const MultiDigraph& g, uint64_t seed, double theta, int64_t node, int64_t horizon,
           double eta, const Priors& priors) {
            const auto res = signal_average_belief(g, SignalSource(seed, theta), node, horizon,
                                                   eta, priors);
            return py::make_tuple(res.value, res.lower, res.upper);
        },
        py::arg("graph"), py::arg("seed"), py::arg("theta"), py::arg("node"), py::arg("horizon"),
        py::arg("eta"), py::arg("priors") = Priors{},
        "Returns (value, lower, upper) on the stream generated by (seed, theta).");

    m.def(
        "limit_belief",
        [](const std::string& regime, double c, double theta, double eta) {
            return limit_belief(regime_from_name(regime), c, theta, eta);
        },
        py::arg("regime"), py::arg("c"), py::arg("theta"), py::arg("eta"));

    m.def(
        "mc_conditional_mean",
        [](const DegreeSequence& seq, double theta, double eta, int64_t horizon, int64_t trials,
           uint64_t seed) {
            const DegreeSampler dist(seq);
            double sum = 0.0;
            for (int64_t t = 0; t < trials; ++t) {
                const auto tree = sample_tree(dist, horizon, mix64(seed, t));
                sum += conditional_mean_belief(tree, theta, eta, horizon);
            }
            return sum / static_cast<double>(trials);
        },
        py::arg("seq"), py::arg("theta"), py::arg("eta"), py::arg("horizon"), py::arg("trials"),
        py::arg("seed"), "Mean conditional-mean belief over sampled branching-process trees.");

    m.def(
        "closed_form_mean",
        [](const DegreeSequence& seq, double theta, double eta, int64_t horizon) {
            return closed_form_mean(degree_stats(seq), theta, eta, horizon);
        },
        py::arg("seq"), py::arg("theta"), py::arg("eta"), py::arg("horizon"));

    m.def(
        "hit_prob_single",
        [](const DegreeSequence& seq, int64_t l) { return hit_prob_single(degree_stats(seq), l); },
        py::arg("seq"), py::arg("l"));

    m.def(
        "hit_prob_pair",
        [](const DegreeSequence& seq, int64_t l, int64_t lp) {
            return hit_prob_pair(degree_stats(seq), l, lp);
        },
        py::arg("seq"), py::arg("l"), py::arg("lp"));

    m.def("survival_objective",
          py::overload_cast<const DegreeSequence&, const BotAllocation&>(&survival_objective),
          py::arg("seq"), py::arg("alloc"));

    m.def("exchange_delta", &exchange_delta, py::arg("seq"), py::arg("alloc"), py::arg("i"),
          py::arg("j"));

    m.def(
        "exact_solve",
        [](const DegreeSequence& seq, int64_t budget) {
            auto res = exact_solve(seq, budget);
            return py::make_tuple(std::move(res.alloc), res.objective, res.iterations);
        },
        py::arg("seq"), py::arg("budget"), "Returns (allocation, objective, iterations).");

    m.def(
        "relaxed_solve",
        [](const DegreeSequence& seq, int64_t budget) {
            auto rel = relaxed_solve(seq, budget);
            return py::make_tuple(rel.d_rel, rel.h_star, rel.support);
        },
        py::arg("seq"), py::arg("budget"), "Returns (d_rel, h_star, support).");

    m.def(
        "randomized_round",
        [](const DegreeSequence& seq, int64_t budget, uint64_t seed) {
            return randomized_round(relaxed_solve(seq, budget), budget, seed);
        },
        py::arg("seq"), py::arg("budget"), py::arg("seed"));

    m.def(
        "heuristic_allocate",
        [](const DegreeSequence& seq, std::optional<MultiDigraph> graph, int64_t budget,
           const std::string& strategy, double pagerank_eps, uint64_t seed) {
            return heuristic_allocate(seq, graph ? &*graph : nullptr, budget,
                                      strategy_from_name(strategy), pagerank_eps,
                                      PagerankRule::tail_mass, seed);
        },
        py::arg("seq"), py::arg("graph"), py::arg("budget"), py::arg("strategy"),
        py::arg("pagerank_eps") = 0.15, py::arg("seed") = 0);

    m.def("normalized_gain", &normalized_gain, py::arg("seq"), py::arg("draws"));

    m.def(
        "pagerank",
        [](const MultiDigraph& agents, double eps) {
            return pagerank(agents, eps, PagerankRule::tail_mass);
        },
        py::arg("agents"), py::arg("eps") = 0.15);

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            const auto result = run_experiment(ExperimentConfig::from_json_text(config_json));
            py::list records;
            for (const auto& r : result.records) {
                py::dict d;
                d["strategy"] = r.strategy;
                d["trial"] = r.trial;
                d["istar"] = r.istar;
                d["budget"] = r.budget;
                d["ptilde"] = r.ptilde;
                d["theta_T_istar"] = r.theta_T_istar;
                d["mean_theta_T"] = r.mean_theta_T;
                d["nonlearn_count"] = r.nonlearn_count;
                d["sandwich_violations"] = r.sandwich_violations;
                records.append(d);
            }
            return records;
        },
        py::arg("config_json"), "Runs the strategy-comparison pipeline from a config JSON string.");
}
