#include "botsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "botsim/adversary.hpp"
#include "botsim/errors.hpp"

namespace botsim {

int64_t DegreeSequence::total_out() const {
    return std::accumulate(out_degree.begin(), out_degree.end(), int64_t{0});
}

int64_t DegreeSequence::total_in_agent() const {
    return std::accumulate(in_agent.begin(), in_agent.end(), int64_t{0});
}

int64_t DegreeSequence::total_in_bot() const {
    return std::accumulate(in_bot.begin(), in_bot.end(), int64_t{0});
}

void DegreeSequence::validate_shape() const {
    const size_t n = out_degree.size();
    if (n == 0) throw ConfigError("degree sequence: empty");
    if (in_agent.size() != n || in_bot.size() != n)
        throw ConfigError("degree sequence: column length mismatch");
    for (size_t i = 0; i < n; ++i)
        if (out_degree[i] < 0 || in_agent[i] < 0 || in_bot[i] < 0)
            throw ConfigError("degree sequence: negative degree at agent " + std::to_string(i));
}

void DegreeSequence::validate(bool for_dcm) const {
    validate_shape();
    if (for_dcm)
        for (size_t i = 0; i < out_degree.size(); ++i)
            if (out_degree[i] < 1 || in_agent[i] < 1)
                throw ConfigError("degree sequence: DCM requires d_out >= 1 and d_in_A >= 1 (agent " +
                                  std::to_string(i) + ")");
    if (total_out() != total_in_agent())
        throw ConfigError("degree sequence: sum out-degree != sum agent in-degree");
}

DegreeSequence generate_degree_sequence(int64_t n, double lambda_a, double p_target, uint64_t seed) {
    if (n < 1) throw ConfigError("generate_degree_sequence: n must be >= 1");
    if (!(lambda_a > 1.0)) throw ConfigError("generate_degree_sequence: lambda_a must exceed 1");
    if (!(p_target > 0.0) || p_target > 1.0)
        throw ConfigError("generate_degree_sequence: p_target must lie in (0, 1]");

    Rng rng(seed);
    DegreeSequence seq;
    seq.out_degree.assign(n, 1);
    seq.in_agent.resize(n);
    seq.in_bot.assign(n, 0);

    std::poisson_distribution<int64_t> in_dist(lambda_a - 1.0);
    for (int64_t i = 0; i < n; ++i) seq.in_agent[i] = 1 + in_dist(rng);

    // One outstub per agent, then the surplus assigned uniformly.
    const int64_t extra = seq.total_in_agent() - n;
    std::uniform_int_distribution<int64_t> pick(0, n - 1);
    for (int64_t k = 0; k < extra; ++k) seq.out_degree[pick(rng)]++;

    const double lambda_b = lambda_a * (1.0 - p_target) / p_target;
    if (lambda_b > 0.0) {
        std::poisson_distribution<int64_t> bot_dist(lambda_b);
        for (int64_t i = 0; i < n; ++i) seq.in_bot[i] = bot_dist(rng);
    }
    return seq;
}

int64_t MultiDigraph::num_edges() const {
    return std::accumulate(in_mult.begin(), in_mult.end(), int64_t{0});
}

MultiDigraph MultiDigraph::from_edges(int64_t num_agents, int64_t num_bots,
                                      std::vector<std::pair<int64_t, int64_t>> edges) {
    MultiDigraph g;
    g.num_agents = num_agents;
    g.num_bots = num_bots;
    const int64_t total = num_agents + num_bots;
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
    g.in_offset.assign(total + 1, 0);
    g.in_deg.assign(total, 0);
    g.in_src.reserve(edges.size());
    g.in_mult.reserve(edges.size());
    size_t k = 0;
    for (int64_t v = 0; v < total; ++v) {
        g.in_offset[v] = static_cast<int64_t>(g.in_src.size());
        while (k < edges.size() && edges[k].second == v) {
            const int64_t src = edges[k].first;
            int64_t mult = 0;
            while (k < edges.size() && edges[k].second == v && edges[k].first == src) {
                ++mult;
                ++k;
            }
            g.in_src.push_back(src);
            g.in_mult.push_back(mult);
            g.in_deg[v] += mult;
        }
    }
    g.in_offset[total] = static_cast<int64_t>(g.in_src.size());
    g.min_in_degree = total > 0 ? *std::min_element(g.in_deg.begin(), g.in_deg.end()) : 0;
    return g;
}

DegreeSequence MultiDigraph::realized_degrees() const {
    DegreeSequence seq;
    seq.out_degree.assign(num_agents, 0);
    seq.in_agent.assign(num_agents, 0);
    seq.in_bot.assign(num_agents, 0);
    for (int64_t v = 0; v < num_nodes(); ++v) {
        for (int64_t e = in_offset[v]; e < in_offset[v + 1]; ++e) {
            const int64_t src = in_src[e];
            const int64_t mult = in_mult[e];
            if (is_agent(v)) {
                if (is_agent(src))
                    seq.in_agent[v] += mult;
                else
                    seq.in_bot[v] += mult;
            }
            if (is_agent(src) && is_agent(v)) seq.out_degree[src] += mult;
        }
    }
    return seq;
}

std::string ConstructionTrace::tau_report(int64_t horizon) const {
    if (tree_like_to(horizon)) return "> " + std::to_string(horizon);
    return std::to_string(tau);
}

DcmResult build_dcm(const DegreeSequence& seq, uint64_t seed) {
    seq.validate(true);
    const int64_t n = seq.size();
    const int64_t m = seq.total_out();

    // Flat outstub array: owner(s) via binary search over offsets.
    std::vector<int64_t> stub_owner(m);
    {
        int64_t s = 0;
        for (int64_t i = 0; i < n; ++i)
            for (int64_t j = 0; j < seq.out_degree[i]; ++j) stub_owner[s++] = i;
    }
    std::vector<uint8_t> stub_paired(m, 0);
    std::vector<uint8_t> in_graph(n, 0);

    Rng rng(seed);
    std::uniform_int_distribution<int64_t> pick(0, m - 1);
    const int64_t i_star = std::uniform_int_distribution<int64_t>(0, n - 1)(rng);

    DcmResult out;
    out.i_star = i_star;
    ConstructionTrace& trace = out.trace;

    std::vector<std::pair<int64_t, int64_t>> edges;
    edges.reserve(m + 2 * seq.total_in_bot());

    in_graph[i_star] = 1;
    trace.agent_layers.push_back({i_star});
    trace.bot_layers.push_back({});

    int64_t bots = 0;
    int64_t instubs_left = seq.total_in_agent();
    bool primary = true;  // still growing the component of i_star

    std::vector<int64_t> frontier = {i_star};
    int64_t layer = 0;
    while (instubs_left > 0) {
        if (frontier.empty()) {
            // The i_star component is exhausted; restart from the smallest
            // agent not yet in the graph. Its layers are not recorded.
            primary = false;
            int64_t root = -1;
            for (int64_t i = 0; i < n; ++i)
                if (!in_graph[i]) {
                    root = i;
                    break;
                }
            if (root < 0)
                throw ResourceError("build_dcm: unpaired instubs but every agent is placed");
            in_graph[root] = 1;
            frontier = {root};
            layer = 0;
        }
        std::vector<int64_t> next;
        std::vector<int64_t> next_bots;
        for (int64_t i : frontier) {
            for (int64_t j = 0; j < seq.in_agent[i]; ++j) {
                int64_t s = pick(rng);
                // label 1 = owner not in graph, 2 = in graph but unpaired, 3 = paired
                bool seen = stub_paired[s] || in_graph[stub_owner[s]];
                if (seen && primary && trace.tau < 0) trace.tau = layer;
                while (stub_paired[s]) s = pick(rng);
                const int64_t src = stub_owner[s];
                stub_paired[s] = 1;
                edges.emplace_back(src, i);
                --instubs_left;
                if (!in_graph[src]) {
                    in_graph[src] = 1;
                    next.push_back(src);
                }
            }
            for (int64_t j = 0; j < seq.in_bot[i]; ++j) {
                const int64_t b = n + bots++;
                edges.emplace_back(b, b);  // self-loop
                edges.emplace_back(b, i);
                next_bots.push_back(b);
            }
        }
        if (primary) {
            trace.agent_layers.push_back(next);
            trace.bot_layers.push_back(next_bots);
        }
        frontier = std::move(next);
        ++layer;
    }
    // Drop trailing empty layers left by the final iteration.
    while (trace.agent_layers.size() > 1 && trace.agent_layers.back().empty() &&
           trace.bot_layers.back().empty()) {
        trace.agent_layers.pop_back();
        trace.bot_layers.pop_back();
    }

    out.graph = MultiDigraph::from_edges(n, bots, std::move(edges));
    return out;
}

MultiDigraph attach_bots(const MultiDigraph& agents, const BotAllocation& alloc) {
    if (agents.num_bots != 0) throw ConfigError("attach_bots: graph already has bots");
    if (static_cast<int64_t>(alloc.counts.size()) != agents.num_agents)
        throw ConfigError("attach_bots: allocation length mismatch");
    const int64_t n = agents.num_agents;
    std::vector<std::pair<int64_t, int64_t>> edges;
    edges.reserve(agents.in_src.size() + 2 * static_cast<size_t>(alloc.total()));
    for (int64_t v = 0; v < n; ++v)
        for (int64_t e = agents.in_offset[v]; e < agents.in_offset[v + 1]; ++e)
            for (int64_t k = 0; k < agents.in_mult[e]; ++k) edges.emplace_back(agents.in_src[e], v);
    int64_t bots = 0;
    for (int64_t i = 0; i < n; ++i) {
        for (int64_t j = 0; j < alloc.counts[i]; ++j) {
            const int64_t b = n + bots++;
            edges.emplace_back(b, b);
            edges.emplace_back(b, i);
        }
    }
    return MultiDigraph::from_edges(n, bots, std::move(edges));
}

SnapGraph load_snap(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_snap: cannot open " + path);

    std::unordered_map<int64_t, int64_t> compact;
    std::vector<int64_t> original;
    std::vector<std::pair<int64_t, int64_t>> edges;
    auto id_of = [&](int64_t raw) {
        auto [it, inserted] = compact.try_emplace(raw, static_cast<int64_t>(original.size()));
        if (inserted) original.push_back(raw);
        return it->second;
    };

    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') continue;
        std::istringstream ls(line);
        int64_t u, v;
        if (!(ls >> u >> v)) throw IoError("load_snap: parse error at line " + std::to_string(line_no));
        std::string rest;
        if (ls >> rest) throw IoError("load_snap: trailing tokens at line " + std::to_string(line_no));
        const int64_t cu = id_of(u);  // sequenced: first appearance decides the id
        const int64_t cv = id_of(v);
        edges.emplace_back(cu, cv);
    }
    if (original.empty()) throw IoError("load_snap: no edges in " + path);

    const int64_t n = static_cast<int64_t>(original.size());
    std::vector<int64_t> indeg(n, 0);
    for (const auto& e : edges) indeg[e.second]++;
    for (int64_t v = 0; v < n; ++v)
        if (indeg[v] == 0) edges.emplace_back(v, v);  // keep the update well-defined

    SnapGraph out;
    out.graph = MultiDigraph::from_edges(n, 0, std::move(edges));
    out.seq = out.graph.realized_degrees();
    out.original_id = std::move(original);
    return out;
}

DegreeStats degree_stats(const DegreeSequence& seq, const BotAllocation* alloc) {
    const int64_t n = seq.size();
    if (n == 0) throw ConfigError("degree_stats: empty sequence");
    if (alloc && static_cast<int64_t>(alloc->counts.size()) != n)
        throw ConfigError("degree_stats: allocation length mismatch");

    DegreeStats st;
    st.total_out = seq.total_out();
    const double m = static_cast<double>(st.total_out);
    const double dn = static_cast<double>(n);
    for (int64_t i = 0; i < n; ++i) {
        const double out = static_cast<double>(seq.out_degree[i]);
        const double ja = static_cast<double>(seq.in_agent[i]);
        const double kb = static_cast<double>(alloc ? alloc->counts[i] : seq.in_bot[i]);
        const double tot = ja + kb;
        if (tot == 0.0)
            throw ConfigError("degree_stats: agent " + std::to_string(i) + " has no in-edges");
        const double survive = ja / tot;
        const double coalesce = survive / tot;
        const double split = survive * (ja - 1.0) / tot;
        st.survive_first += survive / dn;
        st.coalesce_first += coalesce / dn;
        st.split_first += split / dn;
        st.survive_step += survive * out / m;
        st.coalesce_step += coalesce * out / m;
        st.split_step += split * out / m;
        st.nu1 += out / dn;
        st.nu2 += out * out / dn;
        st.nu3 += out * ja / dn;
    }
    return st;
}

AssumptionReport assumption_check(const DegreeSequence& seq, int64_t horizon) {
    AssumptionReport rep;
    rep.horizon = horizon;
    const int64_t n = seq.size();
    int64_t sum_out = 0, sum_cross = 0;
    double sum_sq = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        sum_out += seq.out_degree[i];
        sum_sq += static_cast<double>(seq.out_degree[i]) * static_cast<double>(seq.out_degree[i]);
        sum_cross += seq.out_degree[i] * seq.in_agent[i];
    }
    rep.nu1 = static_cast<double>(sum_out) / static_cast<double>(n);
    rep.nu2 = sum_sq / static_cast<double>(n);
    rep.nu3 = static_cast<double>(sum_cross) / static_cast<double>(n);
    rep.degenerate = (sum_cross == sum_out);
    rep.nu3_gt_nu1 = (sum_cross > sum_out);
    if (rep.degenerate) {
        rep.max_horizon = std::numeric_limits<double>::infinity();
    } else {
        constexpr double kZeta = 0.49;
        rep.max_horizon = kZeta * std::log(static_cast<double>(n)) / std::log(rep.nu3 / rep.nu1);
    }
    // A single round is always local, whatever the moments say.
    rep.horizon_ok = horizon <= 1 || static_cast<double>(horizon) <= rep.max_horizon;
    return rep;
}

}  // namespace botsim
