#include "botsim/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

#include "botsim/errors.hpp"
#include "json.hpp"

namespace botsim {

std::string format_double(double v) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        size_t start = 0;
        while (true) {
            const size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

namespace {

int64_t parse_int(const std::string& s, const std::string& where) {
    try {
        size_t pos = 0;
        const int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("expected integer in " + where + ", got '" + s + "'");
    }
}

}  // namespace

void write_graph_csv(const MultiDigraph& g, const std::string& edges_path,
                     const std::string& header_path, uint64_t seed) {
    std::vector<std::tuple<int64_t, int64_t, int64_t>> rows;
    rows.reserve(g.in_src.size());
    for (int64_t v = 0; v < g.num_nodes(); ++v)
        for (int64_t e = g.in_offset[v]; e < g.in_offset[v + 1]; ++e)
            rows.emplace_back(g.in_src[e], v, g.in_mult[e]);
    std::sort(rows.begin(), rows.end());
    std::ostringstream out;
    out << "src,dst,multiplicity\n";
    for (const auto& [src, dst, mult] : rows) out << src << ',' << dst << ',' << mult << '\n';
    write_text_file(edges_path, out.str());

    nlohmann::json header;
    header["n"] = g.num_agents;
    header["bots"] = g.num_bots;
    header["seed"] = seed;
    write_text_file(header_path, header.dump(2) + "\n");
}

MultiDigraph read_graph_csv(const std::string& edges_path, const std::string& header_path) {
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(read_text_file(header_path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad graph header " + header_path + ": " + e.what());
    }
    const int64_t n = header.at("n").get<int64_t>();
    const int64_t bots = header.at("bots").get<int64_t>();
    const auto rows = read_csv(edges_path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"src", "dst", "multiplicity"})
        throw IoError("bad edge header in " + edges_path);
    std::vector<std::pair<int64_t, int64_t>> edges;
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 3) throw IoError("bad edge row in " + edges_path);
        const int64_t src = parse_int(rows[r][0], edges_path);
        const int64_t dst = parse_int(rows[r][1], edges_path);
        const int64_t mult = parse_int(rows[r][2], edges_path);
        for (int64_t k = 0; k < mult; ++k) edges.emplace_back(src, dst);
    }
    return MultiDigraph::from_edges(n, bots, std::move(edges));
}

void write_degrees_csv(const DegreeSequence& seq, const std::string& path) {
    std::ostringstream out;
    out << "agent_id,d_out,d_in_A,d_in_B\n";
    for (int64_t i = 0; i < seq.size(); ++i)
        out << i << ',' << seq.out_degree[i] << ',' << seq.in_agent[i] << ',' << seq.in_bot[i] << '\n';
    write_text_file(path, out.str());
}

DegreeSequence read_degrees_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"agent_id", "d_out", "d_in_A", "d_in_B"})
        throw IoError("bad degrees header in " + path);
    DegreeSequence seq;
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 4) throw IoError("bad degrees row in " + path);
        const int64_t id = parse_int(rows[r][0], path);
        if (id != static_cast<int64_t>(r) - 1) throw IoError("non-contiguous agent ids in " + path);
        seq.out_degree.push_back(parse_int(rows[r][1], path));
        seq.in_agent.push_back(parse_int(rows[r][2], path));
        seq.in_bot.push_back(parse_int(rows[r][3], path));
    }
    if (seq.size() == 0) throw IoError("no agents in " + path);
    return seq;
}

void write_allocation_csv(const BotAllocation& alloc, const std::string& path) {
    std::ostringstream out;
    out << "agent_id,d_in_B\n";
    for (size_t i = 0; i < alloc.counts.size(); ++i) out << i << ',' << alloc.counts[i] << '\n';
    write_text_file(path, out.str());
}

BotAllocation read_allocation_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"agent_id", "d_in_B"})
        throw IoError("bad allocation header in " + path);
    BotAllocation alloc;
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2) throw IoError("bad allocation row in " + path);
        const int64_t id = parse_int(rows[r][0], path);
        if (id != static_cast<int64_t>(r) - 1) throw IoError("non-contiguous agent ids in " + path);
        alloc.counts.push_back(parse_int(rows[r][1], path));
    }
    if (alloc.counts.empty()) throw IoError("no agents in " + path);
    return alloc;
}

}  // namespace botsim
