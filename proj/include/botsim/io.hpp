#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "botsim/adversary.hpp"
#include "botsim/graph.hpp"

namespace botsim {

// Shortest exact decimal form of a double ("%.17g" trimmed): parsing it back
// recovers the bit pattern, so emit -> parse -> emit is byte-stable.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Minimal comma-split reader for our own CSV outputs (no quoting needed).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

// Graph export: "src,dst,multiplicity" sorted by (src, dst), plus a JSON
// header {n, bots, seed}.
void write_graph_csv(const MultiDigraph& g, const std::string& edges_path,
                     const std::string& header_path, uint64_t seed);
MultiDigraph read_graph_csv(const std::string& edges_path, const std::string& header_path);

// "agent_id,d_out,d_in_A,d_in_B"
void write_degrees_csv(const DegreeSequence& seq, const std::string& path);
DegreeSequence read_degrees_csv(const std::string& path);

// "agent_id,d_in_B"
void write_allocation_csv(const BotAllocation& alloc, const std::string& path);
BotAllocation read_allocation_csv(const std::string& path);

}  // namespace botsim
