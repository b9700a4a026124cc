#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "whisk/graph.hpp"

namespace whisk {

/// Parses the edge-list text format: one "u v" pair of 1-based node indices
/// per line, '#' starts a comment, blank lines are ignored. A line holding a
/// single index declares a node without adding an edge, which is how an
/// isolated or single-node graph is written. The node count is the largest
/// index seen. Errors carry Errc::ParseError with the line number, or the
/// graph-construction code (SelfLoop, DuplicateEdge).
Laplacian parse_edge_list(std::istream& in);
Laplacian parse_edge_list(std::string_view text);

/// Reads an edge-list file, or the JSON export when the path ends in ".json".
Laplacian read_graph_file(const std::filesystem::path& path);

/// {"n": int, "edges": [[u, v], ...]}
nlohmann::json to_json(const Laplacian& L);
Laplacian laplacian_from_json(const nlohmann::json& j);

/// Writes an undirected DOT graph. Nodes above `seed_size` carry grown=1.
void write_dot(std::ostream& out, const Laplacian& L, int seed_size, std::string_view name = "G");

/// Round-trippable decimal: 17 significant digits.
std::string format_double(double value);

}  // namespace whisk
