#include "whisk/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "whisk/error.hpp"

namespace whisk {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<int> parse_indices(std::string_view body, int line) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
    if (pos == body.size()) break;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(body.data() + pos, body.data() + body.size(), value);
    const std::size_t consumed = static_cast<std::size_t>(ptr - (body.data() + pos));
    if (ec != std::errc() || consumed == 0) parse_error(line, "expected an integer node index");
    pos += consumed;
    if (pos < body.size() && body[pos] != ' ' && body[pos] != '\t') {
      parse_error(line, "unexpected character '" + std::string(1, body[pos]) + "'");
    }
    if (value < 1) parse_error(line, "node indices are 1-based");
    out.push_back(value);
  }
  return out;
}

}  // namespace

Laplacian parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  int n = 0;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view body = raw;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const std::vector<int> idx = parse_indices(body, line);
    if (idx.size() > 2) parse_error(line, "expected \"u v\"");
    for (int v : idx) n = std::max(n, v);
    if (idx.size() == 2) edges.push_back({idx[0], idx[1]});
  }
  if (n == 0) throw Error(Errc::ParseError, "graph has no nodes");
  return laplacian_from_edge_list(edges, n);
}

Laplacian parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in);
}

Laplacian read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ParseError, e.what());
    }
    return laplacian_from_json(j);
  }
  return parse_edge_list(in);
}

nlohmann::json to_json(const Laplacian& L) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : L.edges()) edges.push_back({e.u, e.v});
  return {{"n", L.size()}, {"edges", edges}};
}

Laplacian laplacian_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(Errc::ParseError, "edge must be a [u, v] pair");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return laplacian_from_edge_list(edges, n);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

void write_dot(std::ostream& out, const Laplacian& L, int seed_size, std::string_view name) {
  out << "graph " << name << " {\n";
  for (int i = 1; i <= L.size(); ++i) {
    const bool grown = i > seed_size;
    out << "  " << i << " [grown=" << (grown ? 1 : 0);
    if (!grown) out << ", style=filled, fillcolor=lightblue";
    out << "];\n";
  }
  for (const Edge& e : L.edges()) out << "  " << e.u << " -- " << e.v << ";\n";
  out << "}\n";
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace whisk
