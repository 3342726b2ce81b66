#pragma once

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mls/graph.hpp"

namespace mls {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view strip_comment(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::uint32_t parse_id(const std::string& tok, std::size_t line_no) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": bad id '" + tok + "'");
  }
  return v;
}

}  // namespace detail

// Line-oriented graph format:
//   graph <name>
//   vertex <id>
//   edge <id> <u> <v> <length>
// '#' starts a comment. Lengths are "p/q" or decimal literals.
inline MetricGraph parse_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::string name;
  bool have_header = false;
  std::vector<VertexId> vertices;
  std::set<VertexId> vertex_set;
  std::set<EdgeId> edge_set;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::split_ws(detail::strip_comment(line));
    if (tokens.empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (!have_header) {
      if (tokens[0] != "graph" || tokens.size() != 2) throw FormatError(where + "expected 'graph <name>'");
      name = tokens[1];
      have_header = true;
      continue;
    }
    if (tokens[0] == "vertex") {
      if (tokens.size() != 2) throw FormatError(where + "expected 'vertex <id>'");
      const VertexId v = detail::parse_id(tokens[1], line_no);
      if (!vertex_set.insert(v).second) throw FormatError(where + "duplicate vertex id " + tokens[1]);
      vertices.push_back(v);
    } else if (tokens[0] == "edge") {
      if (tokens.size() != 5) throw FormatError(where + "expected 'edge <id> <u> <v> <length>'");
      const EdgeId id = detail::parse_id(tokens[1], line_no);
      const VertexId u = detail::parse_id(tokens[2], line_no);
      const VertexId v = detail::parse_id(tokens[3], line_no);
      if (!edge_set.insert(id).second) throw FormatError(where + "duplicate edge id " + tokens[1]);
      if (!vertex_set.contains(u) || !vertex_set.contains(v)) {
        throw FormatError(where + "edge " + tokens[1] + " has an unknown endpoint");
      }
      Rational len;
      try {
        len = Rational::parse(tokens[4]);
      } catch (const std::exception& e) {
        throw FormatError(where + e.what());
      }
      if (!len.is_positive()) throw FormatError(where + "non-positive length " + tokens[4]);
      edges.push_back(Edge{id, u, v, len});
    } else {
      throw FormatError(where + "unknown record '" + tokens[0] + "'");
    }
  }
  if (!have_header) throw FormatError("missing 'graph <name>' header");
  return MetricGraph(name, std::move(vertices), std::move(edges));
}

inline MetricGraph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_graph(in);
}

inline MetricGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return parse_graph(in);
}

// Canonical printing: vertices then edges, each in ascending id order.
inline std::string format_graph(const MetricGraph& g) {
  std::ostringstream out;
  out << "graph " << (g.name().empty() ? "unnamed" : g.name()) << '\n';
  for (VertexId v : g.vertices()) out << "vertex " << v << '\n';
  for (const Edge& e : g.edges()) out << "edge " << e.id << ' ' << e.u << ' ' << e.v << ' ' << e.length << '\n';
  return out.str();
}

}  // namespace mls
