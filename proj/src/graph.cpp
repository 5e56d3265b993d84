#include "prfair/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "prfair/errors.hpp"

namespace prfair {

namespace {

struct ParsedArc {
  std::string src;
  std::string dst;
  double weight;
};

// Strips a trailing '#' comment and splits on whitespace.
std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

double parse_weight(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw DataError("line " + std::to_string(line_no) + ": malformed weight '" +
                    std::string(token) + "'");
  if (!std::isfinite(value) || value <= 0.0)
    throw DataError("line " + std::to_string(line_no) + ": weight must be positive, got '" +
                    std::string(token) + "'");
  return value;
}

bool parse_numeric_label(const std::string& label, unsigned long long& out) {
  if (label.empty()) return false;
  const char* begin = label.data();
  const char* end = begin + label.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

// Sorted label order; numeric when every label is a nonnegative integer.
std::vector<std::string> ordered_labels(const std::unordered_set<std::string>& seen) {
  std::vector<std::string> labels(seen.begin(), seen.end());
  bool all_numeric = true;
  for (const auto& l : labels) {
    unsigned long long v;
    if (!parse_numeric_label(l, v)) {
      all_numeric = false;
      break;
    }
  }
  if (all_numeric) {
    std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
      unsigned long long va = 0, vb = 0;
      parse_numeric_label(a, va);
      parse_numeric_label(b, vb);
      return va != vb ? va < vb : a < b;
    });
  } else {
    std::sort(labels.begin(), labels.end());
  }
  return labels;
}

std::uint64_t arc_key(NodeId i, NodeId j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

void DirectedGraph::finalize() {
  const auto n = adjacency_.size();
  out_degree_.assign(n, 0.0);
  arc_count_ = 0;
  max_out_degree_ = 0.0;
  max_out_count_ = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& arcs = adjacency_[i];
    std::sort(arcs.begin(), arcs.end(),
              [](const Arc& a, const Arc& b) { return a.target < b.target; });
    double degree = 0.0;
    for (std::size_t t = 0; t < arcs.size(); ++t) {
      const Arc& a = arcs[t];
      if (a.target < 0 || static_cast<std::size_t>(a.target) >= n)
        throw DataError("arc target out of range: " + std::to_string(a.target));
      if (a.target == static_cast<NodeId>(i))
        throw DataError("self-loop at node '" + labels_[i] + "'");
      if (t > 0 && arcs[t - 1].target == a.target)
        throw DataError("duplicate arc (" + labels_[i] + ", " + labels_[a.target] + ")");
      if (!(a.weight > 0.0) || !std::isfinite(a.weight))
        throw DataError("non-positive arc weight on (" + labels_[i] + ", " +
                        labels_[static_cast<std::size_t>(a.target)] + ")");
      degree += a.weight;
    }
    out_degree_[i] = degree;
    arc_count_ += static_cast<Index>(arcs.size());
    max_out_degree_ = std::max(max_out_degree_, degree);
    max_out_count_ = std::max(max_out_count_, static_cast<Index>(arcs.size()));
  }
}

DirectedGraph DirectedGraph::from_arcs(Index node_count,
                                       std::span<const std::tuple<NodeId, NodeId, double>> arcs,
                                       bool allow_zero_out_degree) {
  DirectedGraph g;
  g.adjacency_.resize(static_cast<std::size_t>(node_count));
  g.labels_.reserve(static_cast<std::size_t>(node_count));
  for (Index i = 0; i < node_count; ++i) {
    g.labels_.push_back(std::to_string(i));
    g.label_index_.emplace(g.labels_.back(), static_cast<NodeId>(i));
  }
  for (const auto& [i, j, w] : arcs) {
    if (i < 0 || i >= node_count)
      throw DataError("arc source out of range: " + std::to_string(i));
    g.adjacency_[static_cast<std::size_t>(i)].push_back({j, w});
  }
  g.finalize();
  if (!allow_zero_out_degree && g.has_zero_out_degree_node()) {
    for (Index i = 0; i < node_count; ++i)
      if (g.out_count(static_cast<NodeId>(i)) == 0)
        throw DataError("node '" + g.label(static_cast<NodeId>(i)) +
                        "' is dangling (out-degree 0)");
  }
  return g;
}

bool DirectedGraph::has_arc(NodeId i, NodeId j) const {
  const auto& arcs = adjacency_[static_cast<std::size_t>(i)];
  auto it = std::lower_bound(arcs.begin(), arcs.end(), j,
                             [](const Arc& a, NodeId t) { return a.target < t; });
  return it != arcs.end() && it->target == j;
}

std::optional<double> DirectedGraph::arc_weight(NodeId i, NodeId j) const {
  const auto& arcs = adjacency_[static_cast<std::size_t>(i)];
  auto it = std::lower_bound(arcs.begin(), arcs.end(), j,
                             [](const Arc& a, NodeId t) { return a.target < t; });
  if (it == arcs.end() || it->target != j) return std::nullopt;
  return it->weight;
}

double DirectedGraph::transition_prob(NodeId i, NodeId j) const {
  auto w = arc_weight(i, j);
  if (!w) return 0.0;
  return *w / out_degree_[static_cast<std::size_t>(i)];
}

std::optional<NodeId> DirectedGraph::index_of(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

bool DirectedGraph::has_zero_out_degree_node() const {
  for (const auto& arcs : adjacency_)
    if (arcs.empty()) return true;
  return false;
}

DirectedGraph load_graph(std::string_view edge_list_text, bool symmetrize) {
  std::vector<ParsedArc> parsed;
  std::unordered_set<std::string> seen_labels;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= edge_list_text.size()) {
    std::size_t nl = edge_list_text.find('\n', pos);
    std::string_view line = edge_list_text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? edge_list_text.size() + 1 : nl + 1;
    ++line_no;

    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3)
      throw DataError("line " + std::to_string(line_no) + ": expected 'src dst [weight]', got " +
                      std::to_string(tokens.size()) + " fields");
    ParsedArc arc;
    arc.src = std::string(tokens[0]);
    arc.dst = std::string(tokens[1]);
    arc.weight = tokens.size() == 3 ? parse_weight(tokens[2], line_no) : 1.0;
    if (arc.src == arc.dst)
      throw DataError("line " + std::to_string(line_no) + ": self-loop at node '" + arc.src + "'");
    seen_labels.insert(arc.src);
    seen_labels.insert(arc.dst);
    parsed.push_back(std::move(arc));
  }
  if (parsed.empty()) throw DataError("edge list contains no arcs");

  DirectedGraph g;
  g.labels_ = ordered_labels(seen_labels);
  for (std::size_t i = 0; i < g.labels_.size(); ++i)
    g.label_index_.emplace(g.labels_[i], static_cast<NodeId>(i));
  g.adjacency_.resize(g.labels_.size());

  std::unordered_set<std::uint64_t> arc_set;
  auto add_arc = [&](NodeId i, NodeId j, double w) {
    if (!arc_set.insert(arc_key(i, j)).second)
      throw DataError("duplicate arc (" + g.labels_[static_cast<std::size_t>(i)] + ", " +
                      g.labels_[static_cast<std::size_t>(j)] + ")");
    g.adjacency_[static_cast<std::size_t>(i)].push_back({j, w});
  };
  for (const auto& arc : parsed) {
    NodeId i = g.label_index_.at(arc.src);
    NodeId j = g.label_index_.at(arc.dst);
    add_arc(i, j, arc.weight);
    if (symmetrize) add_arc(j, i, arc.weight);
  }

  g.finalize();
  for (Index i = 0; i < g.node_count(); ++i)
    if (g.out_count(static_cast<NodeId>(i)) == 0)
      throw DataError("node '" + g.label(static_cast<NodeId>(i)) +
                      "' is dangling (out-degree 0)");
  return g;
}

DirectedGraph load_graph_file(const std::string& path, bool symmetrize) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_graph(buffer.str(), symmetrize);
}

std::string serialize_graph(const DirectedGraph& g) {
  std::string out;
  for (Index i = 0; i < g.node_count(); ++i) {
    const auto& src = g.label(static_cast<NodeId>(i));
    for (const Arc& a : g.out(static_cast<NodeId>(i))) {
      out += src;
      out += ' ';
      out += g.label(a.target);
      out += ' ';
      out += format_weight(a.weight);
      out += '\n';
    }
  }
  return out;
}

GroupPartition::GroupPartition(const DirectedGraph& g, std::vector<NodeId> members,
                               std::optional<double> phi) {
  const Index n = g.node_count();
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) throw DataError("group S must be non-empty");
  if (static_cast<Index>(members.size()) >= n)
    throw DataError("group S must be a strict subset of V");
  in_set_.assign(static_cast<std::size_t>(n), 0);
  for (NodeId u : members) {
    if (u < 0 || u >= n) throw DataError("group member out of range: " + std::to_string(u));
    in_set_[static_cast<std::size_t>(u)] = 1;
  }
  members_ = std::move(members);
  ratio_ = static_cast<double>(members_.size()) / static_cast<double>(n);
  phi_ = phi.value_or(ratio_);
  if (!(phi_ > 0.0) || phi_ > 1.0)
    throw ConfigError("fairness threshold phi must be in (0, 1]");
}

GroupPartition load_group(const DirectedGraph& g, std::string_view text,
                          std::optional<double> phi) {
  std::vector<NodeId> members;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 1)
      throw DataError("group file line " + std::to_string(line_no) + ": expected one label");
    auto idx = g.index_of(tokens[0]);
    if (!idx)
      throw DataError("group file line " + std::to_string(line_no) + ": unknown node '" +
                      std::string(tokens[0]) + "'");
    members.push_back(*idx);
  }
  return GroupPartition(g, std::move(members), phi);
}

GroupPartition load_group_file(const DirectedGraph& g, const std::string& path,
                               std::optional<double> phi) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open group file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_group(g, buffer.str(), phi);
}

void apply_rewiring(DirectedGraph& g, const Rewiring& r) {
  const Index n = g.node_count();
  auto in_range = [&](NodeId u) { return u >= 0 && u < n; };
  if (!in_range(r.source) || !in_range(r.removed_target) || !in_range(r.added_target))
    throw DataError("rewiring references a node out of range");
  if (r.source == r.added_target)
    throw DataError("rewiring rejected: k must differ from i");
  if (r.removed_target == r.added_target)
    throw DataError("rewiring rejected: k must differ from j");
  if (!g.has_arc(r.source, r.removed_target))
    throw DataError("rewiring rejected: arc (i, j) not present");
  if (g.has_arc(r.source, r.added_target))
    throw DataError("rewiring rejected: arc (i, k) already present");

  auto& arcs = g.adjacency_[static_cast<std::size_t>(r.source)];
  auto it = std::lower_bound(arcs.begin(), arcs.end(), r.removed_target,
                             [](const Arc& a, NodeId t) { return a.target < t; });
  const double weight = it->weight;
  arcs.erase(it);
  auto pos = std::lower_bound(arcs.begin(), arcs.end(), r.added_target,
                              [](const Arc& a, NodeId t) { return a.target < t; });
  arcs.insert(pos, Arc{r.added_target, weight});
  // Weighted degree, arc count and per-node neighbor counts are all
  // preserved, so the cached aggregates stay valid.
}

DirectedGraph rewired(const DirectedGraph& g, const Rewiring& r) {
  DirectedGraph copy = g;
  apply_rewiring(copy, r);
  return copy;
}

ReweightedGraph build_reweighted(const DirectedGraph& g, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ConfigError("alpha must lie in (0, 1)");
  ReweightedGraph gr;
  gr.alpha = alpha;
  const Index n = g.node_count();
  gr.adjacency.resize(static_cast<std::size_t>(n));
  const double scale = (1.0 - alpha) / alpha;
  for (Index i = 0; i < n; ++i) {
    const double d = g.out_degree(static_cast<NodeId>(i));
    auto& row = gr.adjacency[static_cast<std::size_t>(i)];
    auto arcs = g.out(static_cast<NodeId>(i));
    row.reserve(arcs.size());
    for (const Arc& a : arcs) row.push_back({a.target, a.weight * scale / d});
  }
  return gr;
}

}  // namespace prfair
