#include "grapes/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "grapes/errors.hpp"

namespace grapes {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::Validation, msg); }

// Maps external labels to dense ids by first appearance.
class LabelTable {
 public:
  VertexId intern(long long label) {
    auto [it, inserted] = ids_.emplace(label, labels_.size());
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  std::optional<VertexId> lookup(long long label) const {
    auto it = ids_.find(label);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<long long>& labels() const { return labels_; }

 private:
  std::map<long long, VertexId> ids_;
  std::vector<long long> labels_;
};

struct RawGraph {
  LabelTable table;
  std::vector<StemEdge> edges;
  std::map<VertexId, int> loops;
  std::optional<std::pair<VertexId, VertexId>> root;
};

GrapeGraph finish(RawGraph& raw) {
  const std::size_t n = raw.table.labels().size();
  if (n == 0) invalid("graph has no edges");
  std::vector<int> loops(n, 0);
  for (auto [v, c] : raw.loops) loops[v] = c;
  std::optional<OrientedRoot> root;
  if (raw.root) {
    auto [v, u] = *raw.root;
    std::optional<std::size_t> idx;
    for (std::size_t e = 0; e < raw.edges.size(); ++e) {
      const auto& se = raw.edges[e];
      if ((se.u == v && se.v == u) || (se.u == u && se.v == v)) idx = e;
    }
    if (!idx) invalid("root edge is not a stem edge");
    root = OrientedRoot{v, *idx};
  }
  GrapeGraph g = GrapeGraph::build(n, std::move(raw.edges), std::move(loops), root);
  return g.with_labels(raw.table.labels());
}

long long parse_label(std::string_view tok, std::size_t line_no) {
  long long value = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || value < 0)
    throw Error(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": expected a nonnegative integer, got '" +
                                       std::string(tok) + "'");
  return value;
}

}  // namespace

std::string to_string(const Classification& c) {
  switch (c.kind) {
    case GraphKind::Interval: return "Interval";
    case GraphKind::Circle: return "Circle";
    case GraphKind::Bouquet: return "Bouquet(" + std::to_string(c.loops) + ")";
    case GraphKind::General: return "General";
  }
  return "General";
}

GrapeGraph GrapeGraph::build(std::size_t vertex_count, std::vector<StemEdge> edges, std::vector<int> loops,
                             std::optional<OrientedRoot> root) {
  if (vertex_count == 0) invalid("graph has no vertices");
  if (loops.size() != vertex_count) invalid("loop vector size does not match vertex count");
  for (int c : loops)
    if (c < 0) invalid("negative loop count");
  if (edges.size() + 1 != vertex_count) {
    if (edges.size() + 1 > vertex_count) invalid("stem contains a cycle");
    invalid("stem is disconnected");
  }
  UnionFind uf(vertex_count);
  for (const auto& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count) invalid("edge endpoint out of range");
    if (e.u == e.v) invalid("stem edge is a loop");
    if (!uf.unite(e.u, e.v)) invalid("stem contains a cycle");
  }
  int total_loops = std::accumulate(loops.begin(), loops.end(), 0);
  if (edges.empty() && total_loops == 0) invalid("graph has no edges");

  GrapeGraph g;
  g.edges_ = std::move(edges);
  g.loops_ = std::move(loops);
  g.incident_.assign(vertex_count, {});
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    g.incident_[g.edges_[e].u].push_back(e);
    g.incident_[g.edges_[e].v].push_back(e);
  }
  for (VertexId v = 0; v < vertex_count; ++v) {
    auto& inc = g.incident_[v];
    std::sort(inc.begin(), inc.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(g.other_end(a, v), a) < std::pair(g.other_end(b, v), b);
    });
  }
  if (root) {
    if (root->vertex >= vertex_count || root->edge >= g.edges_.size()) invalid("root out of range");
    const auto& re = g.edges_[root->edge];
    if (re.u != root->vertex && re.v != root->vertex) invalid("root edge is not incident to the root vertex");
    if (!g.is_essential(root->vertex)) invalid("root vertex is not essential");
  }
  g.root_ = root;
  g.labels_.resize(vertex_count);
  std::iota(g.labels_.begin(), g.labels_.end(), 0LL);
  return g;
}

int GrapeGraph::total_loops() const { return std::accumulate(loops_.begin(), loops_.end(), 0); }

VertexId GrapeGraph::other_end(std::size_t edge, VertexId v) const {
  const auto& e = edges_.at(edge);
  return e.u == v ? e.v : e.u;
}

std::optional<std::size_t> GrapeGraph::find_edge(VertexId a, VertexId b) const {
  if (a >= vertex_count()) return std::nullopt;
  for (std::size_t e : incident_[a])
    if (other_end(e, a) == b) return e;
  return std::nullopt;
}

GrapeGraph GrapeGraph::with_labels(std::vector<long long> labels) const {
  if (labels.size() != vertex_count()) invalid("label vector size does not match vertex count");
  GrapeGraph g = *this;
  g.labels_ = std::move(labels);
  return g;
}

GrapeGraph parse_grape(std::string_view text) {
  RawGraph raw;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty() || toks[0][0] == '#') continue;
    auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (toks.size() != 3) throw Error(ErrorCode::Syntax, where() + "expected 3 fields, got '" + line + "'");
    const std::string& kw = toks[0];
    if (kw == "edge") {
      long long a = parse_label(toks[1], line_no), b = parse_label(toks[2], line_no);
      if (a == b) throw Error(ErrorCode::Syntax, where() + "edge endpoints must differ");
      VertexId u = raw.table.intern(a), v = raw.table.intern(b);
      raw.edges.push_back({u, v});
    } else if (kw == "loops") {
      long long a = parse_label(toks[1], line_no), n = parse_label(toks[2], line_no);
      if (n < 1) throw Error(ErrorCode::Syntax, where() + "loop count must be at least 1");
      VertexId v = raw.table.intern(a);
      if (raw.loops.count(v)) invalid("duplicate loops line for vertex " + toks[1]);
      raw.loops[v] = static_cast<int>(n);
    } else if (kw == "root") {
      long long a = parse_label(toks[1], line_no), b = parse_label(toks[2], line_no);
      if (raw.root) invalid("duplicate root line");
      auto v = raw.table.lookup(a), u = raw.table.lookup(b);
      if (!v || !u) {
        // Allow root lines before the edges they name.
        v = raw.table.intern(a);
        u = raw.table.intern(b);
      }
      raw.root = std::pair(*v, *u);
    } else {
      throw Error(ErrorCode::Syntax, where() + "unknown keyword '" + kw + "'");
    }
  }
  return finish(raw);
}

GrapeGraph parse_grape_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Syntax, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Syntax, "top-level JSON value must be an object");
  RawGraph raw;
  auto label = [](const nlohmann::json& x) -> long long {
    if (x.is_number_integer() && x.get<long long>() >= 0) return x.get<long long>();
    if (x.is_string()) return parse_label(x.get<std::string>(), 0);
    throw Error(ErrorCode::Syntax, "vertex ids must be nonnegative integers");
  };
  try {
    if (doc.contains("stem_edges")) {
      for (const auto& e : doc.at("stem_edges")) {
        if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::Syntax, "stem edge must be a pair");
        long long a = label(e[0]), b = label(e[1]);
        if (a == b) throw Error(ErrorCode::Syntax, "edge endpoints must differ");
        VertexId u = raw.table.intern(a), v = raw.table.intern(b);
        raw.edges.push_back({u, v});
      }
    }
    if (doc.contains("loops")) {
      std::vector<std::pair<long long, long long>> entries;
      for (const auto& [k, n] : doc.at("loops").items()) {
        if (!n.is_number_integer()) throw Error(ErrorCode::Syntax, "loop count must be an integer");
        entries.emplace_back(parse_label(k, 0), n.get<long long>());
      }
      std::sort(entries.begin(), entries.end());
      for (auto [v, n] : entries) {
        if (n < 0) invalid("negative loop count");
        VertexId id = raw.table.intern(v);
        if (n > 0) raw.loops[id] = static_cast<int>(n);
      }
    }
    if (doc.contains("root")) {
      const auto& r = doc.at("root");
      if (!r.is_array() || r.size() != 2) throw Error(ErrorCode::Syntax, "root must be a pair");
      raw.root = std::pair(raw.table.intern(label(r[0])), raw.table.intern(label(r[1])));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Syntax, e.what());
  }
  return finish(raw);
}

GrapeGraph load_grape(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Syntax, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? parse_grape_json(buf.str()) : parse_grape(buf.str());
}

std::string to_grape_text(const GrapeGraph& g) {
  std::ostringstream out;
  const auto& lab = g.labels();
  for (const auto& e : g.stem_edges()) out << "edge " << lab[e.u] << ' ' << lab[e.v] << '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.loops(v) > 0) out << "loops " << lab[v] << ' ' << g.loops(v) << '\n';
  if (const auto& r = g.declared_root())
    out << "root " << lab[r->vertex] << ' ' << lab[g.other_end(r->edge, r->vertex)] << '\n';
  return out.str();
}

Classification classify(const GrapeGraph& g) {
  if (g.stem_edges().empty()) {
    const int l = g.loops(0);
    if (l == 1) return {GraphKind::Circle, 1};
    return {GraphKind::Bouquet, l};
  }
  if (essential_vertices(g).empty()) return {GraphKind::Interval, 0};
  return {GraphKind::General, 0};
}

std::vector<VertexId> essential_vertices(const GrapeGraph& g) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.is_essential(v)) out.push_back(v);
  return out;
}

LocalDataMultiset local_data(const GrapeGraph& g) {
  LocalDataMultiset out;
  for (VertexId v : essential_vertices(g)) out.push_back({g.loops(v), g.stem_degree(v)});
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Builds the subgraph induced on `keep` (ids of g, in ascending order), plus one
// dangling leaf per entry of `leaves` attached to the given kept vertex.
GrapeGraph induced_with_leaves(const GrapeGraph& g, const std::vector<VertexId>& keep,
                               const std::vector<std::pair<VertexId, VertexId>>& leaves) {
  std::vector<long> index(g.vertex_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<long>(i);
  std::vector<StemEdge> edges;
  std::vector<int> loops;
  std::vector<long long> labels;
  for (VertexId v : keep) {
    loops.push_back(g.loops(v));
    labels.push_back(g.labels()[v]);
  }
  for (const auto& e : g.stem_edges())
    if (index[e.u] >= 0 && index[e.v] >= 0)
      edges.push_back({static_cast<VertexId>(index[e.u]), static_cast<VertexId>(index[e.v])});
  for (auto [at, copy_of] : leaves) {
    VertexId leaf = loops.size();
    loops.push_back(0);
    labels.push_back(g.labels()[copy_of]);
    edges.push_back({static_cast<VertexId>(index[at]), leaf});
  }
  const std::size_t n = loops.size();
  return GrapeGraph::build(n, std::move(edges), std::move(loops)).with_labels(std::move(labels));
}

// Vertices reachable from `start` without crossing any edge in `cut`.
std::vector<VertexId> side_of(const GrapeGraph& g, VertexId start, const std::vector<bool>& cut) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<VertexId> stack{start}, out;
  seen[start] = true;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (std::size_t e : g.incident_edges(v)) {
      if (cut[e]) continue;
      VertexId w = g.other_end(e, v);
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::pair<GrapeGraph, GrapeGraph> one_bridge_decompose(const GrapeGraph& g, std::size_t edge) {
  if (edge >= g.stem_edges().size()) throw Error(ErrorCode::EdgeNotFound, "no stem edge with index " + std::to_string(edge));
  const auto [a, b] = g.stem_edges()[edge];
  std::vector<bool> cut(g.stem_edges().size(), false);
  cut[edge] = true;
  GrapeGraph left = induced_with_leaves(g, side_of(g, a, cut), {{a, b}});
  GrapeGraph right = induced_with_leaves(g, side_of(g, b, cut), {{b, a}});
  return {std::move(left), std::move(right)};
}

std::pair<GrapeGraph, GrapeGraph> one_bridge_decompose(const GrapeGraph& g, VertexId a, VertexId b) {
  if (a == b && a < g.vertex_count() && g.loops(a) > 0)
    throw Error(ErrorCode::LoopCut, "cannot cut a loop at vertex " + std::to_string(a));
  auto e = g.find_edge(a, b);
  if (!e) throw Error(ErrorCode::EdgeNotFound, "no stem edge " + std::to_string(a) + "-" + std::to_string(b));
  auto [left, right] = one_bridge_decompose(g, *e);
  // Keep the piece containing a first regardless of the stored orientation.
  if (g.stem_edges()[*e].u != a) std::swap(left, right);
  return {std::move(left), std::move(right)};
}

std::vector<StemPiece> stem_pieces(const GrapeGraph& g) {
  auto ess = essential_vertices(g);
  if (ess.empty()) throw Error(ErrorCode::TrivialGraph, "graph has no essential vertex");
  if (g.stem_edges().empty()) throw Error(ErrorCode::SingletonStem, "stem has no edge");
  const std::size_t E = g.stem_edges().size();
  const long total = static_cast<long>(ess.size());
  std::vector<bool> cut(E, false);
  for (std::size_t e = 0; e < E; ++e) {
    std::vector<bool> only(E, false);
    only[e] = true;
    auto side = side_of(g, g.stem_edges()[e].u, only);
    long inside = std::count_if(side.begin(), side.end(), [&](VertexId v) { return g.is_essential(v); });
    cut[e] = inside > 0 && inside < total;
  }
  std::vector<StemPiece> out;
  for (VertexId v : ess) {
    auto comp = side_of(g, v, cut);
    std::vector<std::pair<VertexId, VertexId>> leaves;
    for (VertexId x : comp)
      for (std::size_t e : g.incident_edges(x))
        if (cut[e]) leaves.emplace_back(x, g.other_end(e, x));
    out.push_back({v, induced_with_leaves(g, comp, leaves)});
  }
  return out;
}

std::vector<LocalPiece> decompose_along_stem(const GrapeGraph& g) {
  std::vector<LocalPiece> out;
  for (const auto& piece : stem_pieces(g)) {
    auto inner = essential_vertices(piece.graph);
    if (inner.size() != 1) throw Error(ErrorCode::Validation, "stem piece does not have exactly one essential vertex");
    VertexId c = inner.front();
    out.push_back({piece.vertex, {piece.graph.loops(c), piece.graph.stem_degree(c)}});
  }
  return out;
}

long component_count(const GrapeGraph& g, const std::vector<VertexId>& removed) {
  std::vector<bool> gone(g.vertex_count(), false);
  for (VertexId v : removed) gone.at(v) = true;
  UnionFind uf(g.vertex_count());
  long count = 0;
  for (const auto& e : g.stem_edges()) {
    if (gone[e.u] && gone[e.v])
      ++count;  // open arc
    else if (!gone[e.u] && !gone[e.v])
      uf.unite(e.u, e.v);
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (gone[v])
      count += g.loops(v);
    else if (uf.find(v) == v)
      ++count;
  }
  return count;
}

std::optional<long> ramos_delta(const GrapeGraph& g, std::size_t i) {
  auto ess = essential_vertices(g);
  if (i > ess.size()) return std::nullopt;
  std::vector<bool> pick(ess.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(i), true);
  long best = 0;
  do {
    std::vector<VertexId> w;
    for (std::size_t t = 0; t < ess.size(); ++t)
      if (pick[t]) w.push_back(ess[t]);
    best = std::max(best, component_count(g, w));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

const VertexLabeling& CanonicalLabeling::at(VertexId v) const {
  for (const auto& vl : vertices)
    if (vl.vertex == v) return vl;
  throw Error(ErrorCode::InvalidConfig, "vertex " + std::to_string(v) + " is not essential");
}

OrientedRoot default_root(const GrapeGraph& g) {
  if (g.stem_edges().empty()) throw Error(ErrorCode::SingletonStem, "stem has no edge");
  auto ess = essential_vertices(g);
  if (ess.empty()) throw Error(ErrorCode::NoEssentialVertex, "graph has no essential vertex");
  const auto& inc = g.incident_edges(ess.front());
  return {ess.front(), *std::min_element(inc.begin(), inc.end())};
}

CanonicalLabeling canonical_labeling(const GrapeGraph& g, std::optional<OrientedRoot> root) {
  if (g.stem_edges().empty()) throw Error(ErrorCode::SingletonStem, "stem has no edge");
  if (essential_vertices(g).empty()) throw Error(ErrorCode::NoEssentialVertex, "graph has no essential vertex");
  OrientedRoot r = root ? *root : (g.declared_root() ? *g.declared_root() : default_root(g));
  if (!g.is_essential(r.vertex)) throw Error(ErrorCode::Validation, "root vertex is not essential");
  const auto& re = g.stem_edges().at(r.edge);
  if (re.u != r.vertex && re.v != r.vertex) throw Error(ErrorCode::Validation, "root edge is not incident to the root vertex");

  std::vector<long> parent_edge(g.vertex_count(), -1);
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<VertexId> q;
  q.push(r.vertex);
  seen[r.vertex] = true;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (std::size_t e : g.incident_edges(v)) {
      VertexId w = g.other_end(e, v);
      if (seen[w]) continue;
      seen[w] = true;
      parent_edge[w] = static_cast<long>(e);
      q.push(w);
    }
  }

  CanonicalLabeling lab;
  lab.root = r;
  for (VertexId v : essential_vertices(g)) {
    VertexLabeling vl;
    vl.vertex = v;
    vl.m = g.stem_degree(v);
    vl.ell = g.loops(v);
    const std::size_t pivot = v == r.vertex ? r.edge : static_cast<std::size_t>(parent_edge[v]);
    vl.slots.push_back({LocalSlot::Kind::Stem, pivot, 0});
    for (std::size_t e : g.incident_edges(v))
      if (e != pivot) vl.slots.push_back({LocalSlot::Kind::Stem, e, 0});
    for (int t = 0; t < g.loops(v); ++t) vl.slots.push_back({LocalSlot::Kind::Loop, 0, t});
    lab.vertices.push_back(std::move(vl));
  }
  return lab;
}

GrapeGraph subdivide_stem_edge(const GrapeGraph& g, std::size_t edge) {
  if (edge >= g.stem_edges().size()) throw Error(ErrorCode::EdgeNotFound, "no stem edge with index " + std::to_string(edge));
  auto edges = g.stem_edges();
  auto loops = g.loop_counts();
  auto labels = g.labels();
  const VertexId mid = loops.size();
  const auto [u, v] = edges[edge];
  edges[edge] = {u, mid};
  edges.push_back({mid, v});
  loops.push_back(0);
  labels.push_back(*std::max_element(labels.begin(), labels.end()) + 1);
  auto root = g.declared_root();
  if (root && root->edge == edge && root->vertex == v) root->edge = edges.size() - 1;
  const std::size_t n = loops.size();
  return GrapeGraph::build(n, std::move(edges), std::move(loops), root).with_labels(std::move(labels));
}

GrapeGraph relabel(const GrapeGraph& g, const std::vector<VertexId>& perm) {
  const std::size_t n = g.vertex_count();
  if (perm.size() != n) invalid("permutation size does not match vertex count");
  std::vector<StemEdge> edges;
  for (const auto& e : g.stem_edges()) edges.push_back({perm[e.u], perm[e.v]});
  std::vector<int> loops(n, 0);
  for (VertexId v = 0; v < n; ++v) loops.at(perm[v]) = g.loops(v);
  std::optional<OrientedRoot> root;
  if (g.declared_root()) root = OrientedRoot{perm[g.declared_root()->vertex], g.declared_root()->edge};
  return GrapeGraph::build(n, std::move(edges), std::move(loops), root);
}

GrapeGraph elementary_graph(int ell, int m) {
  if (ell < 0 || m < 0 || ell + m == 0) throw Error(ErrorCode::InvalidShape, "elementary graph needs ell + m >= 1");
  std::vector<StemEdge> edges;
  std::vector<int> loops(static_cast<std::size_t>(m) + 1, 0);
  loops[0] = ell;
  for (int t = 1; t <= m; ++t) edges.push_back({0, static_cast<VertexId>(t)});
  const std::size_t n = loops.size();
  return GrapeGraph::build(n, std::move(edges), std::move(loops));
}

}  // namespace grapes
