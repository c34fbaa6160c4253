#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace grapes {

using VertexId = std::size_t;

struct StemEdge {
  VertexId u = 0;
  VertexId v = 0;
  bool operator==(const StemEdge&) const = default;
};

struct VertexLocalData {
  int ell = 0;
  int m = 0;
  auto operator<=>(const VertexLocalData&) const = default;
};

// Sorted ascending; equality of vectors is multiset equality.
using LocalDataMultiset = std::vector<VertexLocalData>;

struct OrientedRoot {
  VertexId vertex = 0;
  std::size_t edge = 0;  // index into stem_edges()
  bool operator==(const OrientedRoot&) const = default;
};

enum class GraphKind { Interval, Circle, Bouquet, General };

struct Classification {
  GraphKind kind = GraphKind::General;
  int loops = 0;  // ℓ for Bouquet/Circle
  bool operator==(const Classification&) const = default;
};

std::string to_string(const Classification& c);

// A stem tree with loop counts per vertex. Immutable once built.
class GrapeGraph {
 public:
  // Throws Error(Validation) unless the stem is a tree and there is at least one edge.
  static GrapeGraph build(std::size_t vertex_count, std::vector<StemEdge> edges,
                          std::vector<int> loops, std::optional<OrientedRoot> root = {});

  std::size_t vertex_count() const { return loops_.size(); }
  const std::vector<StemEdge>& stem_edges() const { return edges_; }
  const std::vector<int>& loop_counts() const { return loops_; }
  int loops(VertexId v) const { return loops_.at(v); }
  int total_loops() const;
  int stem_degree(VertexId v) const { return static_cast<int>(incident_.at(v).size()); }
  int degree(VertexId v) const { return stem_degree(v) + 2 * loops(v); }
  bool is_essential(VertexId v) const { return degree(v) >= 3; }
  // Stem edge indices at v, ordered by neighbour id.
  const std::vector<std::size_t>& incident_edges(VertexId v) const { return incident_.at(v); }
  VertexId other_end(std::size_t edge, VertexId v) const;
  std::optional<std::size_t> find_edge(VertexId a, VertexId b) const;
  const std::optional<OrientedRoot>& declared_root() const { return root_; }
  // External labels as they appeared in the input (identity for built graphs).
  const std::vector<long long>& labels() const { return labels_; }
  GrapeGraph with_labels(std::vector<long long> labels) const;

 private:
  std::vector<StemEdge> edges_;
  std::vector<int> loops_;
  std::vector<std::vector<std::size_t>> incident_;
  std::optional<OrientedRoot> root_;
  std::vector<long long> labels_;
};

GrapeGraph parse_grape(std::string_view text);
GrapeGraph parse_grape_json(std::string_view text);
// Dispatches on the file extension.
GrapeGraph load_grape(const std::string& path);
std::string to_grape_text(const GrapeGraph& g);

Classification classify(const GrapeGraph& g);
std::vector<VertexId> essential_vertices(const GrapeGraph& g);
LocalDataMultiset local_data(const GrapeGraph& g);

std::pair<GrapeGraph, GrapeGraph> one_bridge_decompose(const GrapeGraph& g, std::size_t edge);
std::pair<GrapeGraph, GrapeGraph> one_bridge_decompose(const GrapeGraph& g, VertexId a, VertexId b);

struct LocalPiece {
  VertexId vertex;
  VertexLocalData data;
};
std::vector<LocalPiece> decompose_along_stem(const GrapeGraph& g);

struct StemPiece {
  VertexId vertex;  // the essential vertex, as an id of the original graph
  GrapeGraph graph;
};
// Cuts every stem edge separating two essential vertices and keeps the pieces
// that contain an essential vertex.
std::vector<StemPiece> stem_pieces(const GrapeGraph& g);

// Components of the graph with the vertices in `removed` punctured out.
long component_count(const GrapeGraph& g, const std::vector<VertexId>& removed);
// nullopt stands for −∞ (i > |V^ess|).
std::optional<long> ramos_delta(const GrapeGraph& g, std::size_t i);

struct LocalSlot {
  enum class Kind { Stem, Loop };
  Kind kind = Kind::Stem;
  std::size_t stem_edge = 0;  // Kind::Stem
  int loop_index = 0;         // Kind::Loop, 0-based among loops at the vertex
};

struct VertexLabeling {
  VertexId vertex = 0;
  int m = 0;
  int ell = 0;
  std::vector<LocalSlot> slots;  // slots[0] is the pivot
};

struct CanonicalLabeling {
  OrientedRoot root;
  std::vector<VertexLabeling> vertices;  // essential vertices, ascending
  const VertexLabeling& at(VertexId v) const;
};

OrientedRoot default_root(const GrapeGraph& g);
CanonicalLabeling canonical_labeling(const GrapeGraph& g, std::optional<OrientedRoot> root = {});

// Test utilities: homeomorphic variants and isomorphic relabelings.
GrapeGraph subdivide_stem_edge(const GrapeGraph& g, std::size_t edge);
GrapeGraph relabel(const GrapeGraph& g, const std::vector<VertexId>& perm);
GrapeGraph elementary_graph(int ell, int m);

}  // namespace grapes
