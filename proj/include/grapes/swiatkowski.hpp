#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "grapes/configs.hpp"
#include "grapes/exactla.hpp"
#include "grapes/graph.hpp"

namespace grapes {

inline constexpr std::size_t kDefaultSliceCap = 500'000;

// Loopless multigraph used to build the complex. Original vertices come first,
// then one midpoint per subdivided loop.
struct PreparedGraph {
  struct Loop {
    VertexId base = 0;
    int index = 0;  // among the loops at `base`
    VertexId midpoint = 0;
    std::size_t first_edge = 0;   // base -> midpoint
    std::size_t second_edge = 0;  // midpoint -> base
  };

  std::size_t original_vertices = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::vector<std::size_t>> half_edges;  // per vertex, edge ids ascending
  std::vector<Loop> loops;

  std::size_t vertex_count() const { return half_edges.size(); }
  std::size_t edge_count() const { return edges.size(); }
  std::size_t width() const { return vertex_count() + edge_count(); }
  const Loop& loop(VertexId base, int index) const;
  // Position of edge e in the half-edge list of v.
  int half_edge_index(VertexId v, std::size_t e) const;
};

PreparedGraph prepare(const GrapeGraph& g);
// Any multigraph; self-loops are subdivided. Used only by the unsafe CLI path.
PreparedGraph prepare_edges(std::size_t vertex_count, const std::vector<std::pair<VertexId, VertexId>>& edges);

// A basis element is a vector of width() entries: per-vertex states (0 = empty,
// 1 = the vertex, 2 + t = half-edge t of that vertex) followed by edge exponents.
using Element = std::vector<std::uint16_t>;

class SliceBasis {
 public:
  SliceBasis(int i, long k, std::size_t width) : i_(i), k_(k), width_(width) {}
  int degree() const { return i_; }
  long weight() const { return k_; }
  std::size_t size() const { return width_ ? data_.size() / width_ : 0; }
  std::span<const std::uint16_t> element(std::size_t idx) const {
    return {data_.data() + idx * width_, width_};
  }
  std::optional<std::size_t> find(std::span<const std::uint16_t> x) const;
  void append(std::span<const std::uint16_t> x) { data_.insert(data_.end(), x.begin(), x.end()); }
  void reserve(std::size_t n) { data_.reserve(n * width_); }

 private:
  int i_;
  long k_;
  std::size_t width_;
  std::vector<std::uint16_t> data_;
};

mpz_class slice_dimension(const PreparedGraph& pg, int i, long k);
// Throws ResourceLimit when the dimension exceeds cap.
SliceBasis slice_basis(const PreparedGraph& pg, int i, long k, std::size_t cap = kDefaultSliceCap);
// Matrix of the boundary from `src` (degree i) to `dst` (degree i-1); rows index dst.
SparseMatrix boundary_matrix(const PreparedGraph& pg, const SliceBasis& src, const SliceBasis& dst);
SparseMatrix boundary_matrix(const PreparedGraph& pg, int i, long k, std::size_t cap = kDefaultSliceCap);

struct Chain {
  int i = 0;
  long k = 0;
  std::map<Element, mpz_class> terms;

  void add(const Element& x, const mpz_class& c);
  Chain& operator+=(const Chain& o);
  Chain& operator-=(const Chain& o);
  Chain& operator*=(const mpz_class& s);
  bool is_zero() const { return terms.empty(); }
};

Chain boundary(const PreparedGraph& pg, const Chain& c);
// Multiplies by the edge monomial prod e^exps[e].
Chain stabilize(const PreparedGraph& pg, const Chain& c, const std::vector<long>& exps);
// Graded-commutative product of chains with disjoint vertex supports.
Chain product(const PreparedGraph& pg, const Chain& a, const Chain& b);
// Columns of the chains expressed in `basis`.
SparseMatrix chains_to_matrix(const std::vector<Chain>& chains, const SliceBasis& basis);

std::size_t betti(const PreparedGraph& pg, int i, long k, const FieldSpec& f, std::size_t cap = kDefaultSliceCap);
std::size_t betti(const GrapeGraph& g, int i, long k, const FieldSpec& f, std::size_t cap = kDefaultSliceCap);
// betti for i = 0..imax at fixed k, sharing boundary ranks.
std::vector<std::size_t> betti_column(const PreparedGraph& pg, int imax, long k, const FieldSpec& f,
                                      std::size_t cap = kDefaultSliceCap);

// Local cycle factors.
Chain star_factor(const PreparedGraph& pg, VertexId v, std::size_t ea, std::size_t eb, std::size_t ec);
Chain loop_factor(const PreparedGraph& pg, const PreparedGraph::Loop& loop);

Chain he_to_chain(const GrapeGraph& g, const CanonicalLabeling& lab, const PreparedGraph& pg, const GrapeHE& x);
// Bouquets and circles: elementary HE-configurations with slots = loops in input order.
Chain elem_he_to_chain(const PreparedGraph& pg, VertexId center, const ElemHE& x);
// The chain of the unique i = 0 configuration: k dots on the root edge.
Chain base_chain(const GrapeGraph& g, const PreparedGraph& pg, long k);

struct BasisCheck {
  mpz_class count;
  std::size_t rank_in_homology = 0;
  std::size_t betti = 0;
  bool equal = false;
  bool residual_cell = false;  // the circle at (1,0): no cycle for the configuration
};

// Throws CapExceeded or ResourceLimit.
BasisCheck basis_rank_check(const GrapeGraph& g, int i, long k, const FieldSpec& f,
                            std::uint64_t cap = 20'000, std::size_t slice_cap = kDefaultSliceCap);
// All HE cycle representatives of bidegree (i, k).
std::vector<Chain> he_cycles(const GrapeGraph& g, const PreparedGraph& pg, int i, long k, std::uint64_t cap);

struct StabilizationCheck {
  std::size_t edge = 0;
  std::size_t rank = 0;
  std::size_t betti = 0;
};
// Rank of multiplication by each edge from H_{i,k} to H_{i,k+1}.
std::vector<StabilizationCheck> stabilization_check(const GrapeGraph& g, int i, long k, const FieldSpec& f,
                                                    std::uint64_t cap = 20'000,
                                                    std::size_t slice_cap = kDefaultSliceCap);

struct RelationFixture {
  std::string name;
  GrapeGraph graph;
  Chain chain;
};
std::vector<RelationFixture> relation_fixtures();
// True when c is a cycle lying in the image of the boundary.
bool is_boundary(const PreparedGraph& pg, const Chain& c, const FieldSpec& f);

std::string render(const PreparedGraph& pg, const Element& x);

}  // namespace grapes
