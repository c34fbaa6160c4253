#include "grapes/swiatkowski.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "grapes/binpoly.hpp"
#include "grapes/errors.hpp"

namespace grapes {

const PreparedGraph::Loop& PreparedGraph::loop(VertexId base, int index) const {
  for (const auto& l : loops)
    if (l.base == base && l.index == index) return l;
  throw Error(ErrorCode::InvalidConfig, "no loop " + std::to_string(index) + " at vertex " + std::to_string(base));
}

int PreparedGraph::half_edge_index(VertexId v, std::size_t e) const {
  const auto& hs = half_edges.at(v);
  auto it = std::find(hs.begin(), hs.end(), e);
  if (it == hs.end()) throw Error(ErrorCode::InvalidConfig, "edge " + std::to_string(e) + " is not incident to vertex " + std::to_string(v));
  return static_cast<int>(it - hs.begin());
}

namespace {

PreparedGraph finish_prepared(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges,
                              std::vector<PreparedGraph::Loop> loops, std::size_t original) {
  PreparedGraph pg;
  pg.original_vertices = original;
  pg.edges = std::move(edges);
  pg.loops = std::move(loops);
  pg.half_edges.assign(n, {});
  for (std::size_t e = 0; e < pg.edges.size(); ++e) {
    pg.half_edges[pg.edges[e].first].push_back(e);
    pg.half_edges[pg.edges[e].second].push_back(e);
  }
  if (pg.width() > 60000) throw Error(ErrorCode::ResourceLimit, "graph too large for the chain complex");
  return pg;
}

}  // namespace

PreparedGraph prepare(const GrapeGraph& g) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& e : g.stem_edges()) edges.emplace_back(e.u, e.v);
  std::vector<PreparedGraph::Loop> loops;
  VertexId next = g.vertex_count();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (int t = 0; t < g.loops(v); ++t) {
      PreparedGraph::Loop l{v, t, next, edges.size(), edges.size() + 1};
      edges.emplace_back(v, next);
      edges.emplace_back(next, v);
      loops.push_back(l);
      ++next;
    }
  return finish_prepared(next, std::move(edges), std::move(loops), g.vertex_count());
}

PreparedGraph prepare_edges(std::size_t vertex_count, const std::vector<std::pair<VertexId, VertexId>>& input) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<PreparedGraph::Loop> loops;
  VertexId next = vertex_count;
  std::vector<int> loop_index(vertex_count, 0);
  for (auto [a, b] : input) {
    if (a >= vertex_count || b >= vertex_count) throw Error(ErrorCode::Validation, "edge endpoint out of range");
    if (a != b) {
      edges.emplace_back(a, b);
      continue;
    }
    PreparedGraph::Loop l{a, loop_index[a]++, next, edges.size(), edges.size() + 1};
    edges.emplace_back(a, next);
    edges.emplace_back(next, a);
    loops.push_back(l);
    ++next;
  }
  if (edges.empty()) throw Error(ErrorCode::Validation, "graph has no edges");
  return finish_prepared(next, std::move(edges), std::move(loops), vertex_count);
}

std::optional<std::size_t> SliceBasis::find(std::span<const std::uint16_t> x) const {
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto e = element(mid);
    if (std::lexicographical_compare(e.begin(), e.end(), x.begin(), x.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size()) {
    auto e = element(lo);
    if (std::equal(e.begin(), e.end(), x.begin(), x.end())) return lo;
  }
  return std::nullopt;
}

mpz_class slice_dimension(const PreparedGraph& pg, int i, long k) {
  if (i < 0 || k < 0) return 0;
  const std::size_t V = pg.vertex_count(), E = pg.edge_count();
  // f[h][s]: weighted ways with h half-edge states and s vertex states
  std::vector<std::vector<mpz_class>> f(static_cast<std::size_t>(i) + 1, std::vector<mpz_class>(V + 1, 0));
  f[0][0] = 1;
  for (std::size_t v = 0; v < V; ++v) {
    const long deg = static_cast<long>(pg.half_edges[v].size());
    for (int h = i; h >= 0; --h)
      for (std::size_t s = v + 2; s-- > 0;) {
        mpz_class add = 0;
        if (s > 0) add += f[h][s - 1];
        if (h > 0) add += f[h - 1][s] * deg;
        f[h][s] += add;
      }
  }
  mpz_class total = 0;
  for (std::size_t s = 0; s <= V; ++s) {
    long rest = k - i - static_cast<long>(s);
    if (rest < 0 || f[i][s] == 0) continue;
    total += f[i][s] * (E == 0 ? mpz_class(rest == 0 ? 1 : 0) : binom(rest + static_cast<long>(E) - 1, static_cast<long>(E) - 1));
  }
  return total;
}

SliceBasis slice_basis(const PreparedGraph& pg, int i, long k, std::size_t cap) {
  const std::size_t V = pg.vertex_count(), E = pg.edge_count(), W = pg.width();
  SliceBasis basis(i, k, W);
  mpz_class dim = slice_dimension(pg, i, k);
  if (dim > mpz_class(std::to_string(cap)))
    throw Error(ErrorCode::ResourceLimit, "slice (" + std::to_string(i) + "," + std::to_string(k) + ") has dimension " +
                                              dim.get_str() + " above the cap " + std::to_string(cap));
  if (dim == 0) return basis;
  if (k > 65535) throw Error(ErrorCode::ResourceLimit, "braid index too large");
  basis.reserve(dim.get_ui());
  // active_after[v]: vertices with at least one half-edge at positions >= v
  std::vector<int> active_after(V + 1, 0);
  for (std::size_t v = V; v-- > 0;) active_after[v] = active_after[v + 1] + (pg.half_edges[v].empty() ? 0 : 1);
  Element x(W, 0);
  std::function<void(std::size_t, int, long)> rec = [&](std::size_t pos, int h, long w) {
    if (pos < V) {
      if (h > active_after[pos] || w < h) return;
      x[pos] = 0;
      rec(pos + 1, h, w);
      if (w >= 1) {
        x[pos] = 1;
        rec(pos + 1, h, w - 1);
        if (h >= 1)
          for (std::size_t t = 0; t < pg.half_edges[pos].size(); ++t) {
            x[pos] = static_cast<std::uint16_t>(2 + t);
            rec(pos + 1, h - 1, w - 1);
          }
      }
      x[pos] = 0;
      return;
    }
    if (h != 0) return;
    const std::size_t e = pos - V;
    if (e + 1 == E) {
      x[pos] = static_cast<std::uint16_t>(w);
      basis.append(x);
      x[pos] = 0;
      return;
    }
    if (E == 0) {
      if (w == 0) basis.append(x);
      return;
    }
    for (long a = 0; a <= w; ++a) {
      x[pos] = static_cast<std::uint16_t>(a);
      rec(pos + 1, h, w - a);
    }
    x[pos] = 0;
  };
  rec(0, i, k);
  if (mpz_class(std::to_string(basis.size())) != dim)
    throw Error(ErrorCode::InvalidConfig, "slice enumeration disagrees with its dimension count");
  return basis;
}

SparseMatrix boundary_matrix(const PreparedGraph& pg, const SliceBasis& src, const SliceBasis& dst) {
  const std::size_t V = pg.vertex_count();
  SparseMatrix m(dst.size(), src.size());
  Element y(pg.width());
  const mpq_class one(1), minus_one(-1);
  for (std::size_t col = 0; col < src.size(); ++col) {
    auto x = src.element(col);
    int sigma = 0;
    for (std::size_t v = 0; v < V; ++v) {
      if (x[v] < 2) continue;
      const std::size_t e = pg.half_edges[v][x[v] - 2];
      const bool neg = sigma % 2 == 1;
      std::copy(x.begin(), x.end(), y.begin());
      y[v] = 0;
      y[V + e] += 1;
      auto r1 = dst.find(y);
      std::copy(x.begin(), x.end(), y.begin());
      y[v] = 1;
      auto r2 = dst.find(y);
      if (!r1 || !r2) throw Error(ErrorCode::InvalidConfig, "boundary term outside the target slice");
      m.add(*r1, col, neg ? minus_one : one);
      m.add(*r2, col, neg ? one : minus_one);
      ++sigma;
    }
  }
  m.canonicalize();
  return m;
}

SparseMatrix boundary_matrix(const PreparedGraph& pg, int i, long k, std::size_t cap) {
  if (i < 1) throw Error(ErrorCode::InvalidConfig, "boundary needs degree at least 1");
  return boundary_matrix(pg, slice_basis(pg, i, k, cap), slice_basis(pg, i - 1, k, cap));
}

void Chain::add(const Element& x, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.emplace(x, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

Chain& Chain::operator+=(const Chain& o) {
  for (const auto& [x, c] : o.terms) add(x, c);
  return *this;
}

Chain& Chain::operator-=(const Chain& o) {
  for (const auto& [x, c] : o.terms) add(x, -c);
  return *this;
}

Chain& Chain::operator*=(const mpz_class& s) {
  if (s == 0) {
    terms.clear();
    return *this;
  }
  for (auto& [x, c] : terms) c *= s;
  return *this;
}

Chain boundary(const PreparedGraph& pg, const Chain& c) {
  const std::size_t V = pg.vertex_count();
  Chain out{c.i - 1, c.k, {}};
  for (const auto& [x, coeff] : c.terms) {
    int sigma = 0;
    for (std::size_t v = 0; v < V; ++v) {
      if (x[v] < 2) continue;
      const std::size_t e = pg.half_edges[v][x[v] - 2];
      const mpz_class s = sigma % 2 ? -coeff : coeff;
      Element y = x;
      y[v] = 0;
      y[V + e] += 1;
      out.add(y, s);
      y = x;
      y[v] = 1;
      out.add(y, -s);
      ++sigma;
    }
  }
  return out;
}

Chain stabilize(const PreparedGraph& pg, const Chain& c, const std::vector<long>& exps) {
  const std::size_t V = pg.vertex_count();
  if (exps.size() != pg.edge_count()) throw Error(ErrorCode::DimensionMismatch, "exponent vector has the wrong length");
  long add = 0;
  for (long a : exps) {
    if (a < 0) throw Error(ErrorCode::InvalidConfig, "negative edge exponent");
    add += a;
  }
  Chain out{c.i, c.k + add, {}};
  for (const auto& [x, coeff] : c.terms) {
    Element y = x;
    for (std::size_t e = 0; e < exps.size(); ++e) y[V + e] = static_cast<std::uint16_t>(y[V + e] + exps[e]);
    out.add(y, coeff);
  }
  return out;
}

Chain product(const PreparedGraph& pg, const Chain& a, const Chain& b) {
  const std::size_t V = pg.vertex_count();
  Chain out{a.i + b.i, a.k + b.k, {}};
  for (const auto& [x, cx] : a.terms)
    for (const auto& [y, cy] : b.terms) {
      Element z(x.size());
      int swaps = 0, odd_b_before = 0;
      // count pairs (p in x, q in y) with p > q, both in half-edge states
      for (std::size_t v = 0; v < V; ++v) {
        if (x[v] && y[v]) throw Error(ErrorCode::InvalidConfig, "chain factors overlap at vertex " + std::to_string(v));
        if (y[v] >= 2) ++odd_b_before;
        if (x[v] >= 2) swaps += odd_b_before;
        z[v] = static_cast<std::uint16_t>(x[v] + y[v]);
      }
      for (std::size_t e = V; e < x.size(); ++e) z[e] = static_cast<std::uint16_t>(x[e] + y[e]);
      mpz_class c = cx * cy;
      if (swaps % 2) c = -c;
      out.add(z, c);
    }
  return out;
}

SparseMatrix chains_to_matrix(const std::vector<Chain>& chains, const SliceBasis& basis) {
  SparseMatrix m(basis.size(), chains.size());
  for (std::size_t col = 0; col < chains.size(); ++col) {
    if (chains[col].i != basis.degree() || chains[col].k != basis.weight())
      throw Error(ErrorCode::DimensionMismatch, "chain bidegree does not match the slice");
    for (const auto& [x, c] : chains[col].terms) {
      auto row = basis.find(x);
      if (!row) throw Error(ErrorCode::InvalidConfig, "chain term outside the slice basis");
      m.add(*row, col, mpq_class(c));
    }
  }
  m.canonicalize();
  return m;
}

std::vector<std::size_t> betti_column(const PreparedGraph& pg, int imax, long k, const FieldSpec& f, std::size_t cap) {
  // ranks[i] = rank of the boundary out of degree i
  std::vector<std::optional<SliceBasis>> bases;
  auto basis = [&](int i) -> const SliceBasis& {
    while (static_cast<int>(bases.size()) <= i) bases.emplace_back();
    if (!bases[i]) bases[i] = slice_basis(pg, i, k, cap);
    return *bases[i];
  };
  std::vector<std::size_t> ranks(static_cast<std::size_t>(imax) + 2, 0);
  for (int i = 1; i <= imax + 1; ++i) {
    const SliceBasis& src = basis(i);
    if (src.size() == 0) continue;
    ranks[i] = rank(boundary_matrix(pg, src, basis(i - 1)), f);
  }
  std::vector<std::size_t> out;
  for (int i = 0; i <= imax; ++i) out.push_back(basis(i).size() - ranks[i] - ranks[i + 1]);
  return out;
}

std::size_t betti(const PreparedGraph& pg, int i, long k, const FieldSpec& f, std::size_t cap) {
  if (i < 0 || k < 0) return 0;
  SliceBasis mid = slice_basis(pg, i, k, cap);
  if (mid.size() == 0) return 0;
  std::size_t r_in = 0, r_out = 0;
  if (i >= 1) r_out = rank(boundary_matrix(pg, mid, slice_basis(pg, i - 1, k, cap)), f);
  SliceBasis up = slice_basis(pg, i + 1, k, cap);
  if (up.size()) r_in = rank(boundary_matrix(pg, up, mid), f);
  return mid.size() - r_out - r_in;
}

std::size_t betti(const GrapeGraph& g, int i, long k, const FieldSpec& f, std::size_t cap) {
  return betti(prepare(g), i, k, f, cap);
}

namespace {

Element unit_element(const PreparedGraph& pg) { return Element(pg.width(), 0); }

Element half_edge_element(const PreparedGraph& pg, VertexId v, std::size_t e) {
  Element x = unit_element(pg);
  x[v] = static_cast<std::uint16_t>(2 + pg.half_edge_index(v, e));
  return x;
}

Chain unit_chain(const PreparedGraph& pg) {
  Chain c{0, 0, {}};
  c.add(unit_element(pg), 1);
  return c;
}

std::size_t root_edge(const GrapeGraph& g, const PreparedGraph& pg) {
  if (g.stem_edges().empty()) return pg.loop(0, 0).first_edge;
  if (essential_vertices(g).empty()) return 0;
  return g.declared_root() ? g.declared_root()->edge : default_root(g).edge;
}

}  // namespace

Chain star_factor(const PreparedGraph& pg, VertexId v, std::size_t ea, std::size_t eb, std::size_t ec) {
  const std::size_t V = pg.vertex_count();
  Chain c{1, 2, {}};
  auto term = [&](std::size_t h, std::size_t e, int sign) {
    Element x = half_edge_element(pg, v, h);
    x[V + e] += 1;
    c.add(x, sign);
  };
  term(ea, eb, 1);
  term(ea, ec, -1);
  term(eb, ec, 1);
  term(eb, ea, -1);
  term(ec, ea, 1);
  term(ec, eb, -1);
  return c;
}

Chain loop_factor(const PreparedGraph& pg, const PreparedGraph::Loop& l) {
  Chain c{1, 1, {}};
  c.add(half_edge_element(pg, l.base, l.first_edge), 1);
  c.add(half_edge_element(pg, l.base, l.second_edge), -1);
  c.add(half_edge_element(pg, l.midpoint, l.first_edge), -1);
  c.add(half_edge_element(pg, l.midpoint, l.second_edge), 1);
  return c;
}

Chain he_to_chain(const GrapeGraph& g, const CanonicalLabeling& lab, const PreparedGraph& pg, const GrapeHE& x) {
  const GrapeSHE& she = x.she;
  if (she.W.size() != she.j.size() || she.W.size() != she.local.size())
    throw Error(ErrorCode::InvalidConfig, "inconsistent configuration lengths");
  if (static_cast<long>(x.c.size()) != she.size()) throw Error(ErrorCode::InvalidConfig, "c has the wrong length");
  long csum = 0;
  for (long c : x.c) {
    if (c < 1) throw Error(ErrorCode::InvalidConfig, "c entries must be positive");
    csum += c;
  }
  if (csum > x.k) throw Error(ErrorCode::InvalidConfig, "c exceeds k");

  std::vector<long> exps(pg.edge_count(), 0);
  Chain chain = unit_chain(pg);
  std::size_t idx = 0;
  for (std::size_t t = 0; t < she.W.size(); ++t) {
    const VertexId v = she.W[t];
    if (v >= g.vertex_count()) throw Error(ErrorCode::InvalidConfig, "vertex out of range");
    const VertexLabeling& vl = lab.at(v);
    const ElemSHE& loc = she.local[t];
    if (loc.shape != ElemShape{vl.ell, vl.m} || !is_valid_she(loc) || loc.size() != she.j[t])
      throw Error(ErrorCode::InvalidConfig, "local configuration does not fit vertex " + std::to_string(v));
    auto slot_edge = [&](int slot, int which = 1) -> std::size_t {
      const LocalSlot& s = vl.slots.at(static_cast<std::size_t>(slot - 1));
      if (s.kind == LocalSlot::Kind::Stem) return s.stem_edge;
      const auto& l = pg.loop(v, s.loop_index);
      return which == 1 ? l.first_edge : l.second_edge;
    };
    const int L = loc.shape.slots();
    for (int s = 1; s <= L; ++s)
      if (loc.b[static_cast<std::size_t>(s - 1)]) exps[slot_edge(s)] += x.c[idx++];
    const int r = loc.h.slot;
    Chain factor;
    if (loc.h.which == 1) {
      int s = r + 1;
      while (s <= L && !loc.b[static_cast<std::size_t>(s - 1)]) ++s;
      const std::size_t ea = slot_edge(1), eb = slot_edge(r), ec = slot_edge(s);
      factor = star_factor(pg, v, ea, eb, ec);
      exps[eb] -= 1;
      exps[ec] -= 1;
    } else {
      const LocalSlot& ls = vl.slots.at(static_cast<std::size_t>(r - 1));
      const auto& l = pg.loop(v, ls.loop_index);
      factor = loop_factor(pg, l);
      exps[l.first_edge] -= 1;
    }
    chain = product(pg, chain, factor);
  }
  exps[lab.root.edge] += x.k - csum;
  return stabilize(pg, chain, exps);
}

Chain elem_he_to_chain(const PreparedGraph& pg, VertexId center, const ElemHE& x) {
  if (x.shape.m != 0 || !is_valid_he(x)) throw Error(ErrorCode::InvalidConfig, "expected a bouquet HE-configuration");
  const int L = x.shape.slots();
  auto slot_edge = [&](int slot) { return pg.loop(center, slot - 1).first_edge; };
  std::vector<long> exps(pg.edge_count(), 0);
  for (int s = 1; s <= L; ++s) exps[slot_edge(s)] += x.a[static_cast<std::size_t>(s - 1)];
  const int r = x.h.slot;
  Chain factor;
  if (x.h.which == 1) {
    int s = r + 1;
    while (s <= L && x.a[static_cast<std::size_t>(s - 1)] == 0) ++s;
    factor = star_factor(pg, center, slot_edge(1), slot_edge(r), slot_edge(s));
    exps[slot_edge(r)] -= 1;
    exps[slot_edge(s)] -= 1;
  } else {
    factor = loop_factor(pg, pg.loop(center, r - 1));
    exps[slot_edge(r)] -= 1;
  }
  for (long a : exps)
    if (a < 0) throw Error(ErrorCode::InvalidConfig, "configuration " + render(x) + " has no cycle representative");
  return stabilize(pg, factor, exps);
}

Chain base_chain(const GrapeGraph& g, const PreparedGraph& pg, long k) {
  std::vector<long> exps(pg.edge_count(), 0);
  exps[root_edge(g, pg)] = k;
  return stabilize(pg, unit_chain(pg), exps);
}

namespace {

mpz_class he_count(const GrapeGraph& g, int i, long k) {
  const Classification c = classify(g);
  if (i == 0) return 1;
  switch (c.kind) {
    case GraphKind::Interval: return 0;
    case GraphKind::Circle:
    case GraphKind::Bouquet:
      return i == 1 ? he_count_closed(c.loops, 0, k, 1) + he_count_closed(c.loops, 0, k, 2) : mpz_class(0);
    case GraphKind::General: return count_he_grape(g, static_cast<std::size_t>(i), k);
  }
  return 0;
}

}  // namespace

std::vector<Chain> he_cycles(const GrapeGraph& g, const PreparedGraph& pg, int i, long k, std::uint64_t cap) {
  const Classification c = classify(g);
  std::vector<Chain> out;
  if (i < 0 || k < 0) return out;
  mpz_class count = he_count(g, i, k);
  if (count > mpz_class(std::to_string(cap)))
    throw Error(ErrorCode::CapExceeded, count.get_str() + " configurations exceed the cap of " + std::to_string(cap));
  if (c.kind == GraphKind::General) {
    const CanonicalLabeling lab = canonical_labeling(g);
    for (const auto& x : enum_he_grape(g, static_cast<std::size_t>(i), k, cap)) out.push_back(he_to_chain(g, lab, pg, x));
    return out;
  }
  if (i == 0) {
    out.push_back(base_chain(g, pg, k));
    return out;
  }
  if (i == 1 && c.kind != GraphKind::Interval)
    for (const auto& x : enum_he_elem(c.loops, 0, k)) {
      if (c.kind == GraphKind::Circle && k == 0) continue;  // the residual configuration
      out.push_back(elem_he_to_chain(pg, 0, x));
    }
  return out;
}

BasisCheck basis_rank_check(const GrapeGraph& g, int i, long k, const FieldSpec& f, std::uint64_t cap,
                            std::size_t slice_cap) {
  BasisCheck out;
  const PreparedGraph pg = prepare(g);
  out.count = he_count(g, i, k);
  out.residual_cell = classify(g).kind == GraphKind::Circle && i == 1 && k == 0;
  std::vector<Chain> chains = he_cycles(g, pg, i, k, cap);
  for (const auto& ch : chains)
    if (!boundary(pg, ch).is_zero()) throw Error(ErrorCode::InvalidConfig, "HE representative is not a cycle");
  SliceBasis mid = slice_basis(pg, i, k, slice_cap);
  SliceBasis up = slice_basis(pg, i + 1, k, slice_cap);
  SparseMatrix B = boundary_matrix(pg, up, mid);
  const std::size_t rb = up.size() ? rank(B, f) : 0;
  std::size_t r_out = 0;
  if (i >= 1 && mid.size()) r_out = rank(boundary_matrix(pg, mid, slice_basis(pg, i - 1, k, slice_cap)), f);
  out.betti = mid.size() - r_out - rb;
  SparseMatrix Z = chains_to_matrix(chains, mid);
  out.rank_in_homology = rank(SparseMatrix::hconcat(Z, B), f) - rb;
  const mpz_class expected = out.residual_cell ? out.count - 1 : out.count;
  out.equal = expected == out.betti && out.rank_in_homology == out.betti && out.rank_in_homology == chains.size();
  return out;
}

std::vector<StabilizationCheck> stabilization_check(const GrapeGraph& g, int i, long k, const FieldSpec& f,
                                                    std::uint64_t cap, std::size_t slice_cap) {
  const PreparedGraph pg = prepare(g);
  std::vector<Chain> chains = he_cycles(g, pg, i, k, cap);
  const std::size_t b = betti(pg, i, k, f, slice_cap);
  SliceBasis mid = slice_basis(pg, i, k + 1, slice_cap);
  SliceBasis up = slice_basis(pg, i + 1, k + 1, slice_cap);
  SparseMatrix B = boundary_matrix(pg, up, mid);
  const std::size_t rb = up.size() ? rank(B, f) : 0;
  std::vector<StabilizationCheck> out;
  for (std::size_t e = 0; e < pg.edge_count(); ++e) {
    std::vector<long> exps(pg.edge_count(), 0);
    exps[e] = 1;
    std::vector<Chain> moved;
    for (const auto& c : chains) moved.push_back(stabilize(pg, c, exps));
    SparseMatrix Z = chains_to_matrix(moved, mid);
    out.push_back({e, rank(SparseMatrix::hconcat(Z, B), f) - rb, b});
  }
  return out;
}

bool is_boundary(const PreparedGraph& pg, const Chain& c, const FieldSpec& f) {
  if (!boundary(pg, c).is_zero()) return false;
  if (c.is_zero()) return true;
  SliceBasis mid = slice_basis(pg, c.i, c.k);
  SliceBasis up = slice_basis(pg, c.i + 1, c.k);
  SparseMatrix B = boundary_matrix(pg, up, mid);
  return rank_of_span_mod(chains_to_matrix({c}, mid), B, f) == 0;
}

namespace {

Chain star_on(const PreparedGraph& pg, VertexId v, std::size_t a, std::size_t b, std::size_t c) {
  return star_factor(pg, v, a, b, c);
}

Chain times_edge(const PreparedGraph& pg, const Chain& c, std::size_t e) {
  std::vector<long> exps(pg.edge_count(), 0);
  exps[e] = 1;
  return stabilize(pg, c, exps);
}

}  // namespace

std::vector<RelationFixture> relation_fixtures() {
  std::vector<RelationFixture> out;
  {
    GrapeGraph g = elementary_graph(0, 4);
    PreparedGraph pg = prepare(g);
    // edges 0..3 join the centre to leaves 1..4
    auto S = [&](std::size_t a, std::size_t b, std::size_t c) { return star_on(pg, 0, a - 1, b - 1, c - 1); };
    Chain x1 = S(2, 3, 4);
    x1 -= S(1, 3, 4);
    x1 += S(1, 2, 4);
    x1 -= S(1, 2, 3);
    x1.i = 1;
    x1.k = 2;
    out.push_back({"X1", g, x1});
    Chain x2 = times_edge(pg, S(2, 3, 4), 0);
    x2 -= times_edge(pg, S(1, 3, 4), 1);
    x2 += times_edge(pg, S(1, 2, 4), 2);
    x2 -= times_edge(pg, S(1, 2, 3), 3);
    x2.i = 1;
    x2.k = 3;
    out.push_back({"X2", g, x2});
  }
  {
    GrapeGraph g = elementary_graph(1, 1);
    PreparedGraph pg = prepare(g);
    const auto& l = pg.loop(0, 0);
    // star on the leaf edge and both halves of the loop
    Chain q = star_on(pg, 0, 0, l.first_edge, l.second_edge);
    Chain loop = loop_factor(pg, l);
    q += times_edge(pg, loop, 0);
    q -= times_edge(pg, loop, l.first_edge);
    out.push_back({"Q", g, q});
  }
  return out;
}

std::string render(const PreparedGraph& pg, const Element& x) {
  std::ostringstream out;
  const std::size_t V = pg.vertex_count();
  bool first = true;
  for (std::size_t v = 0; v < V; ++v) {
    if (!x[v]) continue;
    out << (first ? "" : " ") << 'v' << v << ':';
    if (x[v] == 1)
      out << '*';
    else
      out << "h(e" << pg.half_edges[v][x[v] - 2] << ')';
    first = false;
  }
  for (std::size_t e = 0; e < pg.edge_count(); ++e)
    if (x[V + e]) {
      out << (first ? "" : " ") << 'e' << e;
      if (x[V + e] > 1) out << '^' << x[V + e];
      first = false;
    }
  if (first) out << '1';
  return out.str();
}

}  // namespace grapes
