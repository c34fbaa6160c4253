#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "grapes/graph.hpp"

namespace grapes {

enum class TypeFilter { One, Two, Both };

// Slots are numbered 1..ell+m. For m >= 1: slot 1 is the pivot, slots 2..m are
// the other stem edges and m+1..ell+m are loops. For m = 0 every slot is a loop.
struct ElemShape {
  int ell = 0;
  int m = 0;
  int slots() const { return ell + m; }
  bool is_loop(int slot) const { return slot > m; }
  bool operator==(const ElemShape&) const = default;
};

struct ElemHalfEdgeRef {
  int slot = 0;   // r, 1-based
  int which = 1;  // 1 or 2
  auto operator<=>(const ElemHalfEdgeRef&) const = default;
};

struct ElemSHE {
  ElemShape shape;
  ElemHalfEdgeRef h;
  std::vector<int> b;  // b[0] is b_1
  int size() const;
  int type() const { return h.which; }
  bool operator==(const ElemSHE&) const = default;
};

struct ElemHE {
  ElemShape shape;
  ElemHalfEdgeRef h;
  std::vector<long> a;
  long size() const;
  int type() const { return h.which; }
  auto operator<=>(const ElemHE& o) const {
    return std::tie(h, a) <=> std::tie(o.h, o.a);
  }
  bool operator==(const ElemHE&) const = default;
};

// Throws InvalidShape unless m >= 1 with 2ell+m >= 3, or m = 0 with ell >= 1.
void check_shape(int ell, int m);

bool is_valid_she(const ElemSHE& x);
bool is_valid_he(const ElemHE& x);
std::vector<ElemSHE> enum_she_elem(int ell, int m, int j, TypeFilter filter = TypeFilter::Both);
std::vector<ElemHE> enum_he_elem(int ell, int m, long k, TypeFilter filter = TypeFilter::Both);
// The slot that absorbs c_0 - 1 in the expansion.
int free_slot(const ElemSHE& she);
std::vector<ElemHE> expand_she(const ElemSHE& she, long k);
// Inverse of expand_she: the standard configuration an HE-configuration comes from.
ElemSHE standardize(const ElemHE& he);

// Closed forms; type is 1 or 2. SHE counts at j = 0 are 0 except the single circle configuration.
mpz_class she_count_closed(int ell, int m, int j, int type);
mpz_class he_count_closed(int ell, int m, long k, int type);
// Cached enumeration counts.
std::uint64_t she_count_enum(int ell, int m, int j, TypeFilter filter = TypeFilter::Both);

std::string render(const ElemSHE& x);
std::string render(const ElemHE& x);

struct GrapeSHE {
  std::vector<VertexId> W;
  std::vector<int> j;            // parallel to W
  std::vector<ElemSHE> local;    // parallel to W
  int size() const;
  bool operator==(const GrapeSHE&) const = default;
};

struct GrapeHE {
  GrapeSHE she;
  std::vector<long> c;  // one entry per marked edge, in (vertex, slot) order
  long k = 0;
  bool operator==(const GrapeHE&) const = default;
};

mpz_class count_she_grape(const GrapeGraph& g, std::size_t i, int j);
std::vector<GrapeSHE> enum_she_grape(const GrapeGraph& g, std::size_t i, int j);
mpz_class count_he_grape(const GrapeGraph& g, std::size_t i, long k);
std::vector<GrapeHE> enum_he_grape(const GrapeGraph& g, std::size_t i, long k, std::uint64_t cap);

std::string render(const GrapeSHE& x, const GrapeGraph& g);
std::string render(const GrapeHE& x, const GrapeGraph& g);

}  // namespace grapes
