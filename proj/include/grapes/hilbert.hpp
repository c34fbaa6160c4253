#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "grapes/binpoly.hpp"
#include "grapes/graph.hpp"

namespace grapes {

// (i, k) -> dim H_i(B_k) - P^i(k), nonzero entries only.
using ResidualTable = std::map<std::pair<int, long>, mpz_class>;

struct HilbertTable {
  std::vector<BinPoly> polys;  // P^0, P^1, ...; trailing zeros trimmed
  ResidualTable residual;
  std::size_t essential = 0;
  Classification kind;

  BinPoly poly(std::size_t i) const { return i < polys.size() ? polys[i] : BinPoly(); }
  mpz_class value(std::size_t i, long k) const;
  bool same_polys(const HilbertTable& o) const { return polys == o.polys && residual == o.residual; }
};

struct ElementaryHilbert {
  BinPoly p1;
  ResidualTable residual;
};

// N_{ell,m}: 2ell+m >= 3 and m >= 1.
mpz_class b_coeff(int ell, int m, int j);
ElementaryHilbert elementary_p1(int ell, int m);

HilbertTable hilbert_table(const GrapeGraph& g);
// The decomposition product for pieces with m >= 1.
HilbertTable hilbert_table_from_local_data(const LocalDataMultiset& data);

mpz_class coefficient(const GrapeGraph& g, std::size_t i, int j);

struct LeadingTerm {
  long degree = 0;
  mpz_class b_coeff;
  mpq_class monomial_coeff;
};
LeadingTerm leading_term(const GrapeGraph& g, std::size_t i);

std::vector<std::vector<mpz_class>> poincare_truncation(const HilbertTable& t, std::size_t imax, long kmax);
std::vector<std::vector<mpz_class>> poincare_truncation(const GrapeGraph& g, std::size_t imax, long kmax);

HilbertTable disjoint_union_table(const HilbertTable& a, const HilbertTable& b);
HilbertTable one_bridge_table(const HilbertTable& a, const HilbertTable& b);

bool betti_recurrence_check(const GrapeGraph& g, std::size_t edge, std::size_t i, long k);

LocalDataMultiset recover_local_data(std::span<const BinPoly> polys, bool allow_bouquet = false);

nlohmann::json to_json(const HilbertTable& t);
std::string render_local_data(const LocalDataMultiset& d);

}  // namespace grapes
