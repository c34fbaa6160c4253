#include "grapes/hilbert.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "grapes/configs.hpp"
#include "grapes/errors.hpp"

namespace grapes {

namespace {

void trim(std::vector<BinPoly>& polys) {
  while (!polys.empty() && polys.back().is_zero()) polys.pop_back();
}

// Coefficients of x^i in prod (1 + x * p_v).
std::vector<BinPoly> graded_product(const std::vector<BinPoly>& factors) {
  std::vector<BinPoly> acc{BinPoly::constant(1)};
  for (const auto& p : factors) {
    std::vector<BinPoly> next(acc.size() + 1);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i];
      next[i + 1] += conv(acc[i], p);
    }
    acc = std::move(next);
  }
  trim(acc);
  return acc;
}

void require_empty_residual(const HilbertTable& t) {
  if (!t.residual.empty()) throw Error(ErrorCode::NonzeroResidual, "series operations need an empty residual table");
}

}  // namespace

mpz_class HilbertTable::value(std::size_t i, long k) const {
  mpz_class v = k >= 0 ? eval(poly(i), static_cast<unsigned long>(k)) : mpz_class(0);
  if (auto it = residual.find({static_cast<int>(i), k}); it != residual.end()) v += it->second;
  return v;
}

mpz_class b_coeff(int ell, int m, int j) {
  if (ell < 0 || m < 1 || 2 * ell + m < 3 || j < 0)
    throw Error(ErrorCode::InvalidShape, "b_coeff needs m >= 1 and 2ell+m >= 3");
  if (j == 0) return 0;
  const long L = ell + m;
  return (2 * ell + m - 2) * binom(L - 2, j - 1) - binom(L - 2, j);
}

ElementaryHilbert elementary_p1(int ell, int m) {
  if (ell < 0 || m < 0 || ell + m == 0) throw Error(ErrorCode::InvalidShape, "elementary shape needs ell + m >= 1");
  ElementaryHilbert out;
  if (ell + m == 1) {
    out.p1 = BinPoly::constant(ell);
    if (ell != 0) out.residual[{1, 0}] = -ell;
    return out;
  }
  if (m == 0) {
    std::vector<mpz_class> c(static_cast<std::size_t>(ell), 0);
    for (int j = 1; j < ell; ++j) c[j] = she_count_closed(ell, 0, j, 1) + she_count_closed(ell, 0, j, 2);
    out.p1 = BinPoly(std::move(c));
    return out;
  }
  if (2 * ell + m < 3) return out;  // a path: no first homology
  std::vector<mpz_class> c(static_cast<std::size_t>(ell + m), 0);
  for (int j = 1; j < ell + m; ++j) c[j] = b_coeff(ell, m, j);
  out.p1 = BinPoly(std::move(c));
  return out;
}

HilbertTable hilbert_table_from_local_data(const LocalDataMultiset& data) {
  HilbertTable t;
  std::vector<BinPoly> factors;
  for (const auto& d : data) {
    if (d.m < 1 || 2 * d.ell + d.m < 3) throw Error(ErrorCode::InvalidShape, "local data must have m >= 1 and 2ell+m >= 3");
    factors.push_back(elementary_p1(d.ell, d.m).p1);
  }
  t.polys = graded_product(factors);
  t.essential = data.size();
  t.kind = data.empty() ? Classification{GraphKind::Interval, 0} : Classification{GraphKind::General, 0};
  return t;
}

HilbertTable hilbert_table(const GrapeGraph& g) {
  HilbertTable t;
  t.kind = classify(g);
  t.essential = essential_vertices(g).size();
  switch (t.kind.kind) {
    case GraphKind::Interval:
      t.polys = {BinPoly::constant(1)};
      break;
    case GraphKind::Circle:
    case GraphKind::Bouquet: {
      auto e = elementary_p1(t.kind.loops, 0);
      t.polys = {BinPoly::constant(1), e.p1};
      t.residual = e.residual;
      break;
    }
    case GraphKind::General: {
      std::vector<BinPoly> factors;
      for (const auto& piece : decompose_along_stem(g)) factors.push_back(elementary_p1(piece.data.ell, piece.data.m).p1);
      t.polys = graded_product(factors);
      break;
    }
  }
  trim(t.polys);
  return t;
}

mpz_class coefficient(const GrapeGraph& g, std::size_t i, int j) {
  if (g.stem_edges().empty()) throw Error(ErrorCode::SingletonStem, "stem has no edge");
  auto ess = essential_vertices(g);
  if (ess.empty()) throw Error(ErrorCode::TrivialGraph, "graph has no essential vertex");
  if (i > ess.size() || j < 0) return 0;
  mpz_class total = 0;
  std::vector<bool> pick(ess.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(i), true);
  do {
    std::vector<VertexId> W;
    for (std::size_t t = 0; t < ess.size(); ++t)
      if (pick[t]) W.push_back(ess[t]);
    // sum over compositions of j into |W| positive parts
    std::function<mpz_class(std::size_t, int)> rec = [&](std::size_t pos, int left) -> mpz_class {
      if (pos == W.size()) return left == 0 ? 1 : 0;
      mpz_class s = 0;
      for (int jv = 1; jv <= left; ++jv) {
        mpz_class b = b_coeff(g.loops(W[pos]), g.stem_degree(W[pos]), jv);
        if (b != 0) s += b * rec(pos + 1, left - jv);
      }
      return s;
    };
    total += rec(0, j);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return total;
}

LeadingTerm leading_term(const GrapeGraph& g, std::size_t i) {
  auto delta = ramos_delta(g, i);
  if (!delta || *delta <= 0) throw Error(ErrorCode::DegreeUndefined, "Ramos invariant is not positive for i=" + std::to_string(i));
  auto ess = essential_vertices(g);
  LeadingTerm out;
  out.degree = *delta - 1;
  out.b_coeff = 0;
  std::vector<bool> pick(ess.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(i), true);
  do {
    std::vector<VertexId> W;
    for (std::size_t t = 0; t < ess.size(); ++t)
      if (pick[t]) W.push_back(ess[t]);
    if (component_count(g, W) != *delta) continue;
    mpz_class prod = 1;
    for (VertexId v : W) prod *= g.degree(v) - 2;
    out.b_coeff += prod;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  mpz_class fact = 1;
  for (long t = 2; t <= out.degree; ++t) fact *= t;
  out.monomial_coeff = mpq_class(out.b_coeff, fact);
  out.monomial_coeff.canonicalize();
  return out;
}

std::vector<std::vector<mpz_class>> poincare_truncation(const HilbertTable& t, std::size_t imax, long kmax) {
  std::vector<std::vector<mpz_class>> grid(imax + 1);
  for (std::size_t i = 0; i <= imax; ++i)
    for (long k = 0; k <= kmax; ++k) grid[i].push_back(t.value(i, k));
  return grid;
}

std::vector<std::vector<mpz_class>> poincare_truncation(const GrapeGraph& g, std::size_t imax, long kmax) {
  return poincare_truncation(hilbert_table(g), imax, kmax);
}

HilbertTable disjoint_union_table(const HilbertTable& a, const HilbertTable& b) {
  require_empty_residual(a);
  require_empty_residual(b);
  HilbertTable t;
  t.polys.resize(a.polys.size() + b.polys.size());
  for (std::size_t i1 = 0; i1 < a.polys.size(); ++i1)
    for (std::size_t i2 = 0; i2 < b.polys.size(); ++i2) t.polys[i1 + i2] += shift_plus(conv(a.polys[i1], b.polys[i2]));
  trim(t.polys);
  t.essential = a.essential + b.essential;
  t.kind = {GraphKind::General, 0};
  return t;
}

HilbertTable one_bridge_table(const HilbertTable& a, const HilbertTable& b) {
  require_empty_residual(a);
  require_empty_residual(b);
  HilbertTable t;
  t.polys.resize(a.polys.size() + b.polys.size());
  for (std::size_t i1 = 0; i1 < a.polys.size(); ++i1)
    for (std::size_t i2 = 0; i2 < b.polys.size(); ++i2) t.polys[i1 + i2] += conv(a.polys[i1], b.polys[i2]);
  trim(t.polys);
  t.essential = a.essential + b.essential;
  t.kind = t.essential ? Classification{GraphKind::General, 0} : Classification{GraphKind::Interval, 0};
  return t;
}

bool betti_recurrence_check(const GrapeGraph& g, std::size_t edge, std::size_t i, long k) {
  auto [g1, g2] = one_bridge_decompose(g, edge);
  HilbertTable whole = hilbert_table(g);
  HilbertTable split = disjoint_union_table(hilbert_table(g1), hilbert_table(g2));
  mpz_class rhs = split.value(i, k) - (k >= 1 ? split.value(i, k - 1) : mpz_class(0));
  return whole.value(i, k) == rhs;
}

namespace {

// Positive integer roots (with multiplicity) of x^n - s1 x^(n-1) + ... + (-1)^n s_n.
std::vector<long> positive_roots(const std::vector<mpz_class>& s) {
  const std::size_t n = s.size();
  std::vector<mpz_class> poly(n + 1);  // poly[t] = coefficient of x^(n-t)
  poly[0] = 1;
  for (std::size_t t = 1; t <= n; ++t) poly[t] = (t % 2 ? -1 : 1) * s[t - 1];
  if (s[0] < 1 || !s[0].fits_slong_p() || s[0] > 100000000)
    throw Error(ErrorCode::NonIntegerRoot, "leading-coefficient sum " + s[0].get_str() + " admits no valid root set");
  std::vector<long> roots;
  for (long lam = 1; lam <= s[0].get_si() && roots.size() < n; ++lam) {
    while (poly.size() > 1) {
      // synthetic division by (x - lam)
      std::vector<mpz_class> q(poly.size() - 1);
      mpz_class acc = 0;
      for (std::size_t t = 0; t + 1 < poly.size(); ++t) {
        acc = acc * lam + poly[t];
        q[t] = acc;
      }
      mpz_class rem = acc * lam + poly.back();
      if (rem != 0) break;
      roots.push_back(lam);
      poly = std::move(q);
    }
  }
  if (roots.size() != n) throw Error(ErrorCode::NonIntegerRoot, "characteristic polynomial lacks " + std::to_string(n) + " positive integer roots");
  return roots;
}

}  // namespace

LocalDataMultiset recover_local_data(std::span<const BinPoly> input, bool allow_bouquet) {
  std::vector<BinPoly> polys(input.begin(), input.end());
  trim(polys);
  if (polys.empty() || polys[0] != BinPoly::constant(1))
    throw Error(ErrorCode::InconsistentDegrees, "P0 must be the constant 1");
  if (polys.size() == 1) return {};

  if (allow_bouquet && polys.size() == 2) {
    const BinPoly& p1 = polys[1];
    if (p1 == BinPoly::constant(1)) return {{1, 0}};
    if (auto d = p1.degree(); d && *d >= 1) {
      const int ell = static_cast<int>(*d) + 1;
      if (elementary_p1(ell, 0).p1 == p1) return {{ell, 0}};
    }
  }

  LocalDataMultiset out;
  BinPoly rest = polys[1];
  long prev_deg = 0;
  mpz_class scale = 1;
  std::size_t offset = 0;
  std::optional<long> last_d;
  while (!rest.is_zero()) {
    const long d = static_cast<long>(*rest.degree());
    if (d < 1) throw Error(ErrorCode::InconsistentDegrees, "remainder of P1 has degree " + std::to_string(d) + " < 1");
    if (last_d && d >= *last_d) throw Error(ErrorCode::InconsistentDegrees, "remainder degree did not drop");
    last_d = d;
    std::size_t n = 0;
    while (offset + n + 1 < polys.size()) {
      auto deg = polys[offset + n + 1].degree();
      if (!deg || static_cast<long>(*deg) != prev_deg + static_cast<long>(n + 1) * d) break;
      ++n;
    }
    if (n == 0) throw Error(ErrorCode::InconsistentDegrees, "P" + std::to_string(offset + 1) + " has an unexpected degree");
    std::vector<mpz_class> s;
    for (std::size_t t = 1; t <= n; ++t) {
      const mpz_class lc = polys[offset + t].leading();
      if (lc % scale != 0) throw Error(ErrorCode::NonIntegerRoot, "leading coefficient of P" + std::to_string(offset + t) + " is not divisible by " + scale.get_str());
      s.push_back(lc / scale);
    }
    for (long lam : positive_roots(s)) {
      const long ell = lam - d + 1;
      const long m = d + 1 - ell;
      if (ell < 0 || m < 1 || 2 * ell + m < 3)
        throw Error(ErrorCode::NonIntegerRoot, "root " + std::to_string(lam) + " gives no valid local shape");
      out.push_back({static_cast<int>(ell), static_cast<int>(m)});
      rest -= elementary_p1(static_cast<int>(ell), static_cast<int>(m)).p1;
      scale *= lam;
    }
    prev_deg += static_cast<long>(n) * d;
    offset += n;
  }
  std::sort(out.begin(), out.end());
  if (hilbert_table_from_local_data(out).polys != polys)
    throw Error(ErrorCode::RoundTripMismatch, "recovered local data " + render_local_data(out) + " does not reproduce the input");
  return out;
}

nlohmann::json to_json(const HilbertTable& t) {
  nlohmann::json j;
  j["v"] = 1;
  j["P"] = nlohmann::json::array();
  for (const auto& p : t.polys) j["P"].push_back(to_json(p));
  j["residual"] = nlohmann::json::array();
  for (const auto& [key, d] : t.residual) j["residual"].push_back({key.first, key.second, mpz_to_json(d)});
  j["essential"] = t.essential;
  return j;
}

std::string render_local_data(const LocalDataMultiset& data) {
  LocalDataMultiset d = data;
  std::sort(d.rbegin(), d.rend());
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (std::size_t t = 0; t < d.size();) {
    std::size_t u = t;
    while (u < d.size() && d[u] == d[t]) ++u;
    out << (first ? "" : ", ") << '(' << d[t].ell << ',' << d[t].m << ") x " << (u - t);
    first = false;
    t = u;
  }
  out << '}';
  return out.str();
}

}  // namespace grapes
