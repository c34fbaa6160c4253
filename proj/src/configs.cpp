#include "grapes/configs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "grapes/binpoly.hpp"
#include "grapes/errors.hpp"

namespace grapes {

namespace {

bool wants(TypeFilter f, int type) {
  return f == TypeFilter::Both || (f == TypeFilter::One && type == 1) || (f == TypeFilter::Two && type == 2);
}

// All 0/1 vectors of length n with `ones` ones, lexicographic (0 < 1).
void for_each_subset(int n, int ones, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> v(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (left > n - pos) return;
    if (pos == n) {
      fn(v);
      return;
    }
    v[pos] = 0;
    rec(pos + 1, left);
    if (left > 0) {
      v[pos] = 1;
      rec(pos + 1, left - 1);
      v[pos] = 0;
    }
  };
  rec(0, ones);
}

// All nonnegative vectors of length n summing to total, lexicographic.
void for_each_composition(int n, long total, const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> v(static_cast<std::size_t>(n), 0);
  std::function<void(int, long)> rec = [&](int pos, long left) {
    if (pos == n - 1) {
      v[pos] = left;
      fn(v);
      return;
    }
    for (long x = 0; x <= left; ++x) {
      v[pos] = x;
      rec(pos + 1, left - x);
    }
  };
  if (n == 0) {
    if (total == 0) fn(v);
    return;
  }
  rec(0, total);
}

// Positive vectors of length n with sum exactly `total`, lexicographic.
void for_each_positive(int n, long total, const std::function<void(const std::vector<long>&)>& fn) {
  if (total < n) return;
  for_each_composition(n, total - n, [&](const std::vector<long>& v) {
    std::vector<long> w(v);
    for (auto& x : w) ++x;
    fn(w);
  });
}

std::vector<std::pair<int, int>> half_edges_of(const ElemShape& s) {
  std::vector<std::pair<int, int>> out;
  for (int r = 1; r <= s.slots(); ++r) {
    out.emplace_back(r, 1);
    if (s.is_loop(r)) out.emplace_back(r, 2);
  }
  return out;
}

template <class V>
bool has_later(const V& a, int r) {
  for (std::size_t s = static_cast<std::size_t>(r); s < a.size(); ++s)
    if (a[s] >= 1) return true;
  return false;
}

std::string vertex_label(const GrapeGraph& g, VertexId v) { return std::to_string(g.labels()[v]); }

}  // namespace

int ElemSHE::size() const { return std::accumulate(b.begin(), b.end(), 0); }
long ElemHE::size() const { return std::accumulate(a.begin(), a.end(), 0L); }
int GrapeSHE::size() const { return std::accumulate(j.begin(), j.end(), 0); }

void check_shape(int ell, int m) {
  if (ell < 0 || m < 0) throw Error(ErrorCode::InvalidShape, "negative shape");
  if (m >= 1 && 2 * ell + m >= 3) return;
  if (m == 0 && ell >= 1) return;
  throw Error(ErrorCode::InvalidShape,
              "shape (" + std::to_string(ell) + "," + std::to_string(m) + ") is not an elementary grape");
}

bool is_valid_she(const ElemSHE& x) {
  const ElemShape& s = x.shape;
  const int L = s.slots();
  const int r = x.h.slot;
  if (static_cast<int>(x.b.size()) != L || r < 1 || r > L) return false;
  for (int v : x.b)
    if (v != 0 && v != 1) return false;
  auto b = [&](int slot) { return x.b[static_cast<std::size_t>(slot - 1)]; };
  if (x.h.which == 2 && !s.is_loop(r)) return false;
  if (s.m == 0 && s.ell == 1) return x.h.which == 2 && b(1) == 0;
  if (x.h.which == 1) return b(1) == 0 && 1 < r && r < L && b(r) == 1 && has_later(x.b, r);
  if (x.h.which != 2) return false;
  if (s.m == 0) return b(r) == 1 && b(r == 1 ? L : r - 1) == 0;
  return b(1) == 0 && b(r) == 1;
}

bool is_valid_he(const ElemHE& x) {
  const ElemShape& s = x.shape;
  const int L = s.slots();
  const int r = x.h.slot;
  if (static_cast<int>(x.a.size()) != L || r < 1 || r > L) return false;
  for (long v : x.a)
    if (v < 0) return false;
  auto a = [&](int slot) { return x.a[static_cast<std::size_t>(slot - 1)]; };
  if (x.h.which == 2 && !s.is_loop(r)) return false;
  if (s.m == 0 && s.ell == 1) return x.h.which == 2;
  if (x.h.which == 1) return 1 < r && r < L && a(r) >= 1 && has_later(x.a, r);
  return x.h.which == 2 && a(r) >= 1;
}

std::vector<ElemSHE> enum_she_elem(int ell, int m, int j, TypeFilter filter) {
  check_shape(ell, m);
  ElemShape shape{ell, m};
  std::vector<ElemSHE> out;
  if (j < 0) return out;
  for (auto [r, which] : half_edges_of(shape)) {
    if (!wants(filter, which)) continue;
    for_each_subset(shape.slots(), j, [&](const std::vector<int>& b) {
      ElemSHE x{shape, {r, which}, b};
      if (is_valid_she(x)) out.push_back(std::move(x));
    });
  }
  return out;
}

std::vector<ElemHE> enum_he_elem(int ell, int m, long k, TypeFilter filter) {
  check_shape(ell, m);
  ElemShape shape{ell, m};
  std::vector<ElemHE> out;
  if (k < 0) return out;
  for (auto [r, which] : half_edges_of(shape)) {
    if (!wants(filter, which)) continue;
    for_each_composition(shape.slots(), k, [&](const std::vector<long>& a) {
      ElemHE x{shape, {r, which}, a};
      if (is_valid_he(x)) out.push_back(std::move(x));
    });
  }
  return out;
}

int free_slot(const ElemSHE& she) {
  if (she.shape.m == 0 && she.h.which == 2) return she.h.slot == 1 ? she.shape.slots() : she.h.slot - 1;
  return 1;
}

std::vector<ElemHE> expand_she(const ElemSHE& she, long k) {
  if (!is_valid_she(she)) throw Error(ErrorCode::InvalidConfig, "not a standard configuration: " + render(she));
  const int j = she.size();
  if (j > k) throw Error(ErrorCode::SizeExceeded, "configuration size " + std::to_string(j) + " exceeds k=" + std::to_string(k));
  std::vector<int> support;
  for (int s = 1; s <= she.shape.slots(); ++s)
    if (she.b[static_cast<std::size_t>(s - 1)] == 1) support.push_back(s);
  const int f = free_slot(she);
  std::vector<ElemHE> out;
  for_each_positive(j + 1, k + 1, [&](const std::vector<long>& c) {
    std::vector<long> a(static_cast<std::size_t>(she.shape.slots()), 0);
    a[static_cast<std::size_t>(f - 1)] = c[0] - 1;
    for (int t = 0; t < j; ++t) a[static_cast<std::size_t>(support[t] - 1)] = c[static_cast<std::size_t>(t) + 1];
    out.push_back({she.shape, she.h, std::move(a)});
  });
  return out;
}

ElemSHE standardize(const ElemHE& he) {
  if (!is_valid_he(he)) throw Error(ErrorCode::InvalidConfig, "not an HE-configuration: " + render(he));
  ElemSHE she{he.shape, he.h, std::vector<int>(he.a.size(), 0)};
  for (std::size_t s = 0; s < he.a.size(); ++s) she.b[s] = he.a[s] >= 1 ? 1 : 0;
  she.b[static_cast<std::size_t>(free_slot(she) - 1)] = 0;
  return she;
}

mpz_class she_count_closed(int ell, int m, int j, int type) {
  check_shape(ell, m);
  if (type != 1 && type != 2) throw Error(ErrorCode::InvalidShape, "type must be 1 or 2");
  if (m == 0 && ell == 1) return (type == 2 && j == 0) ? 1 : 0;
  if (j <= 0) return 0;
  const long L = ell + m;
  if (type == 1) return (L - 2) * binom(L - 2, j - 1) - binom(L - 2, j);
  return ell * binom(L - 2, j - 1);
}

mpz_class he_count_closed(int ell, int m, long k, int type) {
  check_shape(ell, m);
  if (type != 1 && type != 2) throw Error(ErrorCode::InvalidShape, "type must be 1 or 2");
  if (k < 0) return 0;
  if (m == 0 && ell == 1) return type == 2 ? 1 : 0;
  const long L = ell + m;
  if (type == 1) return (L - 2) * binom(k + L - 2, L - 1) - binom(k + L - 2, L - 2) + 1;
  return ell * binom(k + L - 2, L - 1);
}

std::uint64_t she_count_enum(int ell, int m, int j, TypeFilter filter) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, std::uint64_t> cache;
  auto key = std::tuple(ell, m, j, static_cast<int>(filter));
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  std::uint64_t n = enum_she_elem(ell, m, j, filter).size();
  std::lock_guard lock(mu);
  cache.emplace(key, n);
  return n;
}

std::string render(const ElemSHE& x) {
  std::string out = "h" + std::to_string(x.h.which) + "(e" + std::to_string(x.h.slot) + ") b=";
  for (int v : x.b) out += static_cast<char>('0' + v);
  return out;
}

std::string render(const ElemHE& x) {
  std::string out = "h" + std::to_string(x.h.which) + "(e" + std::to_string(x.h.slot) + ") a=(";
  for (std::size_t s = 0; s < x.a.size(); ++s) out += (s ? "," : "") + std::to_string(x.a[s]);
  return out + ")";
}

namespace {

void require_grape(const GrapeGraph& g) {
  if (g.stem_edges().empty()) throw Error(ErrorCode::SingletonStem, "stem has no edge");
  if (essential_vertices(g).empty()) throw Error(ErrorCode::TrivialGraph, "graph has no essential vertex");
}

void for_each_subset_of(const std::vector<VertexId>& pool, std::size_t i,
                        const std::function<void(const std::vector<VertexId>&)>& fn) {
  std::vector<VertexId> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == i) {
      fn(cur);
      return;
    }
    for (std::size_t t = start; t + (i - cur.size()) <= pool.size(); ++t) {
      cur.push_back(pool[t]);
      rec(t + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

mpz_class count_she_grape(const GrapeGraph& g, std::size_t i, int j) {
  require_grape(g);
  auto ess = essential_vertices(g);
  if (i > ess.size() || j < 0) return 0;
  // f[c][s]: ways using c chosen vertices of total size s
  std::vector<std::vector<mpz_class>> f(i + 1, std::vector<mpz_class>(static_cast<std::size_t>(j) + 1, 0));
  f[0][0] = 1;
  for (VertexId v : ess) {
    const int ell = g.loops(v), m = g.stem_degree(v);
    for (std::size_t c = std::min(i, ess.size()); c-- > 0;)
      for (int s = j; s >= 0; --s) {
        if (f[c][s] == 0) continue;
        for (int jv = 1; s + jv <= j; ++jv) {
          std::uint64_t n = she_count_enum(ell, m, jv);
          if (n) f[c + 1][s + jv] += f[c][s] * mpz_class(std::to_string(n));
        }
      }
  }
  return f[i][j];
}

std::vector<GrapeSHE> enum_she_grape(const GrapeGraph& g, std::size_t i, int j) {
  require_grape(g);
  auto ess = essential_vertices(g);
  std::vector<GrapeSHE> out;
  if (i > ess.size() || j < 0) return out;
  for_each_subset_of(ess, i, [&](const std::vector<VertexId>& W) {
    const int n = static_cast<int>(W.size());
    auto visit = [&](const std::vector<long>& comp) {
      std::vector<std::vector<ElemSHE>> lists;
      for (int t = 0; t < n; ++t)
        lists.push_back(enum_she_elem(g.loops(W[t]), g.stem_degree(W[t]), static_cast<int>(comp[t])));
      std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
      for (const auto& l : lists)
        if (l.empty()) return;
      while (true) {
        GrapeSHE x;
        x.W = W;
        for (int t = 0; t < n; ++t) {
          x.j.push_back(static_cast<int>(comp[t]));
          x.local.push_back(lists[t][idx[t]]);
        }
        out.push_back(std::move(x));
        int t = n - 1;
        while (t >= 0 && ++idx[t] == lists[t].size()) idx[t--] = 0;
        if (t < 0) break;
      }
    };
    if (n == 0) {
      if (j == 0) out.push_back({});
      return;
    }
    for_each_positive(n, j, visit);
  });
  return out;
}

mpz_class count_he_grape(const GrapeGraph& g, std::size_t i, long k) {
  require_grape(g);
  mpz_class total = 0;
  long jmax = 0;
  for (VertexId v : essential_vertices(g)) jmax += g.loops(v) + g.stem_degree(v) - 1;
  for (long j = 0; j <= std::min(k, jmax); ++j) total += count_she_grape(g, i, static_cast<int>(j)) * binom(k, j);
  return total;
}

std::vector<GrapeHE> enum_he_grape(const GrapeGraph& g, std::size_t i, long k, std::uint64_t cap) {
  mpz_class total = count_he_grape(g, i, k);
  if (total > mpz_class(std::to_string(cap)))
    throw Error(ErrorCode::CapExceeded, total.get_str() + " configurations exceed the cap of " + std::to_string(cap));
  std::vector<GrapeHE> out;
  long jmax = 0;
  for (VertexId v : essential_vertices(g)) jmax += g.loops(v) + g.stem_degree(v) - 1;
  for (long j = 0; j <= std::min(k, jmax); ++j) {
    for (auto& she : enum_she_grape(g, i, static_cast<int>(j))) {
      // positive c of length j with sum <= k: append a slack entry and drop it
      for_each_positive(static_cast<int>(j) + 1, k + 1, [&](const std::vector<long>& c) {
        GrapeHE x{she, std::vector<long>(c.begin(), c.end() - 1), k};
        out.push_back(std::move(x));
      });
    }
  }
  return out;
}

std::string render(const GrapeSHE& x, const GrapeGraph& g) {
  std::ostringstream out;
  out << "W={";
  for (std::size_t t = 0; t < x.W.size(); ++t) out << (t ? "," : "") << vertex_label(g, x.W[t]);
  out << "} j={";
  for (std::size_t t = 0; t < x.W.size(); ++t) out << (t ? "," : "") << vertex_label(g, x.W[t]) << ':' << x.j[t];
  out << '}';
  for (std::size_t t = 0; t < x.W.size(); ++t) out << ' ' << vertex_label(g, x.W[t]) << ':' << render(x.local[t]);
  return out.str();
}

std::string render(const GrapeHE& x, const GrapeGraph& g) {
  std::string out = render(x.she, g) + " c=(";
  for (std::size_t t = 0; t < x.c.size(); ++t) out += (t ? "," : "") + std::to_string(x.c[t]);
  return out + ")";
}

}  // namespace grapes
