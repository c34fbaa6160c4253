#include "grapes/exactla.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numeric>

#include "grapes/errors.hpp"

namespace grapes {

FieldSpec FieldSpec::prime(std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || p >= (std::uint64_t{1} << 62))
    throw Error(ErrorCode::InvalidField, "prime field needs an odd prime below 2^62, got " + std::to_string(p));
  mpz_class z(std::to_string(p));
  if (mpz_probab_prime_p(z.get_mpz_t(), 40) == 0) throw Error(ErrorCode::InvalidField, std::to_string(p) + " is not prime");
  return FieldSpec(p);
}

FieldSpec FieldSpec::parse(std::string_view text) {
  if (text == "q" || text == "Q") return rationals();
  if (text.size() > 2 && (text.substr(0, 2) == "p:" || text.substr(0, 2) == "P:")) {
    std::uint64_t p = 0;
    auto digits = text.substr(2);
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (res.ec == std::errc() && res.ptr == digits.data() + digits.size()) return prime(p);
  }
  throw Error(ErrorCode::InvalidField, "field must be 'q' or 'p:<prime>', got '" + std::string(text) + "'");
}

std::string FieldSpec::name() const { return is_rational() ? "q" : "p:" + std::to_string(p_); }

void SparseMatrix::add(std::size_t row, std::size_t col, const mpq_class& value) {
  if (row >= rows_ || col >= cols_) throw Error(ErrorCode::DimensionMismatch, "entry outside matrix bounds");
  if (value == 0) return;
  entries_.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col), value});
}

void SparseMatrix::canonicalize() {
  std::sort(entries_.begin(), entries_.end(),
            [](const MatrixEntry& a, const MatrixEntry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  std::vector<MatrixEntry> out;
  out.reserve(entries_.size());
  for (auto& e : entries_) {
    if (!out.empty() && out.back().row == e.row && out.back().col == e.col)
      out.back().value += e.value;
    else {
      if (!out.empty() && out.back().value == 0) out.pop_back();
      out.push_back(std::move(e));
    }
  }
  if (!out.empty() && out.back().value == 0) out.pop_back();
  entries_ = std::move(out);
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  t.entries_.reserve(entries_.size());
  for (const auto& e : entries_) t.entries_.push_back({e.col, e.row, e.value});
  t.canonicalize();
  return t;
}

SparseMatrix SparseMatrix::hconcat(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "row counts differ: " + std::to_string(a.rows_) + " vs " + std::to_string(b.rows_));
  SparseMatrix m(a.rows_, a.cols_ + b.cols_);
  m.entries_ = a.entries_;
  for (const auto& e : b.entries_)
    m.entries_.push_back({e.row, static_cast<std::uint32_t>(e.col + a.cols_), e.value});
  m.canonicalize();
  return m;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ");
  std::vector<std::vector<const MatrixEntry*>> by_row(o.rows_);
  for (const auto& e : o.entries_) by_row[e.row].push_back(&e);
  SparseMatrix out(rows_, o.cols_);
  for (const auto& e : entries_)
    for (const MatrixEntry* f : by_row[e.col]) out.entries_.push_back({e.row, f->col, e.value * f->value});
  out.canonicalize();
  return out;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const MatrixEntry& e) { return e.value == 0; });
}

void SparseMatrix::write_matrix_market(std::ostream& out) const {
  bool integral = std::all_of(entries_.begin(), entries_.end(), [](const MatrixEntry& e) { return e.value.get_den() == 1; });
  out << "%%MatrixMarket matrix coordinate integer general\n";
  if (!integral) out << "% entries are exact rationals written as num/den\n";
  out << rows_ << ' ' << cols_ << ' ' << entries_.size() << '\n';
  for (const auto& e : entries_) out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value.get_str() << '\n';
}

namespace {

struct Overflow {};

// Integer fraction-free arithmetic on int64 with overflow detection.
struct SmallInt {
  using T = std::int64_t;
  static bool is_zero(T x) { return x == 0; }
  static bool is_unit(T x) { return x == 1 || x == -1; }
  static T mul(T a, T b) {
    T r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static T sub(T a, T b) {
    T r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static T gcd(T a, T b) { return std::gcd(a, b); }
  static T div(T a, T b) { return a / b; }
};

struct BigInt {
  using T = mpz_class;
  static bool is_zero(const T& x) { return x == 0; }
  static bool is_unit(const T& x) { return x == 1 || x == -1; }
  static T mul(const T& a, const T& b) { return a * b; }
  static T sub(const T& a, const T& b) { return a - b; }
  static T gcd(const T& a, const T& b) {
    T r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
  }
  static T div(const T& a, const T& b) {
    T r;
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
  }
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

template <class T>
using Row = std::vector<std::pair<std::uint32_t, T>>;

// Right-looking sparse elimination. Rows are taken in order of fewest nonzeros,
// and the pivot inside a row is the entry whose column is sparsest (unit entries
// preferred), which approximates the Markowitz rule.
template <class T, class Combine, class IsUnit>
std::size_t eliminate(std::vector<Row<T>> rows, std::size_t ncols, Combine combine, IsUnit is_unit) {
  const std::size_t nrows = rows.size();
  std::vector<std::vector<std::uint32_t>> col_rows(ncols);
  std::vector<std::uint32_t> col_count(ncols, 0);
  std::vector<char> alive(nrows, 1);
  std::size_t max_nnz = 0;
  for (std::size_t r = 0; r < nrows; ++r) {
    for (const auto& [c, v] : rows[r]) {
      col_rows[c].push_back(static_cast<std::uint32_t>(r));
      ++col_count[c];
    }
    max_nnz = std::max(max_nnz, rows[r].size());
  }
  std::vector<std::vector<std::uint32_t>> buckets(max_nnz + 1);
  for (std::size_t r = 0; r < nrows; ++r) {
    if (rows[r].empty())
      alive[r] = 0;
    else
      buckets[rows[r].size()].push_back(static_cast<std::uint32_t>(r));
  }
  auto push = [&](std::uint32_t r) {
    const std::size_t n = rows[r].size();
    if (n >= buckets.size()) buckets.resize(n + 1);
    buckets[n].push_back(r);
  };

  std::size_t rank = 0;
  std::size_t minb = 1;
  Row<T> merged;
  while (true) {
    while (minb < buckets.size() && buckets[minb].empty()) ++minb;
    if (minb >= buckets.size()) break;
    const std::uint32_t r = buckets[minb].back();
    buckets[minb].pop_back();
    if (!alive[r] || rows[r].size() != minb) continue;

    const Row<T>& prow = rows[r];
    std::size_t best = 0;
    for (std::size_t t = 1; t < prow.size(); ++t) {
      const auto cb = col_count[prow[best].first], ct = col_count[prow[t].first];
      if (ct < cb || (ct == cb && is_unit(prow[t].second) && !is_unit(prow[best].second))) best = t;
    }
    const std::uint32_t pc = prow[best].first;
    const T pv = prow[best].second;

    std::vector<std::uint32_t> targets;
    targets.swap(col_rows[pc]);
    for (std::uint32_t r2 : targets) {
      if (r2 == r || !alive[r2]) continue;
      Row<T>& row2 = rows[r2];
      auto it = std::lower_bound(row2.begin(), row2.end(), pc, [](const auto& e, std::uint32_t c) { return e.first < c; });
      if (it == row2.end() || it->first != pc) continue;
      const T a2 = it->second;
      merged.clear();
      combine(row2, prow, pv, a2, merged, [&](std::uint32_t c, int delta) {
        if (delta > 0) {
          ++col_count[c];
          col_rows[c].push_back(r2);
        } else {
          --col_count[c];
        }
      });
      row2.swap(merged);
      if (row2.empty())
        alive[r2] = 0;
      else {
        push(r2);
        minb = std::min(minb, row2.size());
      }
    }
    alive[r] = 0;
    for (const auto& [c, v] : prow) --col_count[c];
    ++rank;
    Row<T>().swap(rows[r]);
  }
  return rank;
}

// Fraction-free update: row2 := (p/g) row2 - (a2/g) prow, content removed.
template <class Ops>
struct IntegerCombine {
  using T = typename Ops::T;
  template <class Notify>
  void operator()(const Row<T>& row2, const Row<T>& prow, const T& p, const T& a2, Row<T>& out, Notify notify) const {
    T g = Ops::gcd(p, a2);
    T s2 = Ops::div(p, g);  // multiplier for row2
    T s1 = Ops::div(a2, g);  // multiplier for prow
    std::size_t i = 0, j = 0;
    while (i < row2.size() || j < prow.size()) {
      if (j == prow.size() || (i < row2.size() && row2[i].first < prow[j].first)) {
        out.emplace_back(row2[i].first, Ops::mul(row2[i].second, s2));
        ++i;
      } else if (i == row2.size() || prow[j].first < row2[i].first) {
        out.emplace_back(prow[j].first, Ops::sub(T(0), Ops::mul(prow[j].second, s1)));
        notify(prow[j].first, +1);
        ++j;
      } else {
        T v = Ops::sub(Ops::mul(row2[i].second, s2), Ops::mul(prow[j].second, s1));
        if (Ops::is_zero(v))
          notify(row2[i].first, -1);
        else
          out.emplace_back(row2[i].first, v);
        ++i;
        ++j;
      }
    }
    if (out.empty() || (Ops::is_unit(s2) && Ops::is_unit(s1))) return;
    T content = 0;
    for (const auto& e : out) {
      content = Ops::gcd(content, e.second);
      if (Ops::is_unit(content)) return;
    }
    if (content < 0) content = -content;
    if (!Ops::is_unit(content) && !Ops::is_zero(content))
      for (auto& e : out) e.second = Ops::div(e.second, content);
  }
};

struct ModCombine {
  std::uint64_t p;
  template <class Notify>
  void operator()(const Row<std::uint64_t>& row2, const Row<std::uint64_t>& prow, std::uint64_t pv, std::uint64_t a2,
                  Row<std::uint64_t>& out, Notify notify) const {
    const std::uint64_t f = mulmod(a2, powmod(pv, p - 2, p), p);  // row2 -= f * prow
    std::size_t i = 0, j = 0;
    while (i < row2.size() || j < prow.size()) {
      if (j == prow.size() || (i < row2.size() && row2[i].first < prow[j].first)) {
        out.push_back(row2[i++]);
      } else if (i == row2.size() || prow[j].first < row2[i].first) {
        out.emplace_back(prow[j].first, (p - mulmod(f, prow[j].second, p)) % p);
        notify(prow[j].first, +1);
        ++j;
      } else {
        std::uint64_t sub = mulmod(f, prow[j].second, p);
        std::uint64_t v = row2[i].second >= sub ? row2[i].second - sub : row2[i].second + (p - sub);
        if (v == 0)
          notify(row2[i].first, -1);
        else
          out.emplace_back(row2[i].first, v);
        ++i;
        ++j;
      }
    }
  }
};

// Groups entries into rows, merging duplicates; each row scaled to integers.
std::vector<Row<mpz_class>> integer_rows(const SparseMatrix& m) {
  std::vector<std::vector<std::pair<std::uint32_t, mpq_class>>> raw(m.rows());
  for (const auto& e : m.entries()) raw[e.row].emplace_back(e.col, e.value);
  std::vector<Row<mpz_class>> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto& src = raw[r];
    std::sort(src.begin(), src.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::uint32_t, mpq_class>> merged;
    for (auto& e : src) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(std::move(e));
    }
    mpz_class den = 1;
    for (const auto& e : merged)
      if (e.second != 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.second.get_den_mpz_t());
    for (const auto& e : merged) {
      if (e.second == 0) continue;
      mpq_class scaled = e.second * den;
      rows[r].emplace_back(e.first, scaled.get_num());
    }
  }
  return rows;
}

}  // namespace

std::size_t rank(const SparseMatrix& m, const FieldSpec& f) {
  if (m.nonzeros() > kMaxRankNonzeros)
    throw Error(ErrorCode::ResourceLimit, "matrix has " + std::to_string(m.nonzeros()) + " nonzeros");
  auto rows = integer_rows(m);
  auto unit_mpz = [](const mpz_class& x) { return x == 1 || x == -1; };
  if (!f.is_rational()) {
    const std::uint64_t p = f.characteristic();
    mpz_class pz(std::to_string(p));
    std::vector<Row<std::uint64_t>> mod(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (const auto& [c, v] : rows[r]) {
        mpz_class x;
        mpz_fdiv_r(x.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t());
        if (x != 0) mod[r].emplace_back(c, std::stoull(x.get_str()));
      }
    return eliminate<std::uint64_t>(std::move(mod), m.cols(), ModCombine{p}, [](std::uint64_t v) { return v == 1; });
  }
  bool small = true;
  for (const auto& row : rows)
    for (const auto& [c, v] : row)
      if (!v.fits_slong_p()) small = false;
  if (small) {
    std::vector<Row<std::int64_t>> s(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (const auto& [c, v] : rows[r]) s[r].emplace_back(c, v.get_si());
    try {
      return eliminate<std::int64_t>(std::move(s), m.cols(), IntegerCombine<SmallInt>{},
                                     [](std::int64_t v) { return v == 1 || v == -1; });
    } catch (const Overflow&) {
      // fall through to arbitrary precision
    }
  }
  return eliminate<mpz_class>(std::move(rows), m.cols(), IntegerCombine<BigInt>{}, unit_mpz);
}

std::size_t rank_of_span_mod(const SparseMatrix& z, const SparseMatrix& b, const FieldSpec& f) {
  if (z.rows() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "Z has " + std::to_string(z.rows()) + " rows, B has " + std::to_string(b.rows()));
  return rank(SparseMatrix::hconcat(z, b), f) - rank(b, f);
}

}  // namespace grapes
