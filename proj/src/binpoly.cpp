#include "grapes/binpoly.hpp"

#include <algorithm>
#include <cctype>

#include "grapes/errors.hpp"

namespace grapes {

mpz_class binom(long n, long k) {
  if (n < 0) throw Error(ErrorCode::InvalidShape, "binomial with negative upper index");
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

BinPoly::BinPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

BinPoly BinPoly::constant(const mpz_class& c) { return BinPoly(std::vector<mpz_class>{c}); }

BinPoly BinPoly::basis(std::size_t j, const mpz_class& coeff) {
  std::vector<mpz_class> c(j + 1, 0);
  c[j] = coeff;
  return BinPoly(std::move(c));
}

void BinPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::optional<std::size_t> BinPoly::degree() const {
  if (coeffs_.empty()) return std::nullopt;
  return coeffs_.size() - 1;
}

BinPoly& BinPoly::operator+=(const BinPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
  trim();
  return *this;
}

BinPoly& BinPoly::operator-=(const BinPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
  trim();
  return *this;
}

BinPoly& BinPoly::operator*=(const mpz_class& s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

BinPoly BinPoly::operator-() const {
  BinPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

mpz_class eval(const BinPoly& p, unsigned long k) {
  mpz_class sum = 0;
  const auto& c = p.coefficients();
  for (std::size_t j = 0; j < c.size() && j <= k; ++j) sum += c[j] * binom(static_cast<long>(k), static_cast<long>(j));
  return sum;
}

// C(k+1, j+1) = C(k, j+1) + C(k, j)
BinPoly shift_plus(const BinPoly& p) {
  const auto& b = p.coefficients();
  if (b.empty()) return {};
  std::vector<mpz_class> c(b.size() + 1, 0);
  for (std::size_t j = 0; j < b.size(); ++j) {
    c[j] += b[j];
    c[j + 1] += b[j];
  }
  return BinPoly(std::move(c));
}

BinPoly conv(const BinPoly& p, const BinPoly& q) {
  const auto& a = p.coefficients();
  const auto& b = q.coefficients();
  if (a.empty() || b.empty()) return {};
  std::vector<mpz_class> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return BinPoly(std::move(c));
}

std::vector<mpq_class> to_monomial(const BinPoly& p) {
  const auto& b = p.coefficients();
  std::vector<mpq_class> out(b.size(), 0);
  // falling[t] = coefficients of k(k-1)...(k-j+1)
  std::vector<mpz_class> falling{1};
  mpz_class fact = 1;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (j > 0) {
      std::vector<mpz_class> next(falling.size() + 1, 0);
      for (std::size_t t = 0; t < falling.size(); ++t) {
        next[t + 1] += falling[t];
        next[t] -= falling[t] * static_cast<long>(j - 1);
      }
      falling = std::move(next);
      fact *= static_cast<long>(j);
    }
    for (std::size_t t = 0; t < falling.size(); ++t) out[t] += mpq_class(b[j] * falling[t], fact);
  }
  for (auto& x : out) x.canonicalize();
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

BinPoly from_monomial(std::span<const mpq_class> a) {
  const std::size_t n = a.size();
  // k^t = sum_j S(t, j) j! C(k, j)
  std::vector<mpq_class> b(n, 0);
  std::vector<mpz_class> stirling{1};  // row t of S(t, .)
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) {
      std::vector<mpz_class> next(t + 1, 0);
      for (std::size_t j = 1; j <= t; ++j) {
        mpz_class prev_j = j < stirling.size() ? stirling[j] : mpz_class(0);
        next[j] = prev_j * static_cast<long>(j) + stirling[j - 1];
      }
      stirling = std::move(next);
    }
    mpz_class fact = 1;
    for (std::size_t j = 0; j <= t; ++j) {
      if (j > 0) fact *= static_cast<long>(j);
      b[j] += a[t] * mpq_class(stirling[j] * fact);
    }
  }
  std::vector<mpz_class> out;
  for (auto& x : b) {
    x.canonicalize();
    if (x.get_den() != 1) throw Error(ErrorCode::InvalidShape, "polynomial is not integer-valued");
    out.push_back(x.get_num());
  }
  return BinPoly(std::move(out));
}

std::string to_text(const BinPoly& p) {
  const auto& c = p.coefficients();
  if (c.empty()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t jj = c.size(); jj-- > 0;) {
    const mpz_class& x = c[jj];
    if (x == 0) continue;
    const bool neg = x < 0;
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    mpz_class mag = abs(x);
    if (jj == 0)
      out += mag.get_str();
    else {
      if (mag != 1) out += mag.get_str() + "*";
      out += "C(k," + std::to_string(jj) + ")";
    }
  }
  return out;
}

BinPoly parse_binpoly(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto fail = [&](const std::string& why) -> BinPoly {
    throw Error(ErrorCode::Syntax, "bad polynomial '" + std::string(text) + "': " + why);
  };
  if (s.empty()) return fail("empty");
  std::size_t pos = 0;
  auto read_int = [&](std::string& digits) {
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) digits += s[pos++];
    return !digits.empty();
  };
  BinPoly result;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      return fail("expected + or -");
    }
    first = false;
    mpz_class coeff = 1;
    std::string digits;
    bool has_coeff = read_int(digits);
    if (has_coeff) coeff = mpz_class(digits);
    std::size_t j = 0;
    if (pos < s.size() && (s[pos] == '*' || s[pos] == 'C')) {
      if (s[pos] == '*') {
        if (!has_coeff) return fail("dangling '*'");
        ++pos;
      }
      if (s.compare(pos, 4, "C(k,") != 0) return fail("expected C(k,j)");
      pos += 4;
      std::string jd;
      if (!read_int(jd)) return fail("expected index");
      if (pos >= s.size() || s[pos] != ')') return fail("expected ')'");
      ++pos;
      j = std::stoul(jd);
    } else if (!has_coeff) {
      return fail("expected a term");
    }
    result += BinPoly::basis(j, coeff * sign);
  }
  return result;
}

nlohmann::json mpz_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class mpz_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw Error(ErrorCode::Syntax, "bad integer string");
    return z;
  }
  throw Error(ErrorCode::Syntax, "expected an integer");
}

nlohmann::json to_json(const BinPoly& p) {
  nlohmann::json coeffs = nlohmann::json::object();
  const auto& c = p.coefficients();
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != 0) coeffs[std::to_string(j)] = mpz_to_json(c[j]);
  return {{"binomial", coeffs}};
}

BinPoly binpoly_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("binomial") || !j.at("binomial").is_object())
    throw Error(ErrorCode::Syntax, "expected {\"binomial\": {...}}");
  BinPoly out;
  for (const auto& [key, value] : j.at("binomial").items()) {
    std::size_t idx = 0;
    try {
      idx = std::stoul(key);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Syntax, "bad binomial index '" + key + "'");
    }
    out += BinPoly::basis(idx, mpz_from_json(value));
  }
  return out;
}

}  // namespace grapes
