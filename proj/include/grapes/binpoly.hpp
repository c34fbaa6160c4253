#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace grapes {

// C(n, k) with the combinatorial convention: 0 when k < 0 or k > n. n must be >= 0.
mpz_class binom(long n, long k);

// Integer polynomial in the basis {C(k, j)}; coefficients are trimmed of trailing zeros.
class BinPoly {
 public:
  BinPoly() = default;
  explicit BinPoly(std::vector<mpz_class> coeffs);
  static BinPoly constant(const mpz_class& c);
  static BinPoly basis(std::size_t j, const mpz_class& coeff = 1);

  const std::vector<mpz_class>& coefficients() const { return coeffs_; }
  mpz_class coeff(std::size_t j) const { return j < coeffs_.size() ? coeffs_[j] : mpz_class(0); }
  bool is_zero() const { return coeffs_.empty(); }
  // nullopt for the zero polynomial.
  std::optional<std::size_t> degree() const;
  // b-leading coefficient; zero for the zero polynomial.
  mpz_class leading() const { return is_zero() ? mpz_class(0) : coeffs_.back(); }

  BinPoly& operator+=(const BinPoly& o);
  BinPoly& operator-=(const BinPoly& o);
  BinPoly& operator*=(const mpz_class& s);
  friend BinPoly operator+(BinPoly a, const BinPoly& b) { return a += b; }
  friend BinPoly operator-(BinPoly a, const BinPoly& b) { return a -= b; }
  friend BinPoly operator*(BinPoly a, const mpz_class& s) { return a *= s; }
  friend BinPoly operator*(const mpz_class& s, BinPoly a) { return a *= s; }
  BinPoly operator-() const;
  bool operator==(const BinPoly& o) const { return coeffs_ == o.coeffs_; }

 private:
  void trim();
  std::vector<mpz_class> coeffs_;
};

mpz_class eval(const BinPoly& p, unsigned long k);
BinPoly shift_plus(const BinPoly& p);
BinPoly conv(const BinPoly& p, const BinPoly& q);

// Power-basis coefficients a_0, a_1, ... (trimmed; empty for zero).
std::vector<mpq_class> to_monomial(const BinPoly& p);
// Throws Error(InvalidShape) unless the polynomial is integer-valued.
BinPoly from_monomial(std::span<const mpq_class> a);

std::string to_text(const BinPoly& p);
BinPoly parse_binpoly(std::string_view text);
nlohmann::json to_json(const BinPoly& p);
BinPoly binpoly_from_json(const nlohmann::json& j);
nlohmann::json mpz_to_json(const mpz_class& z);
mpz_class mpz_from_json(const nlohmann::json& j);

}  // namespace grapes
