#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "grapes/graph.hpp"

namespace grapes::testing {

inline std::string data_path(const std::string& name) { return std::string(GRAPES_TEST_DATA) + "/" + name; }

inline GrapeGraph load(const std::string& name) { return load_grape(data_path(name + ".grape")); }

// Every .grape file in tests/data, sorted by name.
inline std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(GRAPES_TEST_DATA))
    if (e.path().extension() == ".grape") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

// Pascal-triangle binomial, independent of the library's binom.
inline mpz_class pascal(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  std::vector<mpz_class> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;
  for (long r = 1; r <= n; ++r)
    for (long c = std::min(r, k); c >= 1; --c) row[c] += row[c - 1];
  return row[k];
}

// Dense Gaussian elimination over Q.
inline std::size_t dense_rank(std::vector<std::vector<mpq_class>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      mpq_class f = a[r][c] / a[rank][c];
      for (std::size_t t = c; t < cols; ++t) a[r][t] -= f * a[rank][t];
    }
    ++rank;
  }
  return rank;
}

}  // namespace grapes::testing
