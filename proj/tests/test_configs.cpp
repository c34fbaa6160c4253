#include <doctest.h>

#include <map>
#include <set>

#include "grapes/configs.hpp"
#include "grapes/errors.hpp"
#include "grapes/hilbert.hpp"
#include "support.hpp"

using namespace grapes;
using grapes::testing::load;
using grapes::testing::pascal;

namespace {

// Shapes with ell + m <= limit covered by the closed forms.
std::vector<std::pair<int, int>> shapes(int limit) {
  std::vector<std::pair<int, int>> out;
  for (int ell = 0; ell <= limit; ++ell)
    for (int m = 0; ell + m <= limit; ++m) {
      if (m == 0 ? ell >= 1 : 2 * ell + m >= 3) out.emplace_back(ell, m);
    }
  return out;
}

}  // namespace

TEST_SUITE("configs") {
  TEST_CASE("documented enumerations") {
    auto x = enum_she_elem(0, 3, 2);
    REQUIRE(x.size() == 1);
    CHECK(render(x[0]) == "h1(e2) b=011");

    auto y = enum_she_elem(3, 4, 1);
    CHECK(y.size() == 3);
    for (const auto& s : y) CHECK(s.type() == 2);

    CHECK(enum_she_elem(4, 0, 2, TypeFilter::Two).size() == 8);
    auto c = enum_she_elem(1, 0, 0);
    REQUIRE(c.size() == 1);
    CHECK(render(c[0]) == "h2(e1) b=0");

    auto h = enum_he_elem(0, 3, 2);
    REQUIRE(h.size() == 1);
    CHECK(render(h[0]) == "h1(e2) a=(0,1,1)");
    CHECK(enum_he_elem(3, 4, 1).size() == 3);
    for (long k = 0; k <= 6; ++k) {
      auto circ = enum_he_elem(1, 0, k);
      REQUIRE(circ.size() == 1);
      CHECK(circ[0].a == std::vector<long>{k});
    }
  }

  TEST_CASE("closed counts match enumeration") {
    for (auto [ell, m] : shapes(7)) {
      for (int type = 1; type <= 2; ++type) {
        const TypeFilter tf = type == 1 ? TypeFilter::One : TypeFilter::Two;
        for (int j = 1; j <= 8; ++j) CHECK(she_count_closed(ell, m, j, type) == enum_she_elem(ell, m, j, tf).size());
        for (long k = 0; k <= 8; ++k) CHECK(he_count_closed(ell, m, k, type) == enum_he_elem(ell, m, k, tf).size());
      }
      // j = 0: only the circle has a standard configuration
      CHECK(enum_she_elem(ell, m, 0).size() == (ell == 1 && m == 0 ? 1u : 0u));
    }
  }

  TEST_CASE("HE counts are binomial sums of SHE counts") {
    for (auto [ell, m] : shapes(7))
      for (long k = 0; k <= 8; ++k) {
        mpz_class s = 0;
        for (int j = 0; j <= ell + m; ++j) s += mpz_class(static_cast<unsigned long>(enum_she_elem(ell, m, j).size())) * pascal(k, j);
        CHECK(s == enum_he_elem(ell, m, k).size());
      }
  }

  TEST_CASE("type split") {
    for (auto [ell, m] : shapes(6))
      for (int j = 0; j <= 6; ++j)
        CHECK(enum_she_elem(ell, m, j, TypeFilter::One).size() + enum_she_elem(ell, m, j, TypeFilter::Two).size() ==
              enum_she_elem(ell, m, j).size());
  }

  TEST_CASE("expansion examples") {
    ElemSHE s = enum_she_elem(0, 3, 2)[0];
    auto e2 = expand_she(s, 2);
    REQUIRE(e2.size() == 1);
    CHECK(e2[0].a == std::vector<long>{0, 1, 1});
    CHECK(expand_she(s, 3).size() == 3);
    CHECK_THROWS_AS(expand_she(s, 1), Error);
    ElemSHE circ = enum_she_elem(1, 0, 0)[0];
    auto ce = expand_she(circ, 4);
    REQUIRE(ce.size() == 1);
    CHECK(ce[0].a == std::vector<long>{4});
  }

  TEST_CASE("expansion partitions the HE-configurations") {
    for (auto [ell, m] : shapes(7))
      for (long k = 0; k <= 8; ++k) {
        std::map<ElemHE, int> seen;
        for (int j = 0; j <= std::min<long>(k, ell + m); ++j)
          for (const auto& s : enum_she_elem(ell, m, j)) {
            auto img = expand_she(s, k);
            CHECK(img.size() == pascal(k, j));
            for (const auto& h : img) {
              ++seen[h];
              CHECK(standardize(h) == s);
            }
          }
        auto all = enum_he_elem(ell, m, k);
        CHECK(seen.size() == all.size());
        for (const auto& h : all) CHECK(seen[h] == 1);
      }
  }

  TEST_CASE("invalid shapes") {
    CHECK_THROWS_AS(enum_she_elem(0, 2, 1), Error);
    CHECK_THROWS_AS(enum_she_elem(0, 0, 1), Error);
    CHECK_NOTHROW(enum_she_elem(1, 1, 1));
  }

  TEST_CASE("grape-level documented counts") {
    GrapeGraph d = load("dumbbell");
    CHECK(count_she_grape(d, 2, 2) == 1);
    CHECK(enum_she_grape(d, 2, 2).size() == 1);
    CHECK(count_she_grape(d, 1, 1) == 2);
    CHECK(count_he_grape(d, 2, 2) == 1);
    CHECK(count_he_grape(d, 1, 3) == 6);
    GrapeGraph p = load("paper_example");
    CHECK(count_she_grape(p, 0, 0) == 1);
    for (int j = 1; j <= 4; ++j) CHECK(count_she_grape(p, 0, j) == 0);
    for (long k = 0; k <= 5; ++k) CHECK(count_he_grape(p, 0, k) == 1);
    CHECK_THROWS_AS(count_she_grape(load("bouquet_2"), 1, 1), Error);
    CHECK_THROWS_AS(count_she_grape(load("interval"), 1, 1), Error);
  }

  TEST_CASE("grape-level enumeration agrees with counts") {
    for (const char* name : {"dumbbell", "elem_1_3", "random_1", "random_2", "pair_star"}) {
      GrapeGraph g = load(name);
      const std::size_t ess = essential_vertices(g).size();
      for (std::size_t i = 0; i <= ess; ++i) {
        for (int j = 0; j <= 6; ++j) {
          auto xs = enum_she_grape(g, i, j);
          CHECK(count_she_grape(g, i, j) == xs.size());
          std::set<std::string> distinct;
          for (const auto& x : xs) distinct.insert(render(x, g));
          CHECK(distinct.size() == xs.size());
        }
        for (long k = 0; k <= 4; ++k) {
          auto hs = enum_he_grape(g, i, k, 1'000'000);
          CHECK(count_he_grape(g, i, k) == hs.size());
          CHECK(count_he_grape(g, i, k) == hilbert_table(g).value(i, k));
        }
      }
    }
    CHECK_THROWS_AS(enum_he_grape(load("dumbbell"), 1, 5, 3), Error);
  }

  TEST_CASE("grape rendering") {
    GrapeGraph d = load("dumbbell");
    auto xs = enum_he_grape(d, 2, 2, 10);
    REQUIRE(xs.size() == 1);
    CHECK(render(xs[0], d) == "W={0,1} j={0:1,1:1} 0:h2(e2) b=01 1:h2(e2) b=01 c=(1,1)");
  }

  TEST_CASE("counts are invariant under relabeling, re-rooting and loop order") {
    GrapeGraph g = load("random_3");
    std::vector<VertexId> perm{4, 2, 0, 3, 1};
    GrapeGraph r = relabel(g, perm);
    GrapeGraph rooted = GrapeGraph::build(g.vertex_count(), g.stem_edges(), g.loop_counts(),
                                          OrientedRoot{2, *g.find_edge(2, 3)});
    for (std::size_t i = 0; i <= 3; ++i)
      for (int j = 0; j <= 6; ++j) {
        CHECK(count_she_grape(r, i, j) == count_she_grape(g, i, j));
        CHECK(count_she_grape(rooted, i, j) == count_she_grape(g, i, j));
        CHECK(enum_she_grape(rooted, i, j).size() == enum_she_grape(g, i, j).size());
      }
    GrapeGraph a = parse_grape("edge 0 1\nedge 1 2\nloops 0 1\nloops 2 2\n");
    GrapeGraph b = parse_grape("loops 2 2\nloops 0 1\nedge 1 2\nedge 0 1\n");
    for (std::size_t i = 0; i <= 2; ++i)
      for (long k = 0; k <= 5; ++k) CHECK(enum_he_grape(a, i, k, 100000).size() == enum_he_grape(b, i, k, 100000).size());
  }
}
