#include <doctest.h>

#include "grapes/errors.hpp"
#include "grapes/hilbert.hpp"
#include "grapes/swiatkowski.hpp"
#include "support.hpp"

using namespace grapes;
using grapes::testing::load;
using grapes::testing::pascal;

namespace {

const FieldSpec Q = FieldSpec::rationals();

// Brute-force slice dimension: every state vector, then compositions of the rest.
mpz_class brute_dimension(const PreparedGraph& pg, int i, long k) {
  const std::size_t V = pg.vertex_count(), E = pg.edge_count();
  mpz_class total = 0;
  std::vector<int> st(V, 0);  // 0 empty, 1 vertex, 2 half-edge
  std::function<void(std::size_t, int, long, mpz_class)> rec = [&](std::size_t v, int h, long w, mpz_class ways) {
    if (v == V) {
      if (h == i && w <= k) total += ways * pascal(k - w + static_cast<long>(E) - 1, static_cast<long>(E) - 1);
      return;
    }
    rec(v + 1, h, w, ways);
    rec(v + 1, h, w + 1, ways);
    if (!pg.half_edges[v].empty()) rec(v + 1, h + 1, w + 1, ways * static_cast<unsigned long>(pg.half_edges[v].size()));
  };
  rec(0, 0, 0, 1);
  return total;
}

}  // namespace

TEST_SUITE("swiatkowski") {
  TEST_CASE("prepare") {
    PreparedGraph c = prepare(load("circle"));
    CHECK(c.vertex_count() == 2);
    CHECK(c.edge_count() == 2);
    CHECK(c.edges[0] == std::pair<VertexId, VertexId>{0, 1});
    CHECK(c.edges[1] == std::pair<VertexId, VertexId>{1, 0});
    PreparedGraph d = prepare(load("dumbbell"));
    CHECK(d.vertex_count() == 4);
    CHECK(d.edge_count() == 5);
    PreparedGraph s = prepare(load("elem_0_3"));
    CHECK(s.vertex_count() == 4);
    CHECK(s.edge_count() == 3);
    for (const auto& [a, b] : d.edges) CHECK(a != b);
  }

  TEST_CASE("slice dimensions") {
    PreparedGraph s = prepare(load("elem_0_3"));
    CHECK(slice_dimension(s, 0, 2) == 24);
    CHECK(slice_dimension(s, 1, 2) == 36);
    CHECK(slice_basis(s, 1, 2).size() == 36);
    CHECK(slice_dimension(prepare(load("paper_example")), 0, 0) == 1);
    for (const char* name : {"dumbbell", "bouquet_3", "random_1"}) {
      PreparedGraph pg = prepare(load(name));
      for (int i = 0; i <= 3; ++i)
        for (long k = 0; k <= 4; ++k) {
          CHECK(slice_dimension(pg, i, k) == brute_dimension(pg, i, k));
          SliceBasis b = slice_basis(pg, i, k);
          CHECK(b.size() == brute_dimension(pg, i, k));
          for (std::size_t t = 1; t < b.size(); ++t) {
            auto x = b.element(t - 1), y = b.element(t);
            CHECK(std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end()));
          }
        }
    }
    CHECK_THROWS_AS(slice_basis(prepare(load("paper_example")), 2, 4, 1000), Error);
  }

  TEST_CASE("boundary of a circle generator") {
    PreparedGraph pg = prepare(load("circle"));
    SliceBasis src = slice_basis(pg, 1, 1), dst = slice_basis(pg, 0, 1);
    Element x{2, 0, 0, 0};  // half-edge on e' at v, exponents zero
    auto col = src.find(x);
    REQUIRE(col);
    SparseMatrix m = boundary_matrix(pg, src, dst);
    int count = 0;
    for (const auto& e : m.entries())
      if (e.col == *col) {
        ++count;
        Element y(dst.element(e.row).begin(), dst.element(e.row).end());
        if (y == Element{0, 0, 1, 0}) CHECK(e.value == 1);
        else if (y == Element{1, 0, 0, 0}) CHECK(e.value == -1);
        else FAIL("unexpected term");
      }
    CHECK(count == 2);
  }

  TEST_CASE("star leg boundaries") {
    PreparedGraph pg = prepare(load("elem_0_3"));
    for (std::size_t e = 0; e < 3; ++e) {
      Chain c{1, 1, {}};
      Element x(pg.width(), 0);
      x[0] = static_cast<std::uint16_t>(2 + pg.half_edge_index(0, e));
      c.add(x, 1);
      Chain b = boundary(pg, c);
      Element plus(pg.width(), 0), minus(pg.width(), 0);
      plus[pg.vertex_count() + e] = 1;
      minus[0] = 1;
      CHECK(b.terms.size() == 2);
      CHECK(b.terms[plus] == 1);
      CHECK(b.terms[minus] == -1);
    }
  }

  TEST_CASE("d squared vanishes and bidegrees are respected") {
    for (const char* name : {"dumbbell", "elem_2_2", "bouquet_3", "random_2", "circle"}) {
      PreparedGraph pg = prepare(load(name));
      for (long k = 0; k <= 4; ++k)
        for (int i = 2; i <= 4; ++i) {
          SparseMatrix a = boundary_matrix(pg, i - 1, k), b = boundary_matrix(pg, i, k);
          CHECK(a.cols() == b.rows());
          CHECK(a.multiply(b).is_zero());
          for (const auto& e : b.entries()) CHECK((e.value == 1 || e.value == -1));
        }
    }
  }

  TEST_CASE("documented betti numbers") {
    CHECK(betti(load("elem_0_3"), 1, 2, Q) == 1);
    CHECK(betti(load("circle"), 1, 0, Q) == 0);
    CHECK(betti(load("circle"), 1, 3, Q) == 1);
    CHECK(betti(load("dumbbell"), 2, 2, Q) == 1);
    CHECK(betti(load("dumbbell"), 1, 2, Q) == 4);
    CHECK(betti(load("interval"), 0, 4, Q) == 1);
  }

  TEST_CASE("euler characteristic") {
    for (const char* name : {"dumbbell", "elem_1_3", "bouquet_2", "random_1", "circle"}) {
      PreparedGraph pg = prepare(load(name));
      for (long k = 0; k <= 4; ++k) {
        mpz_class chi_c = 0;
        long chi_h = 0;
        auto col = betti_column(pg, k, k, Q);
        for (long i = 0; i <= k; ++i) {
          chi_c += (i % 2 ? -1 : 1) * slice_dimension(pg, static_cast<int>(i), k);
          chi_h += (i % 2 ? -1 : 1) * static_cast<long>(col[i]);
        }
        CHECK(chi_c == chi_h);
      }
    }
  }

  TEST_CASE("subdivision invariance") {
    for (const char* name : {"dumbbell", "random_3", "elem_1_2"}) {
      GrapeGraph g = load(name);
      GrapeGraph s = subdivide_stem_edge(g, 0);
      for (long k = 0; k <= 4; ++k)
        CHECK(betti_column(prepare(g), 3, k, Q) == betti_column(prepare(s), 3, k, Q));
    }
  }

  TEST_CASE("prime fields agree with the rationals") {
    PreparedGraph pg = prepare(load("random_2"));
    for (long k = 0; k <= 4; ++k)
      CHECK(betti_column(pg, 3, k, Q) == betti_column(pg, 3, k, FieldSpec::prime(1000000007ull)));
  }

  TEST_CASE("local factors are cycles") {
    PreparedGraph s = prepare(load("elem_0_3"));
    Chain star = star_factor(s, 0, 0, 1, 2);
    CHECK(star.terms.size() == 6);
    CHECK(boundary(s, star).is_zero());
    PreparedGraph c = prepare(load("circle"));
    Chain loop = loop_factor(c, c.loop(0, 0));
    CHECK(loop.terms.size() == 4);
    CHECK(boundary(c, loop).is_zero());
  }

  TEST_CASE("products anticommute") {
    PreparedGraph pg = prepare(load("dumbbell"));
    Chain a = loop_factor(pg, pg.loop(0, 0)), b = loop_factor(pg, pg.loop(1, 0));
    Chain ab = product(pg, a, b), ba = product(pg, b, a);
    ba *= -1;
    CHECK(ab.terms == ba.terms);
    CHECK(boundary(pg, ab).is_zero());
    CHECK_THROWS_AS(product(pg, a, a), Error);
  }

  TEST_CASE("basis certificates") {
    BasisCheck d = basis_rank_check(load("dumbbell"), 2, 2, Q);
    CHECK(d.count == 1);
    CHECK(d.rank_in_homology == 1);
    CHECK(d.equal);
    BasisCheck s = basis_rank_check(load("elem_0_3"), 1, 3, Q);
    CHECK(s.count == 3);
    CHECK(s.rank_in_homology == 3);
    CHECK(s.equal);
    for (long k = 0; k <= 4; ++k) {
      BasisCheck z = basis_rank_check(load("random_1"), 0, k, Q);
      CHECK(z.count == 1);
      CHECK(z.rank_in_homology == 1);
      CHECK(z.equal);
    }
    BasisCheck r = basis_rank_check(load("circle"), 1, 0, Q);
    CHECK(r.residual_cell);
    CHECK(r.equal);
    CHECK_THROWS_AS(basis_rank_check(load("dumbbell"), 1, 5, Q, 3), Error);
  }

  TEST_CASE("stabilization is injective") {
    for (const char* name : {"dumbbell", "elem_0_3", "bouquet_2", "elem_1_2"})
      for (int i = 0; i <= 2; ++i)
        for (long k = 0; k <= 3; ++k) {
          GrapeGraph g = load(name);
          if (i > 1 && essential_vertices(g).size() < 2) continue;
          for (const auto& s : stabilization_check(g, i, k, Q)) CHECK(s.rank == s.betti);
        }
  }

  TEST_CASE("relation fixtures lie in the image of the boundary") {
    auto fx = relation_fixtures();
    REQUIRE(fx.size() == 3);
    for (const auto& f : fx) {
      PreparedGraph pg = prepare(f.graph);
      CHECK(boundary(pg, f.chain).is_zero());
      CHECK(is_boundary(pg, f.chain, Q));
    }
    CHECK(fx[0].chain.i == 1);
    CHECK(fx[0].chain.k == 2);
    CHECK(fx[1].chain.k == 3);
    CHECK(!fx[2].chain.is_zero());
    CHECK(fx[2].chain.k == 2);
  }

  TEST_CASE("the four stars on four legs satisfy exactly one relation") {
    GrapeGraph g = elementary_graph(0, 4);
    PreparedGraph pg = prepare(g);
    std::vector<Chain> stars{star_factor(pg, 0, 1, 2, 3), star_factor(pg, 0, 0, 2, 3), star_factor(pg, 0, 0, 1, 3),
                             star_factor(pg, 0, 0, 1, 2)};
    SliceBasis mid = slice_basis(pg, 1, 2), up = slice_basis(pg, 2, 2);
    CHECK(rank_of_span_mod(chains_to_matrix(stars, mid), boundary_matrix(pg, up, mid), Q) == 3);
  }

  TEST_CASE("the loop relation is not trivially zero") {
    // S alone is not a boundary, so the correction terms matter
    GrapeGraph g = elementary_graph(1, 1);
    PreparedGraph pg = prepare(g);
    const auto& l = pg.loop(0, 0);
    CHECK(!is_boundary(pg, star_factor(pg, 0, 0, l.first_edge, l.second_edge), Q));
  }

  TEST_CASE("unsafe multigraph path") {
    // theta graph: two vertices joined by three edges
    PreparedGraph pg = prepare_edges(2, {{0, 1}, {0, 1}, {0, 1}});
    CHECK(betti_column(pg, 1, 1, Q) == std::vector<std::size_t>{1, 2});
    PreparedGraph loopy = prepare_edges(1, {{0, 0}});
    CHECK(betti_column(loopy, 1, 2, Q) == std::vector<std::size_t>{1, 1});
  }
}
