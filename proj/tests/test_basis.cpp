#include <doctest.h>

#include <set>
#include <stdexcept>

#include "dicke/basis.hpp"

using namespace dicke;

namespace {

// Independent enumeration: count parities straight from n + m + j.
std::pair<std::size_t, std::size_t> count_parities(int twice_j, int n_cut) {
  std::size_t even = 0, odd = 0;
  for (int n = 0; n <= n_cut; ++n)
    for (int k = 0; k <= twice_j; ++k) ((n + k) % 2 == 0 ? even : odd)++;
  return {even, odd};
}

}  // namespace

TEST_CASE("basis sizes") {
  CHECK(build_basis(5.0, 40).size() == 451);
  CHECK(build_basis(1.0, 2).size() == 9);
  CHECK(build_basis(0.5, 1).size() == 4);
  CHECK(build_basis(20.0, 250).size() == 251u * 41u);
}

TEST_CASE("smallest basis is lexicographic") {
  const Basis b = build_basis(0.5, 1);
  REQUIRE(b.size() == 4);
  CHECK(b[0] == BasisState{0, -1});
  CHECK(b[1] == BasisState{0, 1});
  CHECK(b[2] == BasisState{1, -1});
  CHECK(b[3] == BasisState{1, 1});
}

TEST_CASE("ordering and index bijection") {
  const Basis b = build_basis(1.0, 2);
  for (std::size_t i = 1; i < b.size(); ++i) {
    const auto& p = b[i - 1];
    const auto& q = b[i];
    CHECK((p.n < q.n || (p.n == q.n && p.twice_m < q.twice_m)));
  }
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index(b[i].n, b[i].twice_m) == i);
  CHECK_THROWS_AS(b.index(3, 0), std::out_of_range);
  CHECK_THROWS_AS(b.index(0, 4), std::out_of_range);
  CHECK_THROWS_AS(b.index(0, 1), std::out_of_range);
  CHECK_FALSE(b.contains(-1, 0));
}

TEST_CASE("parity examples") {
  CHECK(parity_of({0, -10}, 10) == Parity::Even);
  CHECK(parity_of({1, -10}, 10) == Parity::Odd);
  CHECK(parity_of({3, 4}, 10) == Parity::Even);
  CHECK(parity_of({0, -1}, 1) == Parity::Even);
  CHECK(parity_of({0, 1}, 1) == Parity::Odd);
}

TEST_CASE("sector sizes match enumeration") {
  struct Case {
    double j;
    int n_cut;
    std::size_t even, odd;
  };
  for (const Case c : {Case{5.0, 40, 226, 225}, Case{0.5, 1, 2, 2}, Case{1.0, 2, 5, 4},
                       Case{20.0, 250, 5146, 5145}}) {
    const Basis b = build_basis(c.j, c.n_cut);
    const auto [even, odd] = split_sectors(b);
    CHECK(even.size() == c.even);
    CHECK(odd.size() == c.odd);
    const auto counted = count_parities(b.twice_j(), c.n_cut);
    CHECK(counted.first == c.even);
    CHECK(counted.second == c.odd);
  }
}

TEST_CASE("sectors partition the basis") {
  for (double j : {0.5, 1.0, 1.5, 5.0}) {
    for (int n_cut : {1, 2, 7}) {
      const Basis b = build_basis(j, n_cut);
      const auto [even, odd] = split_sectors(b);
      CHECK(even.size() + odd.size() == b.size());
      std::set<std::size_t> seen;
      for (const SectorBasis* s : {&even, &odd}) {
        CHECK(s->parent_size == b.size());
        for (std::size_t i = 0; i < s->size(); ++i) {
          if (i > 0) CHECK(s->positions[i - 1] < s->positions[i]);
          CHECK(b.parity(s->positions[i]) == s->parity);
          seen.insert(s->positions[i]);
        }
      }
      CHECK(seen.size() == b.size());
    }
  }
}

TEST_CASE("coupling stencil preserves parity") {
  const Basis b = build_basis(5.0, 40);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto s = b[i];
    for (int dn : {-1, 1})
      for (int dm : {-2, 2})
        if (b.contains(s.n + dn, s.twice_m + dm))
          CHECK(b.parity(b.index(s.n + dn, s.twice_m + dm)) == b.parity(i));
  }
}

TEST_CASE("local index and embed") {
  const Basis b = build_basis(1.0, 2);
  const auto [even, odd] = split_sectors(b);
  const auto local = odd.local_index();
  for (std::size_t i = 0; i < odd.size(); ++i) CHECK(local[odd.positions[i]] == i);
  for (std::size_t p : even.positions) CHECK(local[p] == SectorBasis::npos);
  std::vector<double> v(odd.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + i;
  const auto full = embed(odd, v);
  REQUIRE(full.size() == b.size());
  for (std::size_t p : even.positions) CHECK(full[p] == 0.0);
  for (std::size_t i = 0; i < odd.size(); ++i) CHECK(full[odd.positions[i]] == v[i]);
  CHECK_THROWS(embed(odd, std::vector<double>(odd.size() + 1)));
}

TEST_CASE("deterministic construction") {
  CHECK(build_basis(2.5, 9).states() == build_basis(2.5, 9).states());
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(build_basis(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(-1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(0.3, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(1.0, 0), std::invalid_argument);
  CHECK(twice_spin(2.5) == 5);
}
