#include <doctest.h>

#include <stdexcept>

#include "invmeas/multi_index.hpp"

using namespace invmeas;

TEST_CASE("constant monomial ranks first") {
  CHECK(mono_rank({0, 0}, 2, 4) == 0);
  CHECK(mono_rank({0}, 1, 3) == 0);
  CHECK(mono_rank({0, 0, 0}, 3, 2) == 0);
}

TEST_CASE("graded-lex order in two variables") {
  const std::vector<MultiIndex> expected = {{0, 0}, {1, 0}, {0, 1},
                                            {2, 0}, {1, 1}, {0, 2}};
  const auto basis = monomial_basis(2, 2);
  REQUIRE(basis.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(basis[i] == expected[i]);
    CHECK(mono_rank(expected[i], 2, 2) == static_cast<std::int64_t>(i));
  }
}

TEST_CASE("basis count n=3 max_deg=8 is binom(11,3)") {
  CHECK(basis_size(3, 8) == 165);
  CHECK(monomial_basis(3, 8).size() == 165);
}

TEST_CASE("rank and unrank are inverse bijections") {
  for (int n = 1; n <= 4; ++n) {
    const int max_deg = n <= 2 ? 8 : 5;
    const auto basis = monomial_basis(n, max_deg);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(mono_rank(basis[i], n, max_deg) == static_cast<std::int64_t>(i));
      CHECK(mono_unrank(static_cast<std::int64_t>(i), n, max_deg) == basis[i]);
    }
  }
}

TEST_CASE("degree overflow is rejected") {
  CHECK_THROWS_AS(mono_rank({3, 3}, 2, 4), std::out_of_range);
  CHECK_THROWS_AS(mono_unrank(1000, 2, 2), std::out_of_range);
}

TEST_CASE("rank is stable under the max_deg bound") {
  // The rank of a monomial does not depend on the truncation degree.
  CHECK(mono_rank({1, 1}, 2, 2) == mono_rank({1, 1}, 2, 10));
}
