#pragma once

#include <cstdint>
#include <vector>

namespace invmeas {

/// Exponent vector of a monomial x^beta, beta in N^n.
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& beta);

/// Number of monomials of n variables with total degree <= deg,
/// i.e. binom(n + deg, n).
std::int64_t basis_size(int n, int deg);

std::int64_t binomial(int n, int k);

/// Graded lexicographic comparison: lower total degree first; within a
/// grade the exponent vectors are compared lexicographically with the
/// larger leading exponent ranked first, so the degree-2 basis in two
/// variables reads x1^2, x1*x2, x2^2.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return graded_lex_less(a, b);
  }
};

/// All multi-indices with degree <= max_deg in graded-lex order.
/// The constant monomial comes first.
std::vector<MultiIndex> monomial_basis(int n, int max_deg);

/// Rank of beta inside monomial_basis(n, max_deg).
/// Throws std::out_of_range if degree(beta) > max_deg.
std::int64_t mono_rank(const MultiIndex& beta, int n, int max_deg);

/// Inverse of mono_rank.
MultiIndex mono_unrank(std::int64_t rank, int n, int max_deg);

MultiIndex add_indices(const MultiIndex& a, const MultiIndex& b);

}  // namespace invmeas
