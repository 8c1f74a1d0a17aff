#include "invmeas/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace invmeas {

int degree(const MultiIndex& beta) {
  return std::accumulate(beta.begin(), beta.end(), 0);
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

std::int64_t basis_size(int n, int deg) {
  return binomial(n + deg, n);
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const int da = degree(a);
  const int db = degree(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

namespace {

void enumerate_grade(int n, int pos, int remaining, MultiIndex& current,
                     std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[pos] = e;
    enumerate_grade(n, pos + 1, remaining - e, current, out);
  }
}

// Rank of beta among all multi-indices of the same total degree,
// counting those with a larger leading exponent first.
std::int64_t rank_within_grade(const MultiIndex& beta, int start, int deg) {
  const int n = static_cast<int>(beta.size());
  if (start >= n - 1) return 0;
  std::int64_t rank = 0;
  for (int e = deg; e > beta[start]; --e) {
    rank += binomial(deg - e + n - start - 2, n - start - 2);
  }
  return rank + rank_within_grade(beta, start + 1, deg - beta[start]);
}

}  // namespace

std::vector<MultiIndex> monomial_basis(int n, int max_deg) {
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(basis_size(n, max_deg)));
  MultiIndex current(n, 0);
  for (int d = 0; d <= max_deg; ++d) {
    enumerate_grade(n, 0, d, current, out);
  }
  return out;
}

std::int64_t mono_rank(const MultiIndex& beta, int n, int max_deg) {
  if (static_cast<int>(beta.size()) != n) {
    throw std::invalid_argument("mono_rank: dimension mismatch");
  }
  const int d = degree(beta);
  if (d > max_deg) {
    throw std::out_of_range("mono_rank: degree exceeds max_deg");
  }
  // All strictly lower grades precede beta.
  const std::int64_t below = (d == 0) ? 0 : basis_size(n, d - 1);
  return below + rank_within_grade(beta, 0, d);
}

MultiIndex mono_unrank(std::int64_t rank, int n, int max_deg) {
  if (rank < 0 || rank >= basis_size(n, max_deg)) {
    throw std::out_of_range("mono_unrank: rank out of range");
  }
  int d = 0;
  while (basis_size(n, d) <= rank) ++d;
  std::int64_t offset = rank - ((d == 0) ? 0 : basis_size(n, d - 1));
  MultiIndex beta(n, 0);
  int remaining = d;
  for (int pos = 0; pos < n - 1; ++pos) {
    for (int e = remaining; e >= 0; --e) {
      const std::int64_t cnt = binomial(remaining - e + n - pos - 2, n - pos - 2);
      if (offset < cnt) {
        beta[pos] = e;
        remaining -= e;
        break;
      }
      offset -= cnt;
    }
  }
  beta[n - 1] = remaining;
  return beta;
}

MultiIndex add_indices(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("add_indices: dimension mismatch");
  }
  MultiIndex out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace invmeas
