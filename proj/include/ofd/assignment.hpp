#pragma once

// Deterministic maximum-weight assignment of agents (rows) to goods (columns),
// rows >= columns allowed. Among all optimal assignments the one whose vector
// (good of agent 1, good of agent 2, ...) is lexicographically smallest is
// returned, with "unmatched" ordered after every good.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ofd {

inline constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

template <class W>
using WeightMatrix = std::vector<std::vector<W>>;  // [agent][good], strictly positive

template <class W>
struct Assignment {
  std::vector<std::size_t> good_of;  // kUnmatched for agents left out
  W total{};
};

namespace detail {

template <class W>
void check_shape(const WeightMatrix<W>& w) {
  if (w.empty()) throw std::invalid_argument("assignment needs at least one agent");
  const std::size_t k = w.front().size();
  if (k > w.size()) throw std::invalid_argument("more goods than agents");
  for (const auto& row : w) {
    if (row.size() != k) throw std::invalid_argument("ragged weight matrix");
    for (const auto& x : row) {
      if (!(x > W(0))) throw std::invalid_argument("weights must be positive");
    }
  }
}

/// Hungarian method (potentials, O(r^2 c)) on a dense r x c cost matrix with
/// r <= c; returns the minimum total cost. `cost[i][j]` for rows 0..r-1.
template <class W>
W min_cost(const std::vector<std::vector<W>>& cost) {
  const std::size_t r = cost.size();
  if (r == 0) return W(0);
  const std::size_t c = cost.front().size();
  std::vector<W> u(r + 1, W(0)), v(c + 1, W(0));
  std::vector<std::size_t> p(c + 1, 0), way(c + 1, 0);
  for (std::size_t i = 1; i <= r; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<W> minv(c + 1, W(0));
    std::vector<char> finite(c + 1, 0), used(c + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::optional<W> delta;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= c; ++j) {
        if (used[j]) continue;
        W cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (!finite[j] || cur < minv[j]) {
          minv[j] = cur;
          finite[j] = 1;
          way[j] = j0;
        }
        if (!delta || minv[j] < *delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= c; ++j) {
        if (used[j]) {
          u[p[j]] += *delta;
          v[j] -= *delta;
        } else if (finite[j]) {
          minv[j] -= *delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  W total(0);
  for (std::size_t j = 1; j <= c; ++j) {
    if (p[j] != 0) total += cost[p[j] - 1][j - 1];
  }
  return total;
}

/// Best total for `rows` restricted to the still-free columns (dummies weigh 0).
template <class W>
W best_rest(const WeightMatrix<W>& w, std::size_t first_row, const std::vector<char>& taken,
            std::size_t free_dummies) {
  std::vector<std::vector<W>> cost;
  for (std::size_t i = first_row; i < w.size(); ++i) {
    std::vector<W> row;
    for (std::size_t g = 0; g < w[i].size(); ++g) {
      if (!taken[g]) row.push_back(-w[i][g]);
    }
    for (std::size_t d = 0; d < free_dummies; ++d) row.push_back(W(0));
    cost.push_back(std::move(row));
  }
  return -min_cost(cost);
}

}  // namespace detail

/// Depth-first search in lexicographic order; keeps the first optimum found.
template <class W>
Assignment<W> max_weight_assignment_exhaustive(const WeightMatrix<W>& w) {
  detail::check_shape(w);
  const std::size_t n = w.size();
  const std::size_t k = w.front().size();
  std::vector<std::size_t> current(n, kUnmatched);
  std::vector<char> taken(k, 0);
  Assignment<W> best;
  bool have = false;
  auto rec = [&](auto&& self, std::size_t agent, std::size_t nones_left, const W& acc) -> void {
    if (agent == n) {
      if (!have || best.total < acc) {
        best.good_of = current;
        best.total = acc;
        have = true;
      }
      return;
    }
    for (std::size_t g = 0; g < k; ++g) {
      if (taken[g]) continue;
      taken[g] = 1;
      current[agent] = g;
      self(self, agent + 1, nones_left, acc + w[agent][g]);
      taken[g] = 0;
    }
    if (nones_left > 0) {
      current[agent] = kUnmatched;
      self(self, agent + 1, nones_left - 1, acc);
    }
  };
  rec(rec, 0, n - k, W(0));
  return best;
}

/// Hungarian optimum, then agents fixed one at a time to the smallest good
/// that still admits an optimal completion.
template <class W>
Assignment<W> max_weight_assignment_hungarian(const WeightMatrix<W>& w) {
  detail::check_shape(w);
  const std::size_t n = w.size();
  const std::size_t k = w.front().size();
  std::vector<char> taken(k, 0);
  std::size_t dummies = n - k;
  const W optimum = detail::best_rest(w, 0, taken, dummies);
  Assignment<W> out;
  out.good_of.assign(n, kUnmatched);
  W fixed(0);
  for (std::size_t agent = 0; agent < n; ++agent) {
    bool placed = false;
    for (std::size_t g = 0; g < k && !placed; ++g) {
      if (taken[g]) continue;
      taken[g] = 1;
      if (fixed + w[agent][g] + detail::best_rest(w, agent + 1, taken, dummies) == optimum) {
        out.good_of[agent] = g;
        fixed += w[agent][g];
        placed = true;
      } else {
        taken[g] = 0;
      }
    }
    if (!placed) {
      if (dummies == 0) throw std::logic_error("assignment fixing found no optimal completion");
      --dummies;
    }
  }
  out.total = fixed;
  return out;
}

inline constexpr std::size_t kExhaustiveAssignmentLimit = 10;

template <class W>
Assignment<W> max_weight_assignment(const WeightMatrix<W>& w) {
  return w.size() <= kExhaustiveAssignmentLimit ? max_weight_assignment_exhaustive(w)
                                                : max_weight_assignment_hungarian(w);
}

}  // namespace ofd
