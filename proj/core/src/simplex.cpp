#include "flexsndp/simplex.hpp"

#include <cmath>

#include "flexsndp/errors.hpp"

namespace flexsndp {

namespace {
constexpr double kPivotEps = 1e-11;
}

DenseSimplex::Result DenseSimplex::maximize(const std::vector<std::vector<double>>& a,
                                            const std::vector<double>& b,
                                            const std::vector<double>& c, int max_pivots) {
  const int rows = static_cast<int>(b.size());
  const int vars = static_cast<int>(c.size());
  const int cols = vars + rows;  // structural + slack
  for (double bi : b) {
    if (bi < 0.0) throw PreconditionError("DenseSimplex: right-hand side must be non-negative");
  }

  // tab[i] = [row of A | identity | b_i]; obj = [-c | 0 | 0].
  std::vector<std::vector<double>> tab(static_cast<std::size_t>(rows),
                                       std::vector<double>(static_cast<std::size_t>(cols + 1), 0.0));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < vars; ++j) tab[i][j] = a[i][j];
    tab[i][vars + i] = 1.0;
    tab[i][cols] = b[i];
  }
  std::vector<double> obj(static_cast<std::size_t>(cols + 1), 0.0);
  for (int j = 0; j < vars; ++j) obj[j] = -c[j];
  std::vector<int> basis(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) basis[i] = vars + i;

  Result result;
  while (true) {
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (obj[j] < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    if (result.pivots >= max_pivots) {
      result.status = Status::kIterationLimit;
      return result;
    }

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      if (tab[i][enter] <= kPivotEps) continue;
      const double ratio = tab[i][cols] / tab[i][enter];
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      result.status = Status::kUnbounded;
      return result;
    }

    auto& prow = tab[leave];
    const double piv = prow[enter];
    for (double& v : prow) v /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == leave) continue;
      const double factor = tab[i][enter];
      if (factor == 0.0) continue;
      for (int j = 0; j <= cols; ++j) tab[i][j] -= factor * prow[j];
    }
    const double factor = obj[enter];
    for (int j = 0; j <= cols; ++j) obj[j] -= factor * prow[j];
    basis[leave] = enter;
    ++result.pivots;
  }

  result.primal.assign(static_cast<std::size_t>(vars), 0.0);
  for (int i = 0; i < rows; ++i) {
    if (basis[i] < vars) result.primal[basis[i]] = tab[i][cols];
  }
  result.dual.assign(static_cast<std::size_t>(rows), 0.0);
  for (int i = 0; i < rows; ++i) result.dual[i] = obj[vars + i];
  result.objective = obj[cols];
  return result;
}

}  // namespace flexsndp
