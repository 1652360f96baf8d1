#pragma once

#include <vector>

namespace flexsndp {

// Dense tableau simplex for
//     maximize c^T y  subject to  A y <= b,  y >= 0,
// with b >= 0 so that the slack basis is feasible. Pivoting uses Bland's
// rule, which rules out cycling on degenerate vertices.
class DenseSimplex {
 public:
  enum class Status { kOptimal, kUnbounded, kIterationLimit };

  struct Result {
    Status status = Status::kOptimal;
    double objective = 0.0;
    std::vector<double> primal;  // y
    std::vector<double> dual;    // shadow price of each row of A
    int pivots = 0;
  };

  // `a` is row-major with rows.size() == b.size() and every row of size
  // c.size().
  static Result maximize(const std::vector<std::vector<double>>& a,
                         const std::vector<double>& b, const std::vector<double>& c,
                         int max_pivots = 100000);
};

}  // namespace flexsndp
