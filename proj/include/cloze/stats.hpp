#pragma once

#include <cstddef>
#include <vector>

namespace cloze {

struct PearsonResult {
  double r = 0.0;
  double p = 1.0;  // two-tailed, Student-t with n-2 dof
  std::size_t n = 0;
};

// Product-moment correlation with exact Student-t significance.
// Throws DegenerateInput for n < 3 or a constant series.
PearsonResult pearson_r(const std::vector<double>& xs, const std::vector<double>& ys);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Two-tailed p for a t statistic with `dof` degrees of freedom.
double student_t_two_tailed(double t, double dof);

}  // namespace cloze
