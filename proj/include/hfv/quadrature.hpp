#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace hfv::quad {

using Integrand = std::function<double(double)>;

// Adaptive Simpson on [a, b] with absolute tolerance `tol`. Works for a > b
// (returns the signed integral). Richardson-corrected panels.
double adaptive_simpson(const Integrand& g, double a, double b, double tol, int max_depth = 50);

// Same, but splits [a, b] at the given interior breakpoints first so that kinks
// of g do not have to be located by refinement.
double adaptive_simpson_split(const Integrand& g, double a, double b, std::vector<double> breaks,
                              double tol);

// Cumulative composite Simpson table of an integrand on [lo, hi] anchored at
// `origin` (a node). Evaluation adds one Simpson panel on the partial interval,
// so values are exact for cubic integrands.
class SimpsonTable {
 public:
  SimpsonTable() = default;
  SimpsonTable(Integrand g, double lo, double hi, double origin, int panels);

  double operator()(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  Integrand g_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double h_ = 0.0;
  std::vector<double> cumulative_;  // integral from origin to node i
};

}  // namespace hfv::quad
