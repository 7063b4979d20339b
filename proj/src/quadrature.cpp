#include "hfv/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

namespace hfv::quad {
namespace {

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double refine(const Integrand& g, double a, double b, double fa, double fm, double fb,
              double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return refine(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         refine(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const Integrand& g, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = g(a);
  const double fb = g(b);
  const double fm = g(0.5 * (a + b));
  const double whole = simpson(fa, fm, fb, b - a);
  return refine(g, a, b, fa, fm, fb, whole, tol, max_depth);
}

double adaptive_simpson_split(const Integrand& g, double a, double b, std::vector<double> breaks,
                              double tol) {
  const double sign = a <= b ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  std::vector<double> pts{lo};
  std::sort(breaks.begin(), breaks.end());
  for (double x : breaks) {
    if (x > pts.back() && x < hi) pts.push_back(x);
  }
  pts.push_back(hi);
  const double piece_tol = tol / static_cast<double>(pts.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    sum += adaptive_simpson(g, pts[i], pts[i + 1], piece_tol);
  }
  return sign * sum;
}

SimpsonTable::SimpsonTable(Integrand g, double lo, double hi, double origin, int panels)
    : g_(std::move(g)), lo_(lo), hi_(hi), h_((hi - lo) / panels), cumulative_(panels + 1, 0.0) {
  if (panels < 2 || !(hi > lo)) throw std::invalid_argument("SimpsonTable: bad layout");
  const double pos = (origin - lo) / h_;
  const auto anchor = static_cast<int>(std::lround(pos));
  if (std::abs(pos - anchor) > 1e-9) throw std::invalid_argument("SimpsonTable: origin must be a node");
  auto node = [&](int i) { return lo_ + h_ * i; };
  for (int i = anchor; i < panels; ++i) {
    const double a = node(i);
    const double b = node(i + 1);
    cumulative_[i + 1] = cumulative_[i] + simpson(g_(a), g_(0.5 * (a + b)), g_(b), h_);
  }
  for (int i = anchor; i > 0; --i) {
    const double a = node(i - 1);
    const double b = node(i);
    cumulative_[i - 1] = cumulative_[i] - simpson(g_(a), g_(0.5 * (a + b)), g_(b), h_);
  }
}

double SimpsonTable::operator()(double x) const {
  const auto panels = static_cast<int>(cumulative_.size()) - 1;
  auto i = static_cast<int>(std::floor((x - lo_) / h_));
  i = std::clamp(i, 0, panels);
  const double a = lo_ + h_ * i;
  if (x == a) return cumulative_[i];
  return cumulative_[i] + simpson(g_(a), g_(0.5 * (a + x)), g_(x), x - a);
}

}  // namespace hfv::quad
