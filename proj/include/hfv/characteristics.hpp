#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hfv/model.hpp"

namespace hfv {

struct CharState {
  double s = 0.0;
  double t = 0.0;
  double r = 0.0;
  double u = 0.0;
};

struct CharPath {
  enum class Stop { s_max, horizon, r_stop };
  std::vector<CharState> samples;
  Stop stop = Stop::s_max;
  int step_halvings = 0;
};

std::string stop_name(CharPath::Stop stop);

struct CharRates {
  double dt = 0.0;
  double dr = 0.0;
  double du = 0.0;
};

// dt/ds = a^-2, dr/ds = f'(u)/a, du/ds = 2M/(r - 2M)^2 (f + h)(u). DomainError for r <= 2M.
CharRates rhs_exterior(const FluxModel& m, double mass, const CharState& st);

inline constexpr double kHorizonGuard = 1e-6;
inline constexpr double kOvershootTolerance = 1e-9;

// Classical RK4 with fixed step ds. Stops when r drops below 2M(1 + 1e-6),
// when r exceeds r_stop, or at s_max. Close to the horizon the rates blow
// up, so a step that would jump past the horizon or push |u| past 1 is
// retried with half the step there; elsewhere an overshoot of |u| beyond
// 1 + 1e-9 throws StepSizeError.
CharPath trace_exterior(const FluxModel& m, double mass, CharState start, double ds, double s_max,
                        double r_stop = std::numeric_limits<double>::infinity());

// The integral  F^(u) = int_0^u f'(w) / (f(w) + h(w)) dw  on |u| <= 1 - eps,
// tabulated at nodes log-spaced in 1 - |u| and completed by adaptive Simpson
// between the last node and u.
class FhatTable {
 public:
  explicit FhatTable(FluxModel m, double epsilon = 1e-9);

  const FluxModel& model() const { return model_; }
  double epsilon() const { return epsilon_; }
  // Most negative value reachable on each branch (at u = +-(1 - eps)).
  double plus_floor() const { return plus_.back(); }
  double minus_floor() const { return minus_.back(); }

  double operator()(double u) const;

 private:
  double integrate(double a, double b) const;
  std::size_t node_index(double x) const;
  double node_distance(std::size_t j) const;

  FluxModel model_;
  double epsilon_;
  std::vector<double> plus_;   // F^ at u = 1 - x_j
  std::vector<double> minus_;  // F^ at u = -(1 - x_j)
};

enum class Branch { plus, minus };

// DomainError when |u| > 1 - eps.
double fhat(const FhatTable& table, double u);

// Bisection on the chosen branch to |du| <= 1e-12. RangeError when y > 0 or
// y is below the branch floor.
double fhat_inverse(const FhatTable& table, Branch branch, double y);

double escape_velocity(const FhatTable& table, double mass, double r0);

struct Fate {
  enum class Kind { falls_in, escapes, marginal };
  Kind kind = Kind::falls_in;
  double u_limit = -1.0;
  bool r_limit_finite = true;
};

std::string fate_name(Fate::Kind kind);

Fate classify_fate(const FhatTable& table, double mass, double r0, double u0);

// u(r) = F^_branch^-1(F^(u0) + log(a(r)/a(r0))) on the branch of u0.
// RangeError naming the admissible radius interval when a grid point leaves it.
std::vector<double> steady_profile(const FhatTable& table, double mass, double r0, double u0,
                                   const std::vector<double>& r_grid);

// Radius interval on which steady_profile is defined for (r0, u0).
struct RadiusInterval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};
RadiusInterval steady_range(const FhatTable& table, double mass, double r0, double u0);

// F^(u) - log a(r); constant along exterior characteristics.
double exterior_invariant(const FhatTable& table, double mass, double r, double u);

// dh/dR for the shifted interior coordinates, r = R - R0:
//   (1 - 2M/R)^-1 sqrt(1 - (1 - 2M/R) R^2 / r^2).
double h_prime_interior(double mass, double shift, double big_r);

// Interior characteristics (Burgers): with a = 1 - 2M/R,
//   dt/ds = 1 + h'(R) u a,  dR/ds = a u,  du/ds = (M/R^2)(u^2 - 1).
// The r field of the samples holds R. Same guards as trace_exterior.
CharPath trace_interior(double mass, double shift, CharState start, double ds, double s_max,
                        double r_stop = std::numeric_limits<double>::infinity());

// (1 - u^2) / (1 - 2M/R); constant along interior characteristics.
double interior_invariant(double mass, double big_r, double u);

}  // namespace hfv
