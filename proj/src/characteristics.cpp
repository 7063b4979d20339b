#include "hfv/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "hfv/errors.hpp"
#include "hfv/quadrature.hpp"

namespace hfv {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Rates = std::function<CharRates(const CharState&)>;

CharState advance(const Rates& rates, const CharState& y, double ds) {
  auto shifted = [&](const CharRates& k, double h) {
    return CharState{y.s + h, y.t + h * k.dt, y.r + h * k.dr, y.u + h * k.du};
  };
  const CharRates k1 = rates(y);
  const CharRates k2 = rates(shifted(k1, 0.5 * ds));
  const CharRates k3 = rates(shifted(k2, 0.5 * ds));
  const CharRates k4 = rates(shifted(k3, ds));
  CharState out;
  out.s = y.s + ds;
  out.t = y.t + ds / 6.0 * (k1.dt + 2.0 * k2.dt + 2.0 * k3.dt + k4.dt);
  out.r = y.r + ds / 6.0 * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr);
  out.u = y.u + ds / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
  return out;
}

CharPath integrate(const Rates& rates, double mass, CharState start, double ds, double s_max, double r_stop) {
  if (!(ds > 0.0)) throw DomainError("ds must be positive");
  if (!(s_max >= start.s)) throw DomainError("s_max must not precede the start parameter");
  const double horizon = 2.0 * mass;
  if (!(start.r > horizon)) throw DomainError("start radius must exceed 2M");
  if (!(std::abs(start.u) <= 1.0)) throw DomainError("start value must lie in [-1, 1]");

  const double guard = horizon * (1.0 + kHorizonGuard);
  const double approach_zone = 2.0 * horizon;
  constexpr int kMaxHalvings = 200;

  CharPath path;
  path.samples.push_back(start);
  CharState y = start;
  double h = ds;
  while (y.s < s_max) {
    const double step = std::min(h, s_max - y.s);
    CharState next = advance(rates, y, step);
    if (y.s + step >= s_max) next.s = s_max;
    const bool finite = std::isfinite(next.t) && std::isfinite(next.r) && std::isfinite(next.u);
    const bool crossed = !(next.r > horizon);
    const bool overshoot = finite && std::abs(next.u) > 1.0 + kOvershootTolerance;
    if (!finite || crossed || overshoot) {
      if (mass > 0.0 && y.r < approach_zone && path.step_halvings < kMaxHalvings) {
        h *= 0.5;
        ++path.step_halvings;
        continue;
      }
      if (mass == 0.0 && finite && crossed) {
        path.stop = CharPath::Stop::horizon;
        return path;
      }
      if (overshoot) {
        throw StepSizeError("|u| overshoots 1 by " + fmt(std::abs(next.u) - 1.0) + " at s = " + fmt(next.s) +
                            "; reduce ds");
      }
      throw StepSizeError("characteristic step failed at s = " + fmt(y.s) + ", r = " + fmt(y.r) + "; reduce ds");
    }
    next.u = std::clamp(next.u, -1.0, 1.0);
    path.samples.push_back(next);
    y = next;
    if (mass > 0.0 && y.r < guard) {
      path.stop = CharPath::Stop::horizon;
      return path;
    }
    if (y.r > r_stop) {
      path.stop = CharPath::Stop::r_stop;
      return path;
    }
  }
  path.stop = CharPath::Stop::s_max;
  return path;
}

}  // namespace

std::string stop_name(CharPath::Stop stop) {
  switch (stop) {
    case CharPath::Stop::s_max: return "s_max";
    case CharPath::Stop::horizon: return "horizon";
    case CharPath::Stop::r_stop: return "r_stop";
  }
  return "?";
}

CharRates rhs_exterior(const FluxModel& m, double mass, const CharState& st) {
  const double horizon = 2.0 * mass;
  if (!(st.r > horizon)) throw DomainError("characteristic radius must exceed 2M");
  const double a = 1.0 - horizon / st.r;
  const double gap = st.r - horizon;
  return CharRates{1.0 / (a * a), m.df(st.u) / a, horizon / (gap * gap) * m.source_combo(st.u)};
}

CharPath trace_exterior(const FluxModel& m, double mass, CharState start, double ds, double s_max, double r_stop) {
  const double horizon = 2.0 * mass;
  const Rates rates = [&](const CharState& st) {
    if (!(st.r > horizon)) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return CharRates{nan, nan, nan};
    }
    return rhs_exterior(m, mass, st);
  };
  return integrate(rates, mass, start, ds, s_max, r_stop);
}

namespace {
constexpr std::size_t kNodesPerDecade = 40;
constexpr double kPieceTol = 1e-14;
}  // namespace

FhatTable::FhatTable(FluxModel m, double epsilon) : model_(std::move(m)), epsilon_(epsilon) {
  if (!(epsilon_ > 0.0 && epsilon_ < 0.5)) throw DomainError("epsilon must lie in (0, 0.5)");
  const double decades = -std::log10(epsilon_);
  const auto nodes = static_cast<std::size_t>(std::ceil(decades * kNodesPerDecade));
  plus_.assign(nodes + 1, 0.0);
  minus_.assign(nodes + 1, 0.0);
  for (std::size_t j = 1; j <= nodes; ++j) {
    const double x0 = node_distance(j - 1);
    const double x1 = node_distance(j);
    plus_[j] = plus_[j - 1] + integrate(1.0 - x0, 1.0 - x1);
    minus_[j] = minus_[j - 1] + integrate(-(1.0 - x0), -(1.0 - x1));
  }
  for (std::size_t j = 1; j <= nodes; ++j) {
    if (!(plus_[j] < plus_[j - 1]) || !(minus_[j] < minus_[j - 1]) || !std::isfinite(plus_[j]) ||
        !std::isfinite(minus_[j])) {
      throw UnsupportedModel("F^ is not strictly monotone on both branches for model '" + model_.name + "'");
    }
  }
}

double FhatTable::node_distance(std::size_t j) const {
  if (j == 0) return 1.0;
  const std::size_t last = plus_.size() - 1;
  if (j >= last) return epsilon_;
  return std::pow(epsilon_, static_cast<double>(j) / static_cast<double>(last));
}

std::size_t FhatTable::node_index(double x) const {
  const std::size_t last = plus_.size() - 1;
  if (x >= 1.0) return 0;
  if (x <= epsilon_) return last;
  auto j = static_cast<std::size_t>(std::floor(std::log(x) / std::log(epsilon_) * static_cast<double>(last)));
  j = std::min(j, last);
  while (j > 0 && node_distance(j) < x) --j;
  while (j < last && node_distance(j + 1) >= x) ++j;
  return j;
}

double FhatTable::integrate(double a, double b) const {
  const FluxModel& m = model_;
  return quad::adaptive_simpson([&m](double w) { return m.df(w) / m.source_combo_near_roots(w); }, a, b, kPieceTol);
}

double FhatTable::operator()(double u) const {
  if (!(std::abs(u) <= 1.0 - epsilon_)) {
    throw DomainError("F^ is only defined for |u| <= 1 - " + fmt(epsilon_) + ", got u = " + fmt(u));
  }
  const double x = 1.0 - std::abs(u);
  const std::size_t j = node_index(x);
  const double sign = u >= 0.0 ? 1.0 : -1.0;
  const double node_u = sign * (1.0 - node_distance(j));
  const double base = u >= 0.0 ? plus_[j] : minus_[j];
  return base + integrate(node_u, u);
}

double fhat(const FhatTable& table, double u) { return table(u); }

double fhat_inverse(const FhatTable& table, Branch branch, double y) {
  if (!(y <= 0.0)) throw RangeError("F^ inverse needs y <= 0, got " + fmt(y));
  const double floor = branch == Branch::plus ? table.plus_floor() : table.minus_floor();
  if (y < floor) {
    throw RangeError("y = " + fmt(y) + " is below the reachable range [" + fmt(floor) + ", 0] of the branch");
  }
  if (y == 0.0) return 0.0;
  // |u| increases as F^ decreases on either branch.
  double lo = 0.0;
  double hi = 1.0 - table.epsilon();
  const double sign = branch == Branch::plus ? 1.0 : -1.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (table(sign * mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return sign * 0.5 * (lo + hi);
}

double escape_velocity(const FhatTable& table, double mass, double r0) {
  if (!(r0 > 2.0 * mass)) throw DomainError("escape velocity needs r0 > 2M");
  return fhat_inverse(table, Branch::plus, std::log1p(-2.0 * mass / r0));
}

std::string fate_name(Fate::Kind kind) {
  switch (kind) {
    case Fate::Kind::falls_in: return "falls_in";
    case Fate::Kind::escapes: return "escapes";
    case Fate::Kind::marginal: return "marginal";
  }
  return "?";
}

Fate classify_fate(const FhatTable& table, double mass, double r0, double u0) {
  if (!(r0 > 2.0 * mass)) throw DomainError("classify_fate needs r0 > 2M");
  if (!(std::abs(u0) < 1.0)) throw DomainError("classify_fate needs |u0| < 1");
  const double ue = escape_velocity(table, mass, r0);
  Fate fate;
  if (std::abs(u0 - ue) <= 1e-12) {
    fate.kind = Fate::Kind::marginal;
    fate.u_limit = 0.0;
    fate.r_limit_finite = false;
    return fate;
  }
  if (u0 <= 0.0 || u0 < ue) return fate;
  fate.kind = Fate::Kind::escapes;
  fate.r_limit_finite = false;
  const double y = std::min(0.0, table(u0) - table(ue));
  fate.u_limit = fhat_inverse(table, Branch::plus, y);
  return fate;
}

double exterior_invariant(const FhatTable& table, double mass, double r, double u) {
  if (!(r > 2.0 * mass)) throw DomainError("invariant needs r > 2M");
  return table(u) - std::log1p(-2.0 * mass / r);
}

RadiusInterval steady_range(const FhatTable& table, double mass, double r0, double u0) {
  if (!(r0 > 2.0 * mass)) throw DomainError("steady profile needs r0 > 2M");
  if (u0 == 0.0) throw DomainError("steady profile needs u0 != 0");
  const double f0 = table(u0);
  const double floor = u0 > 0.0 ? table.plus_floor() : table.minus_floor();
  const double a0 = 1.0 - 2.0 * mass / r0;
  RadiusInterval out{2.0 * mass, std::numeric_limits<double>::infinity()};
  if (mass == 0.0) {
    out.lo = 0.0;
    return out;
  }
  // y(r) = f0 + log(a(r)/a0) must stay in [floor, 0]; a(r) = 1 - 2M/r is increasing.
  const double a_hi = a0 * std::exp(-f0);
  if (a_hi < 1.0) out.hi = 2.0 * mass / (1.0 - a_hi);
  const double a_lo = a0 * std::exp(floor - f0);
  if (a_lo > 0.0) out.lo = 2.0 * mass / (1.0 - a_lo);
  return out;
}

std::vector<double> steady_profile(const FhatTable& table, double mass, double r0, double u0,
                                   const std::vector<double>& r_grid) {
  const RadiusInterval range = steady_range(table, mass, r0, u0);
  const double f0 = table(u0);
  const double a0 = 1.0 - 2.0 * mass / r0;
  const Branch branch = u0 > 0.0 ? Branch::plus : Branch::minus;
  std::vector<double> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r > 2.0 * mass)) throw DomainError("steady profile radius must exceed 2M");
    const double y = f0 + std::log((1.0 - 2.0 * mass / r) / a0);
    if (!(y <= 0.0) || y < (branch == Branch::plus ? table.plus_floor() : table.minus_floor())) {
      throw RangeError("steady profile leaves its branch at r = " + fmt(r) + "; admissible radii are [" +
                       fmt(range.lo) + ", " + fmt(range.hi) + "]");
    }
    out.push_back(r == r0 ? u0 : fhat_inverse(table, branch, y));
  }
  return out;
}

double h_prime_interior(double mass, double shift, double big_r) {
  const double horizon = 2.0 * mass;
  if (!(big_r > horizon)) throw DomainError("interior coordinate needs R > 2M");
  const double r = big_r - shift;
  if (!(r > 0.0)) throw DomainError("interior coordinate needs r = R - R0 > 0");
  const double a = 1.0 - horizon / big_r;
  const double radicand = 1.0 - a * big_r * big_r / (r * r);
  if (radicand < 0.0) {
    std::string valid = "(" + fmt(std::max(horizon, shift)) + ", ";
    // radicand >= 0  <=>  R (R0 - M) <= R0^2 / 2
    valid += shift > mass ? fmt(shift * shift / (2.0 * (shift - mass))) + "]" : "inf)";
    if (shift > mass && shift * shift / (2.0 * (shift - mass)) <= std::max(horizon, shift)) valid = "empty";
    throw DomainError("negative radicand in dh/dR at R = " + fmt(big_r) + "; valid R range is " + valid);
  }
  return std::sqrt(radicand) / a;
}

CharPath trace_interior(double mass, double shift, CharState start, double ds, double s_max, double r_stop) {
  const double horizon = 2.0 * mass;
  const Rates rates = [&](const CharState& st) {
    if (!(st.r > horizon)) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return CharRates{nan, nan, nan};
    }
    const double a = 1.0 - horizon / st.r;
    const double tilt = h_prime_interior(mass, shift, st.r) * a;
    return CharRates{1.0 + tilt * st.u, a * st.u, mass / (st.r * st.r) * (st.u * st.u - 1.0)};
  };
  return integrate(rates, mass, start, ds, s_max, r_stop);
}

double interior_invariant(double mass, double big_r, double u) {
  if (!(big_r > 2.0 * mass)) throw DomainError("invariant needs R > 2M");
  return (1.0 - u * u) / (1.0 - 2.0 * mass / big_r);
}

}  // namespace hfv
