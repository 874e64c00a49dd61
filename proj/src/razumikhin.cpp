#include "monocert/razumikhin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monocert {

RazumikhinProfile::RazumikhinProfile(Kind k,
                                     std::shared_ptr<const DenseTrajectory> traj)
    : kind_(k), traj_(std::move(traj)) {
  const DenseTrajectory& tr = *traj_;
  const std::size_t n = tr.dimension();
  const std::size_t nodes = tr.breakpoints().size();
  prefix_min_.resize(nodes * n);
  for (std::size_t i = 0; i < n; ++i) {
    prefix_min_[i] = tr.node(0)[i];
  }
  for (std::size_t k2 = 0; k2 + 1 < nodes; ++k2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double seg_min = hermite::min_on(tr.segment_cubic(i, k2), 0.0, 1.0);
      prefix_min_[(k2 + 1) * n + i] = std::min(prefix_min_[k2 * n + i], seg_min);
    }
  }
}

RazumikhinProfile RazumikhinProfile::forward(
    std::shared_ptr<const DenseTrajectory> traj) {
  if (!traj) throw std::invalid_argument("RazumikhinProfile: null trajectory");
  return RazumikhinProfile(Kind::Forward, std::move(traj));
}

RazumikhinProfile RazumikhinProfile::two_sided(
    std::shared_ptr<const DenseTrajectory> traj) {
  if (!traj) throw std::invalid_argument("RazumikhinProfile: null trajectory");
  if (!(traj->t_begin() < 0.0)) {
    throw std::invalid_argument(
        "two-sided profile needs a backward window (t_begin < 0)");
  }
  return RazumikhinProfile(Kind::TwoSided, std::move(traj));
}

double RazumikhinProfile::envelope(std::size_t i, double t) const {
  const std::size_t n = dimension();
  if (i >= n) throw std::out_of_range("envelope: component index");
  const auto& bp = traj_->breakpoints();
  const std::size_t k = traj_->locate(t);
  double m = prefix_min_[k * n + i];
  if (t > bp[k]) {
    m = std::min(m, traj_->min_over(i, bp[k], std::min(t, bp.back())));
  }
  return m;
}

RazumikhinProfile::TimeResult RazumikhinProfile::crossing_time(
    std::size_t i, double level) const {
  const std::size_t n = dimension();
  if (i >= n) throw std::out_of_range("crossing_time: component index");
  const double start_value = prefix_min_[i];
  const double snap = 1e-9 * std::max(1.0, std::abs(start_value));
  if (level > start_value + snap) {
    throw std::invalid_argument(
        "crossing_time: level above the trajectory start value");
  }
  const auto& bp = traj_->breakpoints();
  const std::size_t nodes = bp.size();

  // prefix_min_ is nonincreasing in k; find the first node index where the
  // envelope is strictly below the level.
  std::size_t lo = 0, hi = nodes;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (prefix_min_[mid * n + i] < level) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == nodes) {
    return {bp.back(), false};  // never undercut within the horizon
  }
  if (lo == 0) {
    return {bp.front(), true};
  }
  // Crossing lies in segment lo-1. Bisect on the segment running minimum.
  const std::size_t k = lo - 1;
  const double h = bp[k + 1] - bp[k];
  double ua = 0.0, ub = 1.0;
  const hermite::Cubic cubic = traj_->segment_cubic(i, k);
  // Invariant: running min over [bp[k], bp[k]+ua*h] >= level, < level at ub.
  while ((ub - ua) * h > 1e-13 * std::max(1.0, std::abs(bp[k + 1]))) {
    const double um = 0.5 * (ua + ub);
    if (hermite::min_on(cubic, 0.0, um) >= level) {
      ua = um;
    } else {
      ub = um;
    }
  }
  return {bp[k] + ub * h, true};
}

RazumikhinProfile::TimeResult RazumikhinProfile::gap_time(std::size_t i,
                                                          double u) const {
  const double snap = 1e-9 * std::max(1.0, std::abs(domain_start()));
  if (u < domain_start() - snap || u > domain_end() + snap) {
    throw std::out_of_range("gap_time: u outside the profile domain");
  }
  u = std::clamp(u, domain_start(), domain_end());
  const double level = envelope(i, u);
  TimeResult res = crossing_time(i, level);
  res.time = std::max(res.time, u);
  return res;
}

double RazumikhinProfile::value(const Vec& x) const {
  const std::size_t n = dimension();
  if (x.size() != n) throw std::invalid_argument("value: dimension mismatch");
  require_finite(x, "profile value");
  double tmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double top = prefix_min_[i];
    if (x[i] < -kOrderEps || x[i] > top + 1e-9 * std::max(1.0, std::abs(top))) {
      throw std::out_of_range("value: point outside the profile domain box");
    }
    const TimeResult t = crossing_time(i, x[i]);
    tmin = std::min(tmin, t.time);
  }
  return std::exp(-tmin);
}

RazumikhinProfile::TimeResult compute_T(const RazumikhinProfile& p,
                                        std::size_t i, double level) {
  return p.crossing_time(i, level);
}

double compute_V(const RazumikhinProfile& p, const Vec& x) { return p.value(x); }

RazumikhinProfile::TimeResult compute_h(const RazumikhinProfile& p,
                                        std::size_t i, double u) {
  return p.gap_time(i, u);
}

std::optional<double> select_tp(const DenseTrajectory& traj, double margin) {
  const Vec y0 = traj.node(0);
  const auto& bp = traj.breakpoints();
  for (std::size_t k = 1; k < bp.size(); ++k) {
    if (cmp_ll(traj.node(k), y0, margin)) return bp[k];
  }
  return std::nullopt;
}

namespace {

ZetaResult zeta_at(const RazumikhinProfile& profile, double t) {
  const std::size_t n = profile.dimension();
  ZetaResult out;
  out.zeta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double zi = profile.envelope(i, t);
    // Positive-system trajectories may graze zero by roundoff.
    if (zi < 0.0 && zi > -1e-9) zi = 0.0;
    out.zeta[i] = zi;

    const RazumikhinProfile::TimeResult hi = profile.gap_time(i, t);
    if (!hi.resolved) {
      out.capped = true;
      continue;
    }
    const double y_at_h = profile.trajectory().eval_component(i, hi.time);
    out.cross_check_error =
        std::max(out.cross_check_error, std::abs(y_at_h - profile.envelope(i, t)));
  }
  return out;
}

}  // namespace

ZetaResult compute_zeta(const RazumikhinProfile& profile, double tp) {
  const double snap = 1e-9 * std::max(1.0, std::abs(tp));
  if (tp < profile.domain_start() - snap || tp > profile.domain_end() + snap) {
    throw std::out_of_range("compute_zeta: tp outside the profile domain");
  }
  return zeta_at(profile, std::clamp(tp, profile.domain_start(),
                                     profile.domain_end()));
}

ZetaResult compute_zeta_global(const RazumikhinProfile& profile, double c) {
  if (profile.kind() != RazumikhinProfile::Kind::TwoSided) {
    throw std::invalid_argument("compute_zeta_global needs a two-sided profile");
  }
  if (!(c > 0.0)) throw std::invalid_argument("compute_zeta_global: c > 0");
  double u = -std::log(c);
  bool limited = false;
  if (u < profile.domain_start()) {
    u = profile.domain_start();
    limited = true;
  }
  if (u > profile.domain_end()) {
    throw std::invalid_argument("compute_zeta_global: c below the resolvable range");
  }
  ZetaResult out = zeta_at(profile, u);
  out.window_limited = limited;
  return out;
}

}  // namespace monocert
