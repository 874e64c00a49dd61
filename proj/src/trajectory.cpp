#include "monocert/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace monocert {

namespace hermite {

Cubic make(double h, double y0, double d0, double y1, double d1) {
  const double b = h * d0;
  const double e = h * d1;
  return Cubic{y0, b, -3.0 * y0 - 2.0 * b + 3.0 * y1 - e,
               2.0 * y0 + b - 2.0 * y1 + e};
}

namespace {

// Appends real roots of c.deriv(u) = 0 lying in (ua, ub).
void interior_critical_points(const Cubic& c, double ua, double ub,
                              double* roots, int& count) {
  count = 0;
  const double A = 3.0 * c.d, B = 2.0 * c.c, C = c.b;
  if (std::abs(A) < 1e-300 * std::max(1.0, std::abs(B))) {
    if (B != 0.0) {
      const double u = -C / B;
      if (u > ua && u < ub) roots[count++] = u;
    }
    return;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  // Numerically stable quadratic roots.
  const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
  const double u1 = q / A;
  const double u2 = (q != 0.0) ? C / q : u1;
  if (u1 > ua && u1 < ub) roots[count++] = u1;
  if (u2 > ua && u2 < ub && u2 != u1) roots[count++] = u2;
}

}  // namespace

double min_on(const Cubic& c, double ua, double ub) {
  double m = std::min(c.eval(ua), c.eval(ub));
  double roots[2];
  int cnt;
  interior_critical_points(c, ua, ub, roots, cnt);
  for (int k = 0; k < cnt; ++k) m = std::min(m, c.eval(roots[k]));
  return m;
}

double max_on(const Cubic& c, double ua, double ub) {
  double m = std::max(c.eval(ua), c.eval(ub));
  double roots[2];
  int cnt;
  interior_critical_points(c, ua, ub, roots, cnt);
  for (int k = 0; k < cnt; ++k) m = std::max(m, c.eval(roots[k]));
  return m;
}

}  // namespace hermite

namespace {

void check_grid(const std::vector<double>& times,
                const std::vector<Vec>& values, std::size_t n) {
  if (times.size() < 2) {
    throw std::invalid_argument("DenseTrajectory: need at least 2 breakpoints");
  }
  if (values.size() != times.size()) {
    throw std::invalid_argument("DenseTrajectory: times/values size mismatch");
  }
  if (n == 0) throw std::invalid_argument("DenseTrajectory: dimension 0");
  require_finite(times, "DenseTrajectory times");
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    if (!(times[k + 1] > times[k])) {
      throw std::invalid_argument(
          "DenseTrajectory: breakpoints not strictly increasing");
    }
  }
  for (const Vec& v : values) {
    if (v.size() != n) {
      throw std::invalid_argument("DenseTrajectory: inconsistent dimension");
    }
    require_finite(v, "DenseTrajectory values");
  }
}

std::vector<double> flatten(const std::vector<Vec>& rows, std::size_t n) {
  std::vector<double> out;
  out.reserve(rows.size() * n);
  for (const Vec& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace

DenseTrajectory DenseTrajectory::from_nodes(std::vector<double> times,
                                            std::vector<Vec> values,
                                            std::vector<Vec> derivs) {
  const std::size_t n = values.empty() ? 0 : values.front().size();
  check_grid(times, values, n);
  if (derivs.size() != times.size()) {
    throw std::invalid_argument("DenseTrajectory: times/derivs size mismatch");
  }
  std::vector<Vec> dl(derivs.begin(), derivs.end() - 1);
  std::vector<Vec> dr(derivs.begin() + 1, derivs.end());
  return from_segments(std::move(times), std::move(values), std::move(dl),
                       std::move(dr));
}

DenseTrajectory DenseTrajectory::from_linear(std::vector<double> times,
                                             std::vector<Vec> values) {
  const std::size_t n = values.empty() ? 0 : values.front().size();
  check_grid(times, values, n);
  std::vector<Vec> dl, dr;
  dl.reserve(times.size() - 1);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    Vec slope(n);
    const double h = times[k + 1] - times[k];
    for (std::size_t i = 0; i < n; ++i) {
      slope[i] = (values[k + 1][i] - values[k][i]) / h;
    }
    dl.push_back(slope);
  }
  dr = dl;
  return from_segments(std::move(times), std::move(values), std::move(dl),
                       std::move(dr));
}

DenseTrajectory DenseTrajectory::from_segments(std::vector<double> times,
                                               std::vector<Vec> values,
                                               std::vector<Vec> dleft,
                                               std::vector<Vec> dright) {
  const std::size_t n = values.empty() ? 0 : values.front().size();
  check_grid(times, values, n);
  const std::size_t nseg = times.size() - 1;
  if (dleft.size() != nseg || dright.size() != nseg) {
    throw std::invalid_argument("DenseTrajectory: slope array size mismatch");
  }
  for (std::size_t k = 0; k < nseg; ++k) {
    if (dleft[k].size() != n || dright[k].size() != n) {
      throw std::invalid_argument("DenseTrajectory: slope dimension mismatch");
    }
    require_finite(dleft[k], "DenseTrajectory slopes");
    require_finite(dright[k], "DenseTrajectory slopes");
  }
  DenseTrajectory t;
  t.n_ = n;
  t.times_ = std::move(times);
  t.values_ = flatten(values, n);
  t.dleft_ = flatten(dleft, n);
  t.dright_ = flatten(dright, n);
  return t;
}

DenseTrajectory DenseTrajectory::concat(const DenseTrajectory& a,
                                        const DenseTrajectory& b) {
  if (a.n_ != b.n_) {
    throw std::invalid_argument("DenseTrajectory::concat: dimension mismatch");
  }
  const double seam = a.t_end();
  const double tol = 1e-9 * std::max({1.0, std::abs(seam), std::abs(b.t_begin())});
  if (std::abs(b.t_begin() - seam) > tol) {
    throw std::invalid_argument("DenseTrajectory::concat: endpoints do not meet");
  }
  for (std::size_t i = 0; i < a.n_; ++i) {
    const double va = a.values_[(a.times_.size() - 1) * a.n_ + i];
    const double vb = b.values_[i];
    if (std::abs(va - vb) > 1e-9 * std::max(1.0, std::abs(va))) {
      throw std::invalid_argument("DenseTrajectory::concat: seam value mismatch");
    }
  }
  DenseTrajectory t;
  t.n_ = a.n_;
  t.times_ = a.times_;
  t.times_.insert(t.times_.end(), b.times_.begin() + 1, b.times_.end());
  t.values_ = a.values_;
  t.values_.insert(t.values_.end(), b.values_.begin() + a.n_, b.values_.end());
  t.dleft_ = a.dleft_;
  t.dleft_.insert(t.dleft_.end(), b.dleft_.begin(), b.dleft_.end());
  t.dright_ = a.dright_;
  t.dright_.insert(t.dright_.end(), b.dright_.begin(), b.dright_.end());
  return t;
}

Vec DenseTrajectory::node(std::size_t k) const {
  if (k >= times_.size()) throw std::out_of_range("node index");
  return Vec(values_.begin() + static_cast<std::ptrdiff_t>(k * n_),
             values_.begin() + static_cast<std::ptrdiff_t>((k + 1) * n_));
}

double DenseTrajectory::clamp_domain(double t) const {
  const double snap =
      1e-9 * std::max({1.0, std::abs(t_begin()), std::abs(t_end())});
  if (t < t_begin() - snap || t > t_end() + snap) {
    throw std::out_of_range("DenseTrajectory: time " + std::to_string(t) +
                            " outside [" + std::to_string(t_begin()) + ", " +
                            std::to_string(t_end()) + "]");
  }
  return std::clamp(t, t_begin(), t_end());
}

std::size_t DenseTrajectory::locate(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times_.begin());
  if (k == 0) return 0;
  if (k >= times_.size()) return times_.size() - 2;
  return k - 1;
}

hermite::Cubic DenseTrajectory::segment_cubic(std::size_t i,
                                              std::size_t k) const {
  const double h = times_[k + 1] - times_[k];
  return hermite::make(h, values_[k * n_ + i], dleft_[k * n_ + i],
                       values_[(k + 1) * n_ + i], dright_[k * n_ + i]);
}

double DenseTrajectory::eval_component(std::size_t i, double t) const {
  if (i >= n_) throw std::out_of_range("component index");
  t = clamp_domain(t);
  const std::size_t k = locate(t);
  const double u = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return segment_cubic(i, k).eval(u);
}

void DenseTrajectory::eval(double t, std::span<double> out) const {
  if (out.size() != n_) throw std::invalid_argument("eval: output size");
  t = clamp_domain(t);
  const std::size_t k = locate(t);
  const double u = (t - times_[k]) / (times_[k + 1] - times_[k]);
  for (std::size_t i = 0; i < n_; ++i) out[i] = segment_cubic(i, k).eval(u);
}

Vec DenseTrajectory::eval(double t) const {
  Vec out(n_);
  eval(t, out);
  return out;
}

double DenseTrajectory::eval_component_extrapolated(std::size_t i,
                                                    double t) const {
  if (i >= n_) throw std::out_of_range("component index");
  if (t <= t_end()) return eval_component(i, t);
  const std::size_t k = times_.size() - 2;
  const double u = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return segment_cubic(i, k).eval(u);
}

double DenseTrajectory::running_min(std::size_t i, double t) const {
  if (i >= n_) throw std::out_of_range("component index");
  t = clamp_domain(t);
  const std::size_t klast = locate(t);
  double m = values_[i];  // node 0
  for (std::size_t k = 0; k < klast; ++k) {
    m = std::min(m, hermite::min_on(segment_cubic(i, k), 0.0, 1.0));
  }
  const double u = (t - times_[klast]) / (times_[klast + 1] - times_[klast]);
  if (u > 0.0) {
    m = std::min(m, hermite::min_on(segment_cubic(i, klast), 0.0, u));
  }
  return m;
}

double DenseTrajectory::min_over(std::size_t i, double ta, double tb) const {
  if (i >= n_) throw std::out_of_range("component index");
  ta = clamp_domain(ta);
  tb = clamp_domain(tb);
  if (tb < ta) std::swap(ta, tb);
  const std::size_t ka = locate(ta), kb = locate(tb);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = ka; k <= kb; ++k) {
    const double h = times_[k + 1] - times_[k];
    const double ua = (k == ka) ? (ta - times_[k]) / h : 0.0;
    const double ub = (k == kb) ? (tb - times_[k]) / h : 1.0;
    if (ub <= ua && k != ka) continue;
    m = std::min(m, hermite::min_on(segment_cubic(i, k), ua, std::max(ua, ub)));
  }
  return m;
}

double DenseTrajectory::max_over(std::size_t i, double ta, double tb) const {
  if (i >= n_) throw std::out_of_range("component index");
  ta = clamp_domain(ta);
  tb = clamp_domain(tb);
  if (tb < ta) std::swap(ta, tb);
  const std::size_t ka = locate(ta), kb = locate(tb);
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = ka; k <= kb; ++k) {
    const double h = times_[k + 1] - times_[k];
    const double ua = (k == ka) ? (ta - times_[k]) / h : 0.0;
    const double ub = (k == kb) ? (tb - times_[k]) / h : 1.0;
    if (ub <= ua && k != ka) continue;
    m = std::max(m, hermite::max_on(segment_cubic(i, k), ua, std::max(ua, ub)));
  }
  return m;
}

double running_min(const DenseTrajectory& traj, std::size_t i, double t) {
  return traj.running_min(i, t);
}

}  // namespace monocert
