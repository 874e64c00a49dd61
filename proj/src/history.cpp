#include "monocert/history.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monocert {

HistorySegment HistorySegment::constant(Vec v, double r) {
  require_finite(v, "HistorySegment constant");
  if (v.empty()) throw std::invalid_argument("HistorySegment: empty vector");
  if (r < 0.0) throw std::invalid_argument("HistorySegment: negative window");
  HistorySegment h(Kind::Constant, v.size(), r);
  h.const_value_ = std::move(v);
  return h;
}

HistorySegment HistorySegment::from_function(std::size_t n, double r,
                                             std::function<Vec(double)> fn) {
  if (n == 0) throw std::invalid_argument("HistorySegment: dimension 0");
  if (r < 0.0) throw std::invalid_argument("HistorySegment: negative window");
  if (!fn) throw std::invalid_argument("HistorySegment: empty function");
  HistorySegment h(Kind::Callable, n, r);
  h.fn_ = std::move(fn);
  // Probe both ends so malformed callables fail at construction.
  Vec probe = h.fn_(-r);
  if (probe.size() != n) {
    throw std::invalid_argument("HistorySegment: callable dimension mismatch");
  }
  require_finite(probe, "HistorySegment callable");
  require_finite(h.fn_(0.0), "HistorySegment callable");
  return h;
}

HistorySegment HistorySegment::from_trajectory(
    std::shared_ptr<const DenseTrajectory> traj, double t_ref, double r) {
  if (!traj) throw std::invalid_argument("HistorySegment: null trajectory");
  if (r < 0.0) throw std::invalid_argument("HistorySegment: negative window");
  const double tol = 1e-9 * std::max(1.0, std::abs(t_ref));
  if (t_ref - r < traj->t_begin() - tol || t_ref > traj->t_end() + tol) {
    throw std::invalid_argument(
        "HistorySegment: window not covered by trajectory");
  }
  HistorySegment h(Kind::Slice, traj->dimension(), r);
  h.traj_ = std::move(traj);
  h.t_ref_ = t_ref;
  return h;
}

double HistorySegment::clamp_window(double theta) const {
  const double snap = 1e-9 * std::max(1.0, r_);
  if (theta < -r_ - snap || theta > snap) {
    throw std::out_of_range("HistorySegment: theta outside [-r, 0]");
  }
  return std::clamp(theta, -r_, 0.0);
}

double HistorySegment::eval_component(std::size_t i, double theta) const {
  if (i >= n_) throw std::out_of_range("HistorySegment: component index");
  theta = clamp_window(theta);
  switch (kind_) {
    case Kind::Constant:
      return const_value_[i];
    case Kind::Callable:
      return fn_(theta)[i];
    case Kind::Slice:
      return traj_->eval_component(
          i, std::clamp(t_ref_ + theta, traj_->t_begin(), traj_->t_end()));
  }
  return 0.0;  // unreachable
}

void HistorySegment::eval(double theta, std::span<double> out) const {
  if (out.size() != n_) throw std::invalid_argument("HistorySegment: out size");
  theta = clamp_window(theta);
  switch (kind_) {
    case Kind::Constant:
      std::copy(const_value_.begin(), const_value_.end(), out.begin());
      return;
    case Kind::Callable: {
      Vec v = fn_(theta);
      if (v.size() != n_) {
        throw std::invalid_argument("HistorySegment: callable dimension");
      }
      require_finite(v, "HistorySegment callable");
      std::copy(v.begin(), v.end(), out.begin());
      return;
    }
    case Kind::Slice:
      traj_->eval(std::clamp(t_ref_ + theta, traj_->t_begin(), traj_->t_end()),
                  out);
      return;
  }
}

Vec HistorySegment::eval(double theta) const {
  Vec out(n_);
  eval(theta, out);
  return out;
}

Vec HistorySegment::sup_over(double a, double b) const {
  a = clamp_window(a);
  b = clamp_window(b);
  if (b < a) std::swap(a, b);
  switch (kind_) {
    case Kind::Constant:
      return const_value_;
    case Kind::Slice: {
      Vec out(n_);
      const double ta = std::clamp(t_ref_ + a, traj_->t_begin(), traj_->t_end());
      const double tb = std::clamp(t_ref_ + b, traj_->t_begin(), traj_->t_end());
      for (std::size_t i = 0; i < n_; ++i) out[i] = traj_->max_over(i, ta, tb);
      return out;
    }
    case Kind::Callable:
      break;
  }
  // Dense scan plus one parabolic refinement per component; exact for
  // quadratics, and smooth histories are resolved to grid^2 accuracy.
  constexpr int kSamples = 1024;
  if (b - a <= 0.0) return eval(a);
  const double step = (b - a) / kSamples;
  std::vector<Vec> rows;
  rows.reserve(kSamples + 1);
  for (int j = 0; j <= kSamples; ++j) {
    rows.push_back(eval(std::min(b, a + j * step)));
  }
  Vec out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    int best = 0;
    for (int j = 1; j <= kSamples; ++j) {
      if (rows[j][i] > rows[best][i]) best = j;
    }
    double m = rows[best][i];
    if (best > 0 && best < kSamples) {
      const double ym = rows[best - 1][i], y0 = rows[best][i],
                   yp = rows[best + 1][i];
      const double denom = ym - 2.0 * y0 + yp;
      if (denom < 0.0) {
        const double du = 0.5 * (ym - yp) / denom;  // in units of step
        if (du > -1.0 && du < 1.0) {
          const double theta = a + (best + du) * step;
          m = std::max(m, eval(std::clamp(theta, a, b))[i]);
        }
      }
    }
    out[i] = m;
  }
  return out;
}

Vec window_sup(const HistorySegment& h) { return h.window_sup(); }

}  // namespace monocert
