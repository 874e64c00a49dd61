// Dense piecewise-cubic trajectories.
//
// A trajectory stores node values and one-sided node derivatives per segment;
// each segment is the cubic Hermite interpolant of its endpoint data. RK4
// output is C^1 (shared node derivatives); synthetic fixtures may carry
// per-segment slopes (piecewise linear grids have kinks). Segment extrema are
// found from the analytic roots of the derivative, never by sampling.

#ifndef MONOCERT_TRAJECTORY_HPP
#define MONOCERT_TRAJECTORY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "monocert/vec.hpp"

namespace monocert {

namespace hermite {

// Cubic in the local coordinate u = (t - t0)/h, given endpoint values and
// slopes (slopes in t-units). Coefficients of a + b u + c u^2 + d u^3.
struct Cubic {
  double a, b, c, d;
  double eval(double u) const { return a + u * (b + u * (c + u * d)); }
  double deriv(double u) const { return b + u * (2.0 * c + 3.0 * u * d); }
};

Cubic make(double h, double y0, double d0, double y1, double d1);

// Extrema of the cubic over [ua, ub] (ub may exceed 1 for extrapolation).
double min_on(const Cubic& c, double ua, double ub);
double max_on(const Cubic& c, double ua, double ub);

}  // namespace hermite

class DenseTrajectory {
 public:
  // C^1 data: derivs[k] is the derivative at breakpoint k, shared by the
  // segments on either side. times strictly increasing, sizes (N+1) each.
  static DenseTrajectory from_nodes(std::vector<double> times,
                                    std::vector<Vec> values,
                                    std::vector<Vec> derivs);

  // Piecewise-linear data: each segment uses its chord slope on both ends,
  // reproducing the linear interpolant exactly (junctions may kink).
  static DenseTrajectory from_linear(std::vector<double> times,
                                     std::vector<Vec> values);

  // Raw per-segment form: dleft[k]/dright[k] are the slopes segment k uses at
  // its left/right end (sizes N).
  static DenseTrajectory from_segments(std::vector<double> times,
                                       std::vector<Vec> values,
                                       std::vector<Vec> dleft,
                                       std::vector<Vec> dright);

  // Joins two trajectories meeting at a.t_end() == b.t_begin().
  static DenseTrajectory concat(const DenseTrajectory& a,
                                const DenseTrajectory& b);

  std::size_t dimension() const { return n_; }
  std::size_t segment_count() const { return times_.size() - 1; }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const std::vector<double>& breakpoints() const { return times_; }

  Vec node(std::size_t k) const;
  double node_value(std::size_t k, std::size_t i) const {
    return values_[k * n_ + i];
  }

  // Interpolated state; exact at breakpoints. Throws std::out_of_range for t
  // outside [t_begin, t_end] (beyond roundoff snap).
  Vec eval(double t) const;
  void eval(double t, std::span<double> out) const;
  double eval_component(std::size_t i, double t) const;

  // Evaluates with the final segment's cubic extended past t_end (used for
  // vanishing-delay lookups inside the step being computed).
  double eval_component_extrapolated(std::size_t i, double t) const;

  // min over s in [t_begin, t] of component i, from interpolant extrema.
  double running_min(std::size_t i, double t) const;

  // Extrema of component i over [ta, tb] within the domain.
  double min_over(std::size_t i, double ta, double tb) const;
  double max_over(std::size_t i, double ta, double tb) const;

  // Segment index whose interval contains t (last segment for t == t_end).
  std::size_t locate(double t) const;

  hermite::Cubic segment_cubic(std::size_t i, std::size_t k) const;

  // Empty shell; every accessor requires a trajectory built by a factory.
  DenseTrajectory() = default;

 private:
  double clamp_domain(double t) const;

  std::size_t n_ = 0;
  std::vector<double> times_;
  std::vector<double> values_;  // (N+1) x n, row-major
  std::vector<double> dleft_;   // N x n
  std::vector<double> dright_;  // N x n
};

// Public op form of the running minimum (validates the component index).
double running_min(const DenseTrajectory& traj, std::size_t i, double t);

}  // namespace monocert

#endif
