// Initial data for delayed systems: a function on [-r, 0].
//
// Three storage forms: a constant vector, a closed-form callable, or a slice
// of a DenseTrajectory. window_sup computes the componentwise supremum from
// interpolant extrema (trajectory slices) or a dense scan with parabolic
// refinement (callables).

#ifndef MONOCERT_HISTORY_HPP
#define MONOCERT_HISTORY_HPP

#include <functional>
#include <memory>
#include <span>

#include "monocert/trajectory.hpp"
#include "monocert/vec.hpp"

namespace monocert {

class HistorySegment {
 public:
  static HistorySegment constant(Vec v, double r);
  static HistorySegment from_function(std::size_t n, double r,
                                      std::function<Vec(double)> fn);
  // theta maps to traj(t_ref + theta); [t_ref - r, t_ref] must lie in domain.
  static HistorySegment from_trajectory(std::shared_ptr<const DenseTrajectory> traj,
                                        double t_ref, double r);

  std::size_t dimension() const { return n_; }
  double window() const { return r_; }

  Vec eval(double theta) const;
  void eval(double theta, std::span<double> out) const;
  double eval_component(std::size_t i, double theta) const;

  // Componentwise sup over [a, b] within [-r, 0].
  Vec sup_over(double a, double b) const;
  Vec window_sup() const { return sup_over(-r_, 0.0); }

  bool is_constant() const { return kind_ == Kind::Constant; }

 private:
  enum class Kind { Constant, Callable, Slice };

  HistorySegment(Kind k, std::size_t n, double r) : kind_(k), n_(n), r_(r) {}
  double clamp_window(double theta) const;

  Kind kind_;
  std::size_t n_;
  double r_;
  Vec const_value_;
  std::function<Vec(double)> fn_;
  std::shared_ptr<const DenseTrajectory> traj_;
  double t_ref_ = 0.0;
};

Vec window_sup(const HistorySegment& h);

}  // namespace monocert

#endif
