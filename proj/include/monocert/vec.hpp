// Componentwise vector orders and boxes on R^n.
//
// States are plain std::vector<double>. The partial order is the usual
// componentwise one; <= carries a small absolute tolerance and << a relative
// strictness margin, so certificates err on the conservative side.

#ifndef MONOCERT_VEC_HPP
#define MONOCERT_VEC_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monocert {

using Vec = std::vector<double>;

// Global order tolerance for componentwise <=.
inline constexpr double kOrderEps = 1e-9;

// Default relative strictness margin for componentwise <<.
inline constexpr double kStrictMargin = 0.01;

// Thrown when a configuration (system file, delay bound, run settings) is
// invalid, as opposed to a numerical failure during a run.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejects NaN/inf at the public API boundary.
void require_finite(std::span<const double> v, const char* what);
void require_same_dim(const Vec& a, const Vec& b, const char* what);

// a <= b componentwise, within eps (absolute).
bool cmp_leq(const Vec& a, const Vec& b, double eps = kOrderEps);

// a << b componentwise: a_i < b_i - margin * max(1, |b_i|) for all i.
bool cmp_ll(const Vec& a, const Vec& b, double margin = kStrictMargin);

double inf_norm(const Vec& v);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);

// Axis-aligned box [lower, upper], lower <= upper componentwise.
struct Box {
  Vec lower;
  Vec upper;

  Box(Vec lo, Vec hi);
  std::size_t dimension() const { return lower.size(); }
  bool contains(const Vec& x, double eps = kOrderEps) const;
};

}  // namespace monocert

#endif
