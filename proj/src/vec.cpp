#include "monocert/vec.hpp"

#include <algorithm>
#include <cmath>

namespace monocert {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
  }
}

void require_same_dim(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

bool cmp_leq(const Vec& a, const Vec& b, double eps) {
  require_same_dim(a, b, "cmp_leq");
  require_finite(a, "cmp_leq lhs");
  require_finite(b, "cmp_leq rhs");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + eps) return false;
  }
  return true;
}

bool cmp_ll(const Vec& a, const Vec& b, double margin) {
  require_same_dim(a, b, "cmp_ll");
  require_finite(a, "cmp_ll lhs");
  require_finite(b, "cmp_ll rhs");
  if (margin < 0.0) throw std::invalid_argument("cmp_ll: negative margin");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] < b[i] - margin * std::max(1.0, std::abs(b[i])))) return false;
  }
  return true;
}

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vec operator+(const Vec& a, const Vec& b) {
  require_same_dim(a, b, "vec add");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec operator-(const Vec& a, const Vec& b) {
  require_same_dim(a, b, "vec sub");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec operator*(double s, const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

Box::Box(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
  require_same_dim(lower, upper, "Box");
  require_finite(lower, "Box lower");
  require_finite(upper, "Box upper");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i] + kOrderEps) {
      throw std::invalid_argument("Box: lower > upper in component " +
                                  std::to_string(i + 1));
    }
  }
}

bool Box::contains(const Vec& x, double eps) const {
  require_same_dim(x, lower, "Box::contains");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] - eps || x[i] > upper[i] + eps) return false;
  }
  return true;
}

}  // namespace monocert
