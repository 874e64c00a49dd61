#include "monocert/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace monocert {

namespace {

void append_rows(std::string& out, const DenseTrajectory& traj) {
  const std::size_t n = traj.dimension();
  out += "t";
  for (std::size_t i = 0; i < n; ++i) {
    out += ",x_" + std::to_string(i + 1);
  }
  out += "\n";
  char buf[64];
  const auto& bp = traj.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", bp[k]);
    out += buf;
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", traj.node_value(k, i));
      out += buf;
    }
    out += "\n";
  }
}

}  // namespace

std::string trajectory_csv_string(const DenseTrajectory& traj) {
  std::string out;
  out.reserve(traj.breakpoints().size() * (traj.dimension() + 1) * 26 + 64);
  append_rows(out, traj);
  return out;
}

void write_trajectory_csv(const std::string& path,
                          const DenseTrajectory& traj) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << trajectory_csv_string(traj);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace monocert
