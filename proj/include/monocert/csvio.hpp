// Trajectory CSV export: header t,x_1,...,x_n, one row per breakpoint,
// 17 significant digits.

#ifndef MONOCERT_CSVIO_HPP
#define MONOCERT_CSVIO_HPP

#include <string>

#include "monocert/trajectory.hpp"

namespace monocert {

void write_trajectory_csv(const std::string& path, const DenseTrajectory& traj);

std::string trajectory_csv_string(const DenseTrajectory& traj);

}  // namespace monocert

#endif
