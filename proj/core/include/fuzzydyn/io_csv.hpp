#pragma once

#include <ostream>
#include <string>

#include "fuzzydyn/comparison.hpp"
#include "fuzzydyn/ivp.hpp"

namespace fuzzydyn {

/// Shortest decimal rendering that round-trips to the same double. Used for
/// every float the library emits so repeated runs are byte-identical.
[[nodiscard]] std::string format_double(double v);

/// Trajectory CSV: header `t,d_to_zero` followed by `lo_<level>_<coord>` and
/// `hi_<level>_<coord>` columns, one row per sample time.
void write_csv(const Trajectory& traj, std::ostream& out);

/// Scalar trajectory CSV: header `t,w`.
void write_csv(const ScalarTrajectory& traj, std::ostream& out);

}  // namespace fuzzydyn
