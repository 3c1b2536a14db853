#include "fuzzydyn/io_csv.hpp"

#include <array>
#include <charconv>

namespace fuzzydyn {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  const FuzzyBox& first = traj.states().front();
  out << "t,d_to_zero";
  for (std::size_t j = 0; j < first.levels(); ++j)
    for (std::size_t i = 0; i < first.dim(); ++i)
      out << ",lo_" << j << '_' << i << ",hi_" << j << '_' << i;
  out << '\n';
  for (std::size_t s = 0; s < traj.times().size(); ++s) {
    const FuzzyBox& state = traj.states()[s];
    out << format_double(traj.times()[s]) << ',' << format_double(sup_metric_to_zero(state));
    for (std::size_t j = 0; j < state.levels(); ++j)
      for (std::size_t i = 0; i < state.dim(); ++i)
        out << ',' << format_double(state.cut(j).lo(i)) << ','
            << format_double(state.cut(j).hi(i));
    out << '\n';
  }
}

void write_csv(const ScalarTrajectory& traj, std::ostream& out) {
  out << "t,w\n";
  for (std::size_t s = 0; s < traj.times().size(); ++s)
    out << format_double(traj.times()[s]) << ',' << format_double(traj.values()[s]) << '\n';
}

}  // namespace fuzzydyn
