#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rootcp {

enum class Method { root_full, split, interp, smooth, ridge_exact, oracle };

std::string to_string(Method method);

/// Closed interval [lo, hi].
struct Interval {
  double lo;
  double hi;

  double length() const { return hi - lo; }
  bool contains(double z) const { return lo <= z && z <= hi; }
};

/// Where the root search started and how its fits were spent.
struct RootSearchTrace {
  double z_min = 0.0;
  double z0 = 0.0;
  double z_max = 0.0;
  /// Fits spent before bisection: point prediction, localization, z0 cascade and outer bounds.
  std::size_t init_fits = 0;
  std::size_t bisection_fits = 0;
  /// Interior probes used for the non-interval warning.
  std::size_t diagnostic_fits = 0;
  /// Which stage of the z0 cascade succeeded (1..4).
  int init_stage = 0;
};

struct ConformalInterval {
  double lower = 0.0;
  double upper = 0.0;
  double epsilon = 0.0;
  std::size_t fits_used = 0;
  Method method = Method::root_full;
  std::vector<std::string> warnings;
  /// Set when no candidate reaches the level; lower/upper are meaningless then.
  bool empty = false;
  std::optional<RootSearchTrace> trace;

  double length() const { return empty ? 0.0 : upper - lower; }
  bool contains(double z) const { return !empty && lower <= z && z <= upper; }
  bool bounded() const { return std::isfinite(lower) && std::isfinite(upper); }
};

}  // namespace rootcp
