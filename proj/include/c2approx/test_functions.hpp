#pragma once

#include "c2approx/polyspace.hpp"

#include <string>

namespace c2approx {

struct TestFunction {
  std::string name;
  RealFn fn;
  /// Expected smoothness order: omega^2(f,t) ~ t^order for the ratio tests.
  double smoothness = 0.0;
};

/// Named registry: halfpow, bump, edge, poly_<k> (seeded random polynomial).
TestFunction test_function(const std::string& name, std::uint64_t seed = 1,
                           const Box& box = Box::cube(2, 0.0, 1.5));

}  // namespace c2approx
