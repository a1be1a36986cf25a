#include "c2approx/test_functions.hpp"

namespace c2approx {

TestFunction test_function(const std::string& name, std::uint64_t seed,
                           const Box& box) {
  TestFunction t;
  t.name = name;
  if (name == "halfpow") {
    t.fn = [](const Vec2& x) { return std::pow(std::abs(x[0]), 1.5); };
    t.smoothness = 1.5;
    return t;
  }
  if (name == "bump") {
    t.fn = [](const Vec2& x) {
      const double r2 = x.squaredNorm();
      return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
    t.smoothness = 2.0;
    return t;
  }
  if (name == "edge") {
    t.fn = [](const Vec2& x) {
      const double u = x[0] + x[1];
      return u > 0.0 ? std::pow(u, 2.5) : 0.0;
    };
    t.smoothness = 2.0;  // capped by the order r = 2 of the ratio tests
    return t;
  }
  if (name.rfind("poly_", 0) == 0) {
    const int k = std::stoi(name.substr(5));
    Polynomial p = Polynomial::random(k, 2, box, seed);
    t.fn = as_fn(p);
    t.smoothness = kInf;
    return t;
  }
  throw std::invalid_argument("unknown test function: " + name);
}

}  // namespace c2approx
