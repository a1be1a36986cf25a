#pragma once

#include "c2approx/approx.hpp"

namespace c2approx {

/// Sampled planar body: membership predicate plus a grid sample with weights.
struct SampledBody {
  std::string tag;
  std::function<bool(const Vec2&)> inside;
  Matrix pts;
  Vector weights;
  Box box;  // reference frame for polynomial spaces
  double diameter = 0.0;

  bool segment_inside(const Vec2& a, const Vec2& b, int samples = 32) const;
};

struct ConvexBody2D {
  enum class Kind { ellipse, smoothed_polygon, graph_slab };
  Kind kind = Kind::ellipse;
  SampledBody body;

  /// Rotated ellipse sampled on a grid.
  static ConvexBody2D ellipse(const Vec2& center, double a, double b, double angle,
                              int grid = 48);
  /// Superellipse |x/a|^m + |y/b|^m <= 1; a smoothed rectangle for large m.
  static ConvexBody2D smoothed_polygon(double a, double b, double m, int grid = 48);
  /// {(x, y): x in [x0, x1], g1(x) <= y <= g2(x)}.
  static ConvexBody2D graph_slab(std::function<double(double)> g1,
                                 std::function<double(double)> g2, double x0,
                                 double x1, int grid = 48);

  /// Random chord probe of convexity (midpoints of member pairs).
  bool convex_probe(Rng& rng, int trials = 1000) const;
};

/// Directional modulus omega^r(f, K; E)_p over a sampled body at scale
/// diam(K); grid lower bound of the sup.
double body_directional_modulus(const SampledBody& body, const RealFn& f, int r,
                                double p, const std::vector<Vec2>& dirs,
                                int h_grid = 16);

/// 64-direction grid approximating the full-sphere modulus.
std::vector<Vec2> direction_grid(int count = 64);

struct WhitneyRatio {
  double numerator = 0.0;    // E_{r-1}(f; E)
  double denominator = 0.0;  // omega^r(f, K; E)
  double ratio = 0.0;
};

/// Whitney ratio with the zero-modulus guard.
WhitneyRatio whitney_ratio(const ConvexBody2D& body, const RealFn& f, int r, double p,
                           const DirectionSet& dirs);
WhitneyRatio whitney_ratio_full(const ConvexBody2D& body, const RealFn& f, int r,
                                double p);

struct TransferReport {
  double lhs = 0.0;        // E_{r-1}(f;E)^theta on K u J
  double rhs = 0.0;        // omega^r(f, K u J; e)^theta + 2^r E(K)^theta
  bool holds = false;
  double slack = 0.0;
};

/// Verifies the (K, J, h) hypotheses by sampling and evaluates the
/// transfer-step inequality with theta = min(p, 1).
TransferReport transfer_step_check(const SampledBody& K, const SampledBody& J,
                                   const Vec2& h, int r, const RealFn& f, double p,
                                   const DirectionSet& dirs);

struct SlabReport {
  double lhs = 0.0;   // E_{r-1}(f; E u {e2}) on G
  double rhs = 0.0;   // omega^r(f, S; E) + omega^r(f, G; e2)
  double fitted_c = 0.0;
};

/// Whitney inequality on a slab between two graphs: S subset G subset S_L.
SlabReport graph_slab_whitney(std::function<double(double)> g1,
                              std::function<double(double)> g2,
                              std::function<double(double)> H, double delta,
                              double L, double x0, double x1, const RealFn& f, int r,
                              double p, int grid = 40);

}  // namespace c2approx
