#pragma once

#include "c2approx/moduli.hpp"

namespace c2approx {

/// Quadratic flattening chart (z, t) -> (z + t, g(z) + g'(z) t - A t^2 / 2) of
/// a planar graph domain, in chart coordinates scaled so the strip below the
/// graph has unit depth and half-width 1.
class PhiChart {
 public:
  /// A = a_factor * Abar with Abar = 10 M^2 + M + 1.
  PhiChart(std::shared_ptr<const SpecialDomain> G, double a_factor = 1.0,
           double lambda = 1.5);

  const SpecialDomain& domain() const { return *G_; }
  double M() const { return M_; }
  double A() const { return A_; }
  double a_bar() const { return Abar_; }
  double a0() const { return a0_; }
  double a1() const { return a1_; }
  double lambda() const { return lambda_; }

  double ghat(double x) const;
  double dghat(double x) const;
  double ddghat(double x) const;

  /// Chart coordinates of a world point (x-hat, y-hat).
  Vec2 to_chart(const Vec2& world) const;
  Vec2 chart_to_world(const Vec2& chart) const;
  /// Membership of a chart point in the unit-depth strip G.
  bool chart_contains(const Vec2& chart) const;

  /// Forward map in chart coordinates.
  Vec2 phi_map(double z, double t) const;
  /// Unique representation (z, t) with t in [0, a1] of a chart strip point.
  std::pair<double, double> phi_invert(const Vec2& chart) const;
  /// |det J| = (A + g''(z)) |t|.
  double jacobian(double z, double t) const;
  /// u_A at a chart strip point: g'(z+t) - g'(z) + A t.
  double u_A(const Vec2& chart) const;
  /// delta(x, y) = g(x) - y in chart coordinates.
  double delta(const Vec2& chart) const { return ghat(chart[0]) - chart[1]; }

 private:
  std::shared_ptr<const SpecialDomain> G_;
  double scale_;  // chart unit in local-frame lengths
  double M_, Abar_, A_, a0_, a1_, lambda_;
};

/// S1 + S2 + S3 decomposition residual: d^r/dt^r f(Phi_A(z0, t)) at t0 against
/// the chart-operator expansion; r = 2 identity check.
double chart_derivative_identity_residual(const PhiChart& chart, const Polynomial& f,
                                          double z0, double t0, int r);

/// D^r f(x, y) = ((e1 + g'(x) e2) . grad)^r f(x, y) with the frozen-slope
/// convention, chart coordinates.
double tangential_d_operator(const PhiChart& chart, const Polynomial& f, int r,
                             int d2_order, const Vec2& chart_pt);

struct RatioReport {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  int trials = 0;
};

/// max over random f in Pi_n of |phi_n^i D^r d2^(i+j) f|_{L^p(G)} /
/// (n^(r+i+2j) |f|_{L^p(G(lambda))}).
RatioReport tangential_bernstein_ratio(const PhiChart& chart, int n, int r, int i,
                                       int j, double p, int trials,
                                       std::uint64_t seed);

/// Boundary maximal operator of mixed tangential/normal derivatives over the
/// window |eta - xi| <= mu (sqrt(dist) + 1/n); unit tangents and normals.
class MaximalOperator {
 public:
  MaximalOperator(DomainC2 dom, const Polynomial& f, int l1, int l2,
                  int boundary_samples = 256);
  double operator()(const Vec2& xi, int n, double mu) const;
  /// max over the boundary window of the prescribed radius.
  double window_value(const Vec2& xi, double radius) const;

 private:
  DomainC2 dom_;
  Polynomial f_;
  int l1_, l2_;
  Vector params_;
  Matrix boundary_pts_;
  std::vector<Polynomial> derived_;  // d_tau^l1 d_n^l2 f per boundary sample
};

/// max over random f of |phi_{n,Gamma}^j M_{n,mu}^{r, j+l} f|_p /
/// (n^(r+j+2l) |f|_p), norms over a node subsample.
RatioReport global_bernstein_ratio(const DomainC2& dom, int n, int r, int j, int l,
                                   double p, double mu, int trials,
                                   std::uint64_t seed, const NodeSet& nodes,
                                   Index node_cap = 800);

}  // namespace c2approx
