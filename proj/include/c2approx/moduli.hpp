#pragma once

#include "c2approx/polyspace.hpp"

#include <map>
#include <memory>

namespace c2approx {

struct ModulusConfig {
  int r = 2;
  double p = 2.0;
  double q = 2.0;      // Ivanov inner index
  double A0 = 4.0;     // tangential inset parameter
  int h_grid = 16;     // sup-discretization points in (0, t]
  int u_grid = 6;      // midpoint points of the inner tangential average
  double h_span = 50.0;  // geometric grid spans [t / h_span, t]
};

/// Geometric grid of k points in (0, t].
Vector sup_grid(double t, int k, double span = 50.0);

struct TangentialResult {
  double value = 0.0;
  bool empty = false;  // A0 t^2 exceeded the chart depth
};

/// Per-chart state for the tangential modulus: quadrature on G and distances
/// to the essential boundary.
class TangentialChart {
 public:
  TangentialChart(DomainC2 ambient, std::shared_ptr<const SpecialDomain> chart,
                  int nx = 20, int ny = 12);

  TangentialResult modulus(const RealFn& f, double t, const ModulusConfig& cfg) const;
  const SpecialDomain& chart() const { return *chart_; }

 private:
  DomainC2 ambient_;
  std::shared_ptr<const SpecialDomain> chart_;
  QuadratureRule quad_;   // over G, world coordinates
  Vector top_dist_;       // dist(node, essential boundary)
  Matrix local_;          // node coordinates in the chart frame
};

/// Domain-level modulus evaluator with cached quadrature, boundary distances
/// and Ditzian-Totik weights.
class ModulusEvaluator {
 public:
  explicit ModulusEvaluator(DomainC2 dom, double quad_accuracy = 1e-6);

  const DomainC2& domain() const { return dom_; }
  const NodeSet& nodes() const { return nodes_; }

  /// omega^r(f, t; E)_p over the ambient domain; grid lower bound of the sup.
  double directional(const RealFn& f, double t, const std::vector<Vec2>& dirs, int r,
                     double p, int h_grid = 16) const;

  /// Ditzian-Totik modulus along coordinate direction e_coord (0-based).
  double dt_along(const RealFn& f, double t, int coord, int r, double p,
                  int h_grid = 16) const;
  /// max over the coordinate directions.
  double dt(const RealFn& f, double t, int r, double p, int h_grid = 16) const;

  /// Combined modulus: dt + sum of tangential moduli over a boundary cover.
  double full(const RealFn& f, double t, int r, double p,
              const std::vector<std::shared_ptr<const TangentialChart>>& cover,
              const ModulusConfig& cfg) const;

  /// Ivanov average modulus tau_r(f, delta)_{p,q}; outer_stride subsamples
  /// the outer norm's node set.
  double ivanov_tau(const RealFn& f, double delta, int r, double p, double q,
                    Index outer_stride = 1) const;

  /// Cached sqrt(l- l+) weights at the quadrature nodes for coordinate e.
  const Vector& dt_weights(int coord) const;
  /// Cached one-sided reach along +e_coord at the quadrature nodes.
  const Vector& dt_reach(int coord) const;

 private:
  DomainC2 dom_;
  NodeSet nodes_;
  mutable std::map<int, Vector> phi_;
  mutable std::map<int, Vector> reach_;
};

/// Helper building tangential charts for a cover.
std::vector<std::shared_ptr<const TangentialChart>> make_tangential_cover(
    const DomainC2& dom, const std::vector<std::shared_ptr<const SpecialDomain>>& cover,
    int nx = 20, int ny = 12);

/// max - min of f over a point set.
double oscillation(const RealFn& f, const Matrix& pts);

// ---------------------------------------------------------------------------
// Jackson cells

/// Cells of a domain of special type in a normalized frame: depth scaled to 1,
/// height offset so that min g is about 4.  Carries the dyadic x-cells and the
/// Chebyshev levels alpha_j with alpha_n = 1.
class CellPartition {
 public:
  CellPartition(std::shared_ptr<const SpecialDomain> G, int n, double A0 = 4.0,
                int m0 = 3, int m1 = 3, bool build_enlargements = true);

  const SpecialDomain& domain() const { return *G_; }
  int n() const { return n_; }
  int ell1() const { return ell1_; }
  int levels() const { return N_; }
  double alpha() const { return alpha_; }
  double alpha_level(int j) const;        // alpha_j for 0 <= j <= N
  double alpha_star(int j) const;         // clamped: 0 below, 1 above n
  int m0() const { return m0_; }
  int m1() const { return m1_; }
  double M0() const { return M0_; }
  double bhat() const { return bhat_; }

  double ghat(double xhat) const;
  double dghat(double xhat) const;
  double ddghat(double xhat) const;

  Vec2 world_to_hat(const Vec2& w) const;
  Vec2 hat_to_world(const Vec2& h) const;

  double t_grid(int i) const;  // t_i = -bhat + 2 i bhat / n, clamped to [0, n]

  /// Index (i, j) of the cell containing a hat point; -1 outside.
  std::pair<int, int> cell_of(const Vec2& hat) const;

  /// Membership in the enlarged cell I*_{i,j} (hat coordinates).
  bool in_enlarged_cell(int i, int j, const Vec2& hat) const;
  /// Membership in the tilted parallelepiped S_{i,j}.
  bool in_s_cell(int i, int j, const Vec2& hat) const;

  double cell_center_x(int i) const;  // x*_i: center of Delta*_i
  /// Unit tangent at (x*_i, ghat(x*_i)).
  Vec2 unit_tangent(int i) const;

 private:
  std::shared_ptr<const SpecialDomain> G_;
  int n_, ell1_, N_, m0_, m1_;
  double alpha_, A0_, M0_;
  double scale_, y_off_, bhat_;
  Vector levels_;
};

/// l^p aggregate over cells of the axial and tangential local moduli.
double local_modulus_cells(const RealFn& f, const CellPartition& cells, double p,
                           int r, int samples_per_cell = 5, int h_grid = 8);

}  // namespace c2approx
