#pragma once

#include "c2approx/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace c2approx {

/// Radial profile R(theta) of a star-shaped boundary, with two derivatives.
struct RadialProfile {
  std::function<double(double)> R;
  std::function<double(double)> dR;
  std::function<double(double)> ddR;

  /// R(theta) = c0 + sum_k c_k cos(k theta)
  static RadialProfile cosine_series(Vector coeffs);
  static RadialProfile ellipse(double a, double b);
};

class SpecialDomain;

/// Compact planar C^2 domain: either star-shaped with a C^2 radial profile or
/// the closure of a single domain of special type.  Immutable, cheap to copy.
class DomainC2 {
 public:
  enum class Kind { star_shaped, graph_special };

  static DomainC2 star(const RadialProfile& profile, std::string name = "star");
  static DomainC2 disk();
  static DomainC2 ellipse(double a, double b);
  static DomainC2 bump();  // R(theta) = 1 + 0.2 cos 3 theta
  static DomainC2 from_special(std::shared_ptr<const SpecialDomain> g,
                               std::string name = "special");

  Kind kind() const;
  const std::string& name() const;
  int dim() const { return 2; }
  double bounding_radius() const;
  double curvature_bound() const;
  double rolling_radius() const;
  double diameter() const;
  double boundary_length() const;

  bool inside(const Vec2& p) const;

  /// Boundary parametrization gamma(s); for star domains s is the polar angle
  /// in [0, 2pi), for graph domains a piecewise parameter in [0, 4).
  Vec2 boundary(double s) const;
  Vec2 boundary_d1(double s) const;
  Vec2 boundary_d2(double s) const;
  double boundary_period() const;
  Vec2 outward_normal(double s) const;
  /// Parameter at prescribed arc length from s = 0 (star domains).
  double param_at_arclength(double arc) const;

  /// dist(xi, Gamma) by dense seed scan plus Newton refinement.
  double boundary_distance(const Vec2& xi) const;
  double closest_boundary_param(const Vec2& xi) const;

  const SpecialDomain* special() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

/// rho_Omega(xi, eta) = |xi - eta| + |sqrt(dist(xi)) - sqrt(dist(eta))|.
double metric_rho(const DomainC2& dom, const Vec2& xi, const Vec2& eta);
/// Same with precomputed boundary distances.
inline double metric_rho_d(const Vec2& xi, const Vec2& eta, double dist_xi,
                           double dist_eta) {
  return (xi - eta).norm() + std::abs(std::sqrt(dist_xi) - std::sqrt(dist_eta));
}

/// Sampled segment-inclusion test; exact pointwise inside test, sample count
/// ceil(|xi-eta| / (1e-3 rolling_radius)) + 2.
bool segment_in_domain(const DomainC2& dom, const Vec2& xi, const Vec2& eta);

/// Ditzian-Totik weight sqrt(l- l+): one-sided reach lengths along -e and +e.
double phi_dt(const DomainC2& dom, const Vec2& e, const Vec2& xi);

/// sqrt(dist(xi, Gamma)) + 1/n.
double varphi_n_gamma(const DomainC2& dom, const Vec2& xi, int n);

struct QuadratureRule {
  Matrix nodes;  // N x 2
  Vector weights;
  double declared_accuracy = 0.0;
  Index size() const { return nodes.rows(); }
  Vec2 node(Index i) const { return nodes.row(i).transpose(); }
  double domain_measure() const { return weights.sum(); }
};

/// Tensor Gauss-Legendre quadrature adapted to the domain kind; node counts
/// double until integrals of 1 and |xi|^2 stabilize to the accuracy (and, if
/// requested, until at least min_nodes nodes are present).
QuadratureRule build_quadrature(const DomainC2& dom, double accuracy,
                                Index min_nodes = 0);

/// Quadrature nodes with cached boundary distances.
struct NodeSet {
  QuadratureRule quad;
  Vector dist;
  Index size() const { return quad.size(); }
};
NodeSet make_node_set(const DomainC2& dom, double accuracy, Index min_nodes = 0);

enum class NetMetric { rho_omega, euclidean, rho_hat_g };

struct Net {
  Matrix points;
  Vector point_dist;  // boundary distances at net points
  double separation = 0.0;
  bool maximal = false;
  NetMetric metric = NetMetric::rho_omega;
  Index size() const { return points.rows(); }
  Vec2 point(Index i) const { return points.row(i).transpose(); }
};

/// Deterministic greedy pass over the node set in its stored order.
Net greedy_separated_net(const DomainC2& dom, double separation, NetMetric metric,
                         const NodeSet& nodes);

struct BallEstimate {
  double volume = 0.0;
  double rel_error = 0.0;
  Index node_count = 0;
};
/// |U(xi, t)| by counting cells of a local grid over the enclosing Euclidean
/// ball (rho >= Euclidean distance, so the grid covers U).
BallEstimate ball_volume(const DomainC2& dom, const Vec2& xi, double t,
                         int grid = 48);
/// Deterministic sample points of U(xi, t) on a local k x k grid, always
/// including xi itself.
Matrix ball_samples(const DomainC2& dom, const Vec2& xi, double t, int k = 10);

/// Axis-aligned graph domain {x in (-b,b), g(x) - L b < y <= g(x)} in a local
/// frame given by axis, orientation and anchor.
class SpecialDomain {
 public:
  enum class Orientation { upward, downward };
  struct GFunc {
    std::function<double(double)> g;
    std::function<double(double)> dg;
    std::function<double(double)> ddg;
  };

  SpecialDomain(int axis, Orientation orientation, const Vec2& anchor, double b,
                double L, GFunc gf);

  int axis() const { return axis_; }
  Orientation orientation() const { return orientation_; }
  const Vec2& anchor() const { return anchor_; }
  double b() const { return b_; }
  double L() const { return L_; }
  double depth() const { return L_ * b_; }

  Vec2 to_local(const Vec2& world) const;
  Vec2 to_world(const Vec2& local) const;

  double g(double x) const { return gf_.g(x); }
  double dg(double x) const { return gf_.dg(x); }
  double ddg(double x) const { return gf_.ddg(x); }

  /// max |g'| and max |g''| over [-2b, 2b] (dense scan, cached).
  double grad_bound() const { return grad_bound_; }
  double hess_bound() const { return hess_bound_; }
  double g_min2b() const { return g_min2b_; }  // min g over [-2b,2b]
  double g_max2b() const { return g_max2b_; }

  /// Closure of G(lambda) membership.
  bool contains(const Vec2& world, double lambda = 1.0) const;
  bool in_gstar(const Vec2& world) const;
  /// Point lies on the essential boundary patch of G(lambda) (tolerance tol).
  bool on_essential_boundary(const Vec2& world, double lambda, double tol) const;

  /// dist(xi, Gamma') where Gamma' = {(x, g(x)): x in [-2b, 2b]}.
  double dist_to_top(const Vec2& world) const;
  /// Distance from a local point to {(x, g(x) + y_offset): x in [xmin, xmax]}.
  double dist_to_graph_patch(const Vec2& local, double y_offset, double xmin,
                             double xmax) const;

  /// rho_hat_G in the local frame.
  double rho_hat(const Vec2& w1, const Vec2& w2) const;

  /// Iterated Gauss-Legendre over G(lambda); nodes in world coordinates.
  QuadratureRule quadrature(double accuracy, double lambda = 1.0) const;
  /// Fixed-resolution variant for per-chart workloads.
  QuadratureRule quadrature_fixed(int nx, int ny, double lambda = 1.0) const;

 private:
  int axis_;
  Orientation orientation_;
  Vec2 anchor_;
  double b_, L_;
  GFunc gf_;
  Eigen::Matrix2d frame_;  // columns: local x-axis, local y-axis in world coords
  double grad_bound_ = 0.0, hess_bound_ = 0.0, g_min2b_ = 0.0, g_max2b_ = 0.0;
};

inline double special_metric_rho_hat(const SpecialDomain& g, const Vec2& xi,
                                     const Vec2& eta) {
  return g.rho_hat(xi, eta);
}

/// Finite cover of the boundary by special-type domains attached to Gamma;
/// axis per chart maximizes |n . e_j|.  Throws if the verification probes
/// find an uncovered boundary sample or a box that is not attached.
std::vector<std::shared_ptr<const SpecialDomain>> cover_by_special_domains(
    const DomainC2& dom, double base_size_target);

/// First-crossing reach along a ray, capped at `need`; exact up to bisection
/// tolerance.  Used by the moduli to amortize segment tests over step grids.
double directional_reach(const DomainC2& dom, const Vec2& xi, const Vec2& unit_dir,
                         double need);

/// Uniform random point of the domain (rejection from the bounding box).
Vec2 random_domain_point(const DomainC2& dom, Rng& rng);

/// Key-value domain description file.
DomainC2 load_domain_spec(const std::string& path);
DomainC2 domain_from_catalog(const std::string& name);

}  // namespace c2approx
