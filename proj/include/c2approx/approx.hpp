#pragma once

#include "c2approx/polyspace.hpp"

namespace c2approx {

struct ApproxResult {
  Polynomial approximant;
  double error = 0.0;
  double p = 2.0;
  int iterations = 0;
  bool converged = true;
};

/// Discrete L2 projector onto the graded space over a weighted node set.
/// Orthonormalizes by modified Gram-Schmidt applied twice; column order is
/// degree-major so truncations give the nested-degree error profile.
class L2Projector {
 public:
  L2Projector(const Box& box, int degree, const Matrix& pts, const Vector& weights);

  const Box& box() const { return box_; }
  int degree() const { return degree_; }

  ApproxResult project(const RealFn& f) const;
  /// Best L2 errors E_j for all j = 0..degree of one function.
  Vector error_profile(const RealFn& f) const;
  /// Projection onto the subspace of total degree <= j.
  ApproxResult project_truncated(const RealFn& f, int j) const;

 private:
  Vector onb_coefficients(const RealFn& f, Vector* fw_out) const;
  Polynomial from_onb(const Vector& c, int degree_cut) const;

  Box box_;
  int degree_;
  Matrix pts_;
  Vector sqw_;       // sqrt of weights
  Matrix Q_;         // orthonormal columns w.r.t. the plain dot product
  Matrix R_;         // basis = Q R (R upper triangular)
  std::vector<int> col_degree_;
};

ApproxResult best_approx_l2(const RealFn& f, const DomainC2& dom, int n,
                            const QuadratureRule& quad);

/// Evaluation grid for discrete Chebyshev problems: quadrature nodes plus a
/// boundary-layer refinement.
Matrix linf_grid(const DomainC2& dom, const QuadratureRule& quad);

/// Lawson's iteratively reweighted least squares for the discrete minimax.
ApproxResult best_approx_linf(const RealFn& f, const DomainC2& dom, int n,
                              const Matrix& grid, int max_iter = 500);

/// IRLS with |residual|^(p-2) weights, warm-started from L2; p in (1, inf).
ApproxResult best_approx_lp(const RealFn& f, const DomainC2& dom, int n, double p,
                            const QuadratureRule& quad, int max_iter = 200);

/// Best approximation from Pi_{r-1}(E) over an explicit sample set in the
/// requested norm (2 or inf).
ApproxResult whitney_approx(const RealFn& f, const Matrix& pts, const Vector& weights,
                            int r, const DirectionSet& dirs, double p, const Box& box);

}  // namespace c2approx
