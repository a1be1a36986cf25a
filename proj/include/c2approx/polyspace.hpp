#pragma once

#include "c2approx/geometry.hpp"
#include "c2approx/polynomial.hpp"

#include <functional>

namespace c2approx {

using RealFn = std::function<double(const Vec2&)>;

inline RealFn as_fn(const Polynomial& p) {
  return [p](const Vec2& x) { return p(x); };
}

/// sum_{j=0}^r (-1)^{r+j} C(r,j) f(xi + j h); no domain test.
double plain_difference(const RealFn& f, const Vec2& h, int r, const Vec2& xi);

/// Delta_h^r(f, Omega, xi): the plain difference if [xi, xi + r h] lies in the
/// domain, else 0.
double finite_difference(const RealFn& f, const DomainC2& dom, const Vec2& h, int r,
                         const Vec2& xi);

/// (sum_i w_i |f(xi_i)|^p)^(1/p); p = inf takes the node max plus a 4x-refined
/// boundary-layer sample, a certified lower bound of the sup norm.
double lp_norm(const RealFn& f, const DomainC2& dom, double p,
               const QuadratureRule& quad);

/// Discrete p-norm over explicit nodes/weights.
double lp_norm_nodes(const RealFn& f, const Matrix& pts, const Vector& w, double p);

/// Residual of the combinatorial identity expanding Delta_h^r f(xi) into
/// differences Delta^r f[u, v] anchored at xi, xi + r h and eta.  Throws if an
/// evaluation point leaves the domain or the convex hull of the three anchors.
double difference_transfer_residual(const RealFn& f, const DomainC2& dom,
                                    const Vec2& xi, const Vec2& eta, const Vec2& h,
                                    int r);

/// Tangential derivative powers (e_1 + g'(x0) e_2)^alpha applied to f and
/// evaluated at a world point; tangent vectors are not normalized.
double tangential_operator(const SpecialDomain& G, const Polynomial& f, int alpha,
                           double x0, const Vec2& world);

}  // namespace c2approx
