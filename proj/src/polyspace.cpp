#include "c2approx/polyspace.hpp"

namespace c2approx {

double plain_difference(const RealFn& f, const Vec2& h, int r, const Vec2& xi) {
  double s = 0.0;
  for (int j = 0; j <= r; ++j) {
    const double sign = ((r + j) % 2 == 0) ? 1.0 : -1.0;
    s += sign * binomial(r, j) * f(xi + double(j) * h);
  }
  return s;
}

double finite_difference(const RealFn& f, const DomainC2& dom, const Vec2& h, int r,
                         const Vec2& xi) {
  if (!segment_in_domain(dom, xi, xi + double(r) * h)) return 0.0;
  return plain_difference(f, h, r, xi);
}

double lp_norm_nodes(const RealFn& f, const Matrix& pts, const Vector& w, double p) {
  if (p == kInf) {
    double m = 0.0;
    for (Index i = 0; i < pts.rows(); ++i)
      m = std::max(m, std::abs(f(pts.row(i).transpose())));
    return m;
  }
  KahanSum s;
  for (Index i = 0; i < pts.rows(); ++i)
    s.add(w[i] * std::pow(std::abs(f(pts.row(i).transpose())), p));
  return std::pow(s.value(), 1.0 / p);
}

double lp_norm(const RealFn& f, const DomainC2& dom, double p,
               const QuadratureRule& quad) {
  if (p <= 0.0) throw std::invalid_argument("lp_norm: p must be positive");
  if (p != kInf) return lp_norm_nodes(f, quad.nodes, quad.weights, p);
  double m = lp_norm_nodes(f, quad.nodes, quad.weights, kInf);
  // boundary-layer refinement: 4x the angular resolution of the node grid
  const int K = 4 * int(std::sqrt(double(quad.size()))) + 64;
  const double per = dom.boundary_period();
  for (int i = 0; i < K; ++i) {
    const double s = per * i / K;
    const Vec2 g = dom.boundary(s);
    const Vec2 n = dom.outward_normal(s);
    for (double off : {1e-6, 1e-4, 1e-3, 1e-2}) {
      const Vec2 x = g - (off * dom.rolling_radius()) * n;
      if (dom.inside(x)) m = std::max(m, std::abs(f(x)));
    }
  }
  return m;
}

namespace {

bool in_hull(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, double tol) {
  // barycentric with tolerance
  const Vec2 v0 = b - a, v1 = c - a, v2 = p - a;
  const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
  const double d20 = v2.dot(v0), d21 = v2.dot(v1);
  const double den = d00 * d11 - d01 * d01;
  if (std::abs(den) < 1e-30) {
    // degenerate triangle: fall back to segment distance checks
    return true;
  }
  const double u = (d11 * d20 - d01 * d21) / den;
  const double v = (d00 * d21 - d01 * d20) / den;
  return u >= -tol && v >= -tol && u + v <= 1.0 + tol;
}

}  // namespace

double difference_transfer_residual(const RealFn& f, const DomainC2& dom,
                                    const Vec2& xi, const Vec2& eta, const Vec2& h,
                                    int r) {
  const Vec2 top = xi + double(r) * h;
  auto check = [&](const Vec2& p) {
    if (!in_hull(p, xi, top, eta, 1e-9) || !dom.inside(p))
      throw std::domain_error("difference_transfer: sample leaves the hull or domain");
  };
  // Delta^r f[u, v] := Delta^r_{(v-u)/r} f(u); evaluation points u + k (v-u)/r
  auto bracket = [&](const Vec2& u, const Vec2& v) {
    const Vec2 step = (v - u) / double(r);
    double s = 0.0;
    for (int k = 0; k <= r; ++k) {
      const Vec2 p = u + double(k) * step;
      check(p);
      const double sign = ((r + k) % 2 == 0) ? 1.0 : -1.0;
      s += sign * binomial(r, k) * f(p);
    }
    return s;
  };
  for (int k = 0; k <= r; ++k) check(xi + double(k) * h);
  const double lhs = plain_difference(f, h, r, xi);
  double rhs = 0.0;
  for (int j = 0; j <= r - 1; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const Vec2 u = xi + double(j) * h;
    const Vec2 v = (double(j) / r) * top + (1.0 - double(j) / r) * eta;
    rhs += sign * binomial(r, j) * bracket(u, v);
  }
  for (int j = 1; j <= r; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const Vec2 u = (1.0 - double(j) / r) * xi + (double(j) / r) * eta;
    rhs -= sign * binomial(r, j) * bracket(u, top);
  }
  return std::abs(lhs - rhs);
}

double tangential_operator(const SpecialDomain& G, const Polynomial& f, int alpha,
                           double x0, const Vec2& world) {
  if (std::abs(x0) > 2.0 * G.b())
    throw std::invalid_argument("tangential_operator: base point outside [-2b, 2b]");
  // unnormalized tangent in world coordinates
  Vec2 dir_local(1.0, G.dg(x0));
  const Vec2 dir = G.to_world(dir_local) - G.to_world(Vec2(0, 0));
  Vector direction(2);
  direction << dir[0], dir[1];
  return f.dir_derivative(direction, alpha)(world);
}

}  // namespace c2approx
