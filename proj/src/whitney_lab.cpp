#include "c2approx/whitney_lab.hpp"

#include "c2approx/moduli.hpp"

namespace c2approx {

bool SampledBody::segment_inside(const Vec2& a, const Vec2& b, int samples) const {
  for (int i = 0; i <= samples; ++i) {
    const double t = double(i) / samples;
    if (!inside(a + t * (b - a))) return false;
  }
  return true;
}

namespace {

SampledBody sample_region(const std::string& tag,
                          std::function<bool(const Vec2&)> inside, const Vec2& lo,
                          const Vec2& hi, int grid) {
  SampledBody b;
  b.tag = tag;
  b.inside = std::move(inside);
  std::vector<Vec2> pts;
  const double cellw = (hi[0] - lo[0]) / grid, cellh = (hi[1] - lo[1]) / grid;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 p(lo[0] + (i + 0.5) * cellw, lo[1] + (j + 0.5) * cellh);
      if (b.inside(p)) pts.push_back(p);
    }
  }
  if (pts.empty()) throw std::invalid_argument("sample_region: empty body");
  b.pts.resize(Index(pts.size()), 2);
  for (size_t i = 0; i < pts.size(); ++i) b.pts.row(Index(i)) = pts[i].transpose();
  b.weights = Vector::Constant(Index(pts.size()), cellw * cellh);
  b.box = Box::make2(0.5 * (lo + hi), 0.5 * (hi - lo));
  double d = 0.0;
  for (size_t i = 0; i < pts.size(); i += 3)
    for (size_t j = i; j < pts.size(); j += 3)
      d = std::max(d, (pts[i] - pts[j]).norm());
  b.diameter = d;
  return b;
}

}  // namespace

ConvexBody2D ConvexBody2D::ellipse(const Vec2& center, double a, double b,
                                   double angle, int grid) {
  ConvexBody2D body;
  body.kind = Kind::ellipse;
  const double c = std::cos(angle), s = std::sin(angle);
  auto inside = [=](const Vec2& p) {
    const Vec2 q = p - center;
    const double u = c * q[0] + s * q[1];
    const double v = -s * q[0] + c * q[1];
    return sqr(u / a) + sqr(v / b) <= 1.0;
  };
  const double r = std::max(a, b);
  body.body = sample_region("ellipse", inside, center - Vec2(r, r),
                            center + Vec2(r, r), grid);
  return body;
}

ConvexBody2D ConvexBody2D::smoothed_polygon(double a, double b, double m, int grid) {
  ConvexBody2D body;
  body.kind = Kind::smoothed_polygon;
  auto inside = [=](const Vec2& p) {
    return std::pow(std::abs(p[0] / a), m) + std::pow(std::abs(p[1] / b), m) <= 1.0;
  };
  body.body = sample_region("superellipse", inside, Vec2(-a, -b), Vec2(a, b), grid);
  return body;
}

ConvexBody2D ConvexBody2D::graph_slab(std::function<double(double)> g1,
                                      std::function<double(double)> g2, double x0,
                                      double x1, int grid) {
  ConvexBody2D body;
  body.kind = Kind::graph_slab;
  double ylo = kInf, yhi = -kInf;
  for (int i = 0; i <= 64; ++i) {
    const double x = x0 + (x1 - x0) * i / 64;
    ylo = std::min(ylo, g1(x));
    yhi = std::max(yhi, g2(x));
  }
  auto inside = [=](const Vec2& p) {
    if (p[0] < x0 || p[0] > x1) return false;
    return p[1] >= g1(p[0]) && p[1] <= g2(p[0]);
  };
  body.body =
      sample_region("graph_slab", inside, Vec2(x0, ylo), Vec2(x1, yhi), grid);
  return body;
}

bool ConvexBody2D::convex_probe(Rng& rng, int trials) const {
  const Index n = body.pts.rows();
  for (int t = 0; t < trials; ++t) {
    const Vec2 a = body.pts.row(Index(rng.integer(std::uint64_t(n)))).transpose();
    const Vec2 b = body.pts.row(Index(rng.integer(std::uint64_t(n)))).transpose();
    if (!body.inside(0.5 * (a + b))) return false;
  }
  return true;
}

double body_directional_modulus(const SampledBody& body, const RealFn& f, int r,
                                double p, const std::vector<Vec2>& dirs,
                                int h_grid) {
  const Vector grid = sup_grid(body.diameter / r, h_grid, 32.0);
  double best = 0.0;
  for (const Vec2& e : dirs) {
    for (Index ig = 0; ig < grid.size(); ++ig) {
      const double u = grid[ig];
      double acc = 0.0, sup = 0.0;
      for (Index i = 0; i < body.pts.rows(); ++i) {
        const Vec2 x = body.pts.row(i).transpose();
        if (!body.segment_inside(x, x + double(r) * u * e, 8 * r)) continue;
        double d = 0.0;
        for (int k = 0; k <= r; ++k) {
          const double sign = ((r + k) % 2 == 0) ? 1.0 : -1.0;
          d += sign * binomial(r, k) * f(x + double(k) * u * e);
        }
        if (p == kInf)
          sup = std::max(sup, std::abs(d));
        else
          acc += body.weights[i] * std::pow(std::abs(d), p);
      }
      best = std::max(best, p == kInf ? sup : std::pow(acc, 1.0 / p));
    }
  }
  return best;
}

std::vector<Vec2> direction_grid(int count) {
  std::vector<Vec2> dirs;
  dirs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double a = kPi * i / count;  // antipodal pairs are redundant
    dirs.emplace_back(std::cos(a), std::sin(a));
  }
  return dirs;
}

WhitneyRatio whitney_ratio(const ConvexBody2D& body, const RealFn& f, int r, double p,
                           const DirectionSet& dirs) {
  WhitneyRatio out;
  ApproxResult ap = whitney_approx(f, body.body.pts, body.body.weights, r, dirs, p,
                                   body.body.box);
  out.numerator = ap.error;
  std::vector<Vec2> ds;
  for (const auto& e : dirs.directions) ds.emplace_back(e[0], e[1]);
  out.denominator = body_directional_modulus(body.body, f, r, p, ds);
  if (out.numerator < 1e-12 && out.denominator < 1e-12) {
    out.ratio = 0.0;
  } else {
    out.ratio = out.numerator / std::max(out.denominator, 1e-300);
  }
  return out;
}

WhitneyRatio whitney_ratio_full(const ConvexBody2D& body, const RealFn& f, int r,
                                double p) {
  DirectionSet dirs;
  for (const Vec2& e : direction_grid(64)) {
    Vector v(2);
    v << e[0], e[1];
    dirs.directions.push_back(v);
  }
  // full-sphere version approximates Pi_{r-1}(S^1) = Pi_{r-1}
  WhitneyRatio out;
  DirectionSet small;
  for (const Vec2& e : direction_grid(4)) {
    Vector v(2);
    v << e[0], e[1];
    small.directions.push_back(v);
  }
  ApproxResult ap = whitney_approx(f, body.body.pts, body.body.weights, r, small, p,
                                   body.body.box);
  out.numerator = ap.error;
  std::vector<Vec2> ds = direction_grid(64);
  out.denominator = body_directional_modulus(body.body, f, r, p, ds);
  out.ratio = (out.numerator < 1e-12 && out.denominator < 1e-12)
                  ? 0.0
                  : out.numerator / std::max(out.denominator, 1e-300);
  return out;
}

TransferReport transfer_step_check(const SampledBody& K, const SampledBody& J,
                                   const Vec2& h, int r, const RealFn& f, double p,
                                   const DirectionSet& dirs) {
  // hypothesis (i): J subset of the intersection of K + j h
  for (Index i = 0; i < J.pts.rows(); ++i) {
    const Vec2 xi = J.pts.row(i).transpose();
    for (int j = 1; j <= r; ++j) {
      if (!K.inside(xi - double(j) * h))
        throw std::domain_error("transfer_step_check: J is not inside K + jh");
    }
    // hypothesis (ii): [xi - r h, xi] subset K u J
    for (int s = 0; s <= 24; ++s) {
      const Vec2 pnt = xi - (double(s) / 24) * double(r) * h;
      if (!K.inside(pnt) && !J.inside(pnt))
        throw std::domain_error("transfer_step_check: segment leaves K u J");
    }
  }
  const double theta = std::min(p, 1.0);
  // union body
  SampledBody U = K;
  U.tag = K.tag + "+" + J.tag;
  {
    Matrix pts(K.pts.rows() + J.pts.rows(), 2);
    pts.topRows(K.pts.rows()) = K.pts;
    pts.bottomRows(J.pts.rows()) = J.pts;
    Vector w(pts.rows());
    w.head(K.pts.rows()) = K.weights;
    w.tail(J.pts.rows()) = J.weights;
    U.pts = pts;
    U.weights = w;
    auto kin = K.inside, jin = J.inside;
    U.inside = [kin, jin](const Vec2& x) { return kin(x) || jin(x); };
    double d = 0.0;
    for (Index i = 0; i < pts.rows(); i += 3)
      for (Index j = i; j < pts.rows(); j += 3)
        d = std::max(d, (pts.row(i) - pts.row(j)).norm());
    U.diameter = d;
    Vec2 lo = pts.colwise().minCoeff().transpose();
    Vec2 hi = pts.colwise().maxCoeff().transpose();
    U.box = Box::make2(0.5 * (lo + hi), 0.5 * (hi - lo) + Vec2(1e-6, 1e-6));
  }
  ApproxResult on_union = whitney_approx(f, U.pts, U.weights, r, dirs, p, U.box);
  ApproxResult on_k = whitney_approx(f, K.pts, K.weights, r, dirs, p, U.box);
  const Vec2 e = h / h.norm();
  const double om = body_directional_modulus(U, f, r, p, {e});
  TransferReport rep;
  rep.lhs = std::pow(on_union.error, theta);
  rep.rhs = std::pow(om, theta) + std::pow(2.0, r) * std::pow(on_k.error, theta);
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  rep.slack = rep.rhs - rep.lhs;
  return rep;
}

SlabReport graph_slab_whitney(std::function<double(double)> g1,
                              std::function<double(double)> g2,
                              std::function<double(double)> H, double delta,
                              double L, double x0, double x1, const RealFn& f, int r,
                              double p, int grid) {
  ConvexBody2D G = ConvexBody2D::graph_slab(g1, g2, x0, x1, grid);
  auto s1 = [&](double x) { return H(x) - delta; };
  auto s2 = [&](double x) { return H(x) + delta; };
  ConvexBody2D S = ConvexBody2D::graph_slab(s1, s2, x0, x1, grid);
  DirectionSet exy;
  {
    Vector ex(2), ey(2);
    ex << 1, 0;
    ey << 0, 1;
    exy.directions = {ex, ey};
  }
  DirectionSet ex_only;
  {
    Vector ex(2);
    ex << 1, 0;
    ex_only.directions = {ex};
  }
  SlabReport rep;
  // approximation from Pi_{r-1}(E u {e2}) over G; E = {e1}
  ApproxResult ap =
      whitney_approx(f, G.body.pts, G.body.weights, r, exy, p, G.body.box);
  rep.lhs = ap.error;
  const double om_s = body_directional_modulus(S.body, f, r, p, {Vec2(1, 0)});
  const double om_g = body_directional_modulus(G.body, f, r, p, {Vec2(0, 1)});
  rep.rhs = om_s + om_g;
  rep.fitted_c = rep.lhs / std::max(rep.rhs, 1e-300);
  (void)L;
  return rep;
}

}  // namespace c2approx
