#include "c2approx/bernstein.hpp"

namespace c2approx {

namespace {

void gauss_legendre_pts(int n, Vector& x, Vector& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[n - 1 - i] = t;
    w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

PhiChart::PhiChart(std::shared_ptr<const SpecialDomain> G, double a_factor,
                   double lambda)
    : G_(std::move(G)), lambda_(lambda) {
  if (!(lambda > 1.0 && lambda < 2.0))
    throw std::invalid_argument("PhiChart: lambda must lie in (1,2)");
  if (lambda > G_->L())
    throw std::invalid_argument("PhiChart: lambda exceeds the domain depth parameter");
  scale_ = G_->b();
  double hess = 0.0, slope0 = std::abs(dghat(0.0));
  for (int i = 0; i <= 512; ++i) {
    const double x = -2.0 + 4.0 * i / 512;
    hess = std::max(hess, std::abs(ddghat(x)));
  }
  M_ = std::max({hess, slope0, 10.5});
  Abar_ = 10.0 * M_ * M_ + M_ + 1.0;
  A_ = a_factor * Abar_;
  if (A_ < Abar_) throw std::invalid_argument("PhiChart: A must be >= Abar");
  a0_ = std::sqrt(2.0 * lambda_ / (A_ + M_));
  a1_ = std::sqrt(2.0 / (A_ - M_));
}

double PhiChart::ghat(double x) const { return G_->g(x * scale_) / scale_; }
double PhiChart::dghat(double x) const { return G_->dg(x * scale_); }
double PhiChart::ddghat(double x) const { return G_->ddg(x * scale_) * scale_; }

Vec2 PhiChart::to_chart(const Vec2& world) const {
  return G_->to_local(world) / scale_;
}
Vec2 PhiChart::chart_to_world(const Vec2& chart) const {
  return G_->to_world(chart * scale_);
}

bool PhiChart::chart_contains(const Vec2& chart) const {
  if (std::abs(chart[0]) > 1.0) return false;
  const double w = delta(chart);
  return w >= -1e-12 && w <= 1.0 + 1e-12;
}

Vec2 PhiChart::phi_map(double z, double t) const {
  const double qa = ghat(z) + dghat(z) * t - 0.5 * A_ * t * t;
  return Vec2(z + t, qa);
}

std::pair<double, double> PhiChart::phi_invert(const Vec2& chart) const {
  if (!chart_contains(chart)) throw std::domain_error("phi_invert: point outside the chart strip");
  const double x = chart[0];
  const double w = std::max(delta(chart), 0.0);
  auto h = [&](double t) {
    return ghat(x) - (ghat(x - t) + dghat(x - t) * t - 0.5 * A_ * t * t);
  };
  double lo = 0.0, hi = a1_;
  if (h(hi) < w) hi = a1_ * 1.0000001;  // guard roundoff at the deep end
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) < w) lo = mid;
    else hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 30; ++it) {
    const double dh = (A_ + ddghat(x - t)) * t;
    if (dh <= 0.0) break;
    const double step = (h(t) - w) / dh;
    t -= step;
    t = std::clamp(t, 0.0, a1_ * 1.0000001);
    if (std::abs(step) < 1e-16) break;
  }
  return {x - t, t};
}

double PhiChart::jacobian(double z, double t) const {
  return (A_ + ddghat(z)) * std::abs(t);
}

double PhiChart::u_A(const Vec2& chart) const {
  const auto [z, t] = phi_invert(chart);
  return dghat(z + t) - dghat(z) + A_ * t;
}

double chart_derivative_identity_residual(const PhiChart& chart, const Polynomial& f,
                                          double z0, double t0, int r) {
  // direct side: d^r/dt^r f(phi_map(z0, t)) at t0 by central differences
  auto F = [&](double t) {
    const Vec2 p = chart.phi_map(z0, t);
    return f(p);
  };
  const double h = 1e-3 * std::max(chart.a1(), 1e-6);
  double direct = 0.0;
  if (r == 1) {
    direct = (F(t0 + h) - F(t0 - h)) / (2 * h);
  } else if (r == 2) {
    direct = (F(t0 + h) - 2 * F(t0) + F(t0 - h)) / (h * h);
  } else {
    throw std::invalid_argument("chart_derivative_identity_residual: r must be 1 or 2");
  }
  // operator side: S1 + S2 (complete expansion of the composite derivative)
  const Vec2 pt = chart.phi_map(z0, t0);
  const double u = chart.dghat(z0 + t0) - chart.dghat(z0) + chart.A() * t0;
  const double A = chart.A();
  double s12 = 0.0;
  for (int k = 0; 2 * k <= r; ++k) {
    for (int j = 0; j + 2 * k <= r; ++j) {
      const int i = r - j - 2 * k;
      double coef = 1.0;
      // r! / (i! j! k! 2^k)
      for (int v = 1; v <= r; ++v) coef *= v;
      for (int v = 1; v <= i; ++v) coef /= v;
      for (int v = 1; v <= j; ++v) coef /= v;
      for (int v = 1; v <= k; ++v) coef /= v;
      coef /= std::pow(2.0, k);
      const double fact = coef * std::pow(-u, j) * std::pow(-A, k);
      s12 += fact * tangential_d_operator(chart, f, i, j + k, pt);
    }
  }
  return std::abs(direct - s12);
}

double tangential_d_operator(const PhiChart& chart, const Polynomial& f, int r,
                             int d2_order, const Vec2& chart_pt) {
  Polynomial base = f;
  for (int k = 0; k < d2_order; ++k) base = base.partial(1);
  // D^r = sum_m C(r,m) g'(x)^m d1^(r-m) d2^m with the slope frozen at x
  const double s = chart.dghat(chart_pt[0]);
  double val = 0.0;
  for (int m = 0; m <= r; ++m) {
    Polynomial pm = base;
    for (int k = 0; k < r - m; ++k) pm = pm.partial(0);
    for (int k = 0; k < m; ++k) pm = pm.partial(1);
    val += binomial(r, m) * std::pow(s, m) * pm(chart_pt);
  }
  return val;
}

namespace {

/// Iterated Gauss-Legendre over the chart strip G(lambda) in chart coordinates.
QuadratureRule chart_quadrature(const PhiChart& chart, double lambda, int nx, int ny) {
  QuadratureRule q;
  Vector xx, wx, xy, wy;
  gauss_legendre_pts(nx, xx, wx);
  gauss_legendre_pts(ny, xy, wy);
  q.nodes.resize(Index(nx) * ny, 2);
  q.weights.resize(Index(nx) * ny);
  Index k = 0;
  for (int i = 0; i < nx; ++i) {
    const double x = lambda * xx[i];
    const double gx = chart.ghat(x);
    for (int j = 0; j < ny; ++j) {
      const double y = gx - lambda * 0.5 * (1.0 - xy[j]);
      q.nodes(k, 0) = x;
      q.nodes(k, 1) = y;
      q.weights[k] = (lambda * wx[i]) * (0.5 * lambda * wy[j]);
      ++k;
    }
  }
  return q;
}

double chart_norm(const QuadratureRule& q, const std::function<double(Vec2)>& f,
                  double p) {
  if (p == kInf) {
    double m = 0.0;
    for (Index i = 0; i < q.size(); ++i)
      m = std::max(m, std::abs(f(q.node(i))));
    return m;
  }
  double s = 0.0;
  for (Index i = 0; i < q.size(); ++i)
    s += q.weights[i] * std::pow(std::abs(f(q.node(i))), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

RatioReport tangential_bernstein_ratio(const PhiChart& chart, int n, int r, int i,
                                       int j, double p, int trials,
                                       std::uint64_t seed) {
  const double lambda = chart.lambda();
  // bounding box of the strip G(lambda) in chart coordinates
  double glo = kInf, ghi = -kInf;
  for (int k = 0; k <= 128; ++k) {
    const double x = -lambda + 2.0 * lambda * k / 128;
    const double g = chart.ghat(x);
    glo = std::min(glo, g - lambda);
    ghi = std::max(ghi, g);
  }
  Box box;
  box.center = Vector(2);
  box.halfwidth = Vector(2);
  box.center << 0.0, 0.5 * (glo + ghi);
  box.halfwidth << lambda, 0.5 * (ghi - glo);

  const QuadratureRule qG = chart_quadrature(chart, 1.0, 12 * n + 32, 48);
  const QuadratureRule qGl = chart_quadrature(chart, lambda, 12 * n + 32, 48);

  RatioReport rep;
  rep.trials = trials;
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    Polynomial f = Polynomial::random(n, 2, box, Rng::derive(seed, t));
    Polynomial base = f;
    for (int k = 0; k < i + j; ++k) base = base.partial(1);
    std::vector<Polynomial> mix;  // d1^(r-m) d2^m of base
    for (int m = 0; m <= r; ++m) {
      Polynomial pm = base;
      for (int k = 0; k < r - m; ++k) pm = pm.partial(0);
      for (int k = 0; k < m; ++k) pm = pm.partial(1);
      mix.push_back(std::move(pm));
    }
    auto field = [&](const Vec2& pt) {
      const double s = chart.dghat(pt[0]);
      double v = 0.0;
      for (int m = 0; m <= r; ++m) v += binomial(r, m) * std::pow(s, m) * mix[m](pt);
      const double phi = std::sqrt(std::max(chart.delta(pt), 0.0)) + 1.0 / n;
      return std::pow(phi, i) * v;
    };
    const double num = chart_norm(qG, field, p);
    const double den = chart_norm(qGl, [&](const Vec2& x) { return f(x); }, p);
    const double ratio =
        num / (std::pow(double(n), r + i + 2 * j) * std::max(den, 1e-300));
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    acc += ratio;
  }
  rep.mean_ratio = acc / trials;
  return rep;
}

// ---------------------------------------------------------------------------
// maximal operator

MaximalOperator::MaximalOperator(DomainC2 dom, const Polynomial& f, int l1, int l2,
                                 int boundary_samples)
    : dom_(std::move(dom)), f_(f), l1_(l1), l2_(l2) {
  const int K = 4 * boundary_samples;  // 4x refinement built into the grid
  params_.resize(K);
  boundary_pts_.resize(K, 2);
  derived_.reserve(K);
  const double per = dom_.boundary_period();
  for (int k = 0; k < K; ++k) {
    const double s = per * k / K;
    params_[k] = s;
    boundary_pts_.row(k) = dom_.boundary(s).transpose();
    Vec2 d1 = dom_.boundary_d1(s);
    Vec2 tau = d1 / d1.norm();
    Vec2 nrm = dom_.outward_normal(s);
    Vector tdir(2), ndir(2);
    tdir << tau[0], tau[1];
    ndir << nrm[0], nrm[1];
    Polynomial g = f_.dir_derivative(tdir, l1_).dir_derivative(ndir, l2_);
    derived_.push_back(std::move(g));
  }
}

double MaximalOperator::operator()(const Vec2& xi, int n, double mu) const {
  const double radius = mu * (std::sqrt(dom_.boundary_distance(xi)) + 1.0 / n);
  return window_value(xi, radius);
}

double MaximalOperator::window_value(const Vec2& xi, double radius) const {
  double best = 0.0;
  bool any = false;
  for (Index k = 0; k < params_.size(); ++k) {
    if ((boundary_pts_.row(k).transpose() - xi).norm() > radius) continue;
    any = true;
    best = std::max(best, std::abs(derived_[size_t(k)](xi)));
  }
  if (!any) {
    // the window always contains the boundary projection; fall back to the
    // nearest grid sample when the grid is coarser than the window
    Index nearest = 0;
    double nd = kInf;
    for (Index k = 0; k < params_.size(); ++k) {
      const double d = (boundary_pts_.row(k).transpose() - xi).norm();
      if (d < nd) {
        nd = d;
        nearest = k;
      }
    }
    best = std::abs(derived_[size_t(nearest)](xi));
  }
  return best;
}

RatioReport global_bernstein_ratio(const DomainC2& dom, int n, int r, int j, int l,
                                   double p, double mu, int trials,
                                   std::uint64_t seed, const NodeSet& nodes,
                                   Index node_cap) {
  const Index stride = std::max<Index>(1, nodes.size() / node_cap);
  std::vector<Index> subs;
  for (Index i = 0; i < nodes.size(); i += stride) subs.push_back(i);
  const Box box = Box::cube(2, 0.0, dom.bounding_radius());

  RatioReport rep;
  rep.trials = trials;
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    Polynomial f = Polynomial::random(n, 2, box, Rng::derive(seed, t));
    MaximalOperator M(dom, f, r, j + l, 256);
    double sup = 0.0;
    KahanSum sum;
    for (Index i : subs) {
      const Vec2 xi = nodes.quad.node(i);
      const double phi = std::sqrt(nodes.dist[i]) + 1.0 / n;
      const double radius = mu * phi;
      const double v = std::pow(phi, j) * M.window_value(xi, radius);
      if (p == kInf)
        sup = std::max(sup, v);
      else
        sum.add(double(stride) * nodes.quad.weights[i] * std::pow(v, p));
    }
    const double num = (p == kInf) ? sup : std::pow(sum.value(), 1.0 / p);
    const double den = lp_norm(as_fn(f), dom, p, nodes.quad);
    const double ratio =
        num / (std::pow(double(n), r + j + 2 * l) * std::max(den, 1e-300));
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    acc += ratio;
  }
  rep.mean_ratio = acc / trials;
  return rep;
}

}  // namespace c2approx
