#include "c2approx/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace c2approx {

namespace {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, Vector& x, Vector& w) {
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

struct ArcTable {
  Vector s;    // parameter samples
  Vector arc;  // cumulative arc length
  double total = 0.0;
};

}  // namespace

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile RadialProfile::cosine_series(Vector coeffs) {
  auto c = std::make_shared<Vector>(std::move(coeffs));
  RadialProfile p;
  p.R = [c](double th) {
    double s = (*c)[0];
    for (Index k = 1; k < c->size(); ++k) s += (*c)[k] * std::cos(k * th);
    return s;
  };
  p.dR = [c](double th) {
    double s = 0.0;
    for (Index k = 1; k < c->size(); ++k) s -= (*c)[k] * double(k) * std::sin(k * th);
    return s;
  };
  p.ddR = [c](double th) {
    double s = 0.0;
    for (Index k = 1; k < c->size(); ++k)
      s -= (*c)[k] * double(k * k) * std::cos(k * th);
    return s;
  };
  return p;
}

RadialProfile RadialProfile::ellipse(double a, double b) {
  RadialProfile p;
  auto den = [a, b](double th) {
    const double c = std::cos(th), s = std::sin(th);
    return std::sqrt(b * b * c * c + a * a * s * s);
  };
  p.R = [a, b, den](double th) { return a * b / den(th); };
  p.dR = [a, b, den](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double d = den(th);
    const double dd = (a * a - b * b) * s * c / d;
    return -a * b * dd / (d * d);
  };
  p.ddR = [a, b, den](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double d = den(th);
    const double q = (a * a - b * b);
    const double dd = q * s * c / d;
    const double ddd = q * (c * c - s * s) / d - dd * dd / d;
    return a * b * (2.0 * dd * dd / (d * d * d) - ddd / (d * d));
  };
  return p;
}

// ---------------------------------------------------------------------------
// DomainC2

struct DomainC2::Impl {
  Kind kind;
  std::string name;
  RadialProfile radial;  // star only
  std::shared_ptr<const SpecialDomain> special;

  double bounding_radius = 0.0;
  double curvature_bound = 0.0;
  double rolling_radius = 0.0;
  double diameter = 0.0;

  // dense boundary seed table
  Matrix seed_pts;  // K x 2
  Vector seed_s;
  ArcTable arcs;

  Vec2 gamma(double s) const;
  Vec2 gamma_d1(double s) const;
  Vec2 gamma_d2(double s) const;
  double period() const { return kind == Kind::star_shaped ? 2.0 * kPi : 4.0; }
  bool inside(const Vec2& p) const;
};

Vec2 DomainC2::Impl::gamma(double s) const {
  if (kind == Kind::star_shaped) {
    const double r = radial.R(s);
    return Vec2(r * std::cos(s), r * std::sin(s));
  }
  // graph domain:四 pieces, s in [0,4)
  const auto& g = *special;
  double u = s - std::floor(s / 4.0) * 4.0;
  const double b = g.b(), depth = g.depth();
  Vec2 local;
  if (u < 1.0) {  // top graph, x from -b to b
    const double x = -b + 2.0 * b * u;
    local = Vec2(x, g.g(x));
  } else if (u < 2.0) {  // right side, downward
    const double y = g.g(b) - depth * (u - 1.0);
    local = Vec2(b, y);
  } else if (u < 3.0) {  // bottom, x from b to -b
    const double x = b - 2.0 * b * (u - 2.0);
    local = Vec2(x, g.g(x) - depth);
  } else {  // left side, upward
    const double y = g.g(-b) - depth + depth * (u - 3.0);
    local = Vec2(-b, y);
  }
  return g.to_world(local);
}

Vec2 DomainC2::Impl::gamma_d1(double s) const {
  if (kind == Kind::star_shaped) {
    const double r = radial.R(s), dr = radial.dR(s);
    const double c = std::cos(s), sn = std::sin(s);
    return Vec2(dr * c - r * sn, dr * sn + r * c);
  }
  const double h = 1e-6;
  return (gamma(s + h) - gamma(s - h)) / (2.0 * h);
}

Vec2 DomainC2::Impl::gamma_d2(double s) const {
  if (kind == Kind::star_shaped) {
    const double r = radial.R(s), dr = radial.dR(s), ddr = radial.ddR(s);
    const double c = std::cos(s), sn = std::sin(s);
    return Vec2(ddr * c - 2.0 * dr * sn - r * c, ddr * sn + 2.0 * dr * c - r * sn);
  }
  const double h = 1e-5;
  return (gamma(s + h) - 2.0 * gamma(s) + gamma(s - h)) / (h * h);
}

bool DomainC2::Impl::inside(const Vec2& p) const {
  if (kind == Kind::star_shaped) {
    const double r2 = p.squaredNorm();
    if (r2 == 0.0) return true;
    const double th = std::atan2(p[1], p[0]);
    const double R = radial.R(th);
    return r2 <= R * R * (1.0 + 1e-14);
  }
  return special->contains(p);
}

namespace {

constexpr int kSeedCount = 1024;

std::shared_ptr<DomainC2::Impl> finish_impl(std::shared_ptr<DomainC2::Impl> impl) {
  auto& I = *impl;
  const double per = I.period();
  I.seed_s.resize(kSeedCount);
  I.seed_pts.resize(kSeedCount, 2);
  for (int i = 0; i < kSeedCount; ++i) {
    const double s = per * i / kSeedCount;
    I.seed_s[i] = s;
    I.seed_pts.row(i) = I.gamma(s).transpose();
  }
  // bounding radius, diameter
  double rmax = 0.0;
  for (int i = 0; i < kSeedCount; ++i)
    rmax = std::max(rmax, I.seed_pts.row(i).norm());
  I.bounding_radius = rmax * (1.0 + 1e-9);
  double diam = 0.0;
  for (int i = 0; i < kSeedCount; i += 4)
    for (int j = i; j < kSeedCount; j += 4)
      diam = std::max(diam, (I.seed_pts.row(i) - I.seed_pts.row(j)).norm());
  I.diameter = diam;
  // arc length table
  const int K = 4096;
  I.arcs.s.resize(K + 1);
  I.arcs.arc.resize(K + 1);
  double acc = 0.0;
  Vec2 prev = I.gamma(0.0);
  I.arcs.s[0] = 0.0;
  I.arcs.arc[0] = 0.0;
  for (int i = 1; i <= K; ++i) {
    const double s = per * i / K;
    const Vec2 cur = I.gamma(s);
    acc += (cur - prev).norm();
    prev = cur;
    I.arcs.s[i] = s;
    I.arcs.arc[i] = acc;
  }
  I.arcs.total = acc;
  // curvature bound and rolling radius (star domains)
  if (I.kind == DomainC2::Kind::star_shaped) {
    double kmax = 0.0, kabs = 0.0;
    for (int i = 0; i < kSeedCount; ++i) {
      const double th = I.seed_s[i];
      const double R = I.radial.R(th), dR = I.radial.dR(th), ddR = I.radial.ddR(th);
      const double num = R * R + 2.0 * dR * dR - R * ddR;
      const double den = std::pow(R * R + dR * dR, 1.5);
      const double kappa = num / den;
      kmax = std::max(kmax, kappa);
      kabs = std::max(kabs, std::abs(kappa));
    }
    I.curvature_bound = kabs;
    double r0 = 0.9 / std::max(kmax, 1e-12);
    // shrink until the interior rolling-ball probe holds
    auto rolling_ok = [&](double r) {
      for (int i = 0; i < 256; ++i) {
        const double s = I.period() * i / 256;
        const Vec2 p = I.gamma(s);
        const Vec2 d1 = I.gamma_d1(s);
        Vec2 n(d1[1], -d1[0]);  // outward for CCW star curves
        n /= n.norm();
        for (double f : {0.25, 0.5, 0.75, 0.999}) {
          if (!I.inside(p - (f * r) * n)) return false;
        }
      }
      return true;
    };
    while (r0 > 1e-6 && !rolling_ok(r0)) r0 *= 0.7;
    I.rolling_radius = r0;
  } else {
    const auto& g = *I.special;
    I.curvature_bound = g.hess_bound();
    I.rolling_radius = 0.25 * std::min(g.b(), g.depth());
  }
  return impl;
}

}  // namespace

DomainC2 DomainC2::star(const RadialProfile& profile, std::string name) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::star_shaped;
  impl->name = std::move(name);
  impl->radial = profile;
  DomainC2 d;
  d.impl_ = finish_impl(std::move(impl));
  return d;
}

DomainC2 DomainC2::disk() {
  Vector c(1);
  c[0] = 1.0;
  return star(RadialProfile::cosine_series(c), "disk");
}

DomainC2 DomainC2::ellipse(double a, double b) {
  return star(RadialProfile::ellipse(a, b), "ellipse");
}

DomainC2 DomainC2::bump() {
  Vector c(4);
  c.setZero();
  c[0] = 1.0;
  c[3] = 0.2;
  return star(RadialProfile::cosine_series(c), "bump");
}

DomainC2 DomainC2::from_special(std::shared_ptr<const SpecialDomain> g,
                                std::string name) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::graph_special;
  impl->name = std::move(name);
  impl->special = std::move(g);
  DomainC2 d;
  d.impl_ = finish_impl(std::move(impl));
  return d;
}

DomainC2::Kind DomainC2::kind() const { return impl_->kind; }
const std::string& DomainC2::name() const { return impl_->name; }
double DomainC2::bounding_radius() const { return impl_->bounding_radius; }
double DomainC2::curvature_bound() const { return impl_->curvature_bound; }
double DomainC2::rolling_radius() const { return impl_->rolling_radius; }
double DomainC2::diameter() const { return impl_->diameter; }
double DomainC2::boundary_length() const { return impl_->arcs.total; }
bool DomainC2::inside(const Vec2& p) const { return impl_->inside(p); }
Vec2 DomainC2::boundary(double s) const { return impl_->gamma(s); }
Vec2 DomainC2::boundary_d1(double s) const { return impl_->gamma_d1(s); }
Vec2 DomainC2::boundary_d2(double s) const { return impl_->gamma_d2(s); }
double DomainC2::boundary_period() const { return impl_->period(); }
const SpecialDomain* DomainC2::special() const { return impl_->special.get(); }

Vec2 DomainC2::outward_normal(double s) const {
  const Vec2 d1 = impl_->gamma_d1(s);
  Vec2 n(d1[1], -d1[0]);
  n /= n.norm();
  if (impl_->kind == Kind::star_shaped) return n;
  // orient outward by probing
  const Vec2 p = impl_->gamma(s);
  const double eps = 1e-6 * impl_->bounding_radius;
  if (impl_->inside(p + eps * n)) n = -n;
  return n;
}

double DomainC2::param_at_arclength(double arc) const {
  const auto& t = impl_->arcs;
  double a = std::fmod(arc, t.total);
  if (a < 0) a += t.total;
  const auto it = std::lower_bound(t.arc.data(), t.arc.data() + t.arc.size(), a);
  Index i = std::max<Index>(1, it - t.arc.data());
  const double w = (a - t.arc[i - 1]) / std::max(t.arc[i] - t.arc[i - 1], 1e-300);
  return t.s[i - 1] + w * (t.s[i] - t.s[i - 1]);
}

double DomainC2::closest_boundary_param(const Vec2& xi) const {
  const auto& I = *impl_;
  Index best = 0;
  double bd = kInf;
  for (Index i = 0; i < I.seed_pts.rows(); ++i) {
    const double d = (I.seed_pts.row(i).transpose() - xi).squaredNorm();
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  const double per = I.period();
  const double ds = per / kSeedCount;
  double s = I.seed_s[best];
  // Newton on F(s) = (xi - gamma(s)) . gamma'(s)
  bool ok = false;
  double sn = s;
  for (int it = 0; it < 50; ++it) {
    const Vec2 g = I.gamma(sn), d1 = I.gamma_d1(sn), d2 = I.gamma_d2(sn);
    const Vec2 r = xi - g;
    const double F = r.dot(d1);
    const double dF = -d1.squaredNorm() + r.dot(d2);
    if (dF == 0.0) break;
    const double step = F / dF;
    sn -= step;
    if (std::abs(sn - s) > 2.0 * ds) break;  // diverged from the seed cell
    if (std::abs(step) < 1e-14 * per) {
      ok = true;
      break;
    }
  }
  if (ok) return sn;
  // golden-section fallback on |xi - gamma(s)|^2 around the seed
  double lo = s - ds, hi = s + ds;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  auto f = [&](double t) { return (xi - I.gamma(t)).squaredNorm(); };
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * per; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

double DomainC2::boundary_distance(const Vec2& xi) const {
  const auto& I = *impl_;
  if (!I.inside(xi)) throw std::domain_error("boundary_distance: point outside domain");
  if (I.kind == Kind::graph_special) {
    const auto& g = *I.special;
    const Vec2 l = g.to_local(xi);
    const double b = g.b(), depth = g.depth();
    double d = g.dist_to_graph_patch(l, 0.0, -b, b);
    d = std::min(d, g.dist_to_graph_patch(l, -depth, -b, b));
    d = std::min(d, dist_to_segment(l, Vec2(b, g.g(b) - depth), Vec2(b, g.g(b))));
    d = std::min(d, dist_to_segment(l, Vec2(-b, g.g(-b) - depth), Vec2(-b, g.g(-b))));
    return std::max(d, 0.0);
  }
  const double s = closest_boundary_param(xi);
  return (xi - I.gamma(s)).norm();
}

// ---------------------------------------------------------------------------
// free geometric operations

double metric_rho(const DomainC2& dom, const Vec2& xi, const Vec2& eta) {
  return metric_rho_d(xi, eta, dom.boundary_distance(xi), dom.boundary_distance(eta));
}

bool segment_in_domain(const DomainC2& dom, const Vec2& xi, const Vec2& eta) {
  const double len = (xi - eta).norm();
  if (len == 0.0) return dom.inside(xi);
  Index K = Index(std::ceil(len / (1e-3 * dom.rolling_radius()))) + 2;
  K = std::min<Index>(K, 200000);
  for (Index i = 0; i <= K; ++i) {
    const double t = double(i) / double(K);
    if (!dom.inside(xi + t * (eta - xi))) return false;
  }
  return true;
}

namespace {

/// Largest l >= 0 with [xi, xi + l e] inside; first-crossing bracket + bisection.
double reach_length(const DomainC2& dom, const Vec2& xi, const Vec2& e) {
  const double R = dom.bounding_radius();
  if (!dom.inside(xi)) return 0.0;
  const double step = 1e-3 * R;
  double lo = 0.0, hi = 0.0;
  const double lmax = 2.0 * R + step;
  while (hi < lmax) {
    hi = lo + step;
    if (!dom.inside(xi + hi * e)) break;
    lo = hi;
  }
  if (hi >= lmax) return lo;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dom.inside(xi + mid * e)) lo = mid;
    else hi = mid;
    if (hi - lo < 1e-12 * R) break;
  }
  return lo;
}

}  // namespace

double phi_dt(const DomainC2& dom, const Vec2& e, const Vec2& xi) {
  const Vec2 u = e / e.norm();
  const double lp = reach_length(dom, xi, u);
  const double lm = reach_length(dom, xi, -u);
  return std::sqrt(lp * lm);
}

double varphi_n_gamma(const DomainC2& dom, const Vec2& xi, int n) {
  return std::sqrt(dom.boundary_distance(xi)) + 1.0 / double(n);
}

// ---------------------------------------------------------------------------
// quadrature

QuadratureRule build_quadrature(const DomainC2& dom, double accuracy,
                                Index min_nodes) {
  if (accuracy <= 1e-14 || accuracy >= 1e-3)
    throw std::invalid_argument("build_quadrature: accuracy out of range");
  if (dom.kind() == DomainC2::Kind::graph_special) {
    QuadratureRule q = dom.special()->quadrature(accuracy);
    int nx = 48, ny = 32;
    while (q.size() < min_nodes) {
      nx *= 2;
      ny *= 2;
      q = dom.special()->quadrature_fixed(nx, ny, 1.0);
      q.declared_accuracy = accuracy;
    }
    return q;
  }

  auto level_rule = [&](int nth, int nr) {
    QuadratureRule q;
    Vector xr, wr;
    gauss_legendre(nr, xr, wr);
    Vector xt(nth), wt(nth);
    {
      Vector x0, w0;
      gauss_legendre(nth, x0, w0);
      for (int i = 0; i < nth; ++i) {
        xt[i] = kPi * (x0[i] + 1.0);
        wt[i] = kPi * w0[i];
      }
    }
    q.nodes.resize(Index(nth) * nr, 2);
    q.weights.resize(Index(nth) * nr);
    Index k = 0;
    for (int i = 0; i < nth; ++i) {
      const double th = xt[i];
      const double R = dom.boundary(th).norm();
      for (int j = 0; j < nr; ++j) {
        const double rho = 0.5 * (xr[j] + 1.0);
        const double r = rho * R;
        q.nodes(k, 0) = r * std::cos(th);
        q.nodes(k, 1) = r * std::sin(th);
        q.weights[k] = wt[i] * (0.5 * wr[j]) * rho * R * R;
        ++k;
      }
    }
    return q;
  };

  int nth = 32, nr = 12;
  QuadratureRule prev = level_rule(nth, nr);
  for (int lev = 0; lev < 12; ++lev) {
    nth *= 2;
    nr *= 2;
    QuadratureRule cur = level_rule(nth, nr);
    auto moment = [](const QuadratureRule& q, bool second) {
      double s = 0.0;
      for (Index i = 0; i < q.size(); ++i)
        s += q.weights[i] * (second ? q.nodes.row(i).squaredNorm() : 1.0);
      return s;
    };
    const double a0 = moment(prev, false), a1 = moment(cur, false);
    const double b0 = moment(prev, true), b1 = moment(cur, true);
    if (cur.size() >= min_nodes && std::abs(a1 - a0) <= accuracy * std::abs(a1) &&
        std::abs(b1 - b0) <= accuracy * std::abs(b1)) {
      cur.declared_accuracy = accuracy;
      return cur;
    }
    prev = std::move(cur);
  }
  throw std::runtime_error("build_quadrature: no convergence after 12 doublings");
}

NodeSet make_node_set(const DomainC2& dom, double accuracy, Index min_nodes) {
  NodeSet ns;
  ns.quad = build_quadrature(dom, accuracy, min_nodes);
  ns.dist.resize(ns.quad.size());
  for (Index i = 0; i < ns.quad.size(); ++i)
    ns.dist[i] = dom.boundary_distance(ns.quad.node(i));
  return ns;
}

// ---------------------------------------------------------------------------
// nets and balls

Net greedy_separated_net(const DomainC2& dom, double separation, NetMetric metric,
                         const NodeSet& nodes) {
  if (separation <= 0.0) throw std::invalid_argument("greedy_separated_net: separation <= 0");
  const Index n = nodes.size();
  std::vector<Index> chosen;
  chosen.reserve(1024);
  const SpecialDomain* sp = dom.special();
  auto dist_pair = [&](Index i, Index j) {
    const Vec2 a = nodes.quad.node(i), b = nodes.quad.node(j);
    switch (metric) {
      case NetMetric::euclidean:
        return (a - b).norm();
      case NetMetric::rho_hat_g:
        if (!sp) throw std::invalid_argument("rho_hat metric needs a special domain");
        return sp->rho_hat(a, b);
      case NetMetric::rho_omega:
      default:
        return metric_rho_d(a, b, nodes.dist[i], nodes.dist[j]);
    }
  };
  for (Index i = 0; i < n; ++i) {
    bool ok = true;
    for (Index c : chosen) {
      if (dist_pair(i, c) < separation) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(i);
  }
  Net net;
  net.points.resize(Index(chosen.size()), 2);
  net.point_dist.resize(Index(chosen.size()));
  for (size_t k = 0; k < chosen.size(); ++k) {
    net.points.row(Index(k)) = nodes.quad.nodes.row(chosen[k]);
    net.point_dist[Index(k)] = nodes.dist[chosen[k]];
  }
  net.separation = separation;
  net.maximal = true;
  net.metric = metric;
  return net;
}

BallEstimate ball_volume(const DomainC2& dom, const Vec2& xi, double t, int grid) {
  const double dxi = dom.boundary_distance(xi);
  const double cell = 2.0 * t / grid;
  BallEstimate est;
  double vol = 0.0;
  Index cnt = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 p = xi + Vec2((i + 0.5) * cell - t, (j + 0.5) * cell - t);
      if ((p - xi).norm() > t) continue;
      if (!dom.inside(p)) continue;
      if (metric_rho_d(xi, p, dxi, dom.boundary_distance(p)) <= t) {
        vol += cell * cell;
        ++cnt;
      }
    }
  }
  est.volume = vol;
  est.node_count = cnt;
  est.rel_error = cnt > 0 ? 2.0 / std::sqrt(double(cnt)) : 1.0;
  return est;
}

Matrix ball_samples(const DomainC2& dom, const Vec2& xi, double t, int k) {
  const double dxi = dom.boundary_distance(xi);
  std::vector<Vec2> pts = {xi};
  const double cell = 2.0 * t / k;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const Vec2 p = xi + Vec2((i + 0.5) * cell - t, (j + 0.5) * cell - t);
      if ((p - xi).norm() > t) continue;
      if (!dom.inside(p)) continue;
      if (metric_rho_d(xi, p, dxi, dom.boundary_distance(p)) <= t)
        pts.push_back(p);
    }
  }
  Matrix out(Index(pts.size()), 2);
  for (size_t i = 0; i < pts.size(); ++i) out.row(Index(i)) = pts[i].transpose();
  return out;
}

// ---------------------------------------------------------------------------
// SpecialDomain

SpecialDomain::SpecialDomain(int axis, Orientation orientation, const Vec2& anchor,
                             double b, double L, GFunc gf)
    : axis_(axis), orientation_(orientation), anchor_(anchor), b_(b), L_(L),
      gf_(std::move(gf)) {
  if (axis < 1 || axis > 2) throw std::invalid_argument("SpecialDomain: axis must be 1 or 2");
  if (b <= 0.0 || L < 1.0) throw std::invalid_argument("SpecialDomain: need b > 0, L >= 1");
  const double sgn = orientation == Orientation::upward ? 1.0 : -1.0;
  Vec2 v = sgn * (axis == 2 ? Vec2(0, 1) : Vec2(1, 0));
  Vec2 u = axis == 2 ? Vec2(1, 0) : Vec2(0, 1);
  frame_.col(0) = u;
  frame_.col(1) = v;
  // dense scans over [-2b, 2b]
  const int K = 2048;
  double gmax = -kInf, gmin = kInf, dgm = 0.0, ddgm = 0.0;
  for (int i = 0; i <= K; ++i) {
    const double x = -2.0 * b + 4.0 * b * i / K;
    gmin = std::min(gmin, gf_.g(x));
    gmax = std::max(gmax, gf_.g(x));
    dgm = std::max(dgm, std::abs(gf_.dg(x)));
    ddgm = std::max(ddgm, std::abs(gf_.ddg(x)));
  }
  g_min2b_ = gmin;
  g_max2b_ = gmax;
  grad_bound_ = dgm;
  hess_bound_ = ddgm;
  const double lreq = 4.0 * std::sqrt(1.0) * dgm + 1.0;  // d = 1
  if (L_ + 1e-12 < lreq)
    throw std::invalid_argument("SpecialDomain: L below 4 sqrt(d) max|grad g| + 1");
}

Vec2 SpecialDomain::to_local(const Vec2& world) const {
  return frame_.transpose() * (world - anchor_);
}

Vec2 SpecialDomain::to_world(const Vec2& local) const {
  return anchor_ + frame_ * local;
}

bool SpecialDomain::contains(const Vec2& world, double lambda) const {
  const Vec2 l = to_local(world);
  const double tol = 1e-12 * std::max(1.0, depth());
  if (std::abs(l[0]) > lambda * b_ + tol) return false;
  const double gx = gf_.g(l[0]);
  return l[1] <= gx + tol && l[1] >= gx - lambda * L_ * b_ - tol;
}

bool SpecialDomain::in_gstar(const Vec2& world) const {
  const Vec2 l = to_local(world);
  const double tol = 1e-12 * std::max(1.0, depth());
  if (std::abs(l[0]) > 2.0 * b_ + tol) return false;
  const double gx = gf_.g(l[0]);
  return l[1] <= gx + tol && l[1] >= g_min2b_ - 4.0 * L_ * b_ - tol;
}

bool SpecialDomain::on_essential_boundary(const Vec2& world, double lambda,
                                          double tol) const {
  const Vec2 l = to_local(world);
  if (std::abs(l[0]) >= lambda * b_) return false;
  return std::abs(l[1] - gf_.g(l[0])) <= tol;
}

double SpecialDomain::dist_to_graph_patch(const Vec2& local, double y_offset,
                                          double xmin, double xmax) const {
  // seed scan over the patch, then Newton on (l - (x, g(x)+off)) . (1, g'(x))
  const int K = 512;
  double best = kInf, xbest = xmin;
  for (int i = 0; i <= K; ++i) {
    const double x = xmin + (xmax - xmin) * i / K;
    const double d2 = sqr(x - local[0]) + sqr(gf_.g(x) + y_offset - local[1]);
    if (d2 < best) {
      best = d2;
      xbest = x;
    }
  }
  double x = xbest;
  for (int it = 0; it < 40; ++it) {
    const double g = gf_.g(x) + y_offset, dg = gf_.dg(x), ddg = gf_.ddg(x);
    const double F = (x - local[0]) + (g - local[1]) * dg;
    const double dF = 1.0 + dg * dg + (g - local[1]) * ddg;
    if (dF == 0.0) break;
    const double step = F / dF;
    x -= step;
    x = std::clamp(x, xmin, xmax);
    if (std::abs(step) < 1e-14 * b_) break;
  }
  const double d2 = sqr(x - local[0]) + sqr(gf_.g(x) + y_offset - local[1]);
  return std::sqrt(std::min(best, d2));
}

double SpecialDomain::dist_to_top(const Vec2& world) const {
  return dist_to_graph_patch(to_local(world), 0.0, -2.0 * b_, 2.0 * b_);
}

double SpecialDomain::rho_hat(const Vec2& w1, const Vec2& w2) const {
  const Vec2 a = to_local(w1), b = to_local(w2);
  const double da = gf_.g(a[0]) - a[1];
  const double db = gf_.g(b[0]) - b[1];
  if (da < -1e-9 || db < -1e-9)
    throw std::domain_error("rho_hat: point above the graph");
  return std::max(std::abs(a[0] - b[0]),
                  std::abs(std::sqrt(std::max(da, 0.0)) - std::sqrt(std::max(db, 0.0))));
}

QuadratureRule SpecialDomain::quadrature_fixed(int nx, int ny, double lambda) const {
  QuadratureRule q;
  Vector xx, wx, xy, wy;
  gauss_legendre(nx, xx, wx);
  gauss_legendre(ny, xy, wy);
  q.nodes.resize(Index(nx) * ny, 2);
  q.weights.resize(Index(nx) * ny);
  Index k = 0;
  const double hb = lambda * b_;
  const double dep = lambda * L_ * b_;
  for (int i = 0; i < nx; ++i) {
    const double x = hb * xx[i];
    const double gx = gf_.g(x);
    for (int j = 0; j < ny; ++j) {
      const double y = gx - dep * 0.5 * (1.0 - xy[j]);
      const Vec2 w = to_world(Vec2(x, y));
      q.nodes.row(k) = w.transpose();
      q.weights[k] = (hb * wx[i]) * (0.5 * dep * wy[j]);
      ++k;
    }
  }
  return q;
}

QuadratureRule SpecialDomain::quadrature(double accuracy, double lambda) const {
  auto level_rule = [&](int nx, int ny) {
    QuadratureRule q;
    Vector xx, wx, xy, wy;
    gauss_legendre(nx, xx, wx);
    gauss_legendre(ny, xy, wy);
    q.nodes.resize(Index(nx) * ny, 2);
    q.weights.resize(Index(nx) * ny);
    Index k = 0;
    const double hb = lambda * b_;
    const double dep = lambda * L_ * b_;
    for (int i = 0; i < nx; ++i) {
      const double x = hb * xx[i];
      const double gx = gf_.g(x);
      for (int j = 0; j < ny; ++j) {
        const double y = gx - dep * 0.5 * (1.0 - xy[j]);
        const Vec2 w = to_world(Vec2(x, y));
        q.nodes.row(k) = w.transpose();
        q.weights[k] = (hb * wx[i]) * (0.5 * dep * wy[j]);
        ++k;
      }
    }
    return q;
  };
  int nx = 24, ny = 16;
  QuadratureRule prev = level_rule(nx, ny);
  for (int lev = 0; lev < 12; ++lev) {
    nx *= 2;
    ny *= 2;
    QuadratureRule cur = level_rule(nx, ny);
    auto moment = [](const QuadratureRule& q, bool second) {
      double s = 0.0;
      for (Index i = 0; i < q.size(); ++i)
        s += q.weights[i] * (second ? q.nodes.row(i).squaredNorm() : 1.0);
      return s;
    };
    const double a0 = moment(prev, false), a1 = moment(cur, false);
    const double b0 = moment(prev, true), b1 = moment(cur, true);
    if (std::abs(a1 - a0) <= accuracy * std::abs(a1) &&
        std::abs(b1 - b0) <= accuracy * std::max(std::abs(b1), 1e-30)) {
      cur.declared_accuracy = accuracy;
      return cur;
    }
    prev = std::move(cur);
  }
  throw std::runtime_error("SpecialDomain::quadrature: no convergence after 12 doublings");
}

// ---------------------------------------------------------------------------
// covering lemma construction

namespace {

struct ChartFrame {
  Vec2 anchor;
  Vec2 u, v;  // abscissa and ordinate directions
  int axis;
  SpecialDomain::Orientation orientation;
};

ChartFrame chart_frame_at(const DomainC2& dom, double s) {
  const Vec2 n = dom.outward_normal(s);
  ChartFrame f;
  f.axis = std::abs(n[0]) >= std::abs(n[1]) ? 1 : 2;
  const double comp = f.axis == 1 ? n[0] : n[1];
  f.orientation = comp > 0 ? SpecialDomain::Orientation::upward
                           : SpecialDomain::Orientation::downward;
  const double sgn = comp > 0 ? 1.0 : -1.0;
  f.v = sgn * (f.axis == 2 ? Vec2(0, 1) : Vec2(1, 0));
  f.u = f.axis == 2 ? Vec2(1, 0) : Vec2(0, 1);
  f.anchor = dom.boundary(s);
  return f;
}

/// Graph oracle for the boundary near a chart: solves (gamma(s) - A).u = x.
SpecialDomain::GFunc chart_gfunc(const DomainC2& dom, const ChartFrame& f, double s0) {
  auto solve_s = [dom, f, s0](double x) {
    double s = s0;
    const Vec2 d0 = dom.boundary_d1(s0);
    const double du0 = d0.dot(f.u);
    s = s0 + x / du0;
    for (int it = 0; it < 60; ++it) {
      const Vec2 g = dom.boundary(s);
      const Vec2 d1 = dom.boundary_d1(s);
      const double F = (g - f.anchor).dot(f.u) - x;
      const double dF = d1.dot(f.u);
      if (std::abs(dF) < 1e-12)
        throw std::runtime_error("cover: boundary patch not a graph (tangent vertical)");
      const double step = F / dF;
      s -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return s;
  };
  SpecialDomain::GFunc gf;
  gf.g = [dom, f, solve_s](double x) {
    const double s = solve_s(x);
    return (dom.boundary(s) - f.anchor).dot(f.v);
  };
  gf.dg = [dom, f, solve_s](double x) {
    const double s = solve_s(x);
    const Vec2 d1 = dom.boundary_d1(s);
    return d1.dot(f.v) / d1.dot(f.u);
  };
  gf.ddg = [dom, f, solve_s](double x) {
    const double s = solve_s(x);
    const Vec2 d1 = dom.boundary_d1(s);
    const Vec2 d2 = dom.boundary_d2(s);
    const double du = d1.dot(f.u), dv = d1.dot(f.v);
    return (d2.dot(f.v) * du - dv * d2.dot(f.u)) / (du * du * du);
  };
  return gf;
}

}  // namespace

std::vector<std::shared_ptr<const SpecialDomain>> cover_by_special_domains(
    const DomainC2& dom, double base_size_target) {
  std::vector<std::shared_ptr<const SpecialDomain>> cover;
  if (dom.kind() == DomainC2::Kind::graph_special) {
    throw std::invalid_argument("cover_by_special_domains: domain is already of special type");
  }
  if (base_size_target <= 0.0 || base_size_target > dom.rolling_radius())
    throw std::invalid_argument(
        "cover_by_special_domains: base size must be positive and below the rolling radius");

  // fixed chart depth delta = L b; the base b shrinks where the local graph
  // is steep so that L = max(4 max|g'| + 1, 2.2) stays consistent with (L, b)
  const double delta = 2.2 * base_size_target;
  const double total = dom.boundary_length();

  auto build_chart = [&](double s0) {
    ChartFrame f = chart_frame_at(dom, s0);
    SpecialDomain::GFunc gf = chart_gfunc(dom, f, s0);
    double b = base_size_target;
    double L = delta / b;
    for (int it = 0; it < 8; ++it) {
      const SpecialDomain probe(f.axis, f.orientation, f.anchor, b, 1000.0, gf);
      const double Lreq = std::max(4.0 * probe.grad_bound() + 1.0, 2.2);
      const double bnew = std::min(base_size_target, delta / Lreq);
      if (std::abs(bnew - b) <= 1e-3 * b) {
        b = bnew;
        break;
      }
      b = bnew;
      L = delta / b;
    }
    L = delta / b;
    {  // ensure the parameter bound holds for the final base
      const SpecialDomain probe(f.axis, f.orientation, f.anchor, b, 1000.0, gf);
      const double need = 4.0 * probe.grad_bound() + 1.0;
      if (L < need) {
        b *= L / need;
        L = delta / b;
      }
    }
    return std::make_shared<SpecialDomain>(f.axis, f.orientation, f.anchor, b,
                                           L * (1.0 + 1e-12), gf);
  };

  // march around the boundary with spacing adapted to the local base size
  double arc = 0.0;
  while (arc < total) {
    auto g = build_chart(dom.param_at_arclength(arc));
    // attached-to-Gamma probes: box below the graph inside Omega, box above
    // the graph outside Omega
    const double b = g->b();
    const double kappa = g->g_min2b() - 4.0 * g->L() * b;
    for (int i = 0; i <= 32; ++i) {
      const double x = -2.0 * b + 1e-9 + (4.0 * b - 2e-9) * i / 32;
      const double gx = g->g(x);
      for (int j = 1; j <= 12; ++j) {
        const double y = gx + (kappa - gx) * j / 13.0;
        if (!dom.inside(g->to_world(Vec2(x, y))))
          throw std::runtime_error(
              "cover_by_special_domains: G* leaves the domain (base size too large)");
      }
      const double eps = 1e-4 * dom.bounding_radius();
      if (dom.inside(g->to_world(Vec2(x, gx + eps))))
        throw std::runtime_error(
            "cover_by_special_domains: box above the graph re-enters the domain");
    }
    const double step = 0.5 * g->b();
    cover.push_back(std::move(g));
    if (cover.size() > 4000)
      throw std::runtime_error("cover_by_special_domains: chart count exploded");
    arc += step;
  }

  // joint boundary coverage probe; charts are in arc order, so only a local
  // window needs checking
  const int probes = 10000;
  const int m0 = int(cover.size());
  int hint = 0;
  for (int i = 0; i < probes; ++i) {
    const Vec2 p = dom.boundary(dom.boundary_period() * i / probes);
    bool covered = false;
    for (int w = -2; w <= 6 && !covered; ++w) {
      const auto& g = cover[size_t(((hint + w) % m0 + m0) % m0)];
      const Vec2 l = g->to_local(p);
      if (std::abs(l[0]) < g->b() && std::abs(l[1] - g->g(l[0])) < 1e-7) {
        covered = true;
        hint = ((hint + w) % m0 + m0) % m0;
      }
    }
    if (!covered) {
      for (int k = 0; k < m0 && !covered; ++k) {
        const Vec2 l = cover[size_t(k)]->to_local(p);
        if (std::abs(l[0]) < cover[size_t(k)]->b() &&
            std::abs(l[1] - cover[size_t(k)]->g(l[0])) < 1e-7) {
          covered = true;
          hint = k;
        }
      }
    }
    if (!covered)
      throw std::runtime_error("cover_by_special_domains: uncovered boundary sample");
  }
  return cover;
}

double directional_reach(const DomainC2& dom, const Vec2& xi, const Vec2& unit_dir,
                         double need) {
  // first-crossing reach along the ray, resolved by bisection; cheap when the
  // whole needed length is inside
  if (!dom.inside(xi)) return 0.0;
  const double cap = std::min(need, 2.0 * dom.bounding_radius());
  // marching resolution bounded by the rolling radius so that concave
  // excursions are not stepped over
  const int K = std::max(8, int(std::ceil(cap / (0.05 * dom.rolling_radius()))));
  double lo = 0.0;
  for (int i = 1; i <= K; ++i) {
    const double l = cap * i / K;
    if (!dom.inside(xi + l * unit_dir)) {
      double hi = l;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dom.inside(xi + mid * unit_dir)) lo = mid;
        else hi = mid;
      }
      return lo;
    }
    lo = l;
  }
  return cap;
}

Vec2 random_domain_point(const DomainC2& dom, Rng& rng) {
  const double R = dom.bounding_radius();
  for (int it = 0; it < 100000; ++it) {
    const Vec2 p(rng.uniform(-R, R), rng.uniform(-R, R));
    if (dom.inside(p)) return p;
  }
  throw std::runtime_error("random_domain_point: rejection failed");
}

// ---------------------------------------------------------------------------
// domain spec files

namespace {

std::map<std::string, std::string> parse_kv(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

Vector parse_vector(const std::string& s) {
  std::istringstream is(s);
  std::vector<double> v;
  double x;
  while (is >> x) v.push_back(x);
  return Eigen::Map<Vector>(v.data(), Index(v.size()));
}

}  // namespace

DomainC2 domain_from_catalog(const std::string& name) {
  if (name == "disk") return DomainC2::disk();
  if (name == "ellipse") return DomainC2::ellipse(1.3, 0.8);
  if (name == "bump") return DomainC2::bump();
  throw std::invalid_argument("unknown catalog domain: " + name);
}

DomainC2 load_domain_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open domain spec: " + path);
  auto kv = parse_kv(is);
  if (kv.count("catalog")) {
    auto name = kv["catalog"];
    if (name == "ellipse" && kv.count("a") && kv.count("b"))
      return DomainC2::ellipse(std::stod(kv["a"]), std::stod(kv["b"]));
    return domain_from_catalog(name);
  }
  if (kv.count("radial_cos"))
    return DomainC2::star(RadialProfile::cosine_series(parse_vector(kv["radial_cos"])),
                          "star-file");
  if (kv.count("special_g_poly") || kv.count("special_g_trig")) {
    const int axis = kv.count("special_axis") ? std::stoi(kv["special_axis"]) : 2;
    const auto orient = (kv.count("special_orientation") &&
                         kv["special_orientation"] == "downward")
                            ? SpecialDomain::Orientation::downward
                            : SpecialDomain::Orientation::upward;
    Vec2 anchor(0, 0);
    if (kv.count("special_anchor")) {
      Vector a = parse_vector(kv["special_anchor"]);
      anchor = Vec2(a[0], a[1]);
    }
    const double b = std::stod(kv.at("special_b"));
    const double L = std::stod(kv.at("special_L"));
    SpecialDomain::GFunc gf;
    if (kv.count("special_g_poly")) {
      auto c = std::make_shared<Vector>(parse_vector(kv["special_g_poly"]));
      gf.g = [c](double x) {
        double s = 0.0;
        for (Index k = c->size() - 1; k >= 0; --k) s = s * x + (*c)[k];
        return s;
      };
      gf.dg = [c](double x) {
        double s = 0.0;
        for (Index k = c->size() - 1; k >= 1; --k) s = s * x + double(k) * (*c)[k];
        return s;
      };
      gf.ddg = [c](double x) {
        double s = 0.0;
        for (Index k = c->size() - 1; k >= 2; --k)
          s = s * x + double(k) * double(k - 1) * (*c)[k];
        return s;
      };
    } else {
      auto c = std::make_shared<Vector>(parse_vector(kv["special_g_trig"]));
      // c0 a1 b1 a2 b2 ... : c0 + sum a_k cos(kx) + b_k sin(kx)
      gf.g = [c](double x) {
        double s = (*c)[0];
        for (Index k = 1; 2 * k - 1 < c->size(); ++k) {
          s += (*c)[2 * k - 1] * std::cos(k * x);
          if (2 * k < c->size()) s += (*c)[2 * k] * std::sin(k * x);
        }
        return s;
      };
      gf.dg = [c](double x) {
        double s = 0.0;
        for (Index k = 1; 2 * k - 1 < c->size(); ++k) {
          s -= (*c)[2 * k - 1] * k * std::sin(k * x);
          if (2 * k < c->size()) s += (*c)[2 * k] * k * std::cos(k * x);
        }
        return s;
      };
      gf.ddg = [c](double x) {
        double s = 0.0;
        for (Index k = 1; 2 * k - 1 < c->size(); ++k) {
          s -= (*c)[2 * k - 1] * k * k * std::cos(k * x);
          if (2 * k < c->size()) s -= (*c)[2 * k] * k * k * std::sin(k * x);
        }
        return s;
      };
    }
    auto sp = std::make_shared<SpecialDomain>(axis, orient, anchor, b, L, gf);
    return DomainC2::from_special(sp, "special-file");
  }
  throw std::invalid_argument("domain spec file: no recognized keys");
}

}  // namespace c2approx
