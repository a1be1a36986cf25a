#include "c2approx/moduli.hpp"

#include <algorithm>

namespace c2approx {

Vector sup_grid(double t, int k, double span) {
  Vector g(k);
  if (k == 1) {
    g[0] = t;
    return g;
  }
  const double ratio = std::pow(1.0 / span, 1.0 / (k - 1));
  double v = t;
  for (int i = k - 1; i >= 0; --i) {
    g[i] = v;
    v *= ratio;
  }
  return g;
}

// ---------------------------------------------------------------------------
// TangentialChart

TangentialChart::TangentialChart(DomainC2 ambient,
                                 std::shared_ptr<const SpecialDomain> chart,
                                 int nx, int ny)
    : ambient_(std::move(ambient)), chart_(std::move(chart)) {
  quad_ = chart_->quadrature_fixed(nx, ny, 1.0);
  const Index n = quad_.size();
  top_dist_.resize(n);
  local_.resize(n, 2);
  for (Index i = 0; i < n; ++i) {
    const Vec2 w = quad_.node(i);
    const Vec2 l = chart_->to_local(w);
    local_.row(i) = l.transpose();
    top_dist_[i] = chart_->dist_to_graph_patch(l, 0.0, -chart_->b(), chart_->b());
  }
}

TangentialResult TangentialChart::modulus(const RealFn& f, double t,
                                          const ModulusConfig& cfg) const {
  TangentialResult res;
  t = std::min(t, 1.0);
  const double b = chart_->b();
  const int r = cfg.r;
  const double p = cfg.p;

  // each step scale s carries its own inset A0 s^2; the sup over s <= t is
  // then the monotone envelope of the single-scale values (equivalent to
  // taking sups of the fixed-inset modulus over s <= t)
  const Vector svals = sup_grid(t, cfg.h_grid, cfg.h_span);
  bool any = false;
  for (Index i = 0; i < quad_.size() && !any; ++i)
    if (top_dist_[i] >= cfg.A0 * svals[0] * svals[0]) any = true;
  if (!any) {
    res.empty = true;
    return res;
  }

  const Vec2 origin = chart_->to_world(Vec2(0, 0));
  // reach along each (node, u) tangent line is shared by the whole s-grid
  std::vector<double> vals(size_t(svals.size()), 0.0);
  std::vector<KahanSum> accs(size_t(svals.size()));
  for (Index k = 0; k < quad_.size(); ++k) {
    if (top_dist_[k] < cfg.A0 * svals[0] * svals[0]) continue;
    const Vec2 xi = quad_.node(k);
    const double x = local_(k, 0);
    const double lo = std::max(-b, x - t * b);
    const double hi = std::min(b, x + t * b);
    if (hi <= lo) continue;
    std::vector<double> inner(size_t(svals.size()), 0.0);
    for (int iu = 0; iu < cfg.u_grid; ++iu) {
      const double u = lo + (hi - lo) * (iu + 0.5) / cfg.u_grid;
      const Vec2 dir = chart_->to_world(Vec2(1.0, chart_->dg(u))) - origin;
      const double dn = dir.norm();
      const double reach =
          directional_reach(ambient_, xi, dir / dn, r * t * dn * 1.000001);
      for (Index is = 0; is < svals.size(); ++is) {
        const double s = svals[is];
        if (top_dist_[k] < cfg.A0 * s * s) break;  // svals ascend
        if (r * s * dn > reach) continue;  // difference is 0 outside
        const double d = plain_difference(f, s * dir, r, xi);
        if (p == kInf)
          inner[size_t(is)] = std::max(inner[size_t(is)], std::abs(d));
        else
          inner[size_t(is)] += std::pow(std::abs(d), p);
      }
    }
    for (Index is = 0; is < svals.size(); ++is) {
      if (top_dist_[k] < cfg.A0 * svals[is] * svals[is]) break;
      if (p == kInf)
        vals[size_t(is)] = std::max(vals[size_t(is)], inner[size_t(is)]);
      else
        accs[size_t(is)].add(quad_.weights[k] * inner[size_t(is)] / cfg.u_grid);
    }
  }
  double best = 0.0;
  for (Index is = 0; is < svals.size(); ++is) {
    const double val =
        (p == kInf) ? vals[size_t(is)] : std::pow(accs[size_t(is)].value(), 1.0 / p);
    best = std::max(best, val);
  }
  res.value = best;
  return res;
}

// ---------------------------------------------------------------------------
// ModulusEvaluator

ModulusEvaluator::ModulusEvaluator(DomainC2 dom, double quad_accuracy)
    : dom_(std::move(dom)) {
  nodes_ = make_node_set(dom_, quad_accuracy);
}

const Vector& ModulusEvaluator::dt_weights(int coord) const {
  auto it = phi_.find(coord);
  if (it != phi_.end()) return it->second;
  Vector w(nodes_.size());
  Vec2 e = Vec2::Zero();
  e[coord] = 1.0;
  for (Index i = 0; i < nodes_.size(); ++i)
    w[i] = phi_dt(dom_, e, nodes_.quad.node(i));
  return phi_.emplace(coord, std::move(w)).first->second;
}

double ModulusEvaluator::directional(const RealFn& f, double t,
                                     const std::vector<Vec2>& dirs, int r, double p,
                                     int h_grid) const {
  const Vector grid = sup_grid(t, h_grid);
  double best = 0.0;
  for (const Vec2& e : dirs) {
    const double en = e.norm();
    std::vector<double> vals(size_t(grid.size()), 0.0);
    std::vector<KahanSum> accs(size_t(grid.size()));
    for (Index i = 0; i < nodes_.size(); ++i) {
      const Vec2 xi = nodes_.quad.node(i);
      const double reach =
          directional_reach(dom_, xi, e / en, r * t * en * 1.000001);
      for (Index iu = 0; iu < grid.size(); ++iu) {
        const double u = grid[iu];
        if (r * u * en > reach) continue;
        const double d = plain_difference(f, u * e, r, xi);
        if (p == kInf)
          vals[size_t(iu)] = std::max(vals[size_t(iu)], std::abs(d));
        else
          accs[size_t(iu)].add(nodes_.quad.weights[i] * std::pow(std::abs(d), p));
      }
    }
    for (Index iu = 0; iu < grid.size(); ++iu) {
      best = std::max(best, p == kInf
                                ? vals[size_t(iu)]
                                : std::pow(accs[size_t(iu)].value(), 1.0 / p));
    }
  }
  return best;
}

double ModulusEvaluator::dt_along(const RealFn& f, double t, int coord, int r,
                                  double p, int h_grid) const {
  const Vector& phi = dt_weights(coord);
  const Vector& reach = dt_reach(coord);
  const Vector grid = sup_grid(std::min(t, 1.0), h_grid);
  Vec2 e = Vec2::Zero();
  e[coord] = 1.0;
  std::vector<double> vals(size_t(grid.size()), 0.0);
  std::vector<KahanSum> accs(size_t(grid.size()));
  for (Index i = 0; i < nodes_.size(); ++i) {
    const Vec2 xi = nodes_.quad.node(i);
    for (Index ih = 0; ih < grid.size(); ++ih) {
      const double step = grid[ih] * phi[i];
      if (step * r > reach[i]) continue;
      const double d = plain_difference(f, step * e, r, xi);
      if (p == kInf)
        vals[size_t(ih)] = std::max(vals[size_t(ih)], std::abs(d));
      else
        accs[size_t(ih)].add(nodes_.quad.weights[i] * std::pow(std::abs(d), p));
    }
  }
  double best = 0.0;
  for (Index ih = 0; ih < grid.size(); ++ih) {
    best = std::max(best, p == kInf ? vals[size_t(ih)]
                                    : std::pow(accs[size_t(ih)].value(), 1.0 / p));
  }
  return best;
}

const Vector& ModulusEvaluator::dt_reach(int coord) const {
  auto it = reach_.find(coord);
  if (it != reach_.end()) return it->second;
  Vector rr(nodes_.size());
  Vec2 e = Vec2::Zero();
  e[coord] = 1.0;
  for (Index i = 0; i < nodes_.size(); ++i)
    rr[i] = directional_reach(dom_, nodes_.quad.node(i), e,
                              2.0 * dom_.bounding_radius());
  return reach_.emplace(coord, std::move(rr)).first->second;
}

double ModulusEvaluator::dt(const RealFn& f, double t, int r, double p,
                            int h_grid) const {
  double m = 0.0;
  for (int c = 0; c < 2; ++c) m = std::max(m, dt_along(f, t, c, r, p, h_grid));
  return m;
}

double ModulusEvaluator::full(
    const RealFn& f, double t, int r, double p,
    const std::vector<std::shared_ptr<const TangentialChart>>& cover,
    const ModulusConfig& cfg) const {
  ModulusConfig c = cfg;
  c.r = r;
  c.p = p;
  double v = dt(f, t, r, p, cfg.h_grid);
  for (const auto& chart : cover) v += chart->modulus(f, t, c).value;
  return v;
}

double ModulusEvaluator::ivanov_tau(const RealFn& f, double delta, int r, double p,
                                    double q, Index outer_stride) const {
  if (!(q > 0.0) || (q > p))
    throw std::invalid_argument("ivanov_tau: need 0 < q <= p");
  const Index n = nodes_.size();
  outer_stride = std::max<Index>(outer_stride, 1);
  Vector w_r = Vector::Zero(n);
  for (Index i = 0; i < n; i += outer_stride) {
    const Vec2 xi = nodes_.quad.node(i);
    const double di = nodes_.dist[i];
    double vol = 0.0;
    double acc = 0.0, sup = 0.0;
    for (Index j = 0; j < n; ++j) {
      const Vec2 eta = nodes_.quad.node(j);
      if ((eta - xi).norm() > delta) continue;  // rho >= euclidean
      if (metric_rho_d(xi, eta, di, nodes_.dist[j]) > delta) continue;
      const double d = finite_difference(f, dom_, (eta - xi) / double(r), r, xi);
      const double wj = nodes_.quad.weights[j];
      vol += wj;
      if (q == kInf)
        sup = std::max(sup, std::abs(d));
      else
        acc += wj * std::pow(std::abs(d), q);
    }
    if (vol <= 0.0) throw std::runtime_error("ivanov_tau: empty metric ball");
    w_r[i] = (q == kInf) ? sup : std::pow(acc / vol, 1.0 / q);
  }
  if (p == kInf) return w_r.cwiseAbs().maxCoeff();
  KahanSum s;
  for (Index i = 0; i < n; i += outer_stride)
    s.add(double(outer_stride) * nodes_.quad.weights[i] *
          std::pow(std::abs(w_r[i]), p));
  return std::pow(s.value(), 1.0 / p);
}

std::vector<std::shared_ptr<const TangentialChart>> make_tangential_cover(
    const DomainC2& dom, const std::vector<std::shared_ptr<const SpecialDomain>>& cover,
    int nx, int ny) {
  std::vector<std::shared_ptr<const TangentialChart>> out;
  out.reserve(cover.size());
  for (const auto& g : cover)
    out.push_back(std::make_shared<TangentialChart>(dom, g, nx, ny));
  return out;
}

double oscillation(const RealFn& f, const Matrix& pts) {
  if (pts.rows() == 0) throw std::invalid_argument("oscillation: empty point set");
  double lo = kInf, hi = -kInf;
  for (Index i = 0; i < pts.rows(); ++i) {
    const double v = f(pts.row(i).transpose());
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

// ---------------------------------------------------------------------------
// CellPartition

CellPartition::CellPartition(std::shared_ptr<const SpecialDomain> G, int n, double A0,
                             int m0, int m1, bool build_enlargements)
    : G_(std::move(G)), n_(n), m0_(m0), m1_(m1), A0_(A0) {
  if (n < 2) throw std::invalid_argument("CellPartition: n must be >= 2");
  scale_ = G_->depth();
  bhat_ = G_->b() / scale_;
  // offset so that min ghat over [-2 bhat, 2 bhat] is 4.2
  y_off_ = G_->g_min2b() - 4.2 * scale_;

  // alpha requirement: 5 d max(|ghat| + |ghat''|) and 4 M + 1
  double gmax = 0.0, hmax = 0.0;
  for (int i = 0; i <= 512; ++i) {
    const double xh = -2.0 * bhat_ + 4.0 * bhat_ * i / 512;
    gmax = std::max(gmax, std::abs(ghat(xh)));
    hmax = std::max(hmax, std::abs(ddghat(xh)));
  }
  const double M = hmax + 1.0;
  const double alpha_req = std::max(5.0 * (gmax + hmax), 4.0 * M + 1.0);
  ell1_ = 2;
  auto alpha_of = [](int l) { return 1.0 / (2.0 * sqr(std::sin(kPi / (4.0 * l)))); };
  while (alpha_of(ell1_) < alpha_req && ell1_ < 64) ++ell1_;
  alpha_ = alpha_of(ell1_);
  N_ = 2 * ell1_ * n_;
  levels_.resize(N_ + 1);
  for (int j = 0; j <= N_; ++j)
    levels_[j] = 2.0 * alpha_ * sqr(std::sin(j * kPi / (2.0 * N_)));

  if (!build_enlargements) {
    M0_ = 0.0;
    return;
  }
  // raise m1 until the spacing condition holds and every S cell is nonempty;
  // the levels clamp at [0, 1], so large m1 degrades gracefully to full-depth
  // cells
  const double hess = [&] {
    double h = 0.0;
    for (int i = 0; i <= 256; ++i)
      h = std::max(h, std::abs(ddghat(-bhat_ + 2.0 * bhat_ * i / 256)));
    return h;
  }();
  const double need =
      32.0 * sqr(double(ell1_)) * sqr(double(m0_)) * sqr(bhat_) / alpha_ * hess;
  m1_ = std::max(m1_, int(std::ceil(need)));
  for (;; ++m1_) {
    if (m1_ > 8 * n_ + int(std::ceil(need))) {
      throw std::runtime_error("CellPartition: no admissible m1 (degenerate cells)");
    }
    M0_ = 8.0 * sqr(double(m0_)) * sqr(bhat_) * hess + A0_;
    bool ok = true;
    for (int j = 0; j < n_ && ok; ++j) {
      const double gap = alpha_star(j + m1_) - alpha_star(j - m1_) -
                         2.0 * M0_ / sqr(double(n_));
      if (gap <= 0.0) ok = false;
    }
    if (ok) break;
  }
}

double CellPartition::ghat(double xh) const {
  return (G_->g(xh * scale_) - y_off_) / scale_;
}
double CellPartition::dghat(double xh) const { return G_->dg(xh * scale_); }
double CellPartition::ddghat(double xh) const { return G_->ddg(xh * scale_) * scale_; }

Vec2 CellPartition::world_to_hat(const Vec2& w) const {
  const Vec2 l = G_->to_local(w);
  return Vec2(l[0] / scale_, (l[1] - y_off_) / scale_);
}
Vec2 CellPartition::hat_to_world(const Vec2& h) const {
  return G_->to_world(Vec2(h[0] * scale_, h[1] * scale_ + y_off_));
}

double CellPartition::alpha_level(int j) const { return levels_[std::clamp(j, 0, N_)]; }

double CellPartition::alpha_star(int j) const {
  if (j < 0) return 0.0;
  if (j > n_) return 1.0;
  return levels_[j];
}

double CellPartition::t_grid(int i) const {
  i = std::clamp(i, 0, n_);
  return -bhat_ + 2.0 * bhat_ * i / n_;
}

std::pair<int, int> CellPartition::cell_of(const Vec2& hat) const {
  const double x = hat[0];
  if (std::abs(x) > bhat_) return {-1, -1};
  const double w = ghat(x) - hat[1];
  if (w < -1e-12 || w > 1.0 + 1e-12) return {-1, -1};
  int i = std::clamp(int((x + bhat_) / (2.0 * bhat_ / n_)), 0, n_ - 1);
  int j = 0;
  while (j < n_ - 1 && w > alpha_star(j + 1)) ++j;
  return {i, j};
}

bool CellPartition::in_enlarged_cell(int i, int j, const Vec2& hat) const {
  const double x = hat[0];
  if (x < t_grid(i - m0_) || x > t_grid(i + m0_ + 1)) return false;
  const double w = ghat(x) - hat[1];
  return w >= alpha_star(j - m1_) && w <= alpha_star(j + m1_);
}

double CellPartition::cell_center_x(int i) const {
  return 0.5 * (t_grid(i - m0_) + t_grid(i + m0_ + 1));
}

Vec2 CellPartition::unit_tangent(int i) const {
  const double x = cell_center_x(i);
  Vec2 t(1.0, dghat(x));
  return t / t.norm();
}

bool CellPartition::in_s_cell(int i, int j, const Vec2& hat) const {
  const double x = hat[0];
  if (x < t_grid(i - m0_) || x > t_grid(i + m0_ + 1)) return false;
  const double xs = cell_center_x(i);
  const double H = ghat(xs) + dghat(xs) * (x - xs);
  const double lo = H - alpha_star(j + m1_) + M0_ / sqr(double(n_));
  const double hi = H - alpha_star(j - m1_) - M0_ / sqr(double(n_));
  return hat[1] >= lo && hat[1] <= hi;
}

// ---------------------------------------------------------------------------
// local modulus over cells

namespace {

/// Directional modulus of f over a sampled subset K (membership predicate),
/// sup over a step grid up to the sample diameter.
double cell_modulus(const RealFn& f_hat, const Matrix& pts, double cell_measure,
                    const std::function<bool(const Vec2&)>& member, const Vec2& e,
                    int r, double p, int h_grid) {
  if (pts.rows() == 0) return 0.0;
  double diam = 0.0;
  for (Index i = 0; i < pts.rows(); ++i)
    for (Index j = i + 1; j < pts.rows(); ++j)
      diam = std::max(diam, (pts.row(i) - pts.row(j)).norm());
  if (diam <= 0.0) return 0.0;
  const Vector grid = sup_grid(diam / r, h_grid, 16.0);
  const double wpt = cell_measure / double(pts.rows());
  double best = 0.0;
  for (Index ig = 0; ig < grid.size(); ++ig) {
    const double u = grid[ig];
    double acc = 0.0, sup = 0.0;
    for (Index i = 0; i < pts.rows(); ++i) {
      const Vec2 x = pts.row(i).transpose();
      bool ok = true;
      for (int k = 0; k <= 2 * r && ok; ++k)
        if (!member(x + (u * k / 2.0) * e)) ok = false;
      if (!ok) continue;
      double d = 0.0;
      for (int k = 0; k <= r; ++k) {
        const double sign = ((r + k) % 2 == 0) ? 1.0 : -1.0;
        d += sign * binomial(r, k) * f_hat(x + (u * k) * e);
      }
      if (p == kInf)
        sup = std::max(sup, std::abs(d));
      else
        acc += wpt * std::pow(std::abs(d), p);
    }
    best = std::max(best, p == kInf ? sup : std::pow(acc, 1.0 / p));
  }
  return best;
}

}  // namespace

double local_modulus_cells(const RealFn& f, const CellPartition& cells, double p,
                           int r, int samples_per_cell, int h_grid) {
  const int n = cells.n();
  auto f_hat = [&](const Vec2& hat) { return f(cells.hat_to_world(hat)); };
  KahanSum accp;
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // axial term on I*_{i,j}
      const double xlo = cells.t_grid(i - cells.m0());
      const double xhi = cells.t_grid(i + cells.m0() + 1);
      const double wlo = cells.alpha_star(j - cells.m1());
      const double whi = cells.alpha_star(j + cells.m1());
      const int S = samples_per_cell;
      Matrix pts(S * S, 2);
      Index k = 0;
      for (int a = 0; a < S; ++a) {
        const double x = xlo + (xhi - xlo) * (a + 0.5) / S;
        for (int b = 0; b < S; ++b) {
          const double w = wlo + (whi - wlo) * (b + 0.5) / S;
          pts(k, 0) = x;
          pts(k, 1) = cells.ghat(x) - w;
          ++k;
        }
      }
      const double measure_i = (xhi - xlo) * (whi - wlo);
      auto member_i = [&](const Vec2& h) { return cells.in_enlarged_cell(i, j, h); };
      const double wi = cell_modulus(f_hat, pts, measure_i, member_i, Vec2(0, 1), r,
                                     p, h_grid);
      // tangential term on S_{i,j}
      const double xs = cells.cell_center_x(i);
      const double lo2 = wlo + cells.M0() / sqr(double(n));
      const double hi2 = whi - cells.M0() / sqr(double(n));
      double ws = 0.0;
      if (hi2 > lo2) {
        Matrix pts2(S * S, 2);
        k = 0;
        for (int a = 0; a < S; ++a) {
          const double x = xlo + (xhi - xlo) * (a + 0.5) / S;
          const double H = cells.ghat(xs) + cells.dghat(xs) * (x - xs);
          for (int b = 0; b < S; ++b) {
            const double w = lo2 + (hi2 - lo2) * (b + 0.5) / S;
            pts2(k, 0) = x;
            pts2(k, 1) = H - w;
            ++k;
          }
        }
        const double measure_s = (xhi - xlo) * (hi2 - lo2);
        auto member_s = [&](const Vec2& h) { return cells.in_s_cell(i, j, h); };
        ws = cell_modulus(f_hat, pts2, measure_s, member_s, cells.unit_tangent(i), r,
                          p, h_grid);
      }
      if (p == kInf) {
        sup = std::max({sup, wi, ws});
      } else {
        accp.add(std::pow(wi, p) + std::pow(ws, p));
      }
    }
  }
  return p == kInf ? sup : std::pow(accp.value(), 1.0 / p);
}

}  // namespace c2approx
