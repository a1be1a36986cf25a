#include "c2approx/pou.hpp"

#include <algorithm>
#include <numeric>

namespace c2approx {

double KernelFamily1D::eval(Index j, double argument) const {
  return chebyshev_eval(coeffs.row(j).transpose(), argument);
}

double KernelFamily1D::sum(double argument) const {
  KahanSum s;
  for (Index j = 0; j < coeffs.rows(); ++j) s.add(eval(j, argument));
  return s.value();
}

KernelFamily1D interval_kernels(int n, int ell) {
  if (n < 2 || ell < 2) throw std::invalid_argument("interval_kernels: need n >= 2, ell >= 2");
  const int s = (ell + 3) / 2;  // ceil((ell + 2) / 2)
  const int mw = (2 * n) / s;
  if (mw < 2)
    throw std::runtime_error("interval_kernels: decay order exceeds the degree budget");
  // J = c (sin(mw t/2) / sin(t/2))^(2s): convolve the Fejer coefficient array
  // (mw - |k|) s times
  std::vector<double> cur = {1.0};
  std::vector<double> fej(size_t(2 * mw - 1));
  for (int k = -(mw - 1); k <= mw - 1; ++k)
    fej[size_t(k + mw - 1)] = double(mw - std::abs(k));
  for (int it = 0; it < s; ++it) {
    std::vector<double> nxt(cur.size() + fej.size() - 1, 0.0);
    for (size_t a = 0; a < cur.size(); ++a)
      for (size_t b = 0; b < fej.size(); ++b) nxt[a + b] += cur[a] * fej[b];
    cur = std::move(nxt);
  }
  const int D = int(cur.size() / 2);  // one-sided degree s (mw - 1)
  // exponential coefficients b_k = cur[D + k]; normalize so 2 pi b_0 = 1
  const double b0 = cur[size_t(D)];
  const double norm = 1.0 / (2.0 * kPi * b0);
  // cosine coefficients: a_0 = b_0, a_k = 2 b_k
  Vector a(D + 1);
  a[0] = b0 * norm;
  for (int k = 1; k <= D; ++k) a[k] = 2.0 * cur[size_t(D + k)] * norm;

  KernelFamily1D fam;
  fam.degree = D;
  fam.coeffs = Matrix::Zero(n, D + 1);
  fam.centers.resize(n);
  for (int j = 0; j < n; ++j) {
    const double t0 = kPi * j / n, t1 = kPi * (j + 1) / n;
    fam.centers[j] = t0;
    fam.coeffs(j, 0) = 2.0 * a[0] * (t1 - t0);
    for (int k = 1; k <= D; ++k)
      fam.coeffs(j, k) = 2.0 * a[k] * (std::sin(k * t1) - std::sin(k * t0)) / k;
  }
  return fam;
}

KernelFamily1D cube_kernels(int n, double b, int ell) {
  KernelFamily1D u = interval_kernels(n, 2 * ell);
  KernelFamily1D fam;
  fam.degree = u.degree;
  fam.coeffs = Matrix::Zero(n, u.degree + 1);
  fam.centers.resize(n);
  auto sgrid = [n](int j) {
    if (j <= 0) return -2.0;
    if (j >= n) return 2.0;
    return -0.5 + double(j) / n;
  };
  for (int i = 0; i < n; ++i) {
    const double ci = std::cos(kPi * i / n);
    int bin = 0;
    for (int j = 0; j < n; ++j) {
      if (sgrid(j) < ci && ci <= sgrid(j + 1)) {
        bin = j;
        break;
      }
    }
    fam.coeffs.row(bin) += u.coeffs.row(i);
  }
  for (int j = 0; j < n; ++j) {
    const double mid = std::clamp(0.5 * (sgrid(j) + sgrid(j + 1)), -0.5, 0.5);
    fam.centers[j] = 2.0 * b * mid;
  }
  return fam;
}

// ---------------------------------------------------------------------------
// StripPartition

StripPartition::StripPartition(std::shared_ptr<const SpecialDomain> G, int n, int m)
    : cells_(std::move(G), n, 4.0, 3, 3, /*build_enlargements=*/false), n_(n), m_(m) {
  const int N = cells_.levels();
  u_ = interval_kernels(N, 4 * m);
  u_tail_ = Vector::Zero(u_.degree + 1);
  for (int j = n_ - 1; j < N; ++j) u_tail_ += u_.coeffs.row(j).transpose();
  v_ = cube_kernels(n_, cells_.bhat(), 4 * m);
  fi_g_.resize(n_);
  fi_dg_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    const double xi = cells_.t_grid(i) + cells_.bhat() / n_;
    fi_g_[i] = cells_.ghat(xi);
    fi_dg_[i] = cells_.dghat(xi);
  }
  double hess = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double x = -cells_.bhat() + 2.0 * cells_.bhat() * i / 256;
    hess = std::max(hess, std::abs(cells_.ddghat(x)));
  }
  quad_m_ = hess + 1.0;
}

int StripPartition::degree() const { return 2 * u_.degree + 2 * n_; }

double StripPartition::eval_hat(int i, int j, const Vec2& hat) const {
  const double xi = cells_.t_grid(i) + cells_.bhat() / n_;
  const double fi =
      fi_g_[i] + fi_dg_[i] * (hat[0] - xi) + 0.5 * quad_m_ * sqr(hat[0] - xi);
  const double w = fi - hat[1];
  const double arg_u = 1.0 - w / cells_.alpha();
  const double uval = (j == n_ - 1) ? chebyshev_eval(u_tail_, arg_u)
                                    : u_.eval(j, arg_u);
  const double vval = v_.eval(i, hat[0] / (2.0 * cells_.bhat()));
  return uval * vval;
}

double StripPartition::eval(int i, int j, const Vec2& world) const {
  return eval_hat(i, j, cells_.world_to_hat(world));
}

double StripPartition::sum_hat(const Vec2& hat) const {
  KahanSum s;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s.add(eval_hat(i, j, hat));
  return s.value();
}

double StripPartition::sum(const Vec2& world) const {
  return sum_hat(cells_.world_to_hat(world));
}

Vec2 StripPartition::cell_point(int i, int j) const {
  const double x = cells_.t_grid(i) + cells_.bhat() / n_;
  const double w = 0.5 * (cells_.alpha_star(j) + cells_.alpha_star(j + 1));
  return cells_.hat_to_world(Vec2(x, cells_.ghat(x) - w));
}

// ---------------------------------------------------------------------------
// separating polynomial and gluing

Polynomial separating_polynomial(const Box& box_i, double mu, double R, int n,
                                 double theta_target) {
  if (!(mu > 0.0 && mu < 1.0) || !(theta_target > 0.0 && theta_target < 1.0))
    throw std::invalid_argument("separating_polynomial: mu, theta must lie in (0,1)");
  const int d = box_i.dim();
  const int k = std::max(1, n / (2 * d));
  double Wk = 1.0;
  for (int i = 1; i <= k; ++i) Wk *= 2.0 * i / (2.0 * i + 1.0);
  const double ck = 1.0 / (8.0 * R * Wk);
  // antiderivative coefficients: Phi(t) = ck sum_q C(k,q)(-1)^q t^(2q+1) /
  // ((2q+1)(4R)^(2q))
  Vector phi(k + 1);
  for (int q = 0; q <= k; ++q) {
    const double sgn = (q % 2 == 0) ? 1.0 : -1.0;
    phi[q] = ck * sgn * binomial(k, q) / ((2.0 * q + 1.0) * std::pow(4.0 * R, 2 * q));
  }
  const Box frame = Box::cube(d, 0.0, R);
  auto phi_poly = [&](const Polynomial& u) {
    // Horner in u^2, times u
    const Polynomial u2 = u.times(u);
    Polynomial acc = Polynomial::constant(frame, phi[k]);
    for (int q = k - 1; q >= 0; --q)
      acc = acc.times(u2) + Polynomial::constant(frame, phi[q]);
    return acc.times(u);
  };
  Polynomial P = Polynomial::constant(frame, 1.0);
  for (int c = 0; c < d; ++c) {
    const double hc = box_i.halfwidth[c];
    const double mc = box_i.center[c];
    const double hp = 0.5 * (1.0 + mu) * hc;
    const Polynomial x = Polynomial::coordinate(frame, c);
    const Polynomial ua = x - Polynomial::constant(frame, mc - hp);
    const Polynomial ub = x - Polynomial::constant(frame, mc + hp);
    const Polynomial Fc = phi_poly(ua) - phi_poly(ub);
    P = P.times(Fc);
  }
  // decay probes against the requested theta level
  const double level = std::pow(theta_target, n);
  Vec2 center(box_i.center[0], d > 1 ? box_i.center[1] : 0.0);
  const double miss = 1.0 - P(center);
  double outside = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double ang = 2.0 * kPi * i / 64;
    const Vec2 pr = Vec2(std::cos(ang), std::sin(ang)) * (0.98 * R);
    bool in_box = true;
    for (int c = 0; c < d; ++c)
      if (std::abs(pr[c] - box_i.center[c]) > box_i.halfwidth[c]) in_box = false;
    if (!in_box) outside = std::max(outside, std::abs(P(pr)));
  }
  if (miss > level || outside > level)
    throw std::runtime_error("separating_polynomial: degree budget misses the theta target");
  return P;
}

Polynomial glue(const Polynomial& p1, const Polynomial& p2, const Polynomial& r_n) {
  if (!p1.box().same_as(p2.box()) || !p1.box().same_as(r_n.box()))
    throw std::invalid_argument("glue: boxes must agree");
  const Polynomial one = Polynomial::constant(r_n.box(), 1.0);
  return r_n.times(p1) + (one - r_n).times(p2);
}

// ---------------------------------------------------------------------------
// JacksonStep

JacksonStep::JacksonStep(double lo, double hi, double a, double b, double exponent)
    : lo_(lo), hi_(hi) {
  if (!(lo < a && a < b && b < hi))
    throw std::invalid_argument("JacksonStep: need lo < a < b < hi");
  auto theta = [&](double x) {
    const double chi = std::clamp((2.0 * x - lo_ - hi_) / (hi_ - lo_), -1.0, 1.0);
    return std::acos(chi);
  };
  const double ta = theta(a), tb = theta(b);
  theta_mid_ = 0.5 * (ta + tb);
  const double half = std::max(0.5 * (ta - tb), 1e-4);
  m_ = std::max(2, int(std::ceil(std::exp(1.0) * kPi / half)));
  s_ = std::max(2, int(std::ceil(exponent / 2.0)) + 1);
  degree_ = s_ * (m_ - 1);
  // normalization in log scale: start from the peak bound m^(2s)
  log_norm_ = -2.0 * s_ * std::log(double(m_));
  const double scaled = kernel_mass(-kPi, kPi);
  log_norm_ -= std::log(scaled);
}

double JacksonStep::log_j(double t) const {
  // periodic reduction
  t = std::remainder(t, 2.0 * kPi);
  const double at = std::abs(t);
  if (at < 1e-12) return log_norm_ + 2.0 * s_ * std::log(double(m_));
  const double num = std::abs(std::sin(0.5 * m_ * t));
  const double den = std::abs(std::sin(0.5 * t));
  if (num == 0.0) return -kInf;
  return log_norm_ + 2.0 * s_ * (std::log(num) - std::log(den));
}

double JacksonStep::kernel_mass(double from, double to) const {
  if (to <= from) return 0.0;
  // panels refined around the wrapped peak locations (multiples of 2 pi)
  std::vector<double> edges = {from, to};
  for (double center = -2.0 * kPi; center <= 2.0 * kPi + 1e-9; center += 2.0 * kPi) {
    for (int j = -1; j <= 14; ++j) {
      const double off = j < 0 ? 0.0 : kPi / m_ * std::pow(1.6, j);
      if (off > kPi) break;
      for (double sgn : {-1.0, 1.0}) {
        const double e = center + sgn * off;
        if (e > from && e < to) edges.push_back(e);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double c = 0.5 * (edges[i] + edges[i + 1]);
    const double h = 0.5 * (edges[i + 1] - edges[i]);
    double panel = 0.0;
    for (int g = 0; g < 8; ++g) {
      const double lj = log_j(c + h * gx[g]);
      panel += gw[g] * (lj > -700.0 ? std::exp(lj) : 0.0);
    }
    total += h * panel;
  }
  return total;
}

double JacksonStep::operator()(double x) const {
  const double chi = std::clamp((2.0 * x - lo_ - hi_) / (hi_ - lo_), -1.0, 1.0);
  const double th = std::acos(chi);
  return kernel_mass(th - theta_mid_, th + theta_mid_);
}

// ---------------------------------------------------------------------------
// BoxStep

BoxStep::BoxStep(const Vec2& inner_lo, const Vec2& inner_hi, const Vec2& outer_lo,
                 const Vec2& outer_hi, const Vec2& range_lo, const Vec2& range_hi,
                 double exponent) {
  for (int c = 0; c < 2; ++c) {
    const bool rise = outer_lo[c] > range_lo[c] + 1e-12;
    has_rise_.push_back(rise ? 1 : 0);
    if (rise)
      rising_.emplace_back(range_lo[c], range_hi[c], outer_lo[c], inner_lo[c],
                           exponent);
    const bool fall = outer_hi[c] < range_hi[c] - 1e-12;
    has_fall_.push_back(fall ? 1 : 0);
    if (fall)  // falling step = rising step on the mirrored axis
      falling_.emplace_back(-range_hi[c], -range_lo[c], -outer_hi[c], -inner_hi[c],
                            exponent);
  }
}

double BoxStep::operator()(const Vec2& x) const {
  double v = 1.0;
  size_t ir = 0, ifall = 0;
  for (int c = 0; c < 2; ++c) {
    if (has_rise_[size_t(c)]) v *= rising_[ir++](x[c]);
    if (has_fall_[size_t(c)]) v *= falling_[ifall++](-x[c]);
  }
  return v;
}

int BoxStep::degree() const {
  int d = 0;
  for (const auto& s : rising_) d += s.degree();
  for (const auto& s : falling_) d += s.degree();
  return d;
}

// ---------------------------------------------------------------------------
// GlobalPartition

namespace {

struct WorldBox {
  Vec2 lo, hi;
  bool contains(const Vec2& p, double margin = 0.0) const {
    return p[0] >= lo[0] - margin && p[0] <= hi[0] + margin &&
           p[1] >= lo[1] - margin && p[1] <= hi[1] + margin;
  }
};

WorldBox chart_world_box(const SpecialDomain& g, double xfrac, double ylo_local,
                         double yhi_local) {
  // axis-aligned because the chart frames are signed permutations
  const Vec2 a = g.to_world(Vec2(-xfrac * g.b(), ylo_local));
  const Vec2 b = g.to_world(Vec2(xfrac * g.b(), yhi_local));
  WorldBox w;
  w.lo = a.cwiseMin(b);
  w.hi = a.cwiseMax(b);
  return w;
}

}  // namespace

GlobalPartition::GlobalPartition(
    const DomainC2& dom, const std::vector<std::shared_ptr<const SpecialDomain>>& cover,
    const Options& opt)
    : dom_(dom), opt_(opt) {
  const int n = opt.n;
  const double R = dom.bounding_radius();

  struct PendingPiece {
    Piece piece;
    WorldBox inner, outer;
  };
  std::vector<PendingPiece> pending;

  // boundary chart pieces
  for (const auto& g : cover) {
    PendingPiece pp;
    pp.piece.strip = std::make_shared<StripPartition>(g, n, opt.ell);
    const double ymax = g->g_max2b() + 4.0 * R;
    pp.inner = chart_world_box(*g, opt.lambda0,
                               g->g_min2b() - opt.lambda0 * g->depth(), ymax);
    pp.outer = chart_world_box(*g, 1.96, g->g_min2b() - 3.9 * g->depth(), ymax);
    pending.push_back(std::move(pp));
  }

  // interior cube pieces: three dyadic levels, grid placement with 4Q inside
  double inradius = kInf;
  for (int i = 0; i < 256; ++i)
    inradius = std::min(
        inradius, dom.boundary(dom.boundary_period() * i / 256).norm());
  const double amax = 0.6 * inradius;  // side of the base cube Q
  std::vector<PendingPiece> cubes;
  auto fits = [&](const Vec2& c, double a_side) {
    // 4Q = cube of half-width 2 a_side centered at c
    for (int i = 0; i <= 8; ++i) {
      for (int j = 0; j <= 8; ++j) {
        const Vec2 p = c + Vec2((i / 4.0 - 1.0), (j / 4.0 - 1.0)) * 2.0 * a_side;
        if (!dom.inside(p)) return false;
      }
    }
    return true;
  };
  auto covered_by_cubes = [&](const Vec2& c, double margin) {
    for (const auto& q : cubes)
      if (q.inner.contains(c, -margin)) return true;
    return false;
  };
  for (int lev = 0; lev < 3; ++lev) {
    const double a_side = amax / std::pow(2.0, lev);  // half-width of Q
    const double spacing = 0.8 * a_side;
    const int gridn = int(std::ceil(2.0 * R / spacing));
    for (int i = -gridn; i <= gridn; ++i) {
      for (int j = -gridn; j <= gridn; ++j) {
        const Vec2 c(i * spacing, j * spacing);
        if (!dom.inside(c)) continue;
        if (!fits(c, a_side)) continue;
        if (lev > 0 && covered_by_cubes(c, 0.3 * a_side)) continue;
        PendingPiece pp;
        pp.piece.cube_center = c;
        pp.piece.cube_half = a_side;  // halfwidth of 2Q
        pp.piece.vx = cube_kernels(n, a_side, opt.ell);
        pp.piece.vy = pp.piece.vx;
        pp.inner.lo = c - Vec2(0.55, 0.55) * a_side;
        pp.inner.hi = c + Vec2(0.55, 0.55) * a_side;
        pp.outer.lo = c - Vec2(1.96, 1.96) * a_side;
        pp.outer.hi = c + Vec2(1.96, 1.96) * a_side;
        cubes.push_back(std::move(pp));
      }
    }
  }

  // chain the cubes onto the charts by greedy inner-overlap
  Rng rng(20240613);
  std::vector<Vec2> probes;
  for (Index i = 0; i < opt.probe_count; ++i)
    probes.push_back(random_domain_point(dom_, rng));
  auto overlaps_union = [&](const WorldBox& inner,
                            const std::vector<PendingPiece>& chain) {
    for (const auto& pp : chain) {
      const WorldBox& b = pp.inner;
      const double lox = std::max(inner.lo[0], b.lo[0]);
      const double hix = std::min(inner.hi[0], b.hi[0]);
      const double loy = std::max(inner.lo[1], b.lo[1]);
      const double hiy = std::min(inner.hi[1], b.hi[1]);
      if (hix - lox > 1e-9 && hiy - loy > 1e-9) return true;
    }
    return false;
  };
  std::vector<bool> used(cubes.size(), false);
  for (size_t added = 0; added < cubes.size(); ++added) {
    bool any = false;
    for (size_t k = 0; k < cubes.size(); ++k) {
      if (used[k]) continue;
      if (overlaps_union(cubes[k].inner, pending)) {
        pending.push_back(cubes[k]);
        used[k] = true;
        any = true;
        break;
      }
    }
    if (!any)
      throw std::runtime_error(
          "global_partition: interior piece does not overlap the chain (overlap too small)");
  }
  // coverage check of the inner regions
  for (const Vec2& p : probes) {
    bool ok = false;
    for (const auto& pp : pending)
      if (pp.inner.contains(p)) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::runtime_error("global_partition: inner regions do not cover the domain");
  }

  // growth measurement and steps
  const Vec2 range_lo(-1.05 * R, -1.05 * R), range_hi(1.05 * R, 1.05 * R);
  int step_degrees = 0;
  int piece_degree = 0;
  for (size_t k = 0; k < pending.size(); ++k) {
    auto& pp = pending[k];
    // representative kernels
    std::vector<std::pair<int, int>> reps = {
        {0, 0}, {n / 2, 0}, {n - 1, 0}, {0, n / 2}, {n / 2, n / 2}, {n - 1, n - 1}};
    double growth = 0.0;
    double inside_bound = 0.0;
    for (const Vec2& p : probes) {
      const bool in_outer = pp.outer.contains(p, 1e-12);
      for (auto [i, j] : reps) {
        double q;
        if (pp.piece.strip) {
          q = pp.piece.strip->eval(i, j, p);
        } else {
          const Vec2 d = p - pp.piece.cube_center;
          q = pp.piece.vx.eval(i, d[0] / (2.0 * pp.piece.cube_half)) *
              pp.piece.vy.eval(j, d[1] / (2.0 * pp.piece.cube_half));
        }
        const double lq = std::log(std::max(std::abs(q), 1e-300));
        if (in_outer)
          inside_bound = std::max(inside_bound, lq);
        else
          growth = std::max(growth, lq);
      }
    }
    if (inside_bound > std::log(100.0))
      throw std::runtime_error(
          "global_partition: piece kernels unbounded inside their own box");
    if (k > 0) {
      const double exponent = std::max(growth, 0.0) + n * std::log(10.0) + opt.safety;
      pp.piece.step = std::make_shared<BoxStep>(pp.inner.lo, pp.inner.hi,
                                                pp.outer.lo, pp.outer.hi, range_lo,
                                                range_hi, exponent);
      step_degrees += pp.piece.step->degree();
    }
    pp.piece.growth_log = growth;
  }

  // register kernels
  for (size_t k = 0; k < pending.size(); ++k) {
    Piece pc = std::move(pending[k].piece);
    pc.first_kernel = Index(centers_.size());
    pc.kernel_count = Index(n) * n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Vec2 c;
        if (pc.strip) {
          c = pc.strip->cell_point(i, j);
        } else {
          c = pc.cube_center + Vec2(pc.vx.centers[i], pc.vy.centers[j]);
        }
        centers_.push_back(c);
        kernel_of_.emplace_back(int(k), Index(i) * n + j);
      }
    }
    piece_degree = std::max(
        piece_degree, pc.strip ? pc.strip->degree() : 2 * pc.vx.degree);
    pieces_.push_back(std::move(pc));
  }
  declared_degree_ = piece_degree + step_degrees;

  // cluster the centers into a 1/n-separated set under rho_Omega
  std::vector<double> cdist(centers_.size());
  for (size_t i = 0; i < centers_.size(); ++i) {
    Vec2 p = centers_[i];
    if (!dom_.inside(p)) {
      // strip cell points can stick out by roundoff; nudge inward
      p *= (1.0 - 1e-9);
    }
    cdist[i] = dom_.inside(p) ? dom_.boundary_distance(p) : 0.0;
  }
  for (size_t i = 0; i < centers_.size(); ++i) {
    bool joined = false;
    for (size_t c = 0; c < cluster_centers_.size(); ++c) {
      const size_t rep = size_t(clusters_[c][0]);
      if (metric_rho_d(centers_[i], centers_[rep], cdist[i], cdist[rep]) <
          1.0 / n) {
        clusters_[c].push_back(Index(i));
        joined = true;
        break;
      }
    }
    if (!joined) {
      clusters_.push_back({Index(i)});
      cluster_centers_.push_back(centers_[i]);
    }
  }
}

double GlobalPartition::piece_kernel(const Piece& pc, Index local,
                                     const Vec2& x) const {
  const int n = opt_.n;
  const int i = int(local / n), j = int(local % n);
  if (pc.strip) return pc.strip->eval(i, j, x);
  const Vec2 d = x - pc.cube_center;
  return pc.vx.eval(i, d[0] / (2.0 * pc.cube_half)) *
         pc.vy.eval(j, d[1] / (2.0 * pc.cube_half));
}

double GlobalPartition::eval_kernel(Index k, const Vec2& x) const {
  const auto [piece, local] = kernel_of_[size_t(k)];
  const double q = piece_kernel(pieces_[size_t(piece)], local, x);
  double w = 1.0;
  if (pieces_[size_t(piece)].step) w *= (*pieces_[size_t(piece)].step)(x);
  for (size_t m = size_t(piece) + 1; m < pieces_.size(); ++m)
    w *= 1.0 - (*pieces_[m].step)(x);
  return q * w;
}

double GlobalPartition::sum(const Vec2& x) const {
  // step values once per point
  std::vector<double> stepv(pieces_.size(), 1.0);
  for (size_t m = 1; m < pieces_.size(); ++m) stepv[m] = (*pieces_[m].step)(x);
  std::vector<double> suffix(pieces_.size() + 1, 1.0);
  for (size_t m = pieces_.size(); m-- > 1;)
    suffix[m] = suffix[m + 1] * (1.0 - stepv[m]);
  suffix[0] = suffix[1];
  KahanSum total;
  for (size_t p = 0; p < pieces_.size(); ++p) {
    const double w = (p == 0 ? 1.0 : stepv[p]) * suffix[p + 1];
    const Piece& pc = pieces_[p];
    for (Index local = 0; local < pc.kernel_count; ++local)
      total.add(w * piece_kernel(pc, local, x));
  }
  return total.value();
}

double GlobalPartition::eval_cluster(Index c, const Vec2& x) const {
  KahanSum s;
  for (Index k : clusters_[size_t(c)]) s.add(eval_kernel(k, x));
  return s.value();
}

int GlobalPartition::max_cluster_size() const {
  size_t m = 0;
  for (const auto& c : clusters_) m = std::max(m, c.size());
  return int(m);
}

}  // namespace c2approx
