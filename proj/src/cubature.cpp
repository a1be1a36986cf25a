#include "c2approx/cubature.hpp"

#include <Eigen/QR>

namespace c2approx {

NnlsResult nnls(const Matrix& A, const Vector& b, double tol, int max_iter) {
  const Index m = A.rows(), n = A.cols();
  if (tol <= 0.0) tol = 10.0 * (m + n) * A.cwiseAbs().maxCoeff() * 1e-16;
  if (max_iter <= 0) max_iter = int(3 * n);
  NnlsResult res;
  Vector x = Vector::Zero(n);
  std::vector<bool> passive(size_t(n), false);
  std::vector<Index> pset;
  Vector w = A.transpose() * b;
  int it = 0;
  while (it < max_iter) {
    // pick the most violated dual coordinate among the zero set
    Index best = -1;
    double wbest = tol;
    for (Index j = 0; j < n; ++j) {
      if (!passive[size_t(j)] && w[j] > wbest) {
        wbest = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[size_t(best)] = true;
    pset.push_back(best);
    for (;;) {
      ++it;
      Matrix Ap(m, Index(pset.size()));
      for (size_t k = 0; k < pset.size(); ++k) Ap.col(Index(k)) = A.col(pset[k]);
      const Vector z = Ap.colPivHouseholderQr().solve(b);
      double zmin = kInf;
      for (Index k = 0; k < z.size(); ++k) zmin = std::min(zmin, z[k]);
      if (zmin > 0.0) {
        x.setZero();
        for (size_t k = 0; k < pset.size(); ++k) x[pset[k]] = z[Index(k)];
        break;
      }
      // inner step toward feasibility
      double alpha = kInf;
      for (size_t k = 0; k < pset.size(); ++k) {
        const double zk = z[Index(k)];
        if (zk <= 0.0) {
          const double xk = x[pset[k]];
          alpha = std::min(alpha, xk / (xk - zk));
        }
      }
      for (size_t k = 0; k < pset.size(); ++k) {
        const Index j = pset[k];
        x[j] += alpha * (z[Index(k)] - x[j]);
      }
      std::vector<Index> keep;
      for (Index j : pset) {
        if (x[j] > tol * 1e-3) {
          keep.push_back(j);
        } else {
          x[j] = 0.0;
          passive[size_t(j)] = false;
        }
      }
      pset = std::move(keep);
      if (pset.empty()) break;
    }
    w = A.transpose() * (b - A * x);
    for (Index j : pset) w[j] = 0.0;
  }
  res.x = x;
  res.residual = (A * x - b).norm();
  res.iterations = it;
  return res;
}

Vector moments(const DomainC2& dom, const Box& box, int n, const QuadratureRule& quad) {
  (void)dom;
  const Matrix B = basis_matrix(box, n, quad.nodes);
  return B.transpose() * quad.weights;
}

CubatureRule positive_cubature(const DomainC2& dom, int n, double eps,
                               const NodeSet& nodes, const QuadratureRule& mom_quad) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("positive_cubature: eps must lie in (0,1)");
  const Box box = Box::cube(2, 0.0, dom.bounding_radius());
  const Vector m = moments(dom, box, n, mom_quad);
  double cur_eps = eps;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Net net = greedy_separated_net(dom, cur_eps / n, NetMetric::rho_omega, nodes);
    const Matrix A = basis_matrix(box, n, net.points).transpose();
    NnlsResult sol = nnls(A, m);
    if (sol.residual <= 1e-9 * m.norm()) {
      CubatureRule rule;
      rule.net = std::move(net);
      rule.degree = n;
      rule.eps = cur_eps;
      rule.exactness_residual = sol.residual / m.norm();
      for (Index i = 0; i < sol.x.size(); ++i)
        if (sol.x[i] > 0.0) rule.support.push_back(i);
      rule.weights.resize(Index(rule.support.size()));
      for (size_t k = 0; k < rule.support.size(); ++k)
        rule.weights[Index(k)] = sol.x[rule.support[k]];
      return rule;
    }
    cur_eps *= 0.5;
  }
  throw std::runtime_error("positive_cubature: infeasible even at eps = " +
                           std::to_string(cur_eps * 2.0));
}

MzReport mz_check(const DomainC2& dom, int n, double eps, double p, int trials,
                  std::uint64_t seed, const NodeSet& nodes,
                  const QuadratureRule& norm_quad) {
  Net net = greedy_separated_net(dom, eps / n, NetMetric::rho_omega, nodes);
  const double radius = eps / n;
  std::vector<Matrix> members(size_t(net.size()));
  Vector volumes(net.size());
  for (Index i = 0; i < net.size(); ++i) {
    members[size_t(i)] = ball_samples(dom, net.point(i), radius, 10);
    volumes[i] = ball_volume(dom, net.point(i), radius, 32).volume;
  }
  const Box box = Box::cube(2, 0.0, dom.bounding_radius());
  MzReport rep;
  rep.trials = trials;
  rep.c1_samples.resize(trials);
  rep.c2_samples.resize(trials);
  for (int t = 0; t < trials; ++t) {
    Polynomial f = Polynomial::random(n, 2, box, Rng::derive(seed, t));
    auto fn = as_fn(f);
    double max_sum = 0.0, min_sum = 0.0, max_all = 0.0, min_part = kInf;
    for (Index i = 0; i < net.size(); ++i) {
      const Matrix& mem = members[size_t(i)];
      double lo = kInf, hi = 0.0;
      for (Index j = 0; j < mem.rows(); ++j) {
        const double v = std::abs(fn(Vec2(mem(j, 0), mem(j, 1))));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (p == kInf) {
        max_all = std::max(max_all, hi);
        min_part = std::min(min_part, lo);
      } else {
        max_sum += volumes[i] * std::pow(hi, p);
        min_sum += volumes[i] * std::pow(lo, p);
      }
    }
    const double norm = lp_norm(fn, dom, p, norm_quad);
    double lhs, rhs;
    if (p == kInf) {
      lhs = max_all;
      rhs = max_all;  // max over balls of min would be vacuous; use the max form
    } else {
      lhs = std::pow(max_sum, 1.0 / p);
      rhs = std::pow(min_sum, 1.0 / p);
    }
    rep.c1_samples[t] = norm / std::max(lhs, 1e-300);
    rep.c2_samples[t] = norm / std::max(rhs, 1e-300);
  }
  rep.c1_fit = rep.c1_samples.minCoeff();  // largest valid C1
  rep.c2_fit = rep.c2_samples.maxCoeff();  // smallest valid C2
  return rep;
}

OscReport osc_inequality_check(const DomainC2& dom, int n, double eps, double ell,
                               double p, int trials, std::uint64_t seed,
                               const NodeSet& nodes, const QuadratureRule& norm_quad) {
  if (!(ell > 1.0)) throw std::invalid_argument("osc_inequality_check: ell must be > 1");
  Net net = greedy_separated_net(dom, eps / n, NetMetric::rho_omega, nodes);
  std::vector<Matrix> big(size_t(net.size()));
  Vector volumes(net.size());
  for (Index i = 0; i < net.size(); ++i) {
    big[size_t(i)] = ball_samples(dom, net.point(i), ell * eps / n, 10);
    volumes[i] = ball_volume(dom, net.point(i), eps / n, 32).volume;
  }
  const Box box = Box::cube(2, 0.0, dom.bounding_radius());
  OscReport rep;
  rep.trials = trials;
  rep.samples.resize(trials);
  for (int t = 0; t < trials; ++t) {
    Polynomial f = Polynomial::random(n, 2, box, Rng::derive(seed, t));
    auto fn = as_fn(f);
    double lhs;
    auto osc_ball = [&](Index i) {
      const Matrix& mem = big[size_t(i)];
      double lo = kInf, hi = -kInf;
      for (Index j = 0; j < mem.rows(); ++j) {
        const double v = fn(Vec2(mem(j, 0), mem(j, 1)));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return hi - lo;
    };
    if (p == kInf) {
      lhs = 0.0;
      for (Index i = 0; i < net.size(); ++i) lhs = std::max(lhs, osc_ball(i));
    } else {
      double acc = 0.0;
      for (Index i = 0; i < net.size(); ++i)
        acc += volumes[i] * std::pow(osc_ball(i), p);
      lhs = std::pow(acc, 1.0 / p);
    }
    const double norm = lp_norm(fn, dom, p, norm_quad);
    rep.samples[t] = lhs / (eps * std::max(norm, 1e-300));
  }
  rep.c_fit = rep.samples.maxCoeff();
  return rep;
}

}  // namespace c2approx
