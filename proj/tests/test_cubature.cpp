#include "c2approx/cubature.hpp"

#include "doctest.h"

using namespace c2approx;

namespace {

const DomainC2& disk_domain() {
  static const DomainC2 disk = DomainC2::disk();
  return disk;
}

const NodeSet& net_nodes() {
  static const NodeSet ns = make_node_set(disk_domain(), 1e-6, 30000);
  return ns;
}

const QuadratureRule& mom_quad() {
  static const QuadratureRule q = build_quadrature(disk_domain(), 1e-10, 4000);
  return q;
}

/// Exhaustive KKT oracle for tiny NNLS instances: enumerate supports, solve
/// the unconstrained LS on each, keep feasible solutions with nonpositive
/// dual on the complement.
NnlsResult nnls_oracle(const Matrix& A, const Vector& b) {
  const Index n = A.cols();
  NnlsResult best;
  best.residual = kInf;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Index> sel;
    for (Index j = 0; j < n; ++j)
      if (mask & (1 << j)) sel.push_back(j);
    Vector x = Vector::Zero(n);
    if (!sel.empty()) {
      Matrix As(A.rows(), Index(sel.size()));
      for (size_t k = 0; k < sel.size(); ++k) As.col(Index(k)) = A.col(sel[k]);
      const Vector xs = As.colPivHouseholderQr().solve(b);
      bool feasible = true;
      for (Index k = 0; k < xs.size(); ++k)
        if (xs[k] < -1e-12) feasible = false;
      if (!feasible) continue;
      for (size_t k = 0; k < sel.size(); ++k) x[sel[k]] = std::max(xs[Index(k)], 0.0);
    }
    const Vector grad = A.transpose() * (b - A * x);
    bool kkt = true;
    for (Index j = 0; j < n; ++j) {
      if (x[j] <= 1e-12 && grad[j] > 1e-9) kkt = false;
    }
    if (!kkt) continue;
    const double res = (A * x - b).norm();
    if (res < best.residual) {
      best.residual = res;
      best.x = x;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("nnls against the exhaustive KKT oracle") {
  // 6-node net on the disk, exactness on Pi_1
  Matrix pts(6, 2);
  pts << 0.0, 0.0, 0.7, 0.1, -0.6, 0.3, 0.2, -0.7, -0.3, -0.5, 0.1, 0.65;
  const Box box = Box::cube(2, 0.0, 1.0);
  const Matrix A = basis_matrix(box, 1, pts).transpose();
  const Vector m = moments(disk_domain(), box, 1, mom_quad());
  const NnlsResult got = nnls(A, m);
  const NnlsResult want = nnls_oracle(A, m);
  CHECK(got.residual == doctest::Approx(want.residual).epsilon(1e-9));
  CHECK((A * got.x - m).norm() <= want.residual + 1e-10);
  for (Index i = 0; i < got.x.size(); ++i) CHECK(got.x[i] >= 0.0);
}

TEST_CASE("moments of the Chebyshev basis on the disk") {
  const Box box = Box::cube(2, 0.0, 1.0);
  const Vector m = moments(disk_domain(), box, 2, mom_quad());
  auto basis = GradedBasis::get(2, 2);
  for (Index i = 0; i < basis->size(); ++i) {
    auto a = basis->exponent(i);
    if (a[0] == 0 && a[1] == 0) CHECK(m[i] == doctest::Approx(kPi).epsilon(1e-10));
    if (a[0] == 1 && a[1] == 0) CHECK(std::abs(m[i]) <= 1e-10);
    // T2(x) = 2x^2 - 1: integral = 2 (pi/4) - pi = -pi/2
    if (a[0] == 2 && a[1] == 0)
      CHECK(m[i] == doctest::Approx(-kPi / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("positive cubature on the disk") {
  const CubatureRule rule = positive_cubature(disk_domain(), 6, 0.5, net_nodes(), mom_quad());
  SUBCASE("weights strictly positive, area reproduced") {
    CHECK(rule.weights.minCoeff() > 0.0);
    double area = 0.0;
    for (Index k = 0; k < rule.weights.size(); ++k) area += rule.weights[k];
    CHECK(area == doctest::Approx(kPi).epsilon(1e-8));
    CHECK(rule.exactness_residual <= 1e-9);
  }
  SUBCASE("odd moment vanishes") {
    auto fx = [](const Vec2& p) { return p[0]; };
    CHECK(std::abs(rule.integrate(fx)) <= 1e-8);
  }
  SUBCASE("random members of Pi_n re-integrate to 1e-7") {
    const Box box = Box::cube(2, 0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
      const Polynomial f = Polynomial::random(6, 2, box, 7100 + t);
      double want = 0.0;
      for (Index i = 0; i < mom_quad().size(); ++i)
        want += mom_quad().weights[i] * f(mom_quad().node(i));
      const double got = rule.integrate(as_fn(f));
      const double scale = lp_norm(as_fn(f), disk_domain(), 2.0, mom_quad());
      CHECK(std::abs(got - want) <= 1e-7 * std::max(scale, 1.0));
    }
  }
  SUBCASE("support weights comparable to metric ball volumes") {
    double lo = kInf, hi = 0.0;
    for (size_t k = 0; k < rule.support.size(); ++k) {
      const Vec2 xi = rule.net.point(rule.support[k]);
      const double vol = ball_volume(disk_domain(), xi, rule.eps / rule.degree, 24).volume;
      const double ratio = rule.weights[Index(k)] / vol;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 2500.0);  // [1/c, c] with a single c
  }
}

TEST_CASE("mz sandwich report") {
  const MzReport rep = mz_check(disk_domain(), 6, 0.4, 2.0, 40, 555, net_nodes(), mom_quad());
  CHECK(rep.trials == 40);
  CHECK(rep.c1_fit > 0.0);
  CHECK(rep.c1_fit <= 1.0 + 1e-9);  // max-sum dominates the norm (covering)
  CHECK(rep.c2_fit >= rep.c1_fit);
  for (int t = 0; t < rep.trials; ++t) {
    CHECK(rep.c1_samples[t] <= rep.c2_samples[t] * (1.0 + 1e-12));
  }
}

TEST_CASE("oscillation inequality report") {
  const OscReport rep =
      osc_inequality_check(disk_domain(), 6, 0.4, 2.0, 2.0, 30, 777, net_nodes(), mom_quad());
  CHECK(rep.c_fit > 0.0);
  CHECK(rep.c_fit < kInf);
  // homogeneity: the ratio statistic is scale-free by construction; rerun with
  // the same seed gives identical samples
  const OscReport rep2 =
      osc_inequality_check(disk_domain(), 6, 0.4, 2.0, 2.0, 30, 777, net_nodes(), mom_quad());
  CHECK((rep.samples - rep2.samples).cwiseAbs().maxCoeff() == 0.0);
}
