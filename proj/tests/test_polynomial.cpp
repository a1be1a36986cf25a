#include "c2approx/polynomial.hpp"

#include "doctest.h"

#include <set>

using namespace c2approx;

namespace {

const Box kBox = Box::cube(2, 0.0, 1.0);

Polynomial from_xy(double cxx, double cxy, double cyy, double cx, double cy,
                   double c0) {
  // c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2 as a degree-2 polynomial
  const Polynomial x = Polynomial::coordinate(kBox, 0).extended(1);
  const Polynomial y = Polynomial::coordinate(kBox, 1).extended(1);
  Polynomial out = x.times(x).scaled(cxx) + x.times(y).scaled(cxy) +
                   y.times(y).scaled(cyy);
  out = out + (x.scaled(cx) + y.scaled(cy) + Polynomial::constant(kBox, c0)).extended(2);
  return out;
}

}  // namespace

TEST_CASE("graded basis enumeration and dimension") {
  auto b = GradedBasis::get(2, 3);
  CHECK(b->size() == 10);
  CHECK(GradedBasis::dimension(2, 32) == 561);
  // position inverts enumeration
  for (Index i = 0; i < b->size(); ++i) {
    CHECK(b->position(b->exponent(i)) == i);
  }
}

TEST_CASE("constant and coordinate evaluation") {
  const Polynomial one = Polynomial::constant(kBox, 1.0);
  CHECK(one(Vec2(0.3, -0.7)) == doctest::Approx(1.0).epsilon(1e-15));
  const Polynomial x = Polynomial::coordinate(kBox, 0);
  CHECK(x(Vec2(0.42, 0.1)) == doctest::Approx(0.42).epsilon(1e-14));
}

TEST_CASE("basis evaluation exact to 1e-13") {
  // evaluate Chebyshev basis elements against the trig closed form
  Box box = Box::cube(2, 0.0, 2.0);
  Polynomial p(box, 5);
  auto basis = GradedBasis::get(2, 5);
  Rng rng(7);
  for (Index i = 0; i < basis->size(); ++i) {
    p.coeffs().setZero();
    p.coeffs()[i] = 1.0;
    auto a = basis->exponent(i);
    for (int t = 0; t < 20; ++t) {
      const double th1 = rng.uniform(0.0, kPi), th2 = rng.uniform(0.0, kPi);
      const Vec2 pt(2.0 * std::cos(th1), 2.0 * std::cos(th2));
      const double want = std::cos(a[0] * th1) * std::cos(a[1] * th2);
      CHECK(p(pt) == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("directional derivative matches the symbolic value") {
  // f(x,y) = xy, e = (1,1)/sqrt(2), second derivative is 1 everywhere
  const Polynomial f = from_xy(0, 1, 0, 0, 0, 0);
  Vector e(2);
  e << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Polynomial d2 = f.dir_derivative(e, 2);
  CHECK(d2(Vec2(0.3, 0.8)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("dir_deriv matches central finite differences") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Polynomial f = Polynomial::random(5, 2, kBox, 100 + trial);
    Vector e(2);
    const double ang = rng.uniform(0.0, 2.0 * kPi);
    e << std::cos(ang), std::sin(ang);
    const Vec2 pt(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const double h = 1e-5;
    const Vec2 eh(e[0] * h, e[1] * h);
    const double fd = (f(pt + eh) - f(pt - eh)) / (2.0 * h);
    const double exact = f.dir_derivative(e, 1)(pt);
    CHECK(fd == doctest::Approx(exact).epsilon(1e-7));
  }
}

TEST_CASE("derivative order additivity") {
  Vector e(2);
  e << 0.6, -0.8;
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial f = Polynomial::random(7, 2, kBox, 55 + trial);
    const Polynomial a = f.dir_derivative(e, 1).dir_derivative(e, 2);
    const Polynomial b = f.dir_derivative(e, 3);
    Rng rng(trial);
    for (int k = 0; k < 10; ++k) {
      const Vec2 pt(rng.uniform(-1, 1), rng.uniform(-1, 1));
      CHECK(a(pt) == doctest::Approx(b(pt)).epsilon(1e-11));
    }
  }
}

TEST_CASE("degree annihilation: order n+1 derivative vanishes") {
  const Polynomial f = Polynomial::random(4, 2, kBox, 9);
  Vector e(2);
  e << 0.8, 0.6;
  const Polynomial d = f.dir_derivative(e, 5);
  CHECK(d.coeffs().cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("random polynomial determinism and moments") {
  const Polynomial a = Polynomial::random(6, 2, kBox, 1234);
  const Polynomial b = Polynomial::random(6, 2, kBox, 1234);
  CHECK((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() == 0.0);
  // empirical mean of coefficients over many draws
  double mean = 0.0;
  int count = 0;
  for (int s = 0; s < 400; ++s) {
    const Polynomial p = Polynomial::random(6, 2, kBox, 5000 + s);
    mean += p.coeffs().sum();
    count += int(p.coeffs().size());
  }
  CHECK(std::abs(mean / count) < 0.05);
}

TEST_CASE("chebyshev product and series utilities") {
  Vector a(3), b(2);
  a << 0.5, 1.0, 0.25;  // 0.5 + T1 + 0.25 T2
  b << 0.0, 1.0;        // T1
  const Vector c = chebyshev_product(a, b);
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const double t = rng.uniform(-1, 1);
    CHECK(chebyshev_eval(c, t) ==
          doctest::Approx(chebyshev_eval(a, t) * chebyshev_eval(b, t)).epsilon(1e-13));
  }
  const Vector d = chebyshev_derivative(a);
  for (int k = 0; k < 20; ++k) {
    const double t = rng.uniform(-0.99, 0.99);
    const double h = 1e-6;
    const double fd = (chebyshev_eval(a, t + h) - chebyshev_eval(a, t - h)) / (2 * h);
    CHECK(chebyshev_eval(d, t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("polynomial product matches pointwise product") {
  const Polynomial f = Polynomial::random(3, 2, kBox, 21);
  const Polynomial g = Polynomial::random(4, 2, kBox, 22);
  const Polynomial fg = f.times(g);
  CHECK(fg.degree() == 7);
  Rng rng(5);
  for (int k = 0; k < 30; ++k) {
    const Vec2 pt(rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(fg(pt) == doctest::Approx(f(pt) * g(pt)).epsilon(1e-11));
  }
}

TEST_CASE("serialization round trip is exact") {
  const Polynomial f = Polynomial::random(5, 2, Box::cube(2, 0.25, 1.75), 77);
  const Polynomial g = Polynomial::deserialize(f.serialize());
  CHECK(g.degree() == f.degree());
  CHECK((g.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("directional space basis dimensions") {
  DirectionSet axes;
  {
    Vector e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    axes.directions = {e1, e2};
  }
  SUBCASE("coordinate directions, r = 2: tensor space of dimension 4") {
    auto space = directional_space_basis(2, axes, 2, kBox);
    CHECK(space.basis.size() == 4);
  }
  SUBCASE("r = 1 gives constants only") {
    auto space = directional_space_basis(1, axes, 2, kBox);
    CHECK(space.basis.size() == 1);
  }
  SUBCASE("Pi_{r-1} is inside the span for generic three directions") {
    DirectionSet three;
    for (double ang : {0.1, 1.3, 2.4}) {
      Vector e(2);
      e << std::cos(ang), std::sin(ang);
      three.directions.push_back(e);
    }
    auto space = directional_space_basis(2, three, 2, kBox);
    // project x and y onto the span and check reproduction
    for (int coord = 0; coord < 2; ++coord) {
      const Polynomial target = Polynomial::coordinate(kBox, coord);
      const int deg = space.basis[0].degree();
      Vector t = target.extended(deg).coeffs();
      Vector proj = Vector::Zero(t.size());
      for (const auto& q : space.basis) proj += q.coeffs().dot(t) * q.coeffs();
      CHECK((proj - t).norm() <= 1e-9 * std::max(1.0, t.norm()));
    }
  }
  SUBCASE("every basis member is annihilated by d_e^r") {
    auto space = directional_space_basis(2, axes, 2, kBox);
    for (const auto& q : space.basis) {
      for (const auto& e : axes.directions) {
        CHECK(q.dir_derivative(e, 2).coeffs().cwiseAbs().maxCoeff() <= 1e-9);
      }
    }
  }
}

TEST_CASE("kemperman identity residuals") {
  SUBCASE("r = 1 exact") {
    const Polynomial f = Polynomial::random(4, 2, kBox, 31);
    Vector xi(2);
    xi << 0.3, -1.1;
    Vector x(2);
    x << 0.2, 0.4;
    CHECK(kemperman_mixed_identity_residual(f, {xi}, x) <= 1e-12);
  }
  SUBCASE("f = xy with coordinate directions") {
    const Polynomial f = from_xy(0, 1, 0, 0, 0, 0);
    Vector e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    Vector x(2);
    x << 0.5, -0.25;
    CHECK(kemperman_mixed_identity_residual(f, {e1, e2}, x) <= 1e-12);
  }
  SUBCASE("randomized suite r <= 4") {
    Rng rng(90);
    for (int t = 0; t < 100; ++t) {
      const int r = 1 + int(rng.integer(4));
      const Polynomial f = Polynomial::random(5, 2, kBox, 600 + t);
      std::vector<Vector> xis;
      for (int k = 0; k < r; ++k) {
        Vector v(2);
        v << rng.uniform(-1, 1), rng.uniform(-1, 1);
        xis.push_back(v);
      }
      Vector x(2);
      x << rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5);
      CHECK(kemperman_mixed_identity_residual(f, xis, x) <= 1e-9);
    }
  }
}
