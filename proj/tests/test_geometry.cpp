#include "c2approx/geometry.hpp"

#include "doctest.h"

#include <fstream>

using namespace c2approx;

TEST_CASE("disk boundary distance") {
  const DomainC2 disk = DomainC2::disk();
  CHECK(disk.boundary_distance(Vec2(0, 0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(disk.boundary_distance(Vec2(0.5, 0)) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(disk.boundary_distance(Vec2(2, 0)), std::domain_error);
}

TEST_CASE("bump domain distance against a dense scan oracle") {
  const DomainC2 bump = DomainC2::bump();
  const Vec2 xi(0.3, 0.1);
  double oracle = kInf;
  for (int i = 0; i < 100000; ++i) {
    const double th = 2.0 * kPi * i / 100000;
    oracle = std::min(oracle, (xi - bump.boundary(th)).norm());
  }
  CHECK(bump.boundary_distance(xi) == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("rolling ball probe") {
  for (const DomainC2& dom : {DomainC2::disk(), DomainC2::ellipse(1.3, 0.8),
                              DomainC2::bump()}) {
    const double r0 = dom.rolling_radius();
    CHECK(r0 > 0.01);
    for (int i = 0; i < 128; ++i) {
      const double s = dom.boundary_period() * i / 128;
      const Vec2 n = dom.outward_normal(s);
      for (double f : {0.1, 0.5, 0.9}) {
        CHECK(dom.inside(dom.boundary(s) - f * r0 * n));
      }
    }
  }
}

TEST_CASE("metric rho on the disk") {
  const DomainC2 disk = DomainC2::disk();
  SUBCASE("identity of indiscernibles") {
    CHECK(metric_rho(disk, Vec2(0.2, 0.3), Vec2(0.2, 0.3)) == 0.0);
  }
  SUBCASE("analytic value") {
    const double want = 0.5 + (1.0 - std::sqrt(0.5));
    CHECK(metric_rho(disk, Vec2(0, 0), Vec2(0.5, 0)) ==
          doctest::Approx(want).epsilon(1e-9));
  }
  SUBCASE("symmetry and triangle inequality on random triples") {
    Rng rng(17);
    for (int t = 0; t < 2000; ++t) {
      const Vec2 a = random_domain_point(disk, rng);
      const Vec2 b = random_domain_point(disk, rng);
      const Vec2 c = random_domain_point(disk, rng);
      const double ab = metric_rho(disk, a, b);
      const double ba = metric_rho(disk, b, a);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
      CHECK(ab <= metric_rho(disk, a, c) + metric_rho(disk, c, b) + 1e-12);
    }
  }
}

TEST_CASE("phi weight on the disk") {
  const DomainC2 disk = DomainC2::disk();
  CHECK(phi_dt(disk, Vec2(1, 0), Vec2(0, 0)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(phi_dt(disk, Vec2(1, 0), Vec2(0, 0.6)) == doctest::Approx(0.8).epsilon(1e-8));
  // boundary point, transverse direction: one arm is empty
  CHECK(phi_dt(disk, Vec2(0, 1), Vec2(0, 1.0 - 1e-13)) <= 1e-4);
}

TEST_CASE("segment tests") {
  const DomainC2 disk = DomainC2::disk();
  CHECK(segment_in_domain(disk, Vec2(-0.9, 0), Vec2(0.9, 0)));
  CHECK(segment_in_domain(disk, Vec2(0.1, 0.2), Vec2(0.1, 0.2)));
  const DomainC2 bump = DomainC2::bump();
  // chord crossing the concavity between two lobes
  const double a1 = kPi / 3 - 0.45, a2 = kPi / 3 + 0.45;
  const Vec2 p1 = 0.985 * bump.boundary(a1);
  const Vec2 p2 = 0.985 * bump.boundary(a2);
  REQUIRE(bump.inside(p1));
  REQUIRE(bump.inside(p2));
  // oracle with a dense sample
  bool oracle = true;
  for (int i = 0; i <= 10000; ++i) {
    if (!bump.inside(p1 + (double(i) / 10000) * (p2 - p1))) {
      oracle = false;
      break;
    }
  }
  CHECK_FALSE(oracle);
  CHECK(segment_in_domain(bump, p1, p2) == oracle);
}

TEST_CASE("quadrature on the disk") {
  const DomainC2 disk = DomainC2::disk();
  const QuadratureRule q = build_quadrature(disk, 1e-10);
  CHECK(q.domain_measure() == doctest::Approx(kPi).epsilon(1e-10));
  double ix = 0.0, ix2 = 0.0;
  for (Index i = 0; i < q.size(); ++i) {
    ix += q.weights[i] * q.nodes(i, 0);
    ix2 += q.weights[i] * q.nodes(i, 0) * q.nodes(i, 0);
  }
  CHECK(std::abs(ix) <= 1e-10);
  CHECK(ix2 == doctest::Approx(kPi / 4.0).epsilon(1e-9));
}

TEST_CASE("special domain basics") {
  SpecialDomain::GFunc gf;
  gf.g = [](double) { return 5.0; };
  gf.dg = [](double) { return 0.0; };
  gf.ddg = [](double) { return 0.0; };
  const SpecialDomain g(2, SpecialDomain::Orientation::upward, Vec2(0, 0), 0.5, 2.2,
                        gf);
  SUBCASE("rho_hat flat graph") {
    CHECK(g.rho_hat(Vec2(0, 5), Vec2(0, 4)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.rho_hat(Vec2(0.25, 5), Vec2(0.25, 5)) == 0.0);
  }
  SUBCASE("quadrature integrates the area") {
    const QuadratureRule q = g.quadrature(1e-9);
    CHECK(q.domain_measure() == doctest::Approx(1.0 * 1.1).epsilon(1e-8));
  }
  SUBCASE("membership") {
    CHECK(g.contains(Vec2(0, 4.5)));
    CHECK(!g.contains(Vec2(0, 5.5)));
    CHECK(!g.contains(Vec2(0.6, 4.5)));
    CHECK(g.in_gstar(Vec2(0.8, 4.0)));
  }
}

TEST_CASE("cover of the disk by special domains") {
  const DomainC2 disk = DomainC2::disk();
  const auto cover = cover_by_special_domains(disk, 0.1);
  CHECK(cover.size() >= 4);
  SUBCASE("parameter bound holds per chart") {
    for (const auto& g : cover) {
      CHECK(g->L() >= 4.0 * g->grad_bound() + 1.0 - 1e-9);
    }
  }
  SUBCASE("boundary is covered") {
    for (int i = 0; i < 10000; ++i) {
      const Vec2 p = disk.boundary(2.0 * kPi * i / 10000);
      bool covered = false;
      for (const auto& g : cover) {
        const Vec2 l = g->to_local(p);
        if (std::abs(l[0]) < g->b() && std::abs(l[1] - g->g(l[0])) < 1e-7) {
          covered = true;
          break;
        }
      }
      CHECK(covered);
    }
  }
  SUBCASE("G* stays inside the domain") {
    Rng rng(4);
    for (const auto& g : cover) {
      for (int t = 0; t < 400; ++t) {
        const double x = rng.uniform(-2 * g->b(), 2 * g->b());
        const double y =
            rng.uniform(g->g_min2b() - 4 * g->L() * g->b() + 1e-9, g->g(x) - 1e-9);
        CHECK(disk.inside(g->to_world(Vec2(x, y))));
      }
    }
  }
}

TEST_CASE("distance comparison on special domains (explicit constant)") {
  // c_* (g(x) - y) <= dist(xi, Gamma') <= g(x) - y
  SpecialDomain::GFunc gf;
  gf.g = [](double x) { return 5.0 + 0.125 * x * x; };
  gf.dg = [](double x) { return 0.25 * x; };
  gf.ddg = [](double) { return 0.25; };
  const SpecialDomain g(2, SpecialDomain::Orientation::upward, Vec2(0, 0), 0.5, 2.2,
                        gf);
  const double cstar = 1.0 / (8.0 * std::sqrt(1.0 + sqr(g.grad_bound())));
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const double x = rng.uniform(-0.5, 0.5);
    const double y = rng.uniform(g.g(x) - g.depth() + 1e-9, g.g(x) - 1e-9);
    const Vec2 w = g.to_world(Vec2(x, y));
    const double dist = g.dist_to_top(w);
    const double depth = g.g(x) - y;
    CHECK(dist <= depth * (1.0 + 1e-9));
    CHECK(dist >= cstar * depth * (1.0 - 1e-9));
  }
}

TEST_CASE("greedy net properties on the disk") {
  const DomainC2 disk = DomainC2::disk();
  const NodeSet nodes = make_node_set(disk, 1e-6, 40000);
  const double sep = 0.3 / 8.0;
  const Net net = greedy_separated_net(disk, sep, NetMetric::rho_omega, nodes);
  SUBCASE("pairwise separation") {
    for (Index i = 0; i < net.size(); ++i) {
      for (Index j = i + 1; j < net.size(); ++j) {
        CHECK(metric_rho_d(net.point(i), net.point(j), net.point_dist[i],
                           net.point_dist[j]) >= sep - 1e-12);
      }
    }
  }
  SUBCASE("maximality over the node set") {
    Rng rng(2);
    for (int t = 0; t < 400; ++t) {
      const Index i = Index(rng.integer(std::uint64_t(nodes.size())));
      double best = kInf;
      for (Index j = 0; j < net.size(); ++j) {
        best = std::min(best, metric_rho_d(nodes.quad.node(i), net.point(j),
                                           nodes.dist[i], net.point_dist[j]));
      }
      CHECK(best < sep);
    }
  }
  SUBCASE("cardinality grows like n^2") {
    Vector ns(3), cards(3);
    int k = 0;
    for (int n : {8, 16, 32}) {
      const Net nn = greedy_separated_net(disk, 0.6 / n, NetMetric::rho_omega, nodes);
      ns[k] = n;
      cards[k] = double(nn.size());
      ++k;
    }
    const double slope = (std::log(cards[2]) - std::log(cards[0])) /
                         (std::log(ns[2]) - std::log(ns[0]));
    CHECK(slope >= 1.8);
    CHECK(slope <= 2.2);
  }
}

TEST_CASE("ball volumes near the center and the boundary") {
  const DomainC2 disk = DomainC2::disk();
  SUBCASE("center ball: rho ~ (3/2) euclidean there") {
    const auto est = ball_volume(disk, Vec2(0, 0), 0.05);
    const double expect = kPi * sqr(0.05 * 2.0 / 3.0);
    CHECK(est.volume == doctest::Approx(expect).epsilon(0.1));
  }
  SUBCASE("subset bound and near-boundary comparability") {
    const auto est = ball_volume(disk, Vec2(0.999, 0), 0.05);
    CHECK(est.volume <= kPi);
    const double t = 0.05;
    const double dist = 0.001;
    const double scale = t * t * (t + std::sqrt(dist));
    CHECK(est.volume / scale >= 0.1);
    CHECK(est.volume / scale <= 10.0);
  }
  SUBCASE("volume equivalence across positions and scales") {
    for (const Vec2& xi : {Vec2(0, 0), Vec2(0.5, 0), Vec2(0.97, 0)}) {
      for (double t : {0.02, 0.05, 0.1}) {
        const auto est = ball_volume(disk, xi, t);
        const double scale =
            t * t * (t + std::sqrt(disk.boundary_distance(xi)));
        CHECK(est.volume / scale >= 0.1);
        CHECK(est.volume / scale <= 12.0);
      }
    }
  }
}

TEST_CASE("varphi weight") {
  const DomainC2 disk = DomainC2::disk();
  CHECK(varphi_n_gamma(disk, Vec2(0, 0), 10) == doctest::Approx(1.1).epsilon(1e-9));
  CHECK(varphi_n_gamma(disk, Vec2(0, 1.0 - 1e-14), 10) ==
        doctest::Approx(0.1).epsilon(1e-6));
  CHECK(varphi_n_gamma(disk, Vec2(0.3, 0.3), 8) >
        varphi_n_gamma(disk, Vec2(0.3, 0.3), 16));
}

TEST_CASE("metric equivalence of rho_hat and rho on a cover chart") {
  const DomainC2 disk = DomainC2::disk();
  const auto cover = cover_by_special_domains(disk, 0.1);
  const auto& g = *cover[0];
  Rng rng(23);
  double lo = kInf, hi = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double x1 = rng.uniform(-g.b(), g.b());
    const double y1 = rng.uniform(g.g(x1) - g.depth() + 1e-9, g.g(x1) - 1e-12);
    const double x2 = rng.uniform(-g.b(), g.b());
    const double y2 = rng.uniform(g.g(x2) - g.depth() + 1e-9, g.g(x2) - 1e-12);
    const Vec2 w1 = g.to_world(Vec2(x1, y1));
    const Vec2 w2 = g.to_world(Vec2(x2, y2));
    if ((w1 - w2).norm() < 1e-12) continue;
    const double r1 = g.rho_hat(w1, w2);
    const double r2 = metric_rho(disk, w1, w2);
    lo = std::min(lo, r1 / r2);
    hi = std::max(hi, r1 / r2);
  }
  CHECK(hi / lo <= 25.0);  // single equivalence constant across the pairs
  CHECK(lo > 0.0);
}

TEST_CASE("domain spec files") {
  {
    std::ofstream out("/tmp/dom_disk.txt");
    out << "catalog = disk\n";
  }
  const DomainC2 d = load_domain_spec("/tmp/dom_disk.txt");
  CHECK(d.name() == "disk");
  {
    std::ofstream out("/tmp/dom_star.txt");
    out << "radial_cos = 1.0 0 0 0.2\n";
  }
  const DomainC2 s = load_domain_spec("/tmp/dom_star.txt");
  CHECK(s.inside(Vec2(1.1, 0)));
  {
    std::ofstream out("/tmp/dom_special.txt");
    out << "special_axis = 2\nspecial_b = 0.5\nspecial_L = 2.2\n"
        << "special_g_poly = 5.0 0 0.125\n";
  }
  const DomainC2 g = load_domain_spec("/tmp/dom_special.txt");
  CHECK(g.kind() == DomainC2::Kind::graph_special);
  CHECK(g.inside(g.special()->to_world(Vec2(0.2, 4.9))));
}
