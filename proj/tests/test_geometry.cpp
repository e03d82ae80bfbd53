#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hgt/geometry.hpp"

#include <cmath>

using namespace hgt;

namespace {

Vec random_alg(const LieGroupModel& g, Rng& rng, double amp = 1.0) {
  RVec c(g.dim());
  for (int i = 0; i < g.dim(); ++i) c[i] = urand(rng, -amp, amp);
  return flat(g.algv(c));
}

}  // namespace

TEST_CASE("group axioms hold to machine precision on sampled elements") {
  Rng rng(11);
  for (const LieGroupModel& g :
       {su2_model(), sl2c_model(), u1_model(), cstar_model(),
        additive_model(3), direct_product_model(su2_model(), su2_model())}) {
    CAPTURE(g.name);
    for (int s = 0; s < 25; ++s) {
      Vec a = g.sampler(rng), b = g.sampler(rng), c = g.sampler(rng);
      CHECK(g.member(a, 1e-9));
      CHECK((g.mul(g.mul(a, b), c) - g.mul(a, g.mul(b, c))).norm() < 1e-12);
      CHECK((g.mul(a, g.inv(a)) - g.id()).norm() < 1e-12);
      CHECK((g.mul(g.id(), a) - a).norm() < 1e-13);
    }
    CHECK((g.expv(RVec::Zero(g.dim())) - g.id()).norm() == 0.0);
  }
}

TEST_CASE("bracket is antisymmetric and satisfies Jacobi on basis triples") {
  for (const LieGroupModel& g : {su2_model(), sl2c_model(), additive_model(2)}) {
    CAPTURE(g.name);
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        Vec bi = flat(g.alg[i]), bj = flat(g.alg[j]);
        CHECK((g.bracket(bi, bj) + g.bracket(bj, bi)).norm() < 1e-14);
        for (int k = 0; k < g.dim(); ++k) {
          Vec bk = flat(g.alg[k]);
          Vec jac = g.bracket(bi, g.bracket(bj, bk)) +
                    g.bracket(bj, g.bracket(bk, bi)) +
                    g.bracket(bk, g.bracket(bi, bj));
          CHECK(jac.norm() < 1e-13);
        }
      }
  }
}

TEST_CASE("Ad is a bracket homomorphism and matches its generator") {
  Rng rng(5);
  LieGroupModel g = sl2c_model();
  for (int s = 0; s < 30; ++s) {
    Vec gg = g.sampler(rng);
    Vec u = random_alg(g, rng), v = random_alg(g, rng);
    Vec lhs = g.Ad(gg, g.bracket(u, v));
    Vec rhs = g.bracket(g.Ad(gg, u), g.Ad(gg, v));
    CHECK((lhs - rhs).norm() < 1e-10);
  }
  // d/dt Ad(exp(tu)) v = [u, v] at t = 0.
  for (int s = 0; s < 10; ++s) {
    Vec u = random_alg(g, rng), v = random_alg(g, rng);
    Vec num = fd_deriv([&](double t) {
      return g.Ad(g.expm(unflat(u, g.n) * t), v);
    });
    CHECK((num - g.bracket(u, v)).norm() < 1e-5);
  }
}

TEST_CASE("exp charts are consistent with their exact pushforwards") {
  Rng rng(7);
  for (const LieGroupModel& g : {su2_model(), cstar_model()}) {
    CAPTURE(g.name);
    Vec g0 = g.sampler(rng);
    Chart c = g.chart(g0);
    RVec u(c.dim), w(c.dim);
    for (int i = 0; i < c.dim; ++i) {
      u[i] = urand(rng, -0.2, 0.2);
      w[i] = urand(rng, -1.0, 1.0);
    }
    CHECK((c.point(RVec::Zero(c.dim)) - g0).norm() < 1e-14);
    // push against a central difference of the chart map itself
    Vec fd = fd_deriv([&](double t) { return c.point(u + t * w); });
    CHECK((c.push(u, w) - fd).norm() < 1e-9);
    // chart points stay in the group
    CHECK(g.member(c.point(u), 1e-9));
  }
}

TEST_CASE("chart_coords inverts the chart frame exactly for true tangents") {
  Rng rng(13);
  LieGroupModel g = su2_model();
  ChartedSpace s = g.space();
  Vec p = s.sample(rng);
  Chart c = s.chart_at(p);
  RVec w(3);
  w << 0.3, -1.2, 0.7;
  Vec v = c.push(RVec::Zero(3), w);
  RVec back = chart_coords(c, v);
  CHECK((back - w).norm() < 1e-12);
}

TEST_CASE("products concatenate blocks and keep samplers inside members") {
  Rng rng(3);
  ChartedSpace s2 = power(su2_model().space(), 2);
  CHECK(s2.dim == 6);
  CHECK(s2.amb == 8);
  Vec p = s2.sample(rng);
  CHECK(s2.member(p));
  Vec p1 = slot(p, 0, 4), p2 = slot(p, 1, 4);
  CHECK(su2_model().member(p1, 1e-9));
  CHECK(su2_model().member(p2, 1e-9));
}

TEST_CASE("smooth map tangents are linear and match the numeric fallback") {
  Rng rng(17);
  LieGroupModel g = su2_model();
  auto gs = sp(g.space());
  // squaring map with exact tangent
  SmoothMap sq;
  sq.src = gs;
  sq.dst = gs;
  sq.fwd = [g](const Vec& p) { return g.mul(p, p); };
  sq.tan = [g](const Vec& p, const Vec& v) {
    return Vec(g.rmul_tan(v, p) + g.lmul_tan(p, v));
  };
  SmoothMap numeric = sq;
  numeric.tan = nullptr;
  for (int s = 0; s < 20; ++s) {
    Vec p = gs->sample(rng);
    Vec v = gs->random_tangent(p, rng);
    Vec w = gs->random_tangent(p, rng);
    Vec lin = sq.push(p, v + w) - sq.push(p, v) - sq.push(p, w);
    CHECK(lin.norm() < 1e-12);
    CHECK((sq.push(p, v) - numeric.push(p, v)).norm() < 1e-8);
  }
}

TEST_CASE("inverse map tangent matches finite differences") {
  Rng rng(23);
  LieGroupModel g = sl2c_model();
  for (int s = 0; s < 10; ++s) {
    Vec p = g.sampler(rng);
    Chart c = g.chart(p);
    RVec w(c.dim);
    for (int i = 0; i < c.dim; ++i) w[i] = urand(rng, -1, 1);
    Vec v = c.push(RVec::Zero(c.dim), w);
    Vec fd = fd_deriv([&](double t) { return g.inv(c.point(t * w)); });
    CHECK((g.inv_tan(p, v) - fd).norm() < 1e-8);
  }
}

TEST_CASE("additive model is literal addition in coordinates") {
  Rng rng(29);
  LieGroupModel g = additive_model(3);
  Vec a = g.sampler(rng), b = g.sampler(rng);
  RVec xa = additive_coords(g, a), xb = additive_coords(g, b);
  CHECK((additive_coords(g, g.mul(a, b)) - (xa + xb)).norm() < 1e-14);
  CHECK((additive_coords(g, g.inv(a)) + xa).norm() < 1e-14);
  CHECK((additive_point(g, xa) - a).norm() < 1e-14);
}

TEST_CASE("unipotent model closes under products and nilpotent exp is exact") {
  Rng rng(37);
  LieGroupModel g = unipotent_model(3);
  REQUIRE(g.dim() == 3);
  for (int s = 0; s < 10; ++s) {
    Vec a = g.sampler(rng), b = g.sampler(rng);
    CHECK(g.member(g.mul(a, b), 1e-10));
    CHECK(g.member(g.inv(a), 1e-10));
    CHECK((g.mul(a, g.inv(a)) - g.id()).norm() < 1e-12);
  }
  // Heisenberg commutator: [E01, E12] = E02, and exp of the basis is I + E.
  Vec e01 = flat(g.alg[0]), e12 = flat(g.alg[2]);
  CHECK((g.bracket(e01, e12) - flat(g.alg[1])).norm() == 0.0);
  RVec c = RVec::Zero(3);
  c[1] = 0.7;
  CHECK((g.expv(c) - (g.id() + 0.7 * flat(g.alg[1]))).norm() < 1e-14);
}

TEST_CASE("complex model J squares to minus one on tangents") {
  Rng rng(31);
  auto gs = sp(sl2c_model().space());
  REQUIRE(static_cast<bool>(gs->J));
  Vec p = gs->sample(rng);
  Vec v = gs->random_tangent(p, rng);
  CHECK((gs->J(p, gs->J(p, v)) + v).norm() == 0.0);
}
