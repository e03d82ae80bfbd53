#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hgt/forms.hpp"

#include <cmath>
#include <stdexcept>

using namespace hgt;

namespace {

Vec alg_vec(const LieGroupModel& g, Rng& rng, double amp = 1.0) {
  RVec c(g.dim());
  for (int i = 0; i < g.dim(); ++i) c[i] = urand(rng, -amp, amp);
  return flat(g.algv(c));
}

// Killing pairing of su(2): <u,v> = 4 tr(uv), negative definite.
Pairing killing_su2() { return trace_pairing(4.0, 2, scalar_real()); }

// Coordinate 1-forms on complex affine space.
VForm dz(SpacePtr cs, int j) {
  VForm f;
  f.base = cs;
  f.deg = 1;
  f.V = scalar_complex();
  f.eval = [j](const Vec&, const std::vector<Vec>& vs) {
    Vec r(1);
    r[0] = vs[0][j];
    return r;
  };
  return f;
}

VForm dzbar(SpacePtr cs, int j) {
  VForm f;
  f.base = cs;
  f.deg = 1;
  f.V = scalar_complex();
  f.eval = [j](const Vec&, const std::vector<Vec>& vs) {
    Vec r(1);
    r[0] = std::conj(vs[0][j]);
    return r;
  };
  return f;
}

VForm scalar_fn(SpacePtr base, std::function<cplx(const Vec&)> fn) {
  VForm f;
  f.base = base;
  f.deg = 0;
  f.V = scalar_complex();
  f.eval = [fn](const Vec& p, const std::vector<Vec>&) {
    Vec r(1);
    r[0] = fn(p);
    return r;
  };
  return f;
}

double residual(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("left Maurer-Cartan form translates exactly") {
  LieGroupModel g = su2_model();
  auto gs = sp(g.space());
  VForm th = maurer_cartan_left(g, gs);
  // at the identity a basis vector comes back unchanged
  Vec e1 = flat(g.alg[0]);
  CHECK(residual(th(g.id(), {e1}) - e1) == 0.0);
  // at g = diag(i,-i), v = g.u pulls back to u
  Mat gm(2, 2);
  gm << kI, 0, 0, -kI;
  Vec gg = flat(gm);
  Vec u = flat(g.algv((RVec(3) << 0.4, -0.3, 1.1).finished()));
  CHECK(residual(th(gg, {g.lmul_tan(gg, u)}) - u) < 1e-14);
  // outside the group the form refuses to evaluate
  Vec bad = 2.0 * gg;
  CHECK_THROWS_AS(th(bad, {u}), std::domain_error);
}

TEST_CASE("Maurer-Cartan equation holds numerically on SL(2,C)") {
  Rng rng(101);
  LieGroupModel g = sl2c_model();
  auto gs = sp(g.space());
  VForm th = maurer_cartan_left(g, gs);
  VForm dth = d_form(th);
  VForm br = wedge_bracket(th, th, g);  // [th^th](u,v) = 2[th u, th v]
  double worst = 0;
  for (int s = 0; s < 100; ++s) {
    Vec p = gs->sample(rng);
    Vec v = gs->random_tangent(p, rng);
    Vec w = gs->random_tangent(p, rng);
    Vec res = dth(p, {v, w}) + 0.5 * br(p, {v, w});
    worst = std::max(worst, residual(res));
  }
  CHECK(worst < 1e-5);
  // right-invariant flavor satisfies the opposite-sign equation
  VForm thr = maurer_cartan_right(g, gs);
  VForm dthr = d_form(thr);
  VForm brr = wedge_bracket(thr, thr, g);
  Vec p = gs->sample(rng);
  Vec v = gs->random_tangent(p, rng);
  Vec w = gs->random_tangent(p, rng);
  CHECK(residual(dthr(p, {v, w}) - 0.5 * brr(p, {v, w})) < 1e-5);
}

TEST_CASE("Ad invariance: Killing passes, a perturbed form fails") {
  Rng rng(7);
  LieGroupModel g = su2_model();
  CHECK(ad_invariance_residual(g, killing_su2(), rng, 40) < 1e-10);

  Pairing bad = killing_su2();
  auto base = bad.eval;
  bad.eval = [base](const Vec& u, const Vec& v) {
    Vec r = base(u, v);
    r[0] += 0.3 * u[1].real() * v[1].real();
    return r;
  };
  CHECK(ad_invariance_residual(g, bad, rng, 40) > 1e-3);
}

TEST_CASE("diagonal pairing on su(2)+su(2) is Ad invariant") {
  Rng rng(19);
  LieGroupModel gg = direct_product_model(su2_model(), su2_model());
  const double d = 2.0;
  Pairing diag;
  diag.out = scalar_real();
  diag.eval = [d](const Vec& u, const Vec& v) {
    Mat um = unflat(u, 4), vm = unflat(v, 4);
    cplx a = (um.topLeftCorner(2, 2) * vm.topLeftCorner(2, 2)).trace();
    cplx b = (um.bottomRightCorner(2, 2) * vm.bottomRightCorner(2, 2)).trace();
    Vec r(1);
    r[0] = 0.5 * a - 0.5 * d * b;  // Killing/8 and -d Killing/8, Killing = 4tr
    return r;
  };
  CHECK(ad_invariance_residual(gg, diag, rng, 40) < 1e-10);
}

TEST_CASE("exterior derivative is exact on polynomial data") {
  LieGroupModel r2 = additive_model(2);
  auto s = sp(r2.space());
  // alpha = x dy
  VForm alpha;
  alpha.base = s;
  alpha.deg = 1;
  alpha.V = scalar_real();
  alpha.eval = [r2](const Vec& p, const std::vector<Vec>& vs) {
    double x = additive_coords(r2, p)[0];
    double vy = unflat(vs[0], 3)(0, 2).real();
    Vec r(1);
    r[0] = x * vy;
    return r;
  };
  VForm da = d_form(alpha);
  Rng rng(3);
  Vec p = s->sample(rng);
  Vec ex = r2.lmul_tan(p, flat(r2.alg[0]));  // d/dx at p
  Vec ey = r2.lmul_tan(p, flat(r2.alg[1]));
  CHECK(std::abs(da(p, {ex, ey})[0].real() - 1.0) < 1e-8);
  CHECK(std::abs(da(p, {ey, ex})[0].real() + 1.0) < 1e-8);
}

TEST_CASE("d of d vanishes within the two-difference tolerance") {
  Rng rng(5);
  LieGroupModel g = su2_model();
  auto gs = sp(g.space());
  VForm f = scalar_fn(gs, [](const Vec& p) {
    Mat m = unflat(p, 2);
    return m(0, 0) * std::conj(m(1, 1)) + 0.3 * m(0, 1);
  });
  VForm ddf = d_form(d_form(f));
  double worst = 0;
  for (int s = 0; s < 20; ++s) {
    Vec p = gs->sample(rng);
    Vec v = gs->random_tangent(p, rng);
    Vec w = gs->random_tangent(p, rng);
    worst = std::max(worst, residual(ddf(p, {v, w})));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("forms are alternating and multilinear at sampled points") {
  Rng rng(23);
  LieGroupModel g = sl2c_model();
  auto gs = sp(g.space());
  VForm th = maurer_cartan_left(g, gs);
  VForm om = wedge_pair(th, th, trace_pairing(1.0, 2, scalar_complex()));
  for (int s = 0; s < 10; ++s) {
    Vec p = gs->sample(rng);
    Vec v = gs->random_tangent(p, rng);
    Vec w = gs->random_tangent(p, rng);
    CHECK(residual(om(p, {v, w}) + om(p, {w, v})) < 1e-10);
    cplx a(0.7, -0.2);
    // real-linear in each slot; complex scaling via separate re/im parts
    Vec lin = om(p, {Vec(0.7 * v + 1.3 * w), w}) - 0.7 * om(p, {v, w}) -
              1.3 * om(p, {w, w});
    CHECK(residual(lin) < 1e-10);
    (void)a;
  }
}

TEST_CASE("wedge with symmetric pairing kills an abelian square") {
  Rng rng(11);
  LieGroupModel t = cstar_model();
  auto ts = sp(t.space());
  VForm th = maurer_cartan_left(t, ts);
  VForm sq = wedge_pair(th, th, scalar_pairing());
  Vec p = ts->sample(rng);
  Vec v = ts->random_tangent(p, rng);
  Vec w = ts->random_tangent(p, rng);
  CHECK(residual(sq(p, {v, w})) == 0.0);
}

TEST_CASE("canonical 3-form on SU(2) reduces to the pairing with a bracket") {
  LieGroupModel g = su2_model();
  auto gs = sp(g.space());
  VForm th = maurer_cartan_left(g, gs);
  VForm mu = scale(1.0 / 6.0,
                   wedge_pair(th, wedge_bracket(th, th, g), killing_su2()));
  Vec e1 = flat(g.alg[0]), e2 = flat(g.alg[1]), e3 = flat(g.alg[2]);
  // <e1,[e2,e3]> = <e1,e1> = 4 tr(e1 e1) = -2
  CHECK(std::abs(mu(g.id(), {e1, e2, e3})[0].real() + 2.0) < 1e-12);
  // total antisymmetry at the identity
  CHECK(std::abs(mu(g.id(), {e2, e1, e3})[0].real() - 2.0) < 1e-12);
}

TEST_CASE("pullback is the chain rule and commutes with d") {
  LieGroupModel r1 = additive_model(1);
  LieGroupModel r2 = additive_model(2);
  auto s1 = sp(r1.space());
  auto s2 = sp(r2.space());
  SmoothMap par;  // x -> (x, x^2)
  par.src = s1;
  par.dst = s2;
  par.fwd = [r1, r2](const Vec& p) {
    double x = additive_coords(r1, p)[0];
    return additive_point(r2, (RVec(2) << x, x * x).finished());
  };
  VForm dy;
  dy.base = s2;
  dy.deg = 1;
  dy.V = scalar_real();
  dy.eval = [](const Vec&, const std::vector<Vec>& vs) {
    Vec r(1);
    r[0] = unflat(vs[0], 3)(0, 2);
    return r;
  };
  VForm pb = pullback(par, dy);
  Rng rng(2);
  Vec p = s1->sample(rng);
  double x = additive_coords(r1, p)[0];
  Vec ex = r1.lmul_tan(p, flat(r1.alg[0]));
  CHECK(std::abs(pb(p, {ex})[0].real() - 2.0 * x) < 1e-8);

  // d(F* a) = F*(d a) for a = x dy on the same map
  VForm a;
  a.base = s2;
  a.deg = 1;
  a.V = scalar_real();
  a.eval = [r2](const Vec& q, const std::vector<Vec>& vs) {
    Vec r(1);
    r[0] = additive_coords(r2, q)[0] * unflat(vs[0], 3)(0, 2);
    return r;
  };
  VForm lhs = d_form(pullback(par, a));
  VForm rhs = pullback(par, d_form(a));
  // both are 2-forms on a 1-dimensional space: zero
  Vec v = s1->random_tangent(p, rng);
  Vec w = s1->random_tangent(p, rng);
  CHECK(residual(lhs(p, {v, w}) - rhs(p, {v, w})) < 1e-4);
}

TEST_CASE("type components partition a form and respect bidegrees") {
  Rng rng(31);
  auto cs = sp(complex_affine_space(2));
  VForm om = wedge_scalar(dz(cs, 0), dzbar(cs, 1));  // a (1,1)-form
  VForm sum = add(add(type_component(om, 2, 0), type_component(om, 1, 1)),
                  type_component(om, 0, 2));
  for (int s = 0; s < 10; ++s) {
    Vec p = cs->sample(rng);
    Vec v = cs->random_tangent(p, rng);
    Vec w = cs->random_tangent(p, rng);
    CHECK(residual(sum(p, {v, w}) - om(p, {v, w})) < 1e-12);
    CHECK(residual(type_component(om, 2, 0)(p, {v, w})) < 1e-12);
    CHECK(residual(type_component(om, 0, 2)(p, {v, w})) < 1e-12);
    CHECK(residual(type_component(om, 1, 1)(p, {v, w}) - om(p, {v, w})) <
          1e-12);
  }
}

TEST_CASE("dc matches both its J-pullback and type-split descriptions") {
  auto cs = sp(complex_affine_space(1));
  VForm f = scalar_fn(cs, [](const Vec& p) { return std::norm(p[0]); });
  VForm dcf = dc_form(f);
  // hand values at z = 1: dc f (1) = 0, dc f (i) = 2
  Vec one(1), vi(1), p(1);
  one[0] = 1.0;
  vi[0] = kI;
  p[0] = 1.0;
  CHECK(std::abs(dcf(p, {one})[0]) < 1e-10);
  CHECK(std::abs(dcf(p, {vi})[0] - 2.0) < 1e-10);

  // i (dbar - d) on functions, via type components of df
  VForm df = d_form(f);
  VForm split = scale(kI, sub(type_component(df, 0, 1), type_component(df, 1, 0)));
  Rng rng(41);
  for (int s = 0; s < 10; ++s) {
    Vec q = cs->sample(rng);
    Vec v = cs->random_tangent(q, rng);
    CHECK(std::abs(dcf(q, {v})[0] - split(q, {v})[0]) < 1e-9);
  }
}

TEST_CASE("dc on a (1,1)-form agrees with the degreewise type-split") {
  Rng rng(43);
  auto cs = sp(complex_affine_space(2));
  VForm om = scale(kI, wedge_scalar(scale(1.0, dz(cs, 0)), dzbar(cs, 0)));
  // multiply by a smooth real factor to get a nonconstant (1,1)-form
  VForm f = scalar_fn(cs, [](const Vec& p) { return std::norm(p[1]) + 1.0; });
  VForm fom = wedge(f, om, scalar_complex(), [](const Vec& x, const Vec& y) {
    Vec r(1);
    r[0] = x[0] * y[0];
    return r;
  });
  VForm lhs = dc_form(fom);
  VForm dfom = d_form(fom);
  VForm rhs = scale(kI, sub(type_component(dfom, 1, 2), type_component(dfom, 2, 1)));
  for (int s = 0; s < 6; ++s) {
    Vec p = cs->sample(rng);
    Vec u = cs->random_tangent(p, rng);
    Vec v = cs->random_tangent(p, rng);
    Vec w = cs->random_tangent(p, rng);
    CHECK(residual(lhs(p, {u, v, w}) - rhs(p, {u, v, w})) < 1e-8);
  }
}

TEST_CASE("symmetric tensors polarize pairings of one-forms") {
  Rng rng(53);
  LieGroupModel g = su2_model();
  auto gs = sp(g.space());
  VForm th = maurer_cartan_left(g, gs);
  SymTensor h = sym_wedge(th, th, killing_su2());
  Vec p = gs->sample(rng);
  Vec v = gs->random_tangent(p, rng);
  Vec w = gs->random_tangent(p, rng);
  CHECK(residual(h.eval(p, v, w) - h.eval(p, w, v)) < 1e-12);
  // -1/2 <th . th> (v, v) = -<g^-1 v, g^-1 v> is positive for su(2)
  Vec hv = h.eval(p, v, v);
  CHECK((-0.5 * hv[0]).real() > 0.0);
}

TEST_CASE("a mixed tensor splits into alternating and symmetric halves") {
  Rng rng(59);
  LieGroupModel g = su2_model();
  auto gs = sp(g.space());
  VForm th = maurer_cartan_left(g, gs);
  VForm two = wedge_pair(th, th, trace_pairing(2.0, 2, scalar_complex()));
  SymTensor sym = sym_wedge(th, th, killing_su2());
  TwoTensor mixed = combine(two, sym);
  VForm backalt = alt_part(mixed);
  SymTensor backsym = sym_part(mixed);
  Vec p = gs->sample(rng);
  Vec v = gs->random_tangent(p, rng);
  Vec w = gs->random_tangent(p, rng);
  CHECK(residual(backalt(p, {v, w}) - two(p, {v, w})) < 1e-12);
  CHECK(residual(backsym.eval(p, v, w) - sym.eval(p, v, w)) < 1e-12);
}

TEST_CASE("Gauss-Legendre integrates polynomials and group periods") {
  RVec x, w;
  gauss_legendre(8, x, w);
  double s4 = 0;
  for (int i = 0; i < 8; ++i) s4 += w[i] * std::pow(x[i], 4);
  CHECK(std::abs(s4 - 2.0 / 5.0) < 1e-13);

  // period of dlog z around the unit circle
  LieGroupModel t = cstar_model();
  auto ts = sp(t.space());
  VForm th = maurer_cartan_left(t, ts);
  Cycle circle;
  circle.name = "unit circle";
  circle.space = ts;
  circle.dim = 1;
  circle.lo = (RVec(1) << 0.0).finished();
  circle.hi = (RVec(1) << 2.0 * kPi).finished();
  circle.point = [](const RVec& u) {
    Vec p(1);
    p[0] = std::exp(kI * u[0]);
    return p;
  };
  circle.push = [](const RVec& u, const RVec& c) {
    Vec v(1);
    v[0] = kI * std::exp(kI * u[0]) * c[0];
    return v;
  };
  cplx period = integrate_form(th, circle, 24);
  CHECK(std::abs(period - 2.0 * kPi * kI) < 1e-10);
}
