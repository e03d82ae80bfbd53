#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hgt/multgerbe.hpp"

using namespace hgt;

namespace {

Vec c1(cplx z) {
  Vec v(1);
  v[0] = z;
  return v;
}

double mx(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

const Report& pick(const std::vector<Report>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.identity == id) return r;
  throw std::runtime_error("missing report " + id);
}

int fails(const std::vector<Report>& rs) {
  int k = 0;
  for (const auto& r : rs)
    if (!r.pass) ++k;
  return k;
}

PointMap const_map(const Vec& v) {
  return [v](const Vec&) { return v; };
}

// Line group with a u(1) pairing seeded through a global level-two
// potential M = -i x1 dx2.  Four duplicate charts at level one, three at
// level two and two at level three share the same data bitwise, so index
// bookkeeping is exercised while residuals stay at exact zero.
MultGerbeData seeded_line(double drift = 0.0) {
  LieGroupModel G = additive_model(1, "line");
  LieGroupModel T = u1_model();

  SimplicialCover cov;
  cov.nerve = group_nerve(G, 4);
  cov.cover.resize(5);
  cov.dmap.resize(5);
  cov.cover[0] = one_chart_cover(cov.nerve.level[0], "pt");
  auto dup = [&](int n, int k) {
    IndexedCover c;
    c.base = cov.nerve.level[n];
    for (int i = 0; i < k; ++i) {
      c.names.push_back(std::string(1, char('a' + i)));
      c.member.push_back([](const Vec&) { return true; });
    }
    return c;
  };
  cov.cover[1] = dup(1, 4);
  cov.cover[2] = dup(2, 3);
  cov.cover[3] = dup(3, 2);
  cov.cover[4] = dup(4, 1);
  cov.dmap[1].assign(2, std::vector<int>(4, 0));
  cov.dmap[2].assign(3, std::vector<int>(3, 0));
  for (int j = 0; j <= 2; ++j)
    for (int c = 0; c < 3; ++c) cov.dmap[2][j][c] = (c + j) % 4;
  cov.dmap[3].assign(4, std::vector<int>(2, 0));
  for (int j = 0; j <= 3; ++j)
    for (int c = 0; c < 2; ++c) cov.dmap[3][j][c] = (c * j) % 3;
  cov.dmap[4].assign(5, std::vector<int>(1, 0));

  MultGerbeData g;
  g.cover = cov;
  g.G = G;
  g.T = T;
  g.t = algebra_space(T);
  Vec one = c1(1.0);
  g.lambda = [one](int, int, int) { return const_map(one); };
  g.m = [one](int, int) { return const_map(one); };
  g.alpha = [one](int) { return const_map(one); };
  g.has_conn = true;
  SpacePtr l1 = cov.nerve.level[1];
  VSpace t = g.t;
  g.A = [l1, t](int, int) { return zero_form(l1, 1, t); };

  VForm M;
  M.base = cov.nerve.level[2];
  M.deg = 1;
  M.V = t;
  int m = G.amb();
  auto co = [G, m](const Vec& p, int i) {
    return additive_coords(G, slot(p, i, m))[0];
  };
  double eps = drift;
  M.eval = [co, eps](const Vec& p, const std::vector<Vec>& vs) {
    double x1 = co(p, 0);
    double w2 = co(vs[0], 1);
    return c1((-kI + 0.5 * eps * x1) * (x1 * w2));
  };
  M.dexact = [co, eps](const Vec& p, const std::vector<Vec>& vs) {
    double x1 = co(p, 0);
    double u1 = co(vs[0], 0), u2 = co(vs[0], 1);
    double v1 = co(vs[1], 0), v2 = co(vs[1], 1);
    return c1((-kI + eps * x1) * (u1 * v2 - v1 * u2));
  };
  g.M = [M](int) { return M; };
  return g;
}

MultGerbeData one_chart_trivial(const LieGroupModel& G, int depth) {
  MultGerbeData g;
  g.cover = one_chart_simplicial_cover(G, depth);
  g.G = G;
  g.T = u1_model();
  g.t = algebra_space(g.T);
  Vec one = c1(1.0);
  g.lambda = [one](int, int, int) { return const_map(one); };
  g.m = [one](int, int) { return const_map(one); };
  g.alpha = [one](int) { return const_map(one); };
  return g;
}

}  // namespace

TEST_CASE("simplicial covers report face compatibility and alternating accessors follow parity") {
  LieGroupModel G = su2_model();
  SimplicialCover cov = one_chart_simplicial_cover(G, 4);
  CHECK_EQ(cov.depth(), 4);
  Rng rng(5);
  CHECK_EQ(cover_compat_residual(cov, rng, 6), 0.0);

  MultGerbeData seeded = seeded_line();
  Rng rng2(6);
  CHECK_EQ(cover_compat_residual(seeded.cover, rng2, 10), 0.0);

  LieGroupModel T = u1_model();
  auto f2 = [](int i, int j) {
    return const_map(c1(std::exp(kI * (0.1 + 0.3 * i + 0.7 * j))));
  };
  auto f3 = [](int i, int j, int k) {
    return const_map(c1(std::exp(kI * (0.2 + 0.3 * i + 0.7 * j + 1.1 * k))));
  };
  Vec p = G.id();
  cplx f01 = f2(0, 1)(p)[0];
  CHECK_LT(std::abs(alt_map2(f2, 1, 0, T)(p)[0] * f01 - 1.0), 1e-14);
  CHECK_LT(std::abs(alt_map2(f2, 1, 1, T)(p)[0] - 1.0), 1e-15);
  cplx f012 = f3(0, 1, 2)(p)[0];
  CHECK_LT(std::abs(alt_map3(f3, 2, 0, 1, T)(p)[0] - f012), 1e-15);
  CHECK_LT(std::abs(alt_map3(f3, 1, 0, 2, T)(p)[0] * f012 - 1.0), 1e-14);
  CHECK_LT(std::abs(alt_map3(f3, 1, 1, 2, T)(p)[0] - 1.0), 1e-15);

  LieGroupModel L = additive_model(1, "line");
  SpacePtr base = std::make_shared<const ChartedSpace>(L.space());
  VSpace V = algebra_space(u1_model());
  auto fab = [&L, V, base](int a, int b) {
    VForm w;
    w.base = base;
    w.deg = 1;
    w.V = V;
    double c = 0.5 + a + 2.0 * b;
    LieGroupModel Lc = L;
    w.eval = [c, Lc](const Vec&, const std::vector<Vec>& vs) {
      return c1(c * additive_coords(Lc, vs[0])[0]);
    };
    return w;
  };
  Rng rng3(7);
  Vec q = base->sample(rng3);
  Vec u = base->random_tangent(q, rng3);
  Vec w02 = fab(0, 2).eval(q, {u});
  CHECK_LT(mx(alt_form2(fab, 2, 0, base, 1, V).eval(q, {u}) + w02), 1e-14);
  CHECK_EQ(mx(alt_form2(fab, 1, 1, base, 1, V).eval(q, {u})), 0.0);

  MultGerbeData shallow = one_chart_trivial(G, 3);
  CHECK_THROWS_AS(mult_checks(shallow), std::invalid_argument);
}

TEST_CASE("constant transition data passes every multiplicative law exactly") {
  MultGerbeData g = one_chart_trivial(su2_model(), 4);
  auto rs = check_mult(g, 25, 2);
  CHECK_EQ(rs.size(), 4);
  for (const auto& r : rs) {
    CHECK(r.pass);
    CHECK_EQ(r.max_residual, 0.0);
  }
  CHECK_FALSE(pick(rs, "mult.pentagon").vacuous);
  CHECK(pick(rs, "mult.lambda.cocycle").vacuous);
  CHECK(pick(rs, "mult.m.cocycle").vacuous);
  CHECK(pick(rs, "mult.alpha.cocycle").vacuous);
}

TEST_CASE("a seeded line pairing satisfies all laws and extraction recovers it") {
  MultGerbeData g = seeded_line();
  auto rs = check_mult(g, 40, 7);
  CHECK_EQ(rs.size(), 7);
  for (const auto& r : rs) {
    CHECK(r.pass);
    CHECK_FALSE(r.vacuous);
  }
  CHECK_EQ(pick(rs, "mult.lambda.cocycle").max_residual, 0.0);
  CHECK_EQ(pick(rs, "mult.m.cocycle").max_residual, 0.0);
  CHECK_EQ(pick(rs, "mult.alpha.cocycle").max_residual, 0.0);
  CHECK_EQ(pick(rs, "mult.pentagon").max_residual, 0.0);
  CHECK_EQ(pick(rs, "mult.conn.lambda").max_residual, 0.0);
  CHECK_EQ(pick(rs, "mult.conn.m").max_residual, 0.0);
  CHECK_LT(pick(rs, "mult.conn.alpha").max_residual, 1e-12);

  PairingData pd = extract_pairing(g);
  REQUIRE_EQ(pd.table.size(), 1);
  CHECK_LT(mx(pd.table[0][0] - c1(kI)), 1e-12);

  auto rp = check_pairing(pd, 40, 3);
  CHECK_EQ(rp.size(), 5);
  for (const auto& r : rp) CHECK(r.pass);

  auto rc = check_curving(g, pd, 40, 5);
  CHECK_EQ(rc.size(), 5);
  for (const auto& r : rc) {
    CHECK(r.pass);
    CHECK_FALSE(r.vacuous);
  }
  CHECK_EQ(pick(rc, "mult.pairing.basepoint").max_residual, 0.0);
  CHECK_EQ(pick(rc, "mult.curving.cochain").max_residual, 0.0);
  CHECK_EQ(pick(rc, "mult.curving.curvature").max_residual, 0.0);
  CHECK_LT(pick(rc, "mult.curving.sym").max_residual, 1e-12);
  CHECK_LT(pick(rc, "mult.curving.product").max_residual, 1e-12);
}

TEST_CASE("a drifting potential trips extraction consistency but not the cocycle laws") {
  MultGerbeData g = seeded_line(1e-3);
  auto rs = check_mult(g, 40, 7);
  CHECK_EQ(fails(rs), 1);
  CHECK_FALSE(pick(rs, "mult.conn.alpha").pass);
  CHECK(pick(rs, "mult.lambda.cocycle").pass);
  CHECK(pick(rs, "mult.m.cocycle").pass);
  CHECK(pick(rs, "mult.alpha.cocycle").pass);
  CHECK(pick(rs, "mult.pentagon").pass);
  CHECK(pick(rs, "mult.conn.lambda").pass);
  CHECK(pick(rs, "mult.conn.m").pass);

  PairingData pd = extract_pairing(g);
  CHECK_LT(mx(pd.table[0][0] - c1(kI)), 1e-12);
  auto rp = check_pairing(pd, 30, 9);
  for (const auto& r : rp) CHECK(r.pass);

  auto rc = check_curving(g, pd, 40, 5);
  CHECK_EQ(fails(rc), 3);
  CHECK_FALSE(pick(rc, "mult.pairing.basepoint").pass);
  CHECK_FALSE(pick(rc, "mult.curving.sym").pass);
  CHECK_FALSE(pick(rc, "mult.curving.product").pass);
  CHECK(pick(rc, "mult.curving.cochain").pass);
  CHECK(pick(rc, "mult.curving.curvature").pass);
}

TEST_CASE("a constant associator twist fails the associator law alone") {
  MultGerbeData g = seeded_line();
  cplx tw = std::exp(cplx(0.0, 0.41));
  Vec one = c1(1.0), twv = c1(tw);
  g.alpha = [one, twv](int i) { return const_map(i == 1 ? twv : one); };

  auto rs = check_mult(g, 30, 13);
  CHECK_EQ(fails(rs), 1);
  const Report& bad = pick(rs, "mult.alpha.cocycle");
  CHECK_FALSE(bad.pass);
  CHECK_LT(std::abs(bad.max_residual - std::abs(tw - 1.0)), 1e-12);
  CHECK(pick(rs, "mult.m.cocycle").pass);
  CHECK(pick(rs, "mult.pentagon").pass);
  CHECK(pick(rs, "mult.conn.alpha").pass);
}

TEST_CASE("bilinear plane cocycles induce the split pairing and curving") {
  LieGroupModel G = additive_model(2, "plane");
  LieGroupModel T = additive_model(1, "value");
  VSpace t = algebra_space(T);
  Vec tb = t.basis[0];

  GroupCocycle kappa = [G, tb](const Vec& g, const Vec& w) {
    Vec out = tb * (additive_coords(G, g)[0] * additive_coords(G, w)[1]);
    return out;
  };
  Rng rng(17);
  CHECK_LT(cocycle_residual(G, kappa, rng, 30), 1e-12);

  MultGerbeData g;
  g.cover = one_chart_simplicial_cover(G, 4);
  g.G = G;
  g.T = T;
  g.t = t;
  Vec idT = T.id();
  g.lambda = [idT](int, int, int) { return const_map(idT); };
  g.m = [idT](int, int) { return const_map(idT); };
  g.alpha = [idT](int) { return const_map(idT); };
  g.has_conn = true;
  SpacePtr l1 = g.cover.nerve.level[1];
  g.A = [l1, t](int, int) { return zero_form(l1, 1, t); };
  VForm M = form_of_cocycle(g.cover.nerve, G, kappa, t);
  g.M = [M](int) { return M; };

  auto rs = check_mult(g, 30, 17);
  for (const auto& r : rs) CHECK(r.pass);
  CHECK_FALSE(pick(rs, "mult.conn.alpha").vacuous);
  CHECK_FALSE(pick(rs, "mult.pentagon").vacuous);

  PairingData pd = extract_pairing(g);
  REQUIRE_EQ(pd.table.size(), 2);
  CHECK_LT(mx(pd.table[0][0]), 1e-9);
  CHECK_LT(mx(pd.table[1][1]), 1e-9);
  CHECK_LT(mx(pd.table[0][1] - 0.5 * tb), 1e-9);
  CHECK_LT(mx(pd.table[1][0] - 0.5 * tb), 1e-9);

  // independent slope oracle for the symmetrised first-argument derivative
  std::vector<Vec> gb = algebra_space(G).basis;
  double s = 1e-5;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      auto d1k = [&](int i, int j) {
        RVec d = RVec::Zero(2);
        d[i] = s;
        Vec hi = kappa(G.expv(d), gb[j]);
        d[i] = -s;
        Vec lo = kappa(G.expv(d), gb[j]);
        Vec out = (hi - lo) / (2.0 * s);
        return out;
      };
      Vec sym = 0.5 * (d1k(a, b) + d1k(b, a));
      CHECK_LT(mx(pd.table[a][b] - sym), 1e-6);
    }

  VForm Th = curving_form(g, 0);
  Rng rng2(19);
  for (int k = 0; k < 5; ++k) {
    Vec p = l1->sample(rng2);
    Vec u = l1->random_tangent(p, rng2);
    Vec v = l1->random_tangent(p, rng2);
    RVec uc = additive_coords(G, u), vc = additive_coords(G, v);
    Vec want = tb * (-0.5 * (uc[0] * vc[1] - vc[0] * uc[1]));
    CHECK_LT(mx(Th.eval(p, {u, v}) - want), 1e-9);
  }

  auto rc = check_curving(g, pd, 30, 17);
  for (const auto& r : rc) CHECK(r.pass);
  auto rp = check_pairing(pd, 30, 19);
  for (const auto& r : rp) CHECK(r.pass);

  GroupCocycle k2 = cocycle_of_form(g.cover.nerve, G, M);
  Rng rng3(23);
  for (int i = 0; i < 10; ++i) {
    Vec a = l1->sample(rng3);
    Vec w = l1->random_tangent(G.id(), rng3);
    CHECK_LT(mx(k2(a, w) - kappa(a, w)), 1e-10);
  }
}

TEST_CASE("conjugation coboundaries on the sphere group carry a null pairing") {
  LieGroupModel G = su2_model();
  LieGroupModel T = u1_model();
  VSpace t = algebra_space(T);

  auto chi = [](const Vec& v) {
    return (0.7 * v[0] - 0.3 * v[1] + 0.2 * v[2] + 0.4 * v[3]).real();
  };
  GroupCocycle kappa = [G, chi](const Vec& g, const Vec& v) {
    return c1(kI * (chi(G.Ad(G.inv(g), v)) - chi(v)));
  };
  Rng rng(29);
  CHECK_LT(cocycle_residual(G, kappa, rng, 30), 1e-10);

  SimplicialSpace nerve = group_nerve(G, 4);
  VForm M = form_of_cocycle(nerve, G, kappa, t);

  // the induced potential is the simplicial difference of a single layer
  VForm sigma;
  sigma.base = nerve.level[1];
  sigma.deg = 1;
  sigma.V = t;
  sigma.eval = [G, chi](const Vec& p, const std::vector<Vec>& vs) {
    return c1(-kI * chi(G.lmul_tan(G.inv(p), vs[0])));
  };
  VForm ds = level_delta_form(nerve, 2, [sigma](int) { return sigma; });
  Rng rng2(31);
  for (int k = 0; k < 8; ++k) {
    Vec p = nerve.level[2]->sample(rng2);
    Vec v = nerve.level[2]->random_tangent(p, rng2);
    CHECK_LT(mx(M.eval(p, {v}) - ds.eval(p, {v})), 1e-11);
  }

  MultGerbeData g = one_chart_trivial(G, 4);
  g.has_conn = true;
  SpacePtr l1 = nerve.level[1];
  g.A = [l1, t](int, int) { return zero_form(l1, 1, t); };
  g.M = [M](int) { return M; };

  auto rs = check_mult(g, 30, 37);
  for (const auto& r : rs) CHECK(r.pass);

  PairingData pd = extract_pairing(g);
  for (const auto& row : pd.table)
    for (const Vec& e : row) CHECK_LT(mx(e), 1e-8);

  auto rc = check_curving(g, pd, 25, 41);
  for (const auto& r : rc) CHECK(r.pass);
  auto rp = check_pairing(pd, 25, 43);
  for (const auto& r : rp) CHECK(r.pass);

  GroupCocycle k2 = cocycle_of_form(nerve, G, M);
  Rng rng3(37);
  for (int i = 0; i < 10; ++i) {
    Vec a = l1->sample(rng3);
    Vec w = l1->random_tangent(G.id(), rng3);
    CHECK_LT(mx(k2(a, w) - kappa(a, w)), 1e-10);
  }
}

TEST_CASE("invariant pairing forms on the sphere group satisfy the simplicial relations") {
  LieGroupModel G = su2_model();
  Pairing K = trace_pairing(4.0, 2, scalar_real());
  Rng rng(41);
  CHECK_LT(ad_invariance_residual(G, K, rng, 30), 1e-9);

  PairingData pd = pairing_data(G, K);
  auto rs = check_pairing(pd, 40, 29);
  CHECK_EQ(rs.size(), 5);
  for (const auto& r : rs) {
    CHECK(r.pass);
    CHECK_FALSE(r.vacuous);
  }

  // trilinear form agrees pointwise with the bracket contraction
  Rng rng2(43);
  SpacePtr l1 = pd.nerve.level[1];
  for (int k = 0; k < 6; ++k) {
    Vec p = l1->sample(rng2);
    Vec u = l1->random_tangent(p, rng2);
    Vec v = l1->random_tangent(p, rng2);
    Vec w = l1->random_tangent(p, rng2);
    Vec th_u = G.lmul_tan(G.inv(p), u);
    Vec th_v = G.lmul_tan(G.inv(p), v);
    Vec th_w = G.lmul_tan(G.inv(p), w);
    Vec want = K.eval(th_u, G.bracket(th_v, th_w));
    CHECK_LT(mx(pd.mu.eval(p, {u, v, w}) - want), 1e-9);
  }

  VForm nuK = form_of_pairing(pd.nerve, G, K);
  Pairing K2 = pairing_of_form(pd.nerve, G, nuK);
  std::vector<Vec> gb = algebra_space(G).basis;
  for (const Vec& a : gb)
    for (const Vec& b : gb) CHECK_LT(mx(K2.eval(a, b) - K.eval(a, b)), 1e-8);
}

TEST_CASE("dictionary constructors reject data failing the face identities") {
  LieGroupModel G = additive_model(1, "line");
  SimplicialSpace nerve = group_nerve(G, 3);
  VSpace V = algebra_space(u1_model());
  int m = G.amb();
  auto co = [G, m](const Vec& p, int i) {
    return additive_coords(G, slot(p, i, m))[0];
  };

  VForm tau;
  tau.base = nerve.level[2];
  tau.deg = 1;
  tau.V = V;
  tau.eval = [co](const Vec& p, const std::vector<Vec>& vs) {
    double x2 = co(p, 1);
    return c1(x2 * x2 * co(vs[0], 0));
  };
  CHECK_THROWS_AS(cocycle_of_form(nerve, G, tau), std::invalid_argument);

  VForm nu;
  nu.base = nerve.level[2];
  nu.deg = 2;
  nu.V = V;
  nu.eval = [co](const Vec& p, const std::vector<Vec>& vs) {
    double u1 = co(vs[0], 0), u2 = co(vs[0], 1);
    double v1 = co(vs[1], 0), v2 = co(vs[1], 1);
    return c1(co(p, 0) * (u1 * v2 - v1 * u2));
  };
  CHECK_THROWS_AS(pairing_of_form(nerve, G, nu), std::invalid_argument);

  VForm nu_ok = nu;
  nu_ok.eval = [co](const Vec& p, const std::vector<Vec>& vs) {
    (void)p;
    double u1 = co(vs[0], 0), u2 = co(vs[0], 1);
    double v1 = co(vs[1], 0), v2 = co(vs[1], 1);
    return c1(-kI * (u1 * v2 - v1 * u2));
  };
  Pairing pr = pairing_of_form(nerve, G, nu_ok);
  Vec e = algebra_space(G).basis[0];
  CHECK_LT(std::abs(pr.eval(e, e)[0] - kI), 1e-10);
}
