#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgt/catalog.hpp"
#include "hgt/crossed.hpp"

using namespace hgt;

namespace {

double mx(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

const Report* pick(const std::vector<Report>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.identity == id) return &r;
  return nullptr;
}

RVec rv2(double a, double b) {
  RVec w(2);
  w << a, b;
  return w;
}

RVec rv3(double a, double b, double c) {
  RVec w(3);
  w << a, b, c;
  return w;
}

}  // namespace

TEST_CASE("every catalog example satisfies the crossed module laws") {
  for (const auto& ex : crossed_examples()) {
    CAPTURE(ex.name);
    Rng rng(5);
    CHECK(hom_residual(ex.cm.f, rng) < 1e-8);
    CHECK(hom_residual(ex.cm.inc, rng) < 1e-8);
    CHECK(hom_residual(ex.cm.pr, rng) < 1e-8);

    auto rs = check_crossed(ex.cm, 25, 7);
    CHECK(rs.size() == 7);
    for (const auto& r : rs) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }

    auto as = check_adjustment(ex.cm, ex.adj, 25, 7);
    CHECK(as.size() == 11);
    for (const auto& r : as) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }

    // Same seed, same bytes.
    auto as2 = check_adjustment(ex.cm, ex.adj, 25, 7);
    for (size_t i = 0; i < as.size(); ++i) {
      CHECK(as[i].max_residual == as2[i].max_residual);
      CHECK(as[i].line() == as2[i].line());
    }
  }
}

TEST_CASE("the retraction reproduces hand-computed splitting complements") {
  {
    CrossedExample ex = crossed_su2_u1();
    Mat r = retraction(ex.cm, ex.adj);
    CHECK(r.norm() < 1e-10);
  }
  {
    CrossedExample ex = crossed_split_plane();
    Mat r = retraction(ex.cm, ex.adj);
    auto coords = [&](const RVec& c) {
      return RVec(additive_coords(ex.cm.H,
                                  Vec(r * flat(ex.cm.Gt.algv(c)))));
    };
    CHECK((coords(rv2(1, 0)) - rv2(1.0, -0.3)).norm() < 1e-10);
    CHECK((coords(rv2(0, 1)) - rv2(-0.7, 0.21)).norm() < 1e-10);
  }
  {
    CrossedExample ex = crossed_heisenberg();
    Mat r = retraction(ex.cm, ex.adj);
    auto coords = [&](int k) {
      return RVec(additive_coords(ex.cm.H, Vec(r * flat(ex.cm.Gt.alg[k]))));
    };
    CHECK((coords(0) - rv2(-0.2, 0.08)).norm() < 1e-10);   // x direction
    CHECK((coords(1) - rv2(1.0, -0.4)).norm() < 1e-10);    // central
    CHECK((coords(2) - rv2(0.3, -0.12)).norm() < 1e-10);   // y direction
  }
}

TEST_CASE("the derivative cochain matches its closed form on flat examples") {
  {
    CrossedExample ex = crossed_plane_line();
    Vec u = flat(ex.cm.Gt.algv(rv2(0.7, -0.4)));
    Vec v = flat(ex.cm.Gt.algv(rv2(0.3, 0.9)));
    double d1 = additive_coords(ex.cm.T, d1_kappa(ex.cm, ex.adj, u, v))[0];
    CHECK(d1 == doctest::Approx(0.8 * 0.7 * 0.9 - 0.25 * (-0.4) * 0.3)
                    .epsilon(1e-9));
    double pr =
        additive_coords(ex.cm.T, adjustment_pairing(ex.cm, ex.adj, u, v))[0];
    CHECK(pr == doctest::Approx(0.275 * (0.7 * 0.9 + (-0.4) * 0.3))
                    .epsilon(1e-9));
    Rng rng(3);
    Vec g = ex.cm.Gt.sampler(rng);
    double cu = additive_coords(
        ex.cm.T, adjustment_curving(ex.cm, ex.adj, g, u, v))[0];
    CHECK(cu == doctest::Approx(-0.525 * (0.7 * 0.9 - (-0.4) * 0.3))
                    .epsilon(1e-9));
  }
  {
    CrossedExample ex = crossed_heisenberg();
    Vec u = flat(ex.cm.G.algv(rv2(0.6, -0.2)));
    Vec v = flat(ex.cm.G.algv(rv2(-0.5, 0.8)));
    double pr =
        additive_coords(ex.cm.T, adjustment_pairing(ex.cm, ex.adj, u, v))[0];
    CHECK(pr == doctest::Approx(0.125 * (0.6 * 0.8 + (-0.2) * (-0.5)))
                    .epsilon(1e-8));
  }
  {
    CrossedExample ex = crossed_su2_u1();
    Vec u = flat(ex.cm.Gt.algv(rv3(0.4, -0.7, 0.2)));
    Vec v = flat(ex.cm.Gt.algv(rv3(-0.3, 0.5, 0.8)));
    CHECK(mx(adjustment_pairing(ex.cm, ex.adj, u, v)) < 1e-9);
  }
}

TEST_CASE("connective pairs obey their laws and shift along deformations") {
  for (const auto& ex : crossed_examples()) {
    CAPTURE(ex.name);
    auto rs = run_checks(connective_checks(ex.cm, ex.adj), 20, 11);
    CHECK(rs.size() == 4);
    for (const auto& r : rs) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }
    auto is = run_checks(connective_iso_checks(ex.cm, ex.adj, ex.phi), 20, 11);
    CHECK(is.size() == 2);
    for (const auto& r : is) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }
  }
}

TEST_CASE("the group-valued extension of the cochain passes its twisted laws") {
  for (const auto& ex : crossed_examples()) {
    CAPTURE(ex.name);
    auto rs = run_checks(tilde_checks(ex.cm, ex.adj), 20, 13);
    CHECK(rs.size() == 2);
    for (const auto& r : rs) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }
  }
  // The retraction term is genuinely active on the Heisenberg example.
  CrossedExample ex = crossed_heisenberg();
  auto kt = adjustment_tilde(ex.cm, ex.adj);
  Vec g = ex.cm.Gt.expv(rv3(0.5, 0.2, -0.3));
  Vec v = flat(ex.cm.Gt.algv(rv3(0.4, -0.1, 0.25)));
  Vec plain = ex.cm.inc.alg * ex.adj.kappa(g, v);
  CHECK(mx(Vec(kt(g, v) - plain)) > 1e-3);
}

TEST_CASE("pure-gauge scenarios satisfy the glueing and connection laws") {
  for (const auto& ex : crossed_examples()) {
    CAPTURE(ex.name);
    CrossedScenario sc = crossed_scenario(ex);

    auto bs = check_bundle(sc.bundle, 20, 3);
    CHECK(bs.size() == 2);
    for (const auto& r : bs) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }

    auto gs = check_gconn(sc.bundle, sc.con, 12, 3);
    CHECK(gs.size() == 3);
    for (const auto& r : gs) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }
  }
}

TEST_CASE("conversions between the presentations round trip") {
  for (const auto& ex : {crossed_split_plane(), crossed_heisenberg()}) {
    CAPTURE(ex.name);
    CrossedScenario sc = crossed_scenario(ex);
    SpacePtr base = sc.bundle.cover.base;

    AdjConnection ac = to_adjusted(sc.bundle, sc.con);
    auto as = check_adjconn(sc.bundle, ac, 10, 5);
    CHECK(as.size() == 5);
    for (const auto& r : as) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }

    // Coming back is the identity on the nose.
    GConnection back = from_adjusted(sc.bundle, ac);
    Rng rng(21);
    for (int s = 0; s < 5; ++s) {
      Vec x = base->sample(rng);
      Vec U = base->random_tangent(x, rng), V = base->random_tangent(x, rng);
      CHECK(mx(Vec(back.sigma(0, 1)(x, {U}) - sc.con.sigma(0, 1)(x, {U}))) <
            1e-10);
      CHECK(mx(Vec(back.A(2)(x, {U}) - sc.con.A(2)(x, {U}))) < 1e-10);
      CHECK(mx(Vec(back.B(1)(x, {U, V}) - sc.con.B(1)(x, {U, V}))) < 1e-10);
    }

    // The other loop lands on an isomorphic connection, with the shift
    // given by the retraction of the gauge field.
    AdjConnection round = to_adjusted(sc.bundle, back);
    Mat R = retraction(ex.cm, ex.adj);
    VSpace hV = algebra_space(ex.cm.H);
    AdjConnection acc = ac;
    auto lam = [R, acc, base, hV](int i) {
      VForm At = acc.At(i);
      VForm l;
      l.base = base;
      l.deg = 1;
      l.V = hV;
      l.eval = [R, At](const Vec& p, const std::vector<Vec>& vs) {
        return Vec(R * At(p, vs));
      };
      return l;
    };
    auto is = run_checks(adjconn_iso_checks(sc.bundle, ac, round, lam), 10, 9);
    CHECK(is.size() == 3);
    for (const auto& r : is) {
      CAPTURE(r.identity);
      CHECK(r.pass);
      CHECK(!r.vacuous);
    }

    // An arbitrary shift produces an isomorphic, still-valid connection.
    LieGroupModel H = ex.cm.H, pl = additive_model(2);
    auto mu = [H, pl, base, hV](int i) {
      VForm f;
      f.base = base;
      f.deg = 1;
      f.V = hV;
      f.eval = [H, pl, i](const Vec& p, const std::vector<Vec>& vs) {
        RVec x = additive_coords(pl, p), u = additive_coords(pl, vs[0]);
        Vec out = Vec::Zero(H.amb());
        for (int m = 0; m < H.dim(); ++m)
          out += (0.1 * (m + 1) * x[1] * u[0] -
                  0.07 * (i + 1) * x[0] * u[1]) *
                 flat(H.alg[m]);
        return out;
      };
      return f;
    };
    AdjConnection shifted = adjconn_shift(sc.bundle, ac, mu);
    auto ms = run_checks(adjconn_iso_checks(sc.bundle, ac, shifted, mu), 8, 9);
    for (const auto& r : ms) {
      CAPTURE(r.identity);
      CHECK(r.pass);
    }
    auto vs = check_adjconn(sc.bundle, shifted, 8, 5);
    for (const auto& r : vs) {
      CAPTURE(r.identity);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("perturbed data fails exactly the laws it should and is rejected") {
  CrossedExample ex = crossed_split_plane();
  CrossedScenario sc = crossed_scenario(ex);
  SpacePtr base = sc.bundle.cover.base;
  LieGroupModel pl = additive_model(2);

  SUBCASE("a gauge-field shift trips the overlap gauge law") {
    GConnection bad = sc.con;
    auto origA = sc.con.A;
    Vec gb = flat(ex.cm.G.alg[0]);
    LieGroupModel p2 = pl;
    bad.A = [origA, gb, p2](int i) {
      VForm a = origA(i);
      if (i != 0) return a;
      VForm b = a;
      b.dexact = {};
      b.eval = [a, gb, p2](const Vec& p, const std::vector<Vec>& vs) {
        RVec u = additive_coords(p2, vs[0]);
        return Vec(a(p, vs) + 0.05 * u[0] * gb);
      };
      return b;
    };
    auto rs = check_gconn(sc.bundle, bad, 12, 3);
    CHECK(pick(rs, "gconn.gauge"));
    CHECK(!pick(rs, "gconn.gauge")->pass);
    CHECK(pick(rs, "gconn.overlap")->pass);
    CHECK(!pick(rs, "gconn.curving")->pass);
    bool threw = false;
    try {
      to_adjusted(sc.bundle, bad);
    } catch (const std::invalid_argument& err) {
      threw = true;
      CHECK(std::string(err.what()).find("gconn.") != std::string::npos);
    }
    CHECK(threw);
  }

  SUBCASE("a constant overlap-form shift trips only the face law") {
    GConnection bad = sc.con;
    auto origS = sc.con.sigma;
    Vec tb = flat(ex.cm.T.alg[0]);
    LieGroupModel p2 = pl;
    bad.sigma = [origS, tb, p2](int i, int j) {
      VForm s = origS(i, j);
      if (i != 0 || j != 1) return s;
      VForm b = s;
      b.dexact = {};
      b.eval = [s, tb, p2](const Vec& p, const std::vector<Vec>& vs) {
        RVec u = additive_coords(p2, vs[0]);
        return Vec(s(p, vs) + 0.04 * u[0] * tb);
      };
      return b;
    };
    auto rs = check_gconn(sc.bundle, bad, 12, 3);
    CHECK(!pick(rs, "gconn.overlap")->pass);
    CHECK(pick(rs, "gconn.gauge")->pass);
    CHECK(pick(rs, "gconn.curving")->pass);
  }

  SUBCASE("a central curving shift trips only the curving transition") {
    AdjConnection ac = to_adjusted(sc.bundle, sc.con);
    AdjConnection bad = ac;
    auto origB = ac.Bt;
    Vec cb = ex.cm.inc.alg * flat(ex.cm.T.alg[0]);
    LieGroupModel p2 = pl;
    bad.Bt = [origB, cb, p2](int i) {
      VForm b0 = origB(i);
      if (i != 1) return b0;
      VForm b = b0;
      b.dexact = {};
      b.eval = [b0, cb, p2](const Vec& p, const std::vector<Vec>& vs) {
        RVec u = additive_coords(p2, vs[0]), v = additive_coords(p2, vs[1]);
        return Vec(b0(p, vs) + 0.03 * (u[0] * v[1] - u[1] * v[0]) * cb);
      };
      return b;
    };
    auto rs = check_adjconn(sc.bundle, bad, 10, 5);
    CHECK(!pick(rs, "adjconn.curving")->pass);
    CHECK(pick(rs, "adjconn.overlap")->pass);
    CHECK(pick(rs, "adjconn.gauge")->pass);
    CHECK(pick(rs, "adjconn.equivariance")->pass);
    CHECK(pick(rs, "adjconn.fakeflat")->pass);
    bool threw = false;
    try {
      from_adjusted(sc.bundle, bad);
    } catch (const std::invalid_argument& err) {
      threw = true;
      CHECK(std::string(err.what()).find("adjconn.curving") !=
            std::string::npos);
    }
    CHECK(threw);
  }
}
