#include "hgt/bundle2.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hgt {

namespace {

double vres(const Vec& x) {
  return x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
}

std::vector<std::vector<int>> inc_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

Check none_check(const std::string& identity, double tol) {
  Check c;
  c.identity = identity;
  c.anchor = "none";
  c.tol = tol;
  c.draw = [](Rng&) -> std::optional<double> { return std::nullopt; };
  return c;
}

Vec cat2(const Vec& a, const Vec& b) {
  Vec r(a.size() + b.size());
  r << a, b;
  return r;
}

PointMap through_face(const PointMap& f, const SmoothMap& d) {
  auto fwd = d.fwd;
  return [f, fwd](const Vec& x) { return f(fwd(x)); };
}

SmoothMap fd_map(SpacePtr src, SpacePtr dst, const PointMap& f) {
  return SmoothMap{src, dst, f, nullptr};
}

using Cond = std::function<bool(const Vec&)>;

// Checks below sample a base overlap, then reject points whose transition
// image misses the gerbe charts named by the identity. A handful of rejected
// redraws in a row reads as an empty domain.
Check cond_form_check(const std::string& identity, const IndexedCover& cov,
                      const std::vector<int>& tuple, const std::string& sub,
                      const Cond& ok, const VForm& res, int args, double tol) {
  Check c;
  c.identity = identity;
  c.anchor = sub.empty() ? cov.tuple_label(tuple)
                         : cov.tuple_label(tuple) + "|" + sub;
  c.tol = tol;
  SpacePtr base = cov.base;
  c.draw = [cov, tuple, ok, res, args, base](Rng& rng)
      -> std::optional<double> {
    for (int k = 0; k < 8; ++k) {
      auto p = cov.sample_overlap(tuple, rng);
      if (!p) return std::nullopt;
      if (ok && !ok(*p)) continue;
      std::vector<Vec> vs;
      vs.reserve(args);
      for (int a = 0; a < args; ++a)
        vs.push_back(base->random_tangent(*p, rng));
      return vres(res(*p, vs));
    }
    return std::nullopt;
  };
  return c;
}

Check cond_map_check(const std::string& identity, const IndexedCover& cov,
                     const std::vector<int>& tuple, const std::string& sub,
                     const Cond& ok, const PointMap& prod, const Vec& id,
                     double tol) {
  Check c;
  c.identity = identity;
  c.anchor = sub.empty() ? cov.tuple_label(tuple)
                         : cov.tuple_label(tuple) + "|" + sub;
  c.tol = tol;
  c.draw = [cov, tuple, ok, prod, id](Rng& rng) -> std::optional<double> {
    for (int k = 0; k < 8; ++k) {
      auto p = cov.sample_overlap(tuple, rng);
      if (!p) return std::nullopt;
      if (ok && !ok(*p)) continue;
      return vres(prod(*p) - id);
    }
    return std::nullopt;
  };
  return c;
}

}  // namespace

// ~~~~~~~~~~~~~~~~~~~~~~~~~~ cocycle identities ~~~~~~~~~~~~~~~~~~~~~~~~~~~

std::vector<Check> bundle_checks(const TwoBundleData& b, const Tols& tol) {
  std::vector<Check> cs;
  const LieGroupModel& G = b.mg.G;
  const LieGroupModel& T = b.mg.T;
  const IndexedCover& cov = b.cover;
  const IndexedCover& cv1 = b.mg.cover.cover[1];
  const IndexedCover& cv2 = b.mg.cover.cover[2];
  const IndexedCover& cv3 = b.mg.cover.cover[3];
  Vec idT = T.id();

  {
    auto trs = inc_tuples(cov.size(), 3);
    if (trs.empty()) cs.push_back(none_check("tb.g.cocycle", tol.alg));
    for (const auto& t3 : trs) {
      int a = t3[0], bb = t3[1], c = t3[2];
      PointMap prod = quotient_product({b.g(a, bb), b.g(bb, c)},
                                       {b.g(a, c)}, G);
      cs.push_back(cond_map_check("tb.g.cocycle", cov, t3, "", nullptr, prod,
                                  G.id(), tol.alg));
    }
  }

  {
    auto prs = inc_tuples(cov.size(), 2);
    auto g3 = inc_tuples(cv1.size(), 3);
    if (prs.empty() || g3.empty())
      cs.push_back(none_check("tb.s.step", tol.alg));
    for (const auto& p2 : prs) {
      int a = p2[0], bb = p2[1];
      PointMap gab = b.g(a, bb);
      for (const auto& t3 : g3) {
        int i = t3[0], j = t3[1], k = t3[2];
        PointMap lam = b.mg.lambda(i, j, k);
        PointMap lg = [lam, gab](const Vec& x) { return lam(gab(x)); };
        PointMap prod = quotient_product(
            {b.s(a, bb, i, j), b.s(a, bb, j, k), lg}, {b.s(a, bb, i, k)}, T);
        IndexedCover c1 = cv1;
        Cond ok = [c1, gab, i, j, k](const Vec& p) {
          Vec q = gab(p);
          return c1.in(i, q) && c1.in(j, q) && c1.in(k, q);
        };
        cs.push_back(cond_map_check("tb.s.step", cov, p2, cv1.tuple_label(t3),
                                    ok, prod, idT, tol.alg));
      }
    }
  }

  {
    auto trs = inc_tuples(cov.size(), 3);
    auto g2 = inc_tuples(cv2.size(), 2);
    if (trs.empty() || g2.empty())
      cs.push_back(none_check("tb.t.product", tol.alg));
    for (const auto& t3 : trs) {
      int a = t3[0], bb = t3[1], c = t3[2];
      PointMap gab = b.g(a, bb), gbc = b.g(bb, c);
      PointMap pair12 = [gab, gbc](const Vec& x) {
        return cat2(gab(x), gbc(x));
      };
      for (const auto& p2 : g2) {
        int i2 = p2[0], j2 = p2[1];
        int d2i = b.mg.cover.down(2, 2, i2), d2j = b.mg.cover.down(2, 2, j2);
        int d0i = b.mg.cover.down(2, 0, i2), d0j = b.mg.cover.down(2, 0, j2);
        int d1i = b.mg.cover.down(2, 1, i2), d1j = b.mg.cover.down(2, 1, j2);
        PointMap sab = alt_map2([&](int x, int y) { return b.s(a, bb, x, y); },
                                d2i, d2j, T);
        PointMap sbc = alt_map2([&](int x, int y) { return b.s(bb, c, x, y); },
                                d0i, d0j, T);
        PointMap sac = alt_map2([&](int x, int y) { return b.s(a, c, x, y); },
                                d1i, d1j, T);
        PointMap mm = b.mg.m(i2, j2);
        PointMap mg12 = [mm, pair12](const Vec& x) { return mm(pair12(x)); };
        PointMap prod = quotient_product({b.t(a, bb, c, i2), sab, sbc, mg12},
                                         {sac, b.t(a, bb, c, j2)}, T);
        IndexedCover c2 = cv2;
        Cond ok = [c2, pair12, i2, j2](const Vec& p) {
          Vec q = pair12(p);
          return c2.in(i2, q) && c2.in(j2, q);
        };
        cs.push_back(cond_map_check("tb.t.product", cov, t3,
                                    cv2.tuple_label(p2), ok, prod, idT,
                                    tol.alg));
      }
    }
  }

  {
    auto qds = inc_tuples(cov.size(), 4);
    if (qds.empty() || cv3.size() == 0)
      cs.push_back(none_check("tb.t.associator", tol.alg));
    for (const auto& t4 : qds) {
      int a = t4[0], bb = t4[1], c = t4[2], d = t4[3];
      PointMap gab = b.g(a, bb), gbc = b.g(bb, c), gcd = b.g(c, d);
      PointMap triple = [gab, gbc, gcd](const Vec& x) {
        return cat2(cat2(gab(x), gbc(x)), gcd(x));
      };
      for (int i3 = 0; i3 < cv3.size(); ++i3) {
        int f3 = b.mg.cover.down(3, 3, i3), f1 = b.mg.cover.down(3, 1, i3);
        int f0 = b.mg.cover.down(3, 0, i3), f2 = b.mg.cover.down(3, 2, i3);
        PointMap al = b.mg.alpha(i3);
        PointMap alg3 = [al, triple](const Vec& x) { return al(triple(x)); };
        PointMap prod = quotient_product(
            {b.t(a, bb, c, f3), b.t(a, c, d, f1)},
            {b.t(bb, c, d, f0), b.t(a, bb, d, f2), alg3}, T);
        IndexedCover c3 = cv3;
        int i3c = i3;
        Cond ok = [c3, triple, i3c](const Vec& p) {
          return c3.in(i3c, triple(p));
        };
        cs.push_back(cond_map_check("tb.t.associator", cov, t4,
                                    cv3.tuple_label({i3}), ok, prod, idT,
                                    tol.alg));
      }
    }
  }

  return cs;
}

std::vector<Report> check_2bundle(const TwoBundleData& b, int samples,
                                  std::uint64_t seed, const Tols& tol) {
  return run_checks(bundle_checks(b, tol), samples, seed);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~ connective identities ~~~~~~~~~~~~~~~~~~~~~~~~~~

std::vector<Check> bundle_conn_checks(const TwoBundleData& b,
                                      const TwoBundleConnection& c,
                                      const PairingData& pd, const Tols& tol) {
  if (!b.mg.has_conn)
    throw std::invalid_argument("bundle_conn_checks: mg carries no potentials");
  std::vector<Check> cs;
  const LieGroupModel& G = b.mg.G;
  const LieGroupModel& T = b.mg.T;
  const IndexedCover& cov = b.cover;
  const IndexedCover& cv1 = b.mg.cover.cover[1];
  const IndexedCover& cv2 = b.mg.cover.cover[2];
  SpacePtr base = cov.base;
  SpacePtr gs = sp(G.space());
  VForm thR = maurer_cartan_right(G, gs);

  auto prs = inc_tuples(cov.size(), 2);
  auto trs = inc_tuples(cov.size(), 3);

  {
    auto g2 = inc_tuples(cv1.size(), 2);
    if (prs.empty() || g2.empty())
      cs.push_back(none_check("tbconn.chart", tol.fd));
    for (const auto& p2 : prs) {
      int a = p2[0], bb = p2[1];
      PointMap gab = b.g(a, bb);
      for (const auto& q2 : g2) {
        int i = q2[0], j = q2[1];
        VForm res = add(sub(c.sigma(a, bb, i), c.sigma(a, bb, j)),
                        add(mc_pullback(b.s(a, bb, i, j), base, T),
                            pullback(fd_map(base, cv1.base, gab),
                                     b.mg.A(i, j))));
        IndexedCover c1 = cv1;
        Cond ok = [c1, gab, i, j](const Vec& p) {
          Vec q = gab(p);
          return c1.in(i, q) && c1.in(j, q);
        };
        cs.push_back(cond_form_check("tbconn.chart", cov, p2,
                                     cv1.tuple_label(q2), ok, res, 1,
                                     tol.fd));
      }
    }
  }

  {
    if (trs.empty() || cv2.size() == 0)
      cs.push_back(none_check("tbconn.triple", tol.fd));
    for (const auto& t3 : trs) {
      int a = t3[0], bb = t3[1], cc = t3[2];
      PointMap gab = b.g(a, bb), gbc = b.g(bb, cc);
      PointMap pair12 = [gab, gbc](const Vec& x) {
        return cat2(gab(x), gbc(x));
      };
      for (int i2 = 0; i2 < cv2.size(); ++i2) {
        int d0 = b.mg.cover.down(2, 0, i2);
        int d1 = b.mg.cover.down(2, 1, i2);
        int d2 = b.mg.cover.down(2, 2, i2);
        VForm res =
            sub(sub(add(sub(mc_pullback(b.t(a, bb, cc, i2), base, T),
                            c.sigma(bb, cc, d0)),
                        c.sigma(a, cc, d1)),
                    c.sigma(a, bb, d2)),
                pullback(fd_map(base, cv2.base, pair12), b.mg.M(i2)));
        IndexedCover c2 = cv2;
        int i2c = i2;
        Cond ok = [c2, pair12, i2c](const Vec& p) {
          return c2.in(i2c, pair12(p));
        };
        cs.push_back(cond_form_check("tbconn.triple", cov, t3,
                                     cv2.tuple_label({i2}), ok, res, 1,
                                     tol.fd));
      }
    }
  }

  {
    if (prs.empty()) cs.push_back(none_check("tbconn.adjoint", tol.fd));
    for (const auto& p2 : prs) {
      int a = p2[0], bb = p2[1];
      PointMap gab = b.g(a, bb);
      VForm mcl = mc_pullback(gab, base, G);
      VForm Aa = c.A(a), Ab = c.A(bb);
      Check ck;
      ck.identity = "tbconn.adjoint";
      ck.anchor = cov.tuple_label(p2);
      ck.tol = tol.fd;
      IndexedCover cv = cov;
      LieGroupModel Gm = G;
      std::vector<int> tup = p2;
      ck.draw = [cv, tup, gab, mcl, Aa, Ab, Gm, base](Rng& rng)
          -> std::optional<double> {
        auto p = cv.sample_overlap(tup, rng);
        if (!p) return std::nullopt;
        Vec u = base->random_tangent(*p, rng);
        Vec lhs = Ab(*p, {u});
        Vec rhs = Gm.Ad(Gm.inv(gab(*p)), Aa(*p, {u})) + mcl(*p, {u});
        return vres(Vec(lhs - rhs));
      };
      cs.push_back(ck);
    }
  }

  {
    if (prs.empty() || cv1.size() == 0)
      cs.push_back(none_check("tbconn.curving", tol.fd));
    for (const auto& p2 : prs) {
      int a = p2[0], bb = p2[1];
      PointMap gab = b.g(a, bb);
      SmoothMap gm = fd_map(base, gs, gab);
      VForm gR = pullback(gm, thR);
      for (int i1 = 0; i1 < cv1.size(); ++i1) {
        VForm res = sub(sub(add(sub(c.B(bb), c.B(a)),
                                wedge_pair(c.A(a), gR, pd.pair)),
                            d_form(c.sigma(a, bb, i1))),
                        pullback(gm, curving_form(b.mg, i1)));
        IndexedCover c1 = cv1;
        int i1c = i1;
        Cond ok = [c1, gab, i1c](const Vec& p) { return c1.in(i1c, gab(p)); };
        cs.push_back(cond_form_check("tbconn.curving", cov, p2,
                                     cv1.tuple_label({i1}), ok, res, 2,
                                     tol.fd));
      }
    }
  }

  {
    if (!c.h || prs.empty()) {
      cs.push_back(none_check("tbconn.enh.overlap", tol.fd));
    } else {
      for (const auto& p2 : prs) {
        int a = p2[0], bb = p2[1];
        SymTensor ha = c.h(a), hb = c.h(bb);
        VForm Aa = c.A(a), Ab = c.A(bb);
        Check ck;
        ck.identity = "tbconn.enh.overlap";
        ck.anchor = cov.tuple_label(p2);
        ck.tol = tol.fd;
        IndexedCover cv = cov;
        Pairing pr = pd.pair;
        std::vector<int> tup = p2;
        ck.draw = [cv, tup, ha, hb, Aa, Ab, pr, base](Rng& rng)
            -> std::optional<double> {
          auto p = cv.sample_overlap(tup, rng);
          if (!p) return std::nullopt;
          Vec u = base->random_tangent(*p, rng);
          Vec v = base->random_tangent(*p, rng);
          Vec qa = pr.eval(Aa(*p, {u}), Aa(*p, {v}));
          Vec qb = pr.eval(Ab(*p, {u}), Ab(*p, {v}));
          Vec r = ha.eval(*p, u, v) - hb.eval(*p, u, v) - 0.5 * (qa - qb);
          return vres(r);
        };
        cs.push_back(ck);
      }
    }
  }

  return cs;
}

std::vector<Report> check_connection(const TwoBundleData& b,
                                     const TwoBundleConnection& c,
                                     const PairingData& pd, int samples,
                                     std::uint64_t seed, const Tols& tol) {
  return run_checks(bundle_conn_checks(b, c, pd, tol), samples, seed);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ curvature ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

VForm curvature_f(const LieGroupModel& G, const TwoBundleConnection& c,
                  int a) {
  VForm A = c.A(a);
  return add(d_form(A), scale(0.5, wedge_bracket(A, A, G)));
}

VForm curvature_h(const TwoBundleConnection& c, const PairingData& pd,
                  int a) {
  VForm A = c.A(a);
  VForm dA = d_form(A);
  VForm br = wedge_bracket(A, A, pd.G);
  return add(d_form(c.B(a)),
             add(wedge_pair(dA, A, pd.pair),
                 scale(1.0 / 3.0, wedge_pair(A, br, pd.pair))));
}

std::vector<Check> bundle_curvature_checks(const TwoBundleData& b,
                                           const TwoBundleConnection& c,
                                           const PairingData& pd,
                                           const Tols& tol) {
  std::vector<Check> cs;
  const LieGroupModel& G = b.mg.G;
  const IndexedCover& cov = b.cover;
  SpacePtr base = cov.base;
  auto prs = inc_tuples(cov.size(), 2);

  if (prs.empty()) cs.push_back(none_check("tbcurv.f.overlap", tol.fd));
  for (const auto& p2 : prs) {
    int a = p2[0], bb = p2[1];
    PointMap gab = b.g(a, bb);
    VForm Fa = curvature_f(G, c, a), Fb = curvature_f(G, c, bb);
    Check ck;
    ck.identity = "tbcurv.f.overlap";
    ck.anchor = cov.tuple_label(p2);
    ck.tol = tol.fd;
    IndexedCover cv = cov;
    LieGroupModel Gm = G;
    std::vector<int> tup = p2;
    ck.draw = [cv, tup, gab, Fa, Fb, Gm, base](Rng& rng)
        -> std::optional<double> {
      auto p = cv.sample_overlap(tup, rng);
      if (!p) return std::nullopt;
      Vec u = base->random_tangent(*p, rng);
      Vec v = base->random_tangent(*p, rng);
      Vec lhs = Fb(*p, {u, v});
      Vec rhs = Gm.Ad(Gm.inv(gab(*p)), Fa(*p, {u, v}));
      return vres(Vec(lhs - rhs));
    };
    cs.push_back(ck);
  }

  if (prs.empty()) cs.push_back(none_check("tbcurv.h.overlap", tol.fd));
  for (const auto& p2 : prs) {
    VForm res = sub(curvature_h(c, pd, p2[0]), curvature_h(c, pd, p2[1]));
    cs.push_back(cond_form_check("tbcurv.h.overlap", cov, p2, "", nullptr,
                                 res, 3, tol.fd));
  }

  for (int a = 0; a < cov.size(); ++a) {
    VForm Fa = curvature_f(G, c, a);
    VForm res = add(d_form(Fa), wedge_bracket(c.A(a), Fa, G));
    cs.push_back(cond_form_check("tbcurv.f.bianchi", cov, {a}, "", nullptr,
                                 res, 3, tol.fd2));
  }

  for (int a = 0; a < cov.size(); ++a) {
    VForm Fa = curvature_f(G, c, a);
    VForm res = sub(d_form(curvature_h(c, pd, a)),
                    wedge_pair(Fa, Fa, pd.pair));
    cs.push_back(cond_form_check("tbcurv.h.bianchi", cov, {a}, "", nullptr,
                                 res, 4, tol.fd2));
  }

  return cs;
}

std::vector<Report> check_bundle_curvature(const TwoBundleData& b,
                                           const TwoBundleConnection& c,
                                           const PairingData& pd, int samples,
                                           std::uint64_t seed,
                                           const Tols& tol) {
  return run_checks(bundle_curvature_checks(b, c, pd, tol), samples, seed);
}

// ~~~~~~~~~~~~~~~~~~~~~ the affine space of connections ~~~~~~~~~~~~~~~~~~~

TwoBundleConnection torsor_translate(const TwoBundleData& bd,
                                     const TwoBundleConnection& c,
                                     const TorsorShift& sh,
                                     const PairingData& pd,
                                     std::uint64_t gate_seed) {
  const LieGroupModel& G = bd.mg.G;
  SpacePtr base = bd.cover.base;
  Rng rng(gate_seed);
  for (const auto& p2 : inc_tuples(bd.cover.size(), 2)) {
    PointMap gab = bd.g(p2[0], p2[1]);
    VForm aa = sh.a(p2[0]), ab = sh.a(p2[1]);
    for (int s = 0; s < 12; ++s) {
      auto p = bd.cover.sample_overlap(p2, rng);
      if (!p) break;
      Vec u = base->random_tangent(*p, rng);
      double r =
          vres(Vec(ab(*p, {u}) - G.Ad(G.inv(gab(*p)), aa(*p, {u}))));
      if (r > 1e-6)
        throw std::invalid_argument(
            "torsor_translate: shift fails the adjoint gluing (residual " +
            std::to_string(r) + ")");
    }
  }

  TwoBundleConnection out;
  out.sigma = c.sigma;
  auto A = c.A;
  auto a1 = sh.a;
  out.A = [A, a1](int a) { return add(A(a), a1(a)); };
  auto B = c.B;
  VForm sb = sh.b;
  Pairing pr = pd.pair;
  out.B = [B, A, a1, sb, pr](int a) {
    return add(B(a), add(wedge_pair(A(a), a1(a), pr), sb));
  };
  if (c.h) {
    auto h = c.h;
    auto shh = sh.h;
    out.h = [h, A, a1, shh, pr](int a) {
      SymTensor ha = h(a);
      VForm Aa = A(a), aa = a1(a);
      SymTensor cross = sym_wedge(Aa, aa, pr);
      SymTensor sq = sym_wedge(aa, aa, pr);
      SymTensor r;
      r.base = ha.base;
      r.V = ha.V;
      r.eval = [ha, cross, sq, shh](const Vec& p, const Vec& u,
                                    const Vec& v) {
        Vec val = ha.eval(p, u, v) + 0.5 * cross.eval(p, u, v) +
                  0.25 * sq.eval(p, u, v);
        if (shh) val += shh->eval(p, u, v);
        return val;
      };
      return r;
    };
  }
  return out;
}

TwoBundleConnection conn_iso_apply(const TwoBundleConnection& c,
                                   const std::function<VForm(int)>& tau) {
  TwoBundleConnection out;
  auto sg = c.sigma;
  out.sigma = [sg, tau](int a, int b, int i1) {
    return add(sg(a, b, i1), sub(tau(b), tau(a)));
  };
  out.A = c.A;
  auto B = c.B;
  out.B = [B, tau](int a) { return add(B(a), d_form(tau(a))); };
  out.h = c.h;
  return out;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~ gauge transformations ~~~~~~~~~~~~~~~~~~~~~~~~~

std::vector<Check> gauge_checks(const GaugeData& gd,
                                const TwoBundleConnection& c,
                                const PairingData& pd, const Tols& tol) {
  std::vector<Check> cs;
  const LieGroupModel& G = gd.src.mg.G;
  const IndexedCover& cov = gd.src.cover;
  const IndexedCover& cv1 = gd.src.mg.cover.cover[1];
  SpacePtr base = cov.base;
  SpacePtr gs = sp(G.space());
  VForm thR = maurer_cartan_right(G, gs);
  auto prs = inc_tuples(cov.size(), 2);

  if (prs.empty()) cs.push_back(none_check("tbgauge.intertwine", tol.alg));
  for (const auto& p2 : prs) {
    int a = p2[0], bb = p2[1];
    PointMap prod = quotient_product({gd.phi(a), gd.src.g(a, bb)},
                                     {gd.dst.g(a, bb), gd.phi(bb)}, G);
    cs.push_back(cond_map_check("tbgauge.intertwine", cov, p2, "", nullptr,
                                prod, G.id(), tol.alg));
  }

  for (int a = 0; a < cov.size(); ++a) {
    VForm res = sub(d_form(gd.b(a)),
                    pullback(fd_map(base, gs, gd.phi(a)), pd.mu));
    cs.push_back(cond_form_check("tbgauge.curv", cov, {a}, "", nullptr, res,
                                 3, tol.fd));
  }

  if (prs.empty() || cv1.size() == 0)
    cs.push_back(none_check("tbgauge.overlap", tol.fd));
  for (const auto& p2 : prs) {
    int a = p2[0], bb = p2[1];
    PointMap g1 = gd.src.g(a, bb), g2 = gd.dst.g(a, bb);
    SmoothMap g1m = fd_map(base, gs, g1), g2m = fd_map(base, gs, g2);
    VForm phiaL = mc_pullback(gd.phi(a), base, G);
    VForm phibR = pullback(fd_map(base, gs, gd.phi(bb)), thR);
    VForm g2L = mc_pullback(g2, base, G);
    VForm g1R = pullback(g1m, thR);
    for (int i1 = 0; i1 < cv1.size(); ++i1) {
      VForm th = curving_form(gd.src.mg, i1);
      VForm curv1 = add(d_form(c.sigma(a, bb, i1)), pullback(g1m, th));
      VForm curv2 = add(d_form(gd.sigma2(a, bb, i1)), pullback(g2m, th));
      VForm res = sub(add(add(sub(sub(gd.b(a), gd.b(bb)), curv2),
                              wedge_pair(g2L, phibR, pd.pair)),
                          curv1),
                      wedge_pair(phiaL, g1R, pd.pair));
      IndexedCover c1 = cv1;
      int i1c = i1;
      Cond ok = [c1, g1, g2, i1c](const Vec& p) {
        return c1.in(i1c, g1(p)) && c1.in(i1c, g2(p));
      };
      cs.push_back(cond_form_check("tbgauge.overlap", cov, p2,
                                   cv1.tuple_label({i1}), ok, res, 2,
                                   tol.fd));
    }
  }

  return cs;
}

std::vector<Report> check_gauge(const GaugeData& gd,
                                const TwoBundleConnection& c,
                                const PairingData& pd, int samples,
                                std::uint64_t seed, const Tols& tol) {
  return run_checks(gauge_checks(gd, c, pd, tol), samples, seed);
}

TwoBundleConnection gauge_apply(const GaugeData& gd,
                                const TwoBundleConnection& c,
                                const PairingData& pd) {
  const LieGroupModel& G = gd.src.mg.G;
  SpacePtr base = gd.src.cover.base;
  SpacePtr gs = sp(G.space());
  VForm thR = maurer_cartan_right(G, gs);

  TwoBundleConnection out;
  out.sigma = gd.sigma2;
  auto phi = gd.phi;
  auto A = c.A;
  LieGroupModel Gm = G;
  VForm thRc = thR;
  SpacePtr bs = base;
  SpacePtr gsp = gs;
  out.A = [phi, A, Gm, thRc, bs, gsp](int a) {
    PointMap ph = phi(a);
    VForm Aa = A(a);
    VForm phR = pullback(fd_map(bs, gsp, ph), thRc);
    VForm r;
    r.base = Aa.base;
    r.deg = 1;
    r.V = Aa.V;
    r.eval = [ph, Aa, phR, Gm](const Vec& p, const std::vector<Vec>& vs) {
      return Vec(Gm.Ad(ph(p), Aa(p, vs)) - phR(p, vs));
    };
    return r;
  };
  auto B = c.B;
  auto bb = gd.b;
  Pairing pr = pd.pair;
  out.B = [B, A, bb, phi, pr, Gm, bs](int a) {
    VForm phL = mc_pullback(phi(a), bs, Gm);
    return sub(sub(B(a), wedge_pair(phL, A(a), pr)), bb(a));
  };
  if (c.h) {
    auto h = c.h;
    auto A2 = out.A;
    out.h = [h, A, A2, pr](int a) {
      SymTensor ha = h(a);
      VForm A1a = A(a), A2a = A2(a);
      SymTensor r;
      r.base = ha.base;
      r.V = ha.V;
      r.eval = [ha, A1a, A2a, pr](const Vec& p, const Vec& u, const Vec& v) {
        Vec q2 = pr.eval(A2a(p, {u}), A2a(p, {v}));
        Vec q1 = pr.eval(A1a(p, {u}), A1a(p, {v}));
        return Vec(ha.eval(p, u, v) + 0.5 * (q2 - q1));
      };
      return r;
    };
  }
  return out;
}

// ~~~~~~~~~~~~~~~~~~~ invariant forms on a total space ~~~~~~~~~~~~~~~~~~~~

VForm cs_form(const CsInput& in, const PairingData& pd) {
  VForm dA = d_form(in.A);
  VForm br = wedge_bracket(in.A, in.A, in.G);
  return add(wedge_pair(dA, in.A, pd.pair),
             scale(1.0 / 3.0, wedge_pair(in.A, br, pd.pair)));
}

namespace {

// projection of an action-nerve level onto its last n group slots
SmoothMap gslots_map(SpacePtr src, SpacePtr dst, int mp) {
  auto cut = [mp](const Vec& p) { return Vec(p.segment(mp, p.size() - mp)); };
  SmoothMap f;
  f.src = src;
  f.dst = dst;
  f.fwd = cut;
  f.tan = [cut](const Vec&, const Vec& v) { return cut(v); };
  return f;
}

}  // namespace

VForm cs_r_form(const CsInput& in, const PairingData& pd) {
  SimplicialSpace an = action_nerve(in.act, in.G, 1);
  SpacePtr gs = sp(in.G.space());
  SmoothMap tail = gslots_map(an.level[1], gs, in.act.total->amb);
  return wedge_pair(pullback(an.d(1, 1), in.A),
                    pullback(tail, maurer_cartan_right(in.G, gs)), pd.pair);
}

std::vector<Check> cs_checks(const CsInput& in, const PairingData& pd,
                             const Tols& tol, std::uint64_t gate_seed) {
  const LieGroupModel& G = in.G;
  SpacePtr total = in.act.total;
  SpacePtr gs = sp(G.space());

  {
    Rng rng(gate_seed);
    for (int s = 0; s < 12; ++s) {
      Vec p = total->sample(rng);
      Vec g = gs->sample(rng);
      Vec vp = total->random_tangent(p, rng);
      Vec vg = gs->random_tangent(g, rng);
      Vec lhs = in.A(in.act.act(p, g), {in.act.act_tan(p, g, vp, vg)});
      Vec rhs = G.Ad(G.inv(g), in.A(p, {vp})) + G.lmul_tan(G.inv(g), vg);
      double r = vres(Vec(lhs - rhs));
      if (r > tol.fd)
        throw std::invalid_argument(
            "cs_checks: input fails the adjoint transformation rule "
            "(residual " +
            std::to_string(r) + ")");
    }
  }

  SimplicialSpace an = action_nerve(in.act, G, 2);
  VForm CS = cs_form(in, pd);
  VForm R = cs_r_form(in, pd);
  int mp = total->amb;

  std::vector<Check> cs;

  {
    VForm F = add(d_form(in.A), scale(0.5, wedge_bracket(in.A, in.A, G)));
    VForm res = sub(d_form(CS), wedge_pair(F, F, pd.pair));
    Check ck;
    ck.identity = "cs.curvature";
    ck.anchor = "total";
    ck.tol = tol.fd2;
    ck.draw = [total, res](Rng& rng) -> std::optional<double> {
      Vec p = total->sample(rng);
      std::vector<Vec> vs;
      for (int a = 0; a < 4; ++a)
        vs.push_back(total->random_tangent(p, rng));
      return vres(res(p, vs));
    };
    cs.push_back(ck);
  }

  {
    SpacePtr l1 = an.level[1];
    SmoothMap tail1 = gslots_map(l1, sp(G.space()), mp);
    VForm res = sub(sub(d_form(R),
                        sub(pullback(an.d(1, 0), CS),
                            pullback(an.d(1, 1), CS))),
                    pullback(tail1, pd.mu));
    Check ck;
    ck.identity = "cs.step";
    ck.anchor = "level1";
    ck.tol = tol.fd2;
    ck.draw = [l1, res](Rng& rng) -> std::optional<double> {
      Vec p = l1->sample(rng);
      std::vector<Vec> vs;
      for (int a = 0; a < 3; ++a) vs.push_back(l1->random_tangent(p, rng));
      return vres(res(p, vs));
    };
    cs.push_back(ck);
  }

  {
    SpacePtr l2 = an.level[2];
    SmoothMap tail2 = gslots_map(l2, pd.nerve.level[2], mp);
    VForm res = add(add(sub(pullback(an.d(2, 0), R),
                            pullback(an.d(2, 1), R)),
                        pullback(an.d(2, 2), R)),
                    pullback(tail2, pd.nu));
    Check ck;
    ck.identity = "cs.comparison";
    ck.anchor = "level2";
    ck.tol = tol.alg;
    ck.draw = [l2, res](Rng& rng) -> std::optional<double> {
      Vec p = l2->sample(rng);
      std::vector<Vec> vs;
      for (int a = 0; a < 2; ++a) vs.push_back(l2->random_tangent(p, rng));
      return vres(res(p, vs));
    };
    cs.push_back(ck);
  }

  return cs;
}

std::vector<Report> check_cs(const CsInput& in, const PairingData& pd,
                             int samples, std::uint64_t seed,
                             const Tols& tol) {
  return run_checks(cs_checks(in, pd, tol), samples, seed);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~ quotient presentations ~~~~~~~~~~~~~~~~~~~~~~~~~

namespace {

Check level_map_check(const std::string& identity, const IndexedCover& cov,
                      const std::vector<int>& tuple, const PointMap& prod,
                      const Vec& id, double tol) {
  Check c;
  c.identity = identity;
  c.anchor = cov.tuple_label(tuple);
  c.tol = tol;
  c.draw = [cov, tuple, prod, id](Rng& rng) -> std::optional<double> {
    auto p = cov.sample_overlap(tuple, rng);
    if (!p) return std::nullopt;
    return vres(prod(*p) - id);
  };
  return c;
}

Check level_form_check(const std::string& identity, const IndexedCover& cov,
                       const std::vector<int>& tuple, const VForm& res,
                       int args, double tol) {
  Check c;
  c.identity = identity;
  c.anchor = cov.tuple_label(tuple);
  c.tol = tol;
  SpacePtr base = cov.base;
  c.draw = [cov, tuple, res, args, base](Rng& rng) -> std::optional<double> {
    auto p = cov.sample_overlap(tuple, rng);
    if (!p) return std::nullopt;
    std::vector<Vec> vs;
    for (int a = 0; a < args; ++a) vs.push_back(base->random_tangent(*p, rng));
    return vres(res(*p, vs));
  };
  return c;
}

}  // namespace

std::vector<Check> pg_bundle_checks(const PgBundleData& d, const Tols& tol) {
  std::vector<Check> cs;
  const LieGroupModel& T = d.mg.T;
  Vec idT = T.id();
  const SimplicialSpace& vs = d.vcover.nerve;
  const SimplicialSpace& us = d.mg.cover.nerve;
  int mp = vs.level[0]->amb;

  auto pimap = [&](int n) {
    return gslots_map(vs.level[n], us.level[n], mp);
  };

  {
    const IndexedCover& c0 = d.vcover.cover[0];
    auto qds = inc_tuples(c0.size(), 4);
    if (qds.empty()) cs.push_back(none_check("pg.b.cocycle", tol.alg));
    for (const auto& t4 : qds) {
      int r = t4[0], s = t4[1], t = t4[2], u = t4[3];
      PointMap prod = quotient_product({d.b(r, s, t), d.b(r, t, u)},
                                       {d.b(r, s, u), d.b(s, t, u)}, T);
      cs.push_back(level_map_check("pg.b.cocycle", c0, t4, prod, idT,
                                   tol.alg));
    }
  }

  {
    const IndexedCover& c1 = d.vcover.cover[1];
    auto trs = inc_tuples(c1.size(), 3);
    if (trs.empty()) cs.push_back(none_check("pg.act.step", tol.alg));
    SmoothMap pi1 = pimap(1);
    for (const auto& t3 : trs) {
      int r = t3[0], s = t3[1], t = t3[2];
      PointMap bd0 = through_face(
          alt_map3(d.b, d.vcover.down(1, 0, r), d.vcover.down(1, 0, s),
                   d.vcover.down(1, 0, t), T),
          vs.d(1, 0));
      PointMap bd1 = through_face(
          alt_map3(d.b, d.vcover.down(1, 1, r), d.vcover.down(1, 1, s),
                   d.vcover.down(1, 1, t), T),
          vs.d(1, 1));
      PointMap lam = through_face(
          alt_map3(d.mg.lambda, d.pi[1][r], d.pi[1][s], d.pi[1][t], T), pi1);
      PointMap prod = quotient_product({d.act(r, s), d.act(s, t), bd0},
                                       {d.act(r, t), bd1, lam}, T);
      cs.push_back(level_map_check("pg.act.step", c1, t3, prod, idT,
                                   tol.alg));
    }
  }

  {
    const IndexedCover& c2 = d.vcover.cover[2];
    auto prs = inc_tuples(c2.size(), 2);
    if (prs.empty()) cs.push_back(none_check("pg.beta.product", tol.alg));
    SmoothMap pi2 = pimap(2);
    for (const auto& p2 : prs) {
      int r = p2[0], s = p2[1];
      auto af = [&](int j) {
        return through_face(alt_map2(d.act, d.vcover.down(2, j, r),
                                     d.vcover.down(2, j, s), T),
                            vs.d(2, j));
      };
      PointMap mm = through_face(
          alt_map2(d.mg.m, d.pi[2][r], d.pi[2][s], T), pi2);
      PointMap prod = quotient_product({d.beta(r), af(2), af(0)},
                                       {d.beta(s), af(1), mm}, T);
      cs.push_back(level_map_check("pg.beta.product", c2, p2, prod, idT,
                                   tol.alg));
    }
  }

  {
    const IndexedCover& c3 = d.vcover.cover[3];
    if (c3.size() == 0) cs.push_back(none_check("pg.beta.associator", tol.alg));
    SmoothMap pi3 = pimap(3);
    for (int r = 0; r < c3.size(); ++r) {
      auto bf = [&](int j) {
        return through_face(d.beta(d.vcover.down(3, j, r)), vs.d(3, j));
      };
      PointMap al = through_face(d.mg.alpha(d.pi[3][r]), pi3);
      PointMap prod = quotient_product({bf(3), bf(1), al}, {bf(2), bf(0)}, T);
      cs.push_back(level_map_check("pg.beta.associator", c3, {r}, prod, idT,
                                   tol.alg));
    }
  }

  return cs;
}

std::vector<Check> pg_conn_checks(const PgBundleData& d,
                                  const PgConnection& c,
                                  const PairingData& pd, const Tols& tol) {
  if (!d.mg.has_conn)
    throw std::invalid_argument("pg_conn_checks: mg carries no potentials");
  std::vector<Check> cs;
  const LieGroupModel& T = d.mg.T;
  const LieGroupModel& G = d.mg.G;
  const SimplicialSpace& vs = d.vcover.nerve;
  const SimplicialSpace& us = d.mg.cover.nerve;
  SpacePtr vl0 = vs.level[0], vl1 = vs.level[1], vl2 = vs.level[2];
  int mp = vl0->amb;
  SpacePtr gs = sp(G.space());

  auto pimap = [&](int n) {
    return gslots_map(vs.level[n], us.level[n], mp);
  };
  auto sig_alt = [&](int i, int j) {
    return alt_form2(c.sigma, i, j, vl0, 1, d.mg.t);
  };

  {
    const IndexedCover& c0 = d.vcover.cover[0];
    auto trs = inc_tuples(c0.size(), 3);
    if (trs.empty()) cs.push_back(none_check("pgconn.sigma", tol.fd));
    for (const auto& t3 : trs) {
      int r = t3[0], s = t3[1], t = t3[2];
      VForm res = sub(sub(add(c.sigma(r, s), c.sigma(s, t)), c.sigma(r, t)),
                      mc_pullback(d.b(r, s, t), vl0, T));
      cs.push_back(level_form_check("pgconn.sigma", c0, t3, res, 1, tol.fd));
    }
  }

  {
    const IndexedCover& c1 = d.vcover.cover[1];
    auto prs = inc_tuples(c1.size(), 2);
    if (prs.empty()) cs.push_back(none_check("pgconn.eta", tol.fd));
    SmoothMap pi1 = pimap(1);
    for (const auto& p2 : prs) {
      int r = p2[0], s = p2[1];
      VForm sd0 = pullback(vs.d(1, 0), sig_alt(d.vcover.down(1, 0, r),
                                               d.vcover.down(1, 0, s)));
      VForm sd1 = pullback(vs.d(1, 1), sig_alt(d.vcover.down(1, 1, r),
                                               d.vcover.down(1, 1, s)));
      VForm apot = pullback(
          pi1, alt_form2(d.mg.A, d.pi[1][r], d.pi[1][s],
                         us.level[1], 1, d.mg.t));
      VForm res = sub(sub(add(add(sub(c.eta(r), c.eta(s)), sd0),
                              mc_pullback(d.act(r, s), vl1, T)),
                          sd1),
                      apot);
      cs.push_back(level_form_check("pgconn.eta", c1, p2, res, 1, tol.fd));
    }
  }

  {
    const IndexedCover& c2 = d.vcover.cover[2];
    if (c2.size() == 0) cs.push_back(none_check("pgconn.triple", tol.fd));
    SmoothMap pi2 = pimap(2);
    for (int r = 0; r < c2.size(); ++r) {
      auto ef = [&](int j) {
        return pullback(vs.d(2, j), c.eta(d.vcover.down(2, j, r)));
      };
      VForm res = sub(sub(add(add(mc_pullback(d.beta(r), vl2, T),
                                  pullback(pi2, d.mg.M(d.pi[2][r]))),
                              ef(1)),
                          ef(0)),
                      ef(2));
      cs.push_back(level_form_check("pgconn.triple", c2, {r}, res, 1,
                                    tol.fd));
    }
  }

  {
    const IndexedCover& c0 = d.vcover.cover[0];
    auto prs = inc_tuples(c0.size(), 2);
    if (prs.empty()) cs.push_back(none_check("pgconn.curving", tol.fd));
    for (const auto& p2 : prs) {
      int r = p2[0], s = p2[1];
      VForm res = sub(sub(c.B(r), c.B(s)), d_form(c.sigma(r, s)));
      cs.push_back(level_form_check("pgconn.curving", c0, p2, res, 2,
                                    tol.fd));
    }
  }

  {
    const IndexedCover& c1 = d.vcover.cover[1];
    if (c1.size() == 0) cs.push_back(none_check("pgconn.action", tol.fd));
    SmoothMap pi1 = pimap(1);
    SmoothMap tail1 = gslots_map(vl1, gs, mp);
    VForm rterm = wedge_pair(pullback(vs.d(1, 1), c.A),
                             pullback(tail1, maurer_cartan_right(G, gs)),
                             pd.pair);
    for (int r = 0; r < c1.size(); ++r) {
      VForm res =
          sub(sub(add(add(scale(-1.0, d_form(c.eta(r))),
                          pullback(pi1, curving_form(d.mg, d.pi[1][r]))),
                      pullback(vs.d(1, 1), c.B(d.vcover.down(1, 1, r)))),
                  pullback(vs.d(1, 0), c.B(d.vcover.down(1, 0, r)))),
              rterm);
      cs.push_back(level_form_check("pgconn.action", c1, {r}, res, 2,
                                    tol.fd));
    }
  }

  return cs;
}

std::vector<Report> check_pg_cover_presentation(const PgBundleData& d,
                                                int samples,
                                                std::uint64_t seed,
                                                const Tols& tol) {
  return run_checks(pg_bundle_checks(d, tol), samples, seed);
}

std::vector<Report> check_pg_cover_presentation(const PgBundleData& d,
                                                const PgConnection& c,
                                                const PairingData& pd,
                                                int samples,
                                                std::uint64_t seed,
                                                const Tols& tol) {
  std::vector<Check> cs = pg_bundle_checks(d, tol);
  std::vector<Check> cc = pg_conn_checks(d, c, pd, tol);
  cs.insert(cs.end(), cc.begin(), cc.end());
  return run_checks(cs, samples, seed);
}

}  // namespace hgt
