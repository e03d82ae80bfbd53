#include "hgt/multgerbe.hpp"

#include <algorithm>
#include <stdexcept>

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

// Placeholder for an identity with no index tuples on this cover; keeps the
// identity visible in reports as vacuous instead of silently absent.
Check none_check(const std::string& identity, double tol) {
  Check c;
  c.identity = identity;
  c.anchor = "none";
  c.tol = tol;
  c.draw = [](Rng&) -> std::optional<double> { return std::nullopt; };
  return c;
}

Check form_check(const std::string& identity, const IndexedCover& cov,
                 const std::vector<int>& tuple, const VForm& res, int args,
                 double tol) {
  Check c;
  c.identity = identity;
  c.anchor = cov.tuple_label(tuple);
  c.tol = tol;
  SpacePtr base = cov.base;
  c.draw = [cov, tuple, res, args, base](Rng& rng) -> std::optional<double> {
    auto p = cov.sample_overlap(tuple, rng);
    if (!p) return std::nullopt;
    std::vector<Vec> vs;
    vs.reserve(args);
    for (int a = 0; a < args; ++a) vs.push_back(base->random_tangent(*p, rng));
    return vres(res(*p, vs));
  };
  return c;
}

Check map_check(const std::string& identity, const IndexedCover& cov,
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

Vec cat2(const Vec& a, const Vec& b) {
  Vec r(a.size() + b.size());
  r << a, b;
  return r;
}

PointMap through_face(const PointMap& f, const SmoothMap& d) {
  auto fwd = d.fwd;
  return [f, fwd](const Vec& x) { return f(fwd(x)); };
}

}  // namespace

// ~~~~~~~~~~~~~~~~~~~~~~~~~ covers of nerve levels ~~~~~~~~~~~~~~~~~~~~~~~~~

SimplicialCover one_chart_simplicial_cover(const LieGroupModel& g, int N) {
  SimplicialCover c;
  c.nerve = group_nerve(g, N);
  c.cover.resize(N + 1);
  c.dmap.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    c.cover[n] = one_chart_cover(c.nerve.level[n], "all");
    if (n > 0) c.dmap[n].assign(n + 1, std::vector<int>(1, 0));
  }
  return c;
}

double cover_compat_residual(const SimplicialCover& c, Rng& rng, int samples) {
  int total = 0, bad = 0;
  for (int n = 1; n <= c.depth(); ++n) {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i < c.cover[n].size(); ++i) {
        for (int s = 0; s < samples; ++s) {
          auto p = c.cover[n].sample_overlap({i}, rng);
          if (!p) continue;
          ++total;
          if (!c.cover[n - 1].in(c.down(n, j, i), c.nerve.d(n, j)(*p))) ++bad;
        }
      }
    }
  }
  return total ? static_cast<double>(bad) / total : 0.0;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~ alternating-tuple access ~~~~~~~~~~~~~~~~~~~~~~~~

PointMap alt_map2(const std::function<PointMap(int, int)>& f, int i, int j,
                  const LieGroupModel& t) {
  if (i == j) {
    Vec id = t.id();
    return [id](const Vec&) { return id; };
  }
  if (i < j) return f(i, j);
  PointMap g = f(j, i);
  LieGroupModel tt = t;
  return [g, tt](const Vec& x) { return tt.inv(g(x)); };
}

PointMap alt_map3(const std::function<PointMap(int, int, int)>& f, int i,
                  int j, int k, const LieGroupModel& t) {
  if (i == j || j == k || i == k) {
    Vec id = t.id();
    return [id](const Vec&) { return id; };
  }
  int s[3] = {i, j, k};
  bool odd = false;
  if (s[0] > s[1]) { std::swap(s[0], s[1]); odd = !odd; }
  if (s[1] > s[2]) { std::swap(s[1], s[2]); odd = !odd; }
  if (s[0] > s[1]) { std::swap(s[0], s[1]); odd = !odd; }
  PointMap g = f(s[0], s[1], s[2]);
  if (!odd) return g;
  LieGroupModel tt = t;
  return [g, tt](const Vec& x) { return tt.inv(g(x)); };
}

VForm alt_form2(const std::function<VForm(int, int)>& f, int i, int j,
                SpacePtr base, int deg, const VSpace& V) {
  if (i == j) return zero_form(base, deg, V);
  if (i < j) return f(i, j);
  return scale(-1.0, f(j, i));
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~ cocycle checks ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

std::vector<Check> mult_checks(const MultGerbeData& g, const Tols& tol) {
  if (g.cover.depth() < 4)
    throw std::invalid_argument("mult_checks: cover depth must be at least 4");
  std::vector<Check> cs;
  const SimplicialSpace& s = g.cover.nerve;
  const LieGroupModel& T = g.T;
  Vec id = T.id();

  // transition cocycle on quadruple overlaps of the level-one cover
  {
    const IndexedCover& cov = g.cover.cover[1];
    auto quads = inc_tuples(cov.size(), 4);
    if (quads.empty()) cs.push_back(none_check("mult.lambda.cocycle", tol.alg));
    for (const auto& q : quads) {
      auto lam = g.lambda;
      auto at = [lam](const std::vector<int>& t) {
        return lam(t[0], t[1], t[2]);
      };
      cs.push_back(map_check("mult.lambda.cocycle", cov, q,
                             cover_delta_map(at, q, T), id, tol.alg));
    }
  }

  // the product comparison trades its own boundary for transitions pulled
  // back along the three faces
  {
    const IndexedCover& cov = g.cover.cover[2];
    auto tris = inc_tuples(cov.size(), 3);
    if (tris.empty()) cs.push_back(none_check("mult.m.cocycle", tol.alg));
    for (const auto& t3 : tris) {
      auto lam_face = [&](int j) {
        PointMap lm =
            alt_map3(g.lambda, g.cover.down(2, j, t3[0]),
                     g.cover.down(2, j, t3[1]), g.cover.down(2, j, t3[2]), T);
        return through_face(lm, s.d(2, j));
      };
      PointMap prod = quotient_product(
          {g.m(t3[0], t3[1]), g.m(t3[1], t3[2]), lam_face(1)},
          {g.m(t3[0], t3[2]), lam_face(0), lam_face(2)}, T);
      cs.push_back(map_check("mult.m.cocycle", cov, t3, prod, id, tol.alg));
    }
  }

  // the associator compares the four face pullbacks of the comparison
  {
    const IndexedCover& cov = g.cover.cover[3];
    auto prs = inc_tuples(cov.size(), 2);
    if (prs.empty()) cs.push_back(none_check("mult.alpha.cocycle", tol.alg));
    for (const auto& p2 : prs) {
      auto m_face = [&](int j) {
        PointMap mm = alt_map2(g.m, g.cover.down(3, j, p2[0]),
                               g.cover.down(3, j, p2[1]), T);
        return through_face(mm, s.d(3, j));
      };
      PointMap prod =
          quotient_product({g.alpha(p2[0]), m_face(3), m_face(1)},
                           {g.alpha(p2[1]), m_face(2), m_face(0)}, T);
      cs.push_back(map_check("mult.alpha.cocycle", cov, p2, prod, id, tol.alg));
    }
  }

  // the five face pullbacks of the associator cancel
  {
    const IndexedCover& cov = g.cover.cover[4];
    if (cov.size() == 0) cs.push_back(none_check("mult.pentagon", tol.alg));
    for (int i = 0; i < cov.size(); ++i) {
      auto a_face = [&](int j) {
        return through_face(g.alpha(g.cover.down(4, j, i)), s.d(4, j));
      };
      PointMap prod = quotient_product({a_face(4), a_face(2), a_face(0)},
                                       {a_face(3), a_face(1)}, T);
      cs.push_back(map_check("mult.pentagon", cov, {i}, prod, id, tol.alg));
    }
  }

  if (!g.has_conn) return cs;

  // potential cochain against the transition frame
  {
    const IndexedCover& cov = g.cover.cover[1];
    auto tris = inc_tuples(cov.size(), 3);
    if (tris.empty()) cs.push_back(none_check("mult.conn.lambda", tol.fd));
    for (const auto& t3 : tris) {
      auto gA = g.A;
      auto at = [gA](const std::vector<int>& t) { return gA(t[0], t[1]); };
      VForm res = sub(cover_delta_form(at, t3),
                      mc_pullback(g.lambda(t3[0], t3[1], t3[2]), cov.base, T));
      cs.push_back(form_check("mult.conn.lambda", cov, t3, res, 1, tol.fd));
    }
  }

  // level-two potentials differ by face pullbacks of the level-one ones
  // and the frame of the comparison
  {
    const IndexedCover& cov = g.cover.cover[2];
    auto prs = inc_tuples(cov.size(), 2);
    if (prs.empty()) cs.push_back(none_check("mult.conn.m", tol.fd));
    for (const auto& p2 : prs) {
      auto A_face = [&](int j) {
        return pullback(
            s.d(2, j),
            alt_form2(g.A, g.cover.down(2, j, p2[0]),
                      g.cover.down(2, j, p2[1]), g.cover.cover[1].base, 1,
                      g.t));
      };
      VForm res = add(sub(g.M(p2[0]), g.M(p2[1])),
                      add(sub(A_face(1), add(A_face(0), A_face(2))),
                          mc_pullback(g.m(p2[0], p2[1]), cov.base, T)));
      cs.push_back(form_check("mult.conn.m", cov, p2, res, 1, tol.fd));
    }
  }

  // the frame of the associator matches the alternating face sum of the
  // level-two potentials
  {
    const IndexedCover& cov = g.cover.cover[3];
    if (cov.size() == 0) cs.push_back(none_check("mult.conn.alpha", tol.fd));
    for (int i = 0; i < cov.size(); ++i) {
      auto M_face = [&](int j) {
        return pullback(s.d(3, j), g.M(g.cover.down(3, j, i)));
      };
      VForm res = add(mc_pullback(g.alpha(i), cov.base, T),
                      sub(add(M_face(0), M_face(2)),
                          add(M_face(1), M_face(3))));
      cs.push_back(form_check("mult.conn.alpha", cov, {i}, res, 1, tol.fd));
    }
  }

  return cs;
}

std::vector<Report> check_mult(const MultGerbeData& g, int samples,
                               std::uint64_t seed, const Tols& tol) {
  return run_checks(mult_checks(g, tol), samples, seed);
}

// ~~~~~~~~~~~~~~~~~~~~~ derived pairing and its forms ~~~~~~~~~~~~~~~~~~~~~~

namespace {

VForm mu_form(const LieGroupModel& G, SpacePtr gs, const Pairing& pr) {
  VForm th = maurer_cartan_left(G, gs);
  return scale(1.0 / 6.0, wedge_pair(th, wedge_bracket(th, th, G), pr));
}

VForm nu_form(const LieGroupModel& G, const SimplicialSpace& nerve,
              const Pairing& pr) {
  SpacePtr g1 = nerve.level[1];
  VForm thl = maurer_cartan_left(G, g1);
  VForm thr = maurer_cartan_right(G, g1);
  return scale(-1.0, wedge_pair(pullback(nerve.d(2, 2), thl),
                                pullback(nerve.d(2, 0), thr), pr));
}

// Pairing table at a concrete basepoint: both algebra vectors are carried to
// the two slots by the translations that fix the comparison's frame there.
std::vector<std::vector<Vec>> dm_table(const MultGerbeData& g, const Vec& p2,
                                       int i2) {
  const LieGroupModel& G = g.G;
  int m = G.amb();
  Vec g1 = slot(p2, 0, m), g2 = slot(p2, 1, m);
  VForm dM = d_form(g.M(i2));
  VSpace ga = algebra_space(G);
  int d = G.dim();
  Vec zero = Vec::Zero(m);
  std::vector<Vec> right(d), left(d);
  for (int a = 0; a < d; ++a) {
    right[a] = cat2(zero, G.rmul_tan(ga.basis[a], g2));
    left[a] = cat2(G.lmul_tan(g1, ga.basis[a]), zero);
  }
  std::vector<std::vector<Vec>> t(d, std::vector<Vec>(d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      t[a][b] = Vec(0.5 * (dM(p2, {right[a], left[b]}) +
                           dM(p2, {right[b], left[a]})));
  return t;
}

}  // namespace

PairingData pairing_data(const LieGroupModel& G, const SimplicialSpace& nerve,
                         const Pairing& pr) {
  PairingData p;
  p.G = G;
  p.nerve = nerve;
  p.pair = pr;
  VSpace ga = algebra_space(G);
  p.table.assign(G.dim(), std::vector<Vec>(G.dim()));
  for (int a = 0; a < G.dim(); ++a)
    for (int b = 0; b < G.dim(); ++b)
      p.table[a][b] = pr.eval(ga.basis[a], ga.basis[b]);
  p.mu = mu_form(G, nerve.level[1], pr);
  p.nu = nu_form(G, nerve, pr);
  return p;
}

PairingData pairing_data(const LieGroupModel& G, const Pairing& pr) {
  return pairing_data(G, group_nerve(G, 3), pr);
}

PairingData extract_pairing(const MultGerbeData& g, std::uint64_t seed) {
  if (!g.has_conn)
    throw std::invalid_argument("extract_pairing: no potentials present");
  const IndexedCover& cov2 = g.cover.cover[2];
  Vec p2 = cat2(g.G.id(), g.G.id());
  int i2 = -1;
  for (int i = 0; i < cov2.size() && i2 < 0; ++i)
    if (cov2.in(i, p2)) i2 = i;
  if (i2 < 0) {
    Rng rng(seed);
    for (int i = 0; i < cov2.size() && i2 < 0; ++i) {
      auto q = cov2.sample_overlap({i}, rng);
      if (q) {
        i2 = i;
        p2 = *q;
      }
    }
  }
  if (i2 < 0)
    throw std::domain_error("extract_pairing: no admissible basepoint");

  auto table = dm_table(g, p2, i2);
  Chart at_id = g.G.chart(g.G.id());
  int d = g.G.dim();
  int ta = g.t.amb;
  Pairing pr;
  pr.out = g.t;
  pr.eval = [table, at_id, d, ta](const Vec& u, const Vec& v) {
    RVec cu = chart_coords(at_id, u), cv = chart_coords(at_id, v);
    Vec acc = Vec::Zero(ta);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) acc += cu[a] * cv[b] * table[a][b];
    return acc;
  };
  PairingData p = pairing_data(g.G, g.cover.nerve, pr);
  p.table = table;  // keep the frozen basepoint table
  return p;
}

std::vector<Check> pairing_checks(const PairingData& p, const Tols& tol) {
  std::vector<Check> cs;
  const LieGroupModel& G = p.G;
  const SimplicialSpace& s = p.nerve;
  SpacePtr g1 = s.level[1];
  Vec e = G.id();

  {
    Check c;
    c.identity = "pairing.symmetric";
    c.anchor = G.name;
    c.tol = tol.alg;
    Pairing pr = p.pair;
    c.draw = [pr, g1, e](Rng& rng) -> std::optional<double> {
      Vec u = g1->random_tangent(e, rng), v = g1->random_tangent(e, rng);
      return vres(Vec(pr.eval(u, v) - pr.eval(v, u)));
    };
    cs.push_back(c);
  }

  {
    Check c;
    c.identity = "pairing.ad";
    c.anchor = G.name;
    c.tol = tol.fd;
    Pairing pr = p.pair;
    LieGroupModel g = G;
    c.draw = [pr, g, g1, e](Rng& rng) -> std::optional<double> {
      Vec gg = g1->sample(rng);
      Vec u = g1->random_tangent(e, rng), v = g1->random_tangent(e, rng);
      return vres(
          Vec(pr.eval(g.Ad(gg, u), g.Ad(gg, v)) - pr.eval(u, v)));
    };
    cs.push_back(c);
  }

  {
    Check c;
    c.identity = "pairing.mu.closed";
    c.anchor = G.name;
    c.tol = tol.fd2;
    VForm dmu = d_form(p.mu);
    c.draw = [dmu, g1](Rng& rng) -> std::optional<double> {
      Vec q = g1->sample(rng);
      std::vector<Vec> vs;
      for (int a = 0; a < 4; ++a) vs.push_back(g1->random_tangent(q, rng));
      return vres(dmu(q, vs));
    };
    cs.push_back(c);
  }

  {
    Check c;
    c.identity = "pairing.delta";
    c.anchor = G.name + "^2";
    c.tol = tol.fd2;
    VForm mu = p.mu;
    VForm res = add(level_delta_form(s, 2, [mu](int) { return mu; }),
                    d_form(p.nu));
    SpacePtr g2 = s.level[2];
    c.draw = [res, g2](Rng& rng) -> std::optional<double> {
      Vec q = g2->sample(rng);
      std::vector<Vec> vs;
      for (int a = 0; a < 3; ++a) vs.push_back(g2->random_tangent(q, rng));
      return vres(res(q, vs));
    };
    cs.push_back(c);
  }

  {
    Check c;
    c.identity = "pairing.nu.cocycle";
    c.anchor = G.name + "^3";
    c.tol = tol.alg;
    VForm nu = p.nu;
    VForm res = level_delta_form(s, 3, [nu](int) { return nu; });
    SpacePtr g3 = s.level[3];
    c.draw = [res, g3](Rng& rng) -> std::optional<double> {
      Vec q = g3->sample(rng);
      std::vector<Vec> vs;
      for (int a = 0; a < 2; ++a) vs.push_back(g3->random_tangent(q, rng));
      return vres(res(q, vs));
    };
    cs.push_back(c);
  }

  return cs;
}

std::vector<Report> check_pairing(const PairingData& p, int samples,
                                  std::uint64_t seed, const Tols& tol) {
  return run_checks(pairing_checks(p, tol), samples, seed);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~ curving tensors ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TwoTensor curving_tensor(const MultGerbeData& g, int i1) {
  if (!g.has_conn)
    throw std::invalid_argument("curving_tensor: no potentials present");
  TwoTensor t;
  t.base = g.cover.cover[1].base;
  t.V = g.t;
  MultGerbeData gg = g;
  t.eval = [gg, i1](const Vec& p, const Vec& u, const Vec& v) {
    const LieGroupModel& G = gg.G;
    int m = G.amb();
    Vec p2 = cat2(G.inv(p), p);
    const IndexedCover& cov2 = gg.cover.cover[2];
    int i2 = -1;
    for (int i = 0; i < cov2.size() && i2 < 0; ++i)
      if (cov2.in(i, p2)) i2 = i;
    if (i2 < 0)
      throw std::domain_error(
          "curving_tensor: inverse pair lies in no level-two chart");
    VForm dM = d_form(gg.M(i2));
    Vec val = dM(p2, {cat2(G.inv_tan(p, u), u), cat2(Vec::Zero(m), v)});
    VForm dA = d_form(alt_form2(gg.A, i1, gg.cover.down(2, 0, i2),
                                gg.cover.cover[1].base, 1, gg.t));
    return Vec(val + dA(p, {u, v}));
  };
  return t;
}

VForm curving_form(const MultGerbeData& g, int i1) {
  return alt_part(curving_tensor(g, i1));
}

std::vector<Check> curving_checks(const MultGerbeData& g, const PairingData& p,
                                  const Tols& tol) {
  if (!g.has_conn)
    throw std::invalid_argument("curving_checks: no potentials present");
  std::vector<Check> cs;
  const IndexedCover& cov1 = g.cover.cover[1];
  const IndexedCover& cov2 = g.cover.cover[2];
  const SimplicialSpace& s = g.cover.nerve;

  // the extracted table does not depend on where it was read off
  for (int i = 0; i < cov2.size(); ++i) {
    Check c;
    c.identity = "mult.pairing.basepoint";
    c.anchor = cov2.tuple_label({i});
    c.tol = tol.fd2;
    MultGerbeData gg = g;
    auto table = p.table;
    IndexedCover cc = cov2;
    int i2 = i;
    c.draw = [gg, table, cc, i2](Rng& rng) -> std::optional<double> {
      auto q = cc.sample_overlap({i2}, rng);
      if (!q) return std::nullopt;
      auto t2 = dm_table(gg, *q, i2);
      double r = 0;
      for (size_t a = 0; a < table.size(); ++a)
        for (size_t b = 0; b < table.size(); ++b)
          r = std::max(r, vres(Vec(t2[a][b] - table[a][b])));
      return r;
    };
    cs.push_back(c);
  }

  // curvings on overlapping charts differ by the potential's derivative
  {
    auto prs = inc_tuples(cov1.size(), 2);
    if (prs.empty()) cs.push_back(none_check("mult.curving.cochain", tol.fd));
    for (const auto& p2 : prs) {
      VForm res = sub(sub(curving_form(g, p2[0]), curving_form(g, p2[1])),
                      d_form(g.A(p2[0], p2[1])));
      cs.push_back(
          form_check("mult.curving.cochain", cov1, p2, res, 2, tol.fd));
    }
  }

  // each curving has curvature mu
  for (int i = 0; i < cov1.size(); ++i) {
    VForm res = sub(d_form(curving_form(g, i)), p.mu);
    cs.push_back(
        form_check("mult.curving.curvature", cov1, {i}, res, 3, tol.fd2));
  }

  // the symmetric part is the pairing in the left frame
  for (int i = 0; i < cov1.size(); ++i) {
    TwoTensor en = curving_tensor(g, i);
    Pairing pr = p.pair;
    LieGroupModel G = g.G;
    Check c;
    c.identity = "mult.curving.sym";
    c.anchor = cov1.tuple_label({i});
    c.tol = tol.fd;
    IndexedCover cc = cov1;
    SpacePtr base = cov1.base;
    std::vector<int> tup{i};
    c.draw = [en, pr, G, cc, base, tup](Rng& rng) -> std::optional<double> {
      auto q = cc.sample_overlap(tup, rng);
      if (!q) return std::nullopt;
      Vec u = base->random_tangent(*q, rng);
      Vec v = base->random_tangent(*q, rng);
      Vec gi = G.inv(*q);
      Vec sym = 0.5 * (en.eval(*q, u, v) + en.eval(*q, v, u));
      return vres(Vec(sym - pr.eval(G.lmul_tan(gi, u), G.lmul_tan(gi, v))));
    };
    cs.push_back(c);
  }

  // curvature of the comparison, measured against the face pullbacks of the
  // curvings, reproduces nu
  for (int i = 0; i < cov2.size(); ++i) {
    auto Th = [&](int j) {
      return pullback(s.d(2, j), curving_form(g, g.cover.down(2, j, i)));
    };
    VForm res =
        sub(sub(d_form(g.M(i)), sub(add(Th(0), Th(2)), Th(1))), p.nu);
    cs.push_back(
        form_check("mult.curving.product", cov2, {i}, res, 2, tol.fd));
  }

  return cs;
}

std::vector<Report> check_curving(const MultGerbeData& g, const PairingData& p,
                                  int samples, std::uint64_t seed,
                                  const Tols& tol) {
  return run_checks(curving_checks(g, p, tol), samples, seed);
}

// ~~~~~~~~~~~ dictionaries between level forms and group cochains ~~~~~~~~~~

namespace {

// Sampled closedness gate for dictionary inputs. The scale comes from the
// face values so that a legitimately large form is not rejected for noise.
void require_level_closed(const SimplicialSpace& s, const VForm& f, int n,
                          const char* what) {
  VForm d = level_delta_form(s, n, [f](int) { return f; });
  SpacePtr lev = s.level[n];
  Rng rng(0xC10D);
  double worst = 0, scale = 1;
  for (int k = 0; k < 8; ++k) {
    Vec p = lev->sample(rng);
    std::vector<Vec> vs;
    for (int a = 0; a < f.deg; ++a) vs.push_back(lev->random_tangent(p, rng));
    worst = std::max(worst, vres(d(p, vs)));
    for (int j = 0; j <= n; ++j) {
      Vec q = s.d(n, j)(p);
      std::vector<Vec> ws;
      for (const Vec& v : vs) ws.push_back(s.d(n, j).push(p, v));
      scale = std::max(scale, vres(f(q, ws)));
    }
  }
  if (worst > 1e-6 * scale)
    throw std::invalid_argument(std::string(what) +
                                ": input fails the level cocycle test");
}

}  // namespace

double cocycle_residual(const LieGroupModel& G, const GroupCocycle& k,
                        Rng& rng, int samples) {
  ChartedSpace gs = G.space();
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    Vec a = gs.sample(rng), b = gs.sample(rng);
    Vec v = gs.random_tangent(G.id(), rng);
    Vec lhs = k(G.mul(a, b), v);
    Vec rhs = k(a, v) + k(b, G.Ad(G.inv(a), v));
    worst = std::max(worst, vres(Vec(lhs - rhs)));
  }
  return worst;
}

GroupCocycle cocycle_of_form(const SimplicialSpace& nerve,
                             const LieGroupModel& G, const VForm& tau) {
  if (tau.deg != 1)
    throw std::invalid_argument("cocycle_of_form: expected a one-form");
  require_level_closed(nerve, tau, 3, "cocycle_of_form");
  LieGroupModel g = G;
  VForm t = tau;
  return [g, t](const Vec& gg, const Vec& v) {
    int m = g.amb();
    Vec gi = g.inv(gg);
    Vec zero = Vec::Zero(m);
    Vec a = t(cat2(gi, g.id()), {cat2(zero, v)});
    Vec b = t(cat2(gi, gg), {cat2(g.lmul_tan(gi, v), zero)});
    return Vec(a + b);
  };
}

VForm form_of_cocycle(const SimplicialSpace& nerve, const LieGroupModel& G,
                      const GroupCocycle& kappa, const VSpace& V) {
  VForm r;
  r.base = nerve.level[2];
  r.deg = 1;
  r.V = V;
  LieGroupModel g = G;
  r.eval = [g, kappa](const Vec& p, const std::vector<Vec>& vs) {
    int m = g.amb();
    Vec g1 = slot(p, 0, m), g2 = slot(p, 1, m);
    return kappa(g2, g.lmul_tan(g.inv(g1), slot(vs[0], 0, m)));
  };
  return r;
}

Pairing pairing_of_form(const SimplicialSpace& nerve, const LieGroupModel& G,
                        const VForm& nu) {
  if (nu.deg != 2)
    throw std::invalid_argument("pairing_of_form: expected a two-form");
  require_level_closed(nerve, nu, 3, "pairing_of_form");
  LieGroupModel g = G;
  VForm n = nu;
  Pairing pr;
  pr.out = nu.V;
  pr.eval = [g, n](const Vec& u, const Vec& v) {
    int m = g.amb();
    Vec pid = cat2(g.id(), g.id());
    Vec zero = Vec::Zero(m);
    Vec a = n(pid, {cat2(zero, u), cat2(v, zero)});
    Vec b = n(pid, {cat2(zero, v), cat2(u, zero)});
    return Vec(0.5 * (a + b));
  };
  return pr;
}

VForm form_of_pairing(const SimplicialSpace& nerve, const LieGroupModel& G,
                      const Pairing& pr) {
  return nu_form(G, nerve, pr);
}

}  // namespace hgt
