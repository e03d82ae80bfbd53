#include "hgt/gerbe.hpp"

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

VForm map_values(const VForm& a, const Mat& dj, const VSpace& V) {
  VForm r = a;
  r.V = V;
  FormEval e = a.eval;
  r.eval = [e, dj](const Vec& p, const std::vector<Vec>& vs) {
    return Vec(dj * e(p, vs));
  };
  r.dexact = nullptr;
  if (a.dexact) {
    FormEval de = a.dexact;
    r.dexact = [de, dj](const Vec& p, const std::vector<Vec>& vs) {
      return Vec(dj * de(p, vs));
    };
  }
  return r;
}

}  // namespace

int GerbeData::pick_chart(const Vec& p) const {
  if (pick) return pick(p);
  for (int i = 0; i < cover.size(); ++i)
    if (cover.in(i, p)) return i;
  throw std::domain_error("pick_chart: point lies in no chart");
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~ identity checks ~~~~~~~~~~~~~~~~~~~~~~~~~~~~

std::vector<Check> gerbe_checks(const GerbeData& g, const Tols& tol) {
  std::vector<Check> cs;
  const IndexedCover& cov = g.cover;
  SpacePtr base = cov.base;
  const int n = cov.size();

  auto quads = inc_tuples(n, 4);
  if (quads.empty()) cs.push_back(none_check("gerbe.cocycle", tol.alg));
  for (const auto& q : quads) {
    GerbeData gg = g;
    auto at = [gg](const std::vector<int>& t) {
      return gg.lambda(t[0], t[1], t[2]);
    };
    PointMap prod = cover_delta_map(at, q, g.T);
    Vec id = g.T.id();
    Check c;
    c.identity = "gerbe.cocycle";
    c.anchor = cov.tuple_label(q);
    c.tol = tol.alg;
    c.draw = [cov, q, prod, id](Rng& rng) -> std::optional<double> {
      auto p = cov.sample_overlap(q, rng);
      if (!p) return std::nullopt;
      return vres(prod(*p) - id);
    };
    cs.push_back(c);
  }

  if (g.has_conn) {
    auto tris = inc_tuples(n, 3);
    if (tris.empty()) cs.push_back(none_check("gerbe.connective", tol.fd));
    for (const auto& t3 : tris) {
      GerbeData gg = g;
      auto at = [gg](const std::vector<int>& t) { return gg.conn(t[0], t[1]); };
      VForm res = sub(cover_delta_form(at, t3),
                      mc_pullback(g.lambda(t3[0], t3[1], t3[2]), base, g.T));
      cs.push_back(form_check("gerbe.connective", cov, t3, res, 1, tol.fd));
    }
  }

  if (g.has_conn && g.has_curving) {
    for (const auto& pr : inc_tuples(n, 2)) {
      VForm res = sub(sub(g.curving(pr[0]), g.curving(pr[1])),
                      d_form(g.conn(pr[0], pr[1])));
      cs.push_back(form_check("gerbe.curving", cov, pr, res, 2, tol.fd));
    }
  }

  if (g.has_conn && g.has_curving && g.has_sym) {
    for (const auto& pr : inc_tuples(n, 2)) {
      TwoTensor bi = combine(g.curving(pr[0]), g.sym_curving(pr[0]));
      TwoTensor bj = combine(g.curving(pr[1]), g.sym_curving(pr[1]));
      VForm da = d_form(g.conn(pr[0], pr[1]));
      Check c;
      c.identity = "gerbe.curving.enhanced";
      c.anchor = cov.tuple_label(pr);
      c.tol = tol.fd;
      std::vector<int> t2 = pr;
      c.draw = [cov, t2, bi, bj, da, base](Rng& rng) -> std::optional<double> {
        auto p = cov.sample_overlap(t2, rng);
        if (!p) return std::nullopt;
        Vec u = base->random_tangent(*p, rng);
        Vec v = base->random_tangent(*p, rng);
        std::vector<Vec> vs{u, v};
        return vres(bi.eval(*p, u, v) - bj.eval(*p, u, v) - da(*p, vs));
      };
      cs.push_back(c);
    }
  }

  return cs;
}

std::vector<Check> curvature_checks(const GerbeData& g, const Tols& tol) {
  if (!g.has_curving)
    throw std::invalid_argument("curvature_checks: gerbe has no curving");
  std::vector<Check> cs;
  const IndexedCover& cov = g.cover;
  const int n = cov.size();

  for (const auto& pr : inc_tuples(n, 2)) {
    VForm res = sub(d_form(g.curving(pr[0])), d_form(g.curving(pr[1])));
    cs.push_back(form_check("gerbe.curvature.overlap", cov, pr, res, 3,
                            tol.fd));
  }
  if (n < 2) cs.push_back(none_check("gerbe.curvature.overlap", tol.fd));

  for (int i = 0; i < n; ++i) {
    VForm res = d_form(d_form(g.curving(i)));
    cs.push_back(form_check("gerbe.curvature.closed", cov, {i}, res, 4,
                            tol.fd2));
  }
  return cs;
}

std::vector<Check> iso_checks(const GerbeIso& f, const GerbeData& src,
                              const GerbeData& dst, const Tols& tol) {
  if (src.cover.base != dst.cover.base || src.cover.names != dst.cover.names)
    throw std::invalid_argument("iso_checks: covers differ");
  if (src.T.name != dst.T.name)
    throw std::invalid_argument("iso_checks: structure groups differ");

  std::vector<Check> cs;
  const IndexedCover& cov = src.cover;
  SpacePtr base = cov.base;
  const int n = cov.size();

  auto tris = inc_tuples(n, 3);
  if (tris.empty()) cs.push_back(none_check("gerbe.iso.cocycle", tol.alg));
  for (const auto& t3 : tris) {
    int a = t3[0], b = t3[1], c3 = t3[2];
    PointMap prod = quotient_product(
        {f.s(a, c3), src.lambda(a, b, c3)},
        {dst.lambda(a, b, c3), f.s(b, c3), f.s(a, b)}, src.T);
    Vec id = src.T.id();
    Check c;
    c.identity = "gerbe.iso.cocycle";
    c.anchor = cov.tuple_label(t3);
    c.tol = tol.alg;
    c.draw = [cov, t3, prod, id](Rng& rng) -> std::optional<double> {
      auto p = cov.sample_overlap(t3, rng);
      if (!p) return std::nullopt;
      return vres(prod(*p) - id);
    };
    cs.push_back(c);
  }

  if (f.has_conn && src.has_conn && dst.has_conn) {
    for (const auto& pr : inc_tuples(n, 2)) {
      int a = pr[0], b = pr[1];
      VForm rhs = sub(sub(src.conn(a, b), dst.conn(a, b)),
                      mc_pullback(f.s(a, b), base, src.T));
      VForm res = sub(sub(f.conn(a), f.conn(b)), rhs);
      cs.push_back(form_check("gerbe.iso.connection", cov, pr, res, 1,
                              tol.fd));
    }
  }

  if (f.has_conn && src.has_curving && dst.has_curving) {
    for (int a = 0; a < n; ++a) {
      VForm dF = d_form(iso_curvature(f, src, dst, a));
      VForm dH = sub(d_form(dst.curving(a)), d_form(src.curving(a)));
      cs.push_back(form_check("gerbe.iso.bianchi", cov, {a}, sub(dF, dH), 3,
                              tol.fd2));
    }
  }
  return cs;
}

std::vector<Check> semiconn_checks(const SemiconnData& d, const GerbeData& g,
                                   const Tols& tol) {
  const IndexedCover& cov = g.cover;
  SpacePtr base = cov.base;
  if (!base->J)
    throw std::invalid_argument("semiconn_checks: base has no complex structure");
  if (!g.t.i_closed)
    throw std::invalid_argument("semiconn_checks: coefficients not complex");

  std::vector<Check> cs;
  const int n = cov.size();
  const bool one = d.flavor == SemiFlavor::one;
  const char* pre = one ? "semi1" : "semi2";
  auto name = [pre](const char* s) { return std::string(pre) + "." + s; };

  // type conformance of the provided components
  if (one) {
    for (const auto& pr : inc_tuples(n, 2)) {
      VForm Dij = d.Dij(pr[0], pr[1]);
      VForm res = sub(Dij, type_component(Dij, 0, 1));
      cs.push_back(form_check(name("types"), cov, pr, res, 1, tol.alg));
    }
    for (int i = 0; i < n; ++i) {
      VForm Di = d.Di(i);
      VForm res = sub(Di, type_component(Di, 0, 2));
      cs.push_back(form_check(name("types"), cov, {i}, res, 2, tol.alg));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      VForm Di = d.Di(i);
      VForm res = sub(Di, add(type_component(Di, 1, 1),
                              type_component(Di, 0, 2)));
      cs.push_back(form_check(name("types"), cov, {i}, res, 2, tol.alg));
    }
  }

  auto tris = inc_tuples(n, 3);
  if (tris.empty()) cs.push_back(none_check(name("cochain"), tol.fd));
  for (const auto& t3 : tris) {
    SemiconnData dd = d;
    auto at = [dd](const std::vector<int>& t) { return dd.Dij(t[0], t[1]); };
    VForm lt = mc_pullback(g.lambda(t3[0], t3[1], t3[2]), base, g.T);
    if (one) lt = type_component(lt, 0, 1);
    VForm res = sub(cover_delta_form(at, t3), lt);
    cs.push_back(form_check(name("cochain"), cov, t3, res, 1, tol.fd));
  }

  for (const auto& pr : inc_tuples(n, 2)) {
    VForm dDij = d_form(d.Dij(pr[0], pr[1]));
    VForm proj = one ? type_component(dDij, 0, 2)
                     : add(type_component(dDij, 1, 1),
                           type_component(dDij, 0, 2));
    VForm res = sub(sub(d.Di(pr[0]), d.Di(pr[1])), proj);
    cs.push_back(form_check(name("curving"), cov, pr, res, 2, tol.fd));
  }

  for (int i = 0; i < n; ++i) {
    VForm dDi = d_form(d.Di(i));
    VForm res = one ? type_component(dDi, 0, 3)
                    : add(type_component(dDi, 1, 2),
                          type_component(dDi, 0, 3));
    cs.push_back(form_check(name("closed"), cov, {i}, res, 3, tol.fd));
  }
  return cs;
}

std::vector<Report> check_gerbe(const GerbeData& g, int samples,
                                std::uint64_t seed, const Tols& tol) {
  return run_checks(gerbe_checks(g, tol), samples, seed);
}

std::vector<Report> check_iso(const GerbeIso& f, const GerbeData& src,
                              const GerbeData& dst, int samples,
                              std::uint64_t seed, const Tols& tol) {
  return run_checks(iso_checks(f, src, dst, tol), samples, seed);
}

std::vector<Report> check_semiconn(const SemiconnData& d, const GerbeData& g,
                                   int samples, std::uint64_t seed,
                                   const Tols& tol) {
  return run_checks(semiconn_checks(d, g, tol), samples, seed);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ curvature ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

VForm gerbe_curvature(const GerbeData& g, int i) {
  if (!g.has_curving)
    throw std::invalid_argument("gerbe_curvature: gerbe has no curving");
  return d_form(g.curving(i));
}

VForm gerbe_curvature(const GerbeData& g) {
  if (!g.has_curving)
    throw std::invalid_argument("gerbe_curvature: gerbe has no curving");
  std::vector<FormEval> dbs;
  for (int i = 0; i < g.cover.size(); ++i)
    dbs.push_back(gerbe_curvature(g, i).eval);
  VForm r;
  r.base = g.cover.base;
  r.deg = 3;
  r.V = g.t;
  GerbeData gg = g;
  r.eval = [gg, dbs](const Vec& p, const std::vector<Vec>& vs) {
    return dbs[gg.pick_chart(p)](p, vs);
  };
  return r;
}

VForm iso_curvature(const GerbeIso& f, const GerbeData& src,
                    const GerbeData& dst, int a) {
  if (!f.has_conn || !src.has_curving || !dst.has_curving)
    throw std::invalid_argument("iso_curvature: missing connection or curving");
  return add(sub(d_form(f.conn(a)), src.curving(a)), dst.curving(a));
}

VForm iso_curvature(const GerbeIso& f, const GerbeData& src,
                    const GerbeData& dst) {
  std::vector<FormEval> fs;
  for (int a = 0; a < src.cover.size(); ++a)
    fs.push_back(iso_curvature(f, src, dst, a).eval);
  VForm r;
  r.base = src.cover.base;
  r.deg = 2;
  r.V = src.t;
  GerbeData gg = src;
  r.eval = [gg, fs](const Vec& p, const std::vector<Vec>& vs) {
    return fs[gg.pick_chart(p)](p, vs);
  };
  return r;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~ complexification ~~~~~~~~~~~~~~~~~~~~~~~~~~~~

GerbeData complexify(const GerbeData& g, const LieGroupModel& dst,
                     const std::function<Vec(const Vec&)>& jmap,
                     const Mat& dj, const VSpace& t_out) {
  GerbeData out = g;
  out.T = dst;
  out.t = t_out;
  auto lam = g.lambda;
  out.lambda = [lam, jmap](int i, int j, int k) {
    PointMap f = lam(i, j, k);
    return PointMap([f, jmap](const Vec& x) { return jmap(f(x)); });
  };
  if (g.has_conn) {
    auto cn = g.conn;
    out.conn = [cn, dj, t_out](int i, int j) {
      return map_values(cn(i, j), dj, t_out);
    };
  }
  if (g.has_curving) {
    auto cv = g.curving;
    out.curving = [cv, dj, t_out](int i) {
      return map_values(cv(i), dj, t_out);
    };
  }
  if (g.has_sym) {
    auto sc = g.sym_curving;
    out.sym_curving = [sc, dj, t_out](int i) {
      SymTensor h = sc(i);
      SymTensor r = h;
      r.V = t_out;
      auto e = h.eval;
      r.eval = [e, dj](const Vec& p, const Vec& u, const Vec& v) {
        return Vec(dj * e(p, u, v));
      };
      return r;
    };
  }
  return out;
}

}  // namespace hgt
