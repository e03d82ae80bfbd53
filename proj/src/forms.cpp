#include "hgt/forms.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace hgt {

VSpace scalar_real(std::optional<cplx> lattice) {
  VSpace v;
  v.name = "R";
  v.amb = 1;
  Vec one(1);
  one[0] = 1.0;
  v.basis = {one};
  v.lattice = lattice;
  v.conj = [](const Vec& x) { return Vec(x.conjugate()); };
  return v;
}

VSpace scalar_complex(std::optional<cplx> lattice) {
  VSpace v;
  v.name = "C";
  v.amb = 1;
  Vec one(1), i1(1);
  one[0] = 1.0;
  i1[0] = kI;
  v.basis = {one, i1};
  v.i_closed = true;
  v.lattice = lattice;
  v.conj = [](const Vec& x) { return Vec(x.conjugate()); };
  return v;
}

VSpace algebra_space(const LieGroupModel& g) {
  VSpace v;
  v.name = "Lie(" + g.name + ")";
  v.amb = g.amb();
  for (const Mat& b : g.alg) v.basis.push_back(flat(b));
  v.i_closed = g.complex_group;
  return v;
}

VForm zero_form(SpacePtr base, int deg, VSpace V) {
  VForm r;
  r.base = base;
  r.deg = deg;
  r.V = V;
  int m = V.amb;
  r.eval = [m](const Vec&, const std::vector<Vec>&) { return Vec::Zero(m); };
  r.dexact = r.eval;
  return r;
}

VForm d_form(const VForm& a) {
  VForm r;
  r.base = a.base;
  r.deg = a.deg + 1;
  r.V = a.V;
  if (a.dexact) {
    r.eval = a.dexact;
    return r;
  }
  SpacePtr base = a.base;
  FormEval eval = a.eval;
  int k = a.deg;
  int m = a.V.amb;
  r.eval = [base, eval, k, m](const Vec& p, const std::vector<Vec>& vs) {
    Chart c = base->chart_at(p);
    std::vector<RVec> x(k + 1);
    for (int j = 0; j <= k; ++j) x[j] = chart_coords(c, vs[j]);
    Vec total = Vec::Zero(m);
    double sgn = 1.0;
    for (int i = 0; i <= k; ++i) {
      // Coordinate fields commute, so only directional derivatives survive.
      total += sgn * fd_deriv([&](double t) {
        RVec u = t * x[i];
        Vec q = c.point(u);
        std::vector<Vec> w;
        w.reserve(k);
        for (int j = 0; j <= k; ++j)
          if (j != i) w.push_back(c.push(u, x[j]));
        return eval(q, w);
      });
      sgn = -sgn;
    }
    return total;
  };
  return r;
}

VForm add(const VForm& a, const VForm& b) {
  VForm r;
  r.base = a.base;
  r.deg = a.deg;
  r.V = a.V;
  FormEval ea = a.eval, eb = b.eval;
  r.eval = [ea, eb](const Vec& p, const std::vector<Vec>& vs) {
    return Vec(ea(p, vs) + eb(p, vs));
  };
  if (a.dexact && b.dexact) {
    FormEval da = a.dexact, db = b.dexact;
    r.dexact = [da, db](const Vec& p, const std::vector<Vec>& vs) {
      return Vec(da(p, vs) + db(p, vs));
    };
  }
  return r;
}

VForm sub(const VForm& a, const VForm& b) { return add(a, scale(-1.0, b)); }

VForm scale(cplx c, const VForm& a) {
  VForm r = a;
  FormEval e = a.eval;
  r.eval = [c, e](const Vec& p, const std::vector<Vec>& vs) {
    return Vec(c * e(p, vs));
  };
  if (a.dexact) {
    FormEval de = a.dexact;
    r.dexact = [c, de](const Vec& p, const std::vector<Vec>& vs) {
      return Vec(c * de(p, vs));
    };
  }
  return r;
}

namespace {

FormEval pulled(const SmoothMap& f, FormEval e) {
  return [f, e](const Vec& p, const std::vector<Vec>& vs) {
    Vec q = f.fwd(p);
    std::vector<Vec> ws;
    ws.reserve(vs.size());
    for (const Vec& v : vs) ws.push_back(f.push(p, v));
    return e(q, ws);
  };
}

}  // namespace

VForm pullback(const SmoothMap& f, const VForm& a) {
  VForm r;
  r.base = f.src;
  r.deg = a.deg;
  r.V = a.V;
  r.eval = pulled(f, a.eval);
  if (a.dexact) r.dexact = pulled(f, a.dexact);  // d commutes with pullback
  return r;
}

Pairing trace_pairing(cplx coef, int n, VSpace out) {
  Pairing pr;
  pr.out = out;
  pr.eval = [coef, n](const Vec& u, const Vec& v) {
    Vec r(1);
    r[0] = coef * (unflat(u, n) * unflat(v, n)).trace();
    return r;
  };
  return pr;
}

Pairing scalar_pairing() {
  Pairing pr;
  pr.out = scalar_complex();
  pr.eval = [](const Vec& u, const Vec& v) {
    Vec r(1);
    r[0] = u[0] * v[0];
    return r;
  };
  return pr;
}

namespace {

void subsets_of_size(int total, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= total - (k - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

double shuffle_sign(const std::vector<int>& s) {
  int inv = 0;
  for (size_t j = 0; j < s.size(); ++j) inv += s[j] - static_cast<int>(j);
  return (inv % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

VForm wedge(const VForm& a, const VForm& b, VSpace out,
            std::function<Vec(const Vec&, const Vec&)> mul) {
  VForm r;
  r.base = a.base;
  r.deg = a.deg + b.deg;
  r.V = out;
  int k = a.deg, total = a.deg + b.deg;
  std::vector<std::vector<int>> sel;
  subsets_of_size(total, k, sel);
  FormEval ea = a.eval, eb = b.eval;
  int m = out.amb;
  r.eval = [ea, eb, mul, sel, total, m](const Vec& p,
                                        const std::vector<Vec>& vs) {
    Vec acc = Vec::Zero(m);
    std::vector<Vec> va, vb;
    for (const auto& s : sel) {
      va.clear();
      vb.clear();
      size_t si = 0;
      for (int i = 0; i < total; ++i) {
        if (si < s.size() && s[si] == i) {
          va.push_back(vs[i]);
          ++si;
        } else {
          vb.push_back(vs[i]);
        }
      }
      acc += shuffle_sign(s) * mul(ea(p, va), eb(p, vb));
    }
    return acc;
  };
  return r;
}

VForm wedge_pair(const VForm& a, const VForm& b, const Pairing& pr) {
  return wedge(a, b, pr.out, pr.eval);
}

VForm wedge_scalar(const VForm& a, const VForm& b) {
  return wedge(a, b, scalar_complex(), [](const Vec& x, const Vec& y) {
    Vec r(1);
    r[0] = x[0] * y[0];
    return r;
  });
}

VForm wedge_bracket(const VForm& a, const VForm& b, const LieGroupModel& g) {
  int n = g.n;
  return wedge(a, b, algebra_space(g), [n](const Vec& u, const Vec& v) {
    Mat um = unflat(u, n), vm = unflat(v, n);
    return flat(um * vm - vm * um);
  });
}

// ~~~~~~~~~~~~~~~~~~~~ complex structure and (p,q) types ~~~~~~~~~~~~~~~~~~~

VForm j_pullback(const VForm& a) {
  VForm r;
  r.base = a.base;
  r.deg = a.deg;
  r.V = a.V;
  SpacePtr base = a.base;
  FormEval e = a.eval;
  r.eval = [base, e](const Vec& p, const std::vector<Vec>& vs) {
    std::vector<Vec> ws;
    ws.reserve(vs.size());
    for (const Vec& v : vs) ws.push_back(base->J(p, v));
    return e(p, ws);
  };
  return r;
}

VForm type_component(const VForm& a, int p, int q) {
  if (p + q != a.deg) throw std::invalid_argument("type_component: p+q != deg");
  if (!a.base->J) throw std::invalid_argument("type_component: no J on base");
  if (!a.V.i_closed)
    throw std::invalid_argument("type_component: coefficients not i-closed");
  VForm r;
  r.base = a.base;
  r.deg = a.deg;
  r.V = a.V;
  SpacePtr base = a.base;
  FormEval e = a.eval;
  int k = a.deg;
  int m = a.V.amb;
  std::vector<std::vector<int>> sel;
  subsets_of_size(k, p, sel);
  r.eval = [base, e, k, m, sel](const Vec& pt, const std::vector<Vec>& vs) {
    int N = 1 << k;
    std::vector<Vec> jv(k);
    for (int j = 0; j < k; ++j) jv[j] = base->J(pt, vs[j]);
    std::vector<Vec> val(N);
    std::vector<Vec> args(k);
    for (int mask = 0; mask < N; ++mask) {
      for (int j = 0; j < k; ++j) args[j] = ((mask >> j) & 1) ? jv[j] : vs[j];
      val[mask] = e(pt, args);
    }
    // Slot j projected to (1,0): v -> (v - i Jv)/2; to (0,1): (v + i Jv)/2.
    Vec out = Vec::Zero(m);
    std::vector<char> hol(k);
    for (const auto& s : sel) {
      std::fill(hol.begin(), hol.end(), 0);
      for (int j : s) hol[j] = 1;
      for (int mask = 0; mask < N; ++mask) {
        cplx coef = 1.0;
        for (int j = 0; j < k; ++j) {
          if ((mask >> j) & 1)
            coef *= hol[j] ? (-0.5 * kI) : (0.5 * kI);
          else
            coef *= 0.5;
        }
        out += coef * val[mask];
      }
    }
    return out;
  };
  return r;
}

VForm dc_form(const VForm& a) {
  VForm r = j_pullback(d_form(j_pullback(a)));
  return ((a.deg + 1) % 2 == 0) ? r : scale(-1.0, r);
}

VForm conj_form(const VForm& a) {
  VForm r = a;
  r.dexact = nullptr;
  FormEval e = a.eval;
  auto cj = a.V.conj;
  r.eval = [e, cj](const Vec& p, const std::vector<Vec>& vs) {
    Vec v = e(p, vs);
    return cj ? cj(v) : Vec(v.conjugate());
  };
  return r;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~ symmetric / mixed tensors ~~~~~~~~~~~~~~~~~~~~~~

SymTensor sym_wedge(const VForm& a, const VForm& b, const Pairing& pr) {
  SymTensor t;
  t.base = a.base;
  t.V = pr.out;
  FormEval ea = a.eval, eb = b.eval;
  auto mul = pr.eval;
  t.eval = [ea, eb, mul](const Vec& p, const Vec& u, const Vec& v) {
    std::vector<Vec> uu{u}, vv{v};
    return Vec(mul(ea(p, uu), eb(p, vv)) + mul(ea(p, vv), eb(p, uu)));
  };
  return t;
}

VForm alt_part(const TwoTensor& t) {
  VForm r;
  r.base = t.base;
  r.deg = 2;
  r.V = t.V;
  auto e = t.eval;
  r.eval = [e](const Vec& p, const std::vector<Vec>& vs) {
    return Vec(0.5 * (e(p, vs[0], vs[1]) - e(p, vs[1], vs[0])));
  };
  return r;
}

SymTensor sym_part(const TwoTensor& t) {
  SymTensor s;
  s.base = t.base;
  s.V = t.V;
  auto e = t.eval;
  s.eval = [e](const Vec& p, const Vec& u, const Vec& v) {
    return Vec(0.5 * (e(p, u, v) + e(p, v, u)));
  };
  return s;
}

TwoTensor combine(const VForm& two_form, const SymTensor& sym) {
  TwoTensor t;
  t.base = two_form.base;
  t.V = two_form.V;
  FormEval e = two_form.eval;
  auto se = sym.eval;
  t.eval = [e, se](const Vec& p, const Vec& u, const Vec& v) {
    std::vector<Vec> vs{u, v};
    return Vec(e(p, vs) + se(p, u, v));
  };
  return t;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~ group-level forms ~~~~~~~~~~~~~~~~~~~~~~~~~~~

VForm maurer_cartan_left(const LieGroupModel& g, SpacePtr gs) {
  VForm r;
  r.base = gs;
  r.deg = 1;
  r.V = algebra_space(g);
  r.eval = [g](const Vec& p, const std::vector<Vec>& vs) {
    if (!g.member(p, 1e-6))
      throw std::domain_error("maurer_cartan: point not in " + g.name);
    return g.lmul_tan(g.inv(p), vs[0]);
  };
  return r;
}

VForm maurer_cartan_right(const LieGroupModel& g, SpacePtr gs) {
  VForm r;
  r.base = gs;
  r.deg = 1;
  r.V = algebra_space(g);
  r.eval = [g](const Vec& p, const std::vector<Vec>& vs) {
    if (!g.member(p, 1e-6))
      throw std::domain_error("maurer_cartan: point not in " + g.name);
    return g.rmul_tan(vs[0], g.inv(p));
  };
  return r;
}

double ad_invariance_residual(const LieGroupModel& g, const Pairing& pr,
                              Rng& rng, int samples) {
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    Vec gg = g.sampler(rng);
    RVec cu(g.dim()), cv(g.dim()), cw(g.dim());
    for (int i = 0; i < g.dim(); ++i) {
      cu[i] = urand(rng, -1, 1);
      cv[i] = urand(rng, -1, 1);
      cw[i] = urand(rng, -1, 1);
    }
    Vec u = flat(g.algv(cu)), v = flat(g.algv(cv)), w = flat(g.algv(cw));
    Vec grp = pr.eval(g.Ad(gg, u), g.Ad(gg, v)) - pr.eval(u, v);
    Vec inf = pr.eval(g.bracket(w, u), v) + pr.eval(u, g.bracket(w, v));
    worst = std::max({worst, grp.cwiseAbs().maxCoeff(), inf.cwiseAbs().maxCoeff()});
  }
  return worst;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ integration ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

void gauss_legendre(int n, RVec& x, RVec& w) {
  // Golub-Welsch on the Jacobi matrix.
  RMat T = RMat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    T(k - 1, k) = b;
    T(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(T);
  x = es.eigenvalues();
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double v0 = es.eigenvectors()(0, i);
    w[i] = 2.0 * v0 * v0;
  }
}

cplx integrate_form(const VForm& a, const Cycle& c, int nodes) {
  if (a.deg != c.dim) throw std::invalid_argument("integrate_form: degree");
  RVec xs, ws;
  gauss_legendre(nodes, xs, ws);
  std::vector<int> idx(c.dim, 0);
  cplx total = 0;
  std::vector<Vec> tang(c.dim);
  while (true) {
    RVec u(c.dim);
    double wt = 1;
    for (int d = 0; d < c.dim; ++d) {
      double half = 0.5 * (c.hi[d] - c.lo[d]);
      u[d] = c.lo[d] + half * (xs[idx[d]] + 1.0);
      wt *= ws[idx[d]] * half;
    }
    Vec p = c.point(u);
    for (int d = 0; d < c.dim; ++d) tang[d] = c.push(u, RVec::Unit(c.dim, d));
    total += wt * a(p, tang)[0];
    int d = 0;
    for (; d < c.dim; ++d) {
      if (++idx[d] < nodes) break;
      idx[d] = 0;
    }
    if (d == c.dim) break;
  }
  return total;
}

}  // namespace hgt
