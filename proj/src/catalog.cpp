#include "hgt/catalog.hpp"

namespace hgt {

cplx log_minus(cplx z) { return std::log(z); }

cplx log_plus(cplx z) {
  cplx w = std::log(z);
  if (w.imag() <= 0) w += cplx(0.0, 2.0 * kPi);
  return w;
}

namespace {

constexpr double kRadMargin = 0.1;  // |x_c| >= margin * |x|
constexpr double kAngMargin = 0.1;  // radians kept clear of the cut ray

bool hopf_in(int idx, const Vec& p) {
  int c = idx / 2;
  bool plus = idx % 2 == 0;
  cplx x = p[c];
  double r = p.norm();
  if (std::abs(x) < kRadMargin * r) return false;
  double ang = std::arg(x);
  double dist = plus ? std::abs(ang) : kPi - std::abs(ang);
  return dist > kAngMargin;
}

// Deepest chart at p; the winner always has both a radial fraction and an
// angular clearance far above the membership margins, so globally defined
// fields can evaluate chartwise without boundary effects.
int hopf_pick(const Vec& p) {
  double best = -1;
  int arg = 0;
  for (int i = 0; i < 4; ++i) {
    int c = i / 2;
    bool plus = i % 2 == 0;
    cplx x = p[c];
    double r = p.norm();
    double rad = std::abs(x) / r;
    double ang = std::arg(x);
    double dist = plus ? std::abs(ang) : kPi - std::abs(ang);
    double score = std::min(rad, dist);
    if (score > best) {
      best = score;
      arg = i;
    }
  }
  return arg;
}

bool upper(cplx z) { return z.imag() > 0; }

Vec cval(cplx z) {
  Vec r(1);
  r[0] = z;
  return r;
}

// angle forms as ambient evaluators
cplx dlog(const Vec& p, const Vec& v, int c) { return v[c] / p[c]; }
double dxi(const Vec& p, const Vec& v, int c) { return std::imag(v[c] / p[c]); }
// |x_2|^2/|x|^2 dxi_2 and |x_1|^2/|x|^2 dxi_1: smooth across x_c = 0
double wxi(const Vec& p, const Vec& v, int c) {
  return std::imag(std::conj(p[c]) * v[c]) / p.squaredNorm();
}

PointMap hol_lambda(int i, int j, int) {
  if (i == 0 && j == 1)
    return [](const Vec& p) {
      return cval(upper(p[0]) ? cplx(1.0, 0.0) : p[0] / p[1]);
    };
  return [](const Vec&) { return cval(1.0); };
}

PointMap uni_lambda(int i, int j, int) {
  if (i == 0 && j == 1)
    return [](const Vec& p) {
      if (upper(p[0])) return cval(1.0);
      return cval((p[0] / std::abs(p[0])) * (std::abs(p[1]) / p[1]));
    };
  return [](const Vec&) { return cval(1.0); };
}

VForm one_form(SpacePtr X, VSpace V) {
  VForm a;
  a.base = X;
  a.deg = 1;
  a.V = V;
  return a;
}

VForm hol_conn(SpacePtr X, VSpace V, int i, int j) {
  VForm a = one_form(X, V);
  if (j == i + 1 && (i == 0 || i == 2)) {
    int c = i / 2;
    a.eval = [c](const Vec& p, const std::vector<Vec>& vs) {
      return cval(upper(p[c]) ? cplx(0.0, 0.0) : dlog(p, vs[0], c));
    };
    a.dexact = [](const Vec&, const std::vector<Vec>&) { return cval(0.0); };
    return a;
  }
  bool s1 = i == 0, s2 = j == 2;
  a.eval = [s1, s2](const Vec& p, const std::vector<Vec>& vs) {
    cplx L = (s1 ? log_plus(p[0]) : log_minus(p[0])) -
             (s2 ? log_plus(p[1]) : log_minus(p[1]));
    return cval(L / (2.0 * kPi * kI) * dlog(p, vs[0], 1));
  };
  a.dexact = [](const Vec& p, const std::vector<Vec>& vs) {
    cplx u1 = dlog(p, vs[0], 0), u2 = dlog(p, vs[0], 1);
    cplx v1 = dlog(p, vs[1], 0), v2 = dlog(p, vs[1], 1);
    return cval((u1 * v2 - v1 * u2) / (2.0 * kPi * kI));
  };
  return a;
}

VForm uni_conn(SpacePtr X, VSpace V, int i, int j) {
  VForm a = one_form(X, V);
  if (j == i + 1 && (i == 0 || i == 2)) {
    int c = i / 2;
    a.eval = [c](const Vec& p, const std::vector<Vec>& vs) {
      return cval(upper(p[c]) ? cplx(0.0, 0.0) : kI * dxi(p, vs[0], c));
    };
    a.dexact = [](const Vec&, const std::vector<Vec>&) { return cval(0.0); };
    return a;
  }
  bool s1 = i == 0, s2 = j == 2;
  a.eval = [s1, s2](const Vec& p, const std::vector<Vec>& vs) {
    double ang = std::imag(s1 ? log_plus(p[0]) : log_minus(p[0])) -
                 std::imag(s2 ? log_plus(p[1]) : log_minus(p[1]));
    return cval(kI * ang / (2.0 * kPi) * dxi(p, vs[0], 1));
  };
  a.dexact = [](const Vec& p, const std::vector<Vec>& vs) {
    double u1 = dxi(p, vs[0], 0), u2 = dxi(p, vs[0], 1);
    double v1 = dxi(p, vs[1], 0), v2 = dxi(p, vs[1], 1);
    return cval(kI * (u1 * v2 - v1 * u2) / (2.0 * kPi));
  };
  return a;
}

VForm hol_curving(SpacePtr X, VSpace V, int i) {
  int c = i / 2;
  VForm b;
  b.base = X;
  b.deg = 2;
  b.V = V;
  b.eval = [c](const Vec& p, const std::vector<Vec>& vs) {
    double r2 = p.squaredNorm();
    auto del = [&](const Vec& v) {  // del log |x|^2, type (1,0)
      return (std::conj(p[0]) * v[0] + std::conj(p[1]) * v[1]) / r2;
    };
    cplx val = dlog(p, vs[0], c) * del(vs[1]) - dlog(p, vs[1], c) * del(vs[0]);
    return cval(val / (2.0 * kPi * kI));
  };
  return b;
}

VForm uni_curving(SpacePtr X, VSpace V, int i) {
  int c = i / 2;
  VForm b;
  b.base = X;
  b.deg = 2;
  b.V = V;
  if (c == 0) {
    // (i / 2 pi) dxi_1 ^ (|x2|^2/|x|^2 dxi_2)
    b.eval = [](const Vec& p, const std::vector<Vec>& vs) {
      double val = dxi(p, vs[0], 0) * wxi(p, vs[1], 1) -
                   dxi(p, vs[1], 0) * wxi(p, vs[0], 1);
      return cval(kI * val / (2.0 * kPi));
    };
  } else {
    // -(i / 2 pi) (|x1|^2/|x|^2 dxi_1) ^ dxi_2
    b.eval = [](const Vec& p, const std::vector<Vec>& vs) {
      double val = wxi(p, vs[0], 0) * dxi(p, vs[1], 1) -
                   wxi(p, vs[1], 0) * dxi(p, vs[0], 1);
      return cval(-kI * val / (2.0 * kPi));
    };
  }
  return b;
}

}  // namespace

HopfSurface hopf_surface() {
  HopfSurface h;

  ChartedSpace cs = complex_affine_space(2, 2.0);
  cs.sample = [](Rng& rng) {
    Vec x(2);
    double n2 = 0;
    do {
      x[0] = cplx(nrand(rng), nrand(rng));
      x[1] = cplx(nrand(rng), nrand(rng));
      n2 = x.squaredNorm();
    } while (n2 < 1e-12);
    double r = std::pow(2.0, urand(rng, 0.0, 1.0));
    return Vec(x * (r / std::sqrt(n2)));
  };
  cs.member = [](const Vec& p) {
    double r = p.norm();
    return r > 0.25 && r < 8.0;
  };
  h.space = sp(cs);

  h.cover.base = h.space;
  h.cover.names = {"U1+", "U1-", "U2+", "U2-"};
  for (int i = 0; i < 4; ++i)
    h.cover.member.push_back([i](const Vec& p) { return hopf_in(i, p); });

  h.u1 = u1_model();
  h.cstar = cstar_model();
  VSpace tU = algebra_space(h.u1);
  tU.lattice = cplx(0.0, 2.0 * kPi);
  VSpace tC = algebra_space(h.cstar);
  tC.lattice = cplx(0.0, 2.0 * kPi);

  SpacePtr X = h.space;

  h.hol.cover = h.cover;
  h.hol.T = h.cstar;
  h.hol.t = tC;
  h.hol.lambda = hol_lambda;
  h.hol.conn = [X, tC](int i, int j) { return hol_conn(X, tC, i, j); };
  h.hol.curving = [X, tC](int i) { return hol_curving(X, tC, i); };
  h.hol.has_conn = h.hol.has_curving = true;
  h.hol.pick = hopf_pick;

  h.unitary.cover = h.cover;
  h.unitary.T = h.u1;
  h.unitary.t = tU;
  h.unitary.lambda = uni_lambda;
  h.unitary.conn = [X, tU](int i, int j) { return uni_conn(X, tU, i, j); };
  h.unitary.curving = [X, tU](int i) { return uni_curving(X, tU, i); };
  h.unitary.has_conn = h.unitary.has_curving = true;
  h.unitary.pick = hopf_pick;

  h.omega.base = X;
  h.omega.deg = 2;
  h.omega.V = scalar_real();
  h.omega.eval = [](const Vec& p, const std::vector<Vec>& vs) {
    double r2 = p.squaredNorm();
    double val = std::imag(vs[0][0] * std::conj(vs[1][0])) +
                 std::imag(vs[0][1] * std::conj(vs[1][1]));
    Vec r(1);
    r[0] = val / (2.0 * kPi * r2);
    return r;
  };

  h.dc_omega = dc_form(h.omega);
  h.dc_omega.V.lattice = cplx(2.0 * kPi, 0.0);

  h.s3.name = "s3-hopf";
  h.s3.space = X;
  h.s3.dim = 3;
  h.s3.lo = RVec::Zero(3);
  h.s3.hi = RVec(3);
  h.s3.hi << kPi / 2.0, 2.0 * kPi, 2.0 * kPi;
  h.s3.point = [](const RVec& u) {
    Vec p(2);
    p[0] = std::cos(u[0]) * std::exp(kI * u[1]);
    p[1] = std::sin(u[0]) * std::exp(kI * u[2]);
    return p;
  };
  h.s3.push = [](const RVec& u, const RVec& w) {
    cplx e1 = std::exp(kI * u[1]), e2 = std::exp(kI * u[2]);
    Vec t(2);
    t[0] = w[0] * (-std::sin(u[0]) * e1) + w[1] * (kI * std::cos(u[0]) * e1);
    t[1] = w[0] * (std::cos(u[0]) * e2) + w[2] * (kI * std::sin(u[0]) * e2);
    return t;
  };

  return h;
}

// ~~~~~~~~~~~~~~~~~~~ crossed modules with adjustments ~~~~~~~~~~~~~~~~~~~~

namespace {

double entry_re(const Vec& p, int n, int i, int j) {
  return unflat(p, n)(i, j).real();
}

// Ambient matrix acting on real algebra coefficients; rows and columns of
// coef follow the models' basis order.
Mat coef_map(const LieGroupModel& from, const LieGroupModel& to,
             const Eigen::MatrixXd& coef) {
  return basis_map(algebra_space(from), algebra_space(to),
                   coef.cast<cplx>());
}

std::function<Vec(const Vec&, const Vec&)> chi_coboundary(
    const LieGroupModel& gt, const Mat& chi) {
  return [gt, chi](const Vec& g, const Vec& v) {
    return Vec(chi * (gt.Ad(gt.inv(g), v) - v));
  };
}

void trivial_action(CrossedModule& cm) {
  cm.act = [](const Vec&, const Vec& h) { return h; };
  cm.act_pt = [](const Vec&, const Vec& u) { return u; };
  cm.act_alg = [](const Vec&, const Vec& u) {
    return Vec(Vec::Zero(u.size()));
  };
}

}  // namespace

CrossedExample crossed_su2_u1() {
  CrossedExample e;
  e.name = "su2-u1";
  LieGroupModel su2 = su2_model(), u1 = u1_model();
  e.cm.Gt = su2;
  e.cm.H = u1;
  e.cm.f = constant_hom(u1, su2);
  trivial_action(e.cm);
  e.cm.T = u1;
  e.cm.G = su2;
  e.cm.inc = identity_hom(u1);
  e.cm.pr = identity_hom(su2);
  e.adj.s = Mat::Identity(u1.amb(), u1.amb());
  e.adj.l = Mat::Identity(su2.amb(), su2.amb());
  Eigen::MatrixXd chi(1, 3);
  chi << 0.7, -0.3, 0.2;
  e.adj.kappa = chi_coboundary(su2, coef_map(su2, u1, chi));
  Eigen::MatrixXd ph(1, 3);
  ph << 0.3, -0.5, 0.1;
  e.phi = coef_map(su2, u1, ph);
  return e;
}

CrossedExample crossed_plane_line() {
  CrossedExample e;
  e.name = "plane-line";
  LieGroupModel plane = additive_model(2, "R2"), line = additive_model(1, "R");
  e.cm.Gt = plane;
  e.cm.H = line;
  e.cm.f = constant_hom(line, plane);
  trivial_action(e.cm);
  e.cm.T = line;
  e.cm.G = plane;
  e.cm.inc = identity_hom(line);
  e.cm.pr = identity_hom(plane);
  e.adj.s = Mat::Identity(line.amb(), line.amb());
  e.adj.l = Mat::Identity(plane.amb(), plane.amb());
  Vec tb = flat(line.alg[0]);
  LieGroupModel gt = plane;
  e.adj.kappa = [gt, tb](const Vec& g, const Vec& v) {
    RVec xg = additive_coords(gt, g), xv = additive_coords(gt, v);
    return Vec((0.8 * xg[0] * xv[1] - 0.25 * xg[1] * xv[0]) * tb);
  };
  Eigen::MatrixXd ph(1, 2);
  ph << 0.6, -0.2;
  e.phi = coef_map(plane, line, ph);
  return e;
}

CrossedExample crossed_split_plane() {
  CrossedExample e;
  e.name = "split-plane";
  LieGroupModel gt = additive_model(2, "R2-total");
  LieGroupModel hh = additive_model(2, "R2-fiber");
  LieGroupModel line = additive_model(1, "R-line");
  e.cm.Gt = gt;
  e.cm.H = hh;
  e.cm.f.src = hh;
  e.cm.f.dst = gt;
  LieGroupModel h2 = hh, g2 = gt;
  e.cm.f.map = [h2, g2](const Vec& h) {
    RVec c = additive_coords(h2, h);
    RVec w(2);
    w << c[0], 0.0;
    return additive_point(g2, w);
  };
  Eigen::MatrixXd cf(2, 2);
  cf << 1, 0, 0, 0;
  e.cm.f.alg = coef_map(hh, gt, cf);
  trivial_action(e.cm);
  e.cm.T = line;
  e.cm.G = line;
  e.cm.inc.src = line;
  e.cm.inc.dst = hh;
  LieGroupModel l1 = line;
  e.cm.inc.map = [l1, h2](const Vec& t) {
    RVec w(2);
    w << 0.0, additive_coords(l1, t)[0];
    return additive_point(h2, w);
  };
  Eigen::MatrixXd ci(2, 1);
  ci << 0, 1;
  e.cm.inc.alg = coef_map(line, hh, ci);
  e.cm.pr.src = gt;
  e.cm.pr.dst = line;
  e.cm.pr.map = [g2, l1](const Vec& g) {
    RVec w(1);
    w << additive_coords(g2, g)[1];
    return additive_point(l1, w);
  };
  Eigen::MatrixXd cp(1, 2);
  cp << 0, 1;
  e.cm.pr.alg = coef_map(gt, line, cp);
  Eigen::MatrixXd cs(1, 2);
  cs << 0.3, 1;
  e.adj.s = coef_map(hh, line, cs);
  Eigen::MatrixXd cl(2, 1);
  cl << 0.7, 1;
  e.adj.l = coef_map(line, gt, cl);
  Vec tb = flat(line.alg[0]);
  e.adj.kappa = [g2, tb](const Vec& g, const Vec& v) {
    RVec xg = additive_coords(g2, g), xv = additive_coords(g2, v);
    return Vec(0.9 * xg[1] * xv[1] * tb);
  };
  Eigen::MatrixXd ph(1, 2);
  ph << 0.15, -0.4;
  e.phi = coef_map(gt, line, ph);
  return e;
}

CrossedExample crossed_heisenberg() {
  CrossedExample e;
  e.name = "heisenberg";
  LieGroupModel uni = unipotent_model(3, "Heis3");
  LieGroupModel hh = additive_model(2, "R2-zh");
  LieGroupModel line = additive_model(1, "R-center");
  LieGroupModel quo = additive_model(2, "R2-xy");
  e.cm.Gt = uni;
  e.cm.H = hh;
  e.cm.f.src = hh;
  e.cm.f.dst = uni;
  LieGroupModel h2 = hh;
  e.cm.f.map = [h2](const Vec& h) {
    Mat m = Mat::Identity(3, 3);
    m(0, 2) = additive_coords(h2, h)[0];
    return flat(m);
  };
  // Gt basis order is E01, E02, E12; the first fiber coordinate feeds the
  // central direction E02.
  Eigen::MatrixXd cf(3, 2);
  cf << 0, 0, 1, 0, 0, 0;
  e.cm.f.alg = coef_map(hh, uni, cf);
  trivial_action(e.cm);
  e.cm.T = line;
  e.cm.G = quo;
  e.cm.inc.src = line;
  e.cm.inc.dst = hh;
  LieGroupModel l1 = line;
  e.cm.inc.map = [l1, h2](const Vec& t) {
    RVec w(2);
    w << 0.0, additive_coords(l1, t)[0];
    return additive_point(h2, w);
  };
  Eigen::MatrixXd ci(2, 1);
  ci << 0, 1;
  e.cm.inc.alg = coef_map(line, hh, ci);
  e.cm.pr.src = uni;
  e.cm.pr.dst = quo;
  LieGroupModel q2 = quo;
  e.cm.pr.map = [q2](const Vec& g) {
    RVec w(2);
    w << entry_re(g, 3, 0, 1), entry_re(g, 3, 1, 2);
    return additive_point(q2, w);
  };
  Eigen::MatrixXd cp(2, 3);
  cp << 1, 0, 0, 0, 0, 1;
  e.cm.pr.alg = coef_map(uni, quo, cp);
  Eigen::MatrixXd cs(1, 2);
  cs << 0.4, 1;
  e.adj.s = coef_map(hh, line, cs);
  Eigen::MatrixXd cl(3, 2);
  cl << 1, 0, 0.2, -0.3, 0, 1;
  e.adj.l = coef_map(quo, uni, cl);
  Vec tb = flat(line.alg[0]);
  Eigen::MatrixXd chi(1, 3);
  chi << 0.5, -0.25, 0.45;
  Mat X = coef_map(uni, line, chi);
  LieGroupModel gt = uni;
  e.adj.kappa = [gt, X, tb](const Vec& g, const Vec& v) {
    double x = entry_re(g, 3, 0, 1), y = entry_re(g, 3, 1, 2);
    double vx = entry_re(v, 3, 0, 1), vy = entry_re(v, 3, 1, 2);
    Vec out = (0.6 * x * vy - 0.35 * y * vx) * tb;
    return Vec(out + X * (gt.Ad(gt.inv(g), v) - v));
  };
  Eigen::MatrixXd ph(1, 3);
  ph << 0.3, -0.2, 0.5;
  e.phi = coef_map(uni, line, ph);
  return e;
}

std::vector<CrossedExample> crossed_examples() {
  return {crossed_su2_u1(), crossed_plane_line(), crossed_split_plane(),
          crossed_heisenberg()};
}

CrossedScenario crossed_scenario(const CrossedExample& ex) {
  CrossedScenario sc;
  sc.ex = ex;
  LieGroupModel plane = additive_model(2, "patch-plane");
  SpacePtr base = sp(plane.space());

  IndexedCover cover;
  cover.base = base;
  for (int i = 0; i < 4; ++i) {
    cover.names.push_back("P" + std::to_string(i));
    cover.member.push_back([](const Vec&) { return true; });
  }

  LieGroupModel gt = ex.cm.Gt, tt = ex.cm.T;
  LieGroupModel pl = plane;

  GaugeSeed seed;
  seed.phi = [gt, pl](int i) -> PointMap {
    return [gt, pl, i](const Vec& x) {
      RVec c = additive_coords(pl, x);
      RVec w(gt.dim());
      for (int k = 0; k < gt.dim(); ++k)
        w[k] = 0.4 * std::sin(1.0 + 1.3 * i + 0.7 * k) * c[0] +
               0.3 * std::sin(2.0 + 0.9 * i + 1.1 * k) * c[1] +
               0.15 * std::sin(3.0 + 0.5 * i + 1.7 * k) * c[0] * c[1];
      return gt.expv(w);
    };
  };
  seed.rho = [tt, pl, base](int i) -> VForm {
    VForm r;
    r.base = base;
    r.deg = 1;
    r.V = algebra_space(tt);
    r.eval = [tt, pl, i](const Vec& p, const std::vector<Vec>& vs) {
      RVec x = additive_coords(pl, p), u = additive_coords(pl, vs[0]);
      Vec out = Vec::Zero(tt.amb());
      for (int m = 0; m < tt.dim(); ++m) {
        double al = 0.5 * std::sin(1.1 + 0.6 * i + m);
        double be = 0.35 * std::sin(2.3 + 0.8 * i + m);
        out += (al * x[1] * u[0] + be * x[0] * x[1] * u[1]) *
               flat(tt.alg[m]);
      }
      return out;
    };
    r.dexact = [tt, pl, i](const Vec& p, const std::vector<Vec>& vs) {
      RVec x = additive_coords(pl, p);
      RVec u = additive_coords(pl, vs[0]), v = additive_coords(pl, vs[1]);
      double area = u[0] * v[1] - u[1] * v[0];
      Vec out = Vec::Zero(tt.amb());
      for (int m = 0; m < tt.dim(); ++m) {
        double al = 0.5 * std::sin(1.1 + 0.6 * i + m);
        double be = 0.35 * std::sin(2.3 + 0.8 * i + m);
        out += (be * x[1] - al) * area * flat(tt.alg[m]);
      }
      return out;
    };
    return r;
  };
  seed.psi = [tt, pl](int i, int j) -> PointMap {
    return [tt, pl, i, j](const Vec& x) {
      RVec c = additive_coords(pl, x);
      RVec w(tt.dim());
      for (int m = 0; m < tt.dim(); ++m)
        w[m] = (0.3 + 0.1 * (i + j) + 0.2 * m) * c[0] +
               0.05 * (1.0 + i * j) * c[1] * c[1];
      return tt.expv(w);
    };
  };

  sc.seed = seed;
  sc.bundle = gauge_bundle(ex.cm, ex.adj, cover, seed);
  sc.con = gauge_connection(sc.bundle, seed);
  return sc;
}

// ~~~~~~~~~~~~~~~~~~~~~~~ two-bundle scenario data ~~~~~~~~~~~~~~~~~~~~~~~~

namespace {

PointMap const_pt(const Vec& v) {
  return [v](const Vec&) { return v; };
}

// Smooth maps into additive groups through exponential coordinates; dw is
// the exact directional derivative of w.
struct CoordFn {
  std::function<RVec(const RVec&)> w;
  std::function<RVec(const RVec&, const RVec&)> dw;
};

CoordFn coord_diff(const CoordFn& a, const CoordFn& b) {
  return {[a, b](const RVec& x) { return RVec(a.w(x) - b.w(x)); },
          [a, b](const RVec& x, const RVec& v) {
            return RVec(a.dw(x, v) - b.dw(x, v));
          }};
}

CoordFn coord_sum(const CoordFn& a, const CoordFn& b) {
  return {[a, b](const RVec& x) { return RVec(a.w(x) + b.w(x)); },
          [a, b](const RVec& x, const RVec& v) {
            return RVec(a.dw(x, v) + b.dw(x, v));
          }};
}

Vec algv(const LieGroupModel& g, const RVec& w) {
  Vec out = Vec::Zero(g.amb());
  for (int k = 0; k < g.dim(); ++k) out += w[k] * flat(g.alg[k]);
  return out;
}

SmoothMap coord_map(SpacePtr src, const LieGroupModel& sm,
                    const LieGroupModel& gm, const CoordFn& f) {
  SmoothMap m;
  m.src = src;
  m.dst = sp(gm.space());
  m.fwd = [sm, gm, f](const Vec& p) {
    return gm.expv(f.w(additive_coords(sm, p)));
  };
  m.tan = [sm, gm, f](const Vec& p, const Vec& v) {
    return algv(gm, f.dw(additive_coords(sm, p), additive_coords(sm, v)));
  };
  return m;
}

// Mildly nonlinear coordinates in four variables, distinct per salt.
CoordFn seeded_coords(int dim_out, int salt) {
  auto w = [dim_out, salt](const RVec& x) {
    RVec out(dim_out);
    for (int k = 0; k < dim_out; ++k)
      out[k] = 0.4 * std::sin(1.0 + 1.3 * salt + 0.7 * k) * x[0] +
               0.3 * std::sin(2.0 + 0.9 * salt + 1.1 * k) * x[1] +
               0.15 * std::sin(3.0 + 0.5 * salt + 1.7 * k) * x[2] * x[3];
    return out;
  };
  auto dw = [dim_out, salt](const RVec& x, const RVec& v) {
    RVec out(dim_out);
    for (int k = 0; k < dim_out; ++k)
      out[k] = 0.4 * std::sin(1.0 + 1.3 * salt + 0.7 * k) * v[0] +
               0.3 * std::sin(2.0 + 0.9 * salt + 1.1 * k) * v[1] +
               0.15 * std::sin(3.0 + 0.5 * salt + 1.7 * k) *
                   (x[2] * v[3] + x[3] * v[2]);
    return out;
  };
  return {w, dw};
}

// The differential of a coordinate map as a 1-form; closed since mixed
// partials of the coordinates commute.
VForm tan_form(const SmoothMap& m, VSpace V) {
  VForm r;
  r.base = m.src;
  r.deg = 1;
  r.V = V;
  r.eval = [m](const Vec& p, const std::vector<Vec>& vs) {
    return m.tan(p, vs[0]);
  };
  r.dexact = [V](const Vec&, const std::vector<Vec>&) { return V.zero(); };
  return r;
}

// g-valued 1-form with affine coefficients and closed-form differential.
VForm seeded_potential(SpacePtr base, const LieGroupModel& bm,
                       const LieGroupModel& gm, double sc, int salt) {
  int n = bm.dim();
  VForm r;
  r.base = base;
  r.deg = 1;
  r.V = algebra_space(gm);
  r.eval = [bm, gm, sc, salt, n](const Vec& p, const std::vector<Vec>& vs) {
    RVec x = additive_coords(bm, p), u = additive_coords(bm, vs[0]);
    Vec out = Vec::Zero(gm.amb());
    for (int k = 0; k < gm.dim(); ++k) {
      double s = 0;
      for (int m = 0; m < n; ++m)
        s += sc *
             (std::sin(1.3 + 0.7 * k + 1.1 * m + salt) +
              0.6 * std::sin(2.1 + 0.9 * k + 0.5 * m + salt) *
                  x[(m + 1) % n]) *
             u[m];
      out += s * flat(gm.alg[k]);
    }
    return out;
  };
  r.dexact = [bm, gm, sc, salt, n](const Vec& p,
                                   const std::vector<Vec>& vs) {
    RVec u = additive_coords(bm, vs[0]), v = additive_coords(bm, vs[1]);
    Vec out = Vec::Zero(gm.amb());
    for (int k = 0; k < gm.dim(); ++k) {
      double s = 0;
      for (int m = 0; m < n; ++m) {
        double c = sc * 0.6 * std::sin(2.1 + 0.9 * k + 0.5 * m + salt);
        int q = (m + 1) % n;
        s += c * (u[q] * v[m] - v[q] * u[m]);
      }
      out += s * flat(gm.alg[k]);
    }
    return out;
  };
  return r;
}

// Circle-algebra valued 2-form with affine coefficients and its exact d.
VForm seeded_two_form(SpacePtr base, const LieGroupModel& bm, double sc,
                      int salt, VSpace tsp) {
  int n = bm.dim();
  auto c0 = [sc, salt](int m, int q) {
    return sc * std::sin(0.8 + 0.7 * m + 1.3 * q + salt);
  };
  auto c1 = [sc, salt](int m, int q) {
    return sc * 0.6 * std::sin(1.9 + 1.1 * m + 0.4 * q + salt);
  };
  VForm r;
  r.base = base;
  r.deg = 2;
  r.V = tsp;
  r.eval = [bm, n, c0, c1](const Vec& p, const std::vector<Vec>& vs) {
    RVec x = additive_coords(bm, p);
    RVec u = additive_coords(bm, vs[0]), v = additive_coords(bm, vs[1]);
    double s = 0;
    for (int m = 0; m < n; ++m)
      for (int q = m + 1; q < n; ++q)
        s += (c0(m, q) + c1(m, q) * x[(m + q) % n]) *
             (u[m] * v[q] - u[q] * v[m]);
    return cval(cplx(0.0, s));
  };
  r.dexact = [bm, n, c1](const Vec& p, const std::vector<Vec>& vs) {
    RVec u = additive_coords(bm, vs[0]), v = additive_coords(bm, vs[1]),
         w = additive_coords(bm, vs[2]);
    double s = 0;
    for (int m = 0; m < n; ++m)
      for (int q = m + 1; q < n; ++q) {
        int a = (m + q) % n;
        s += c1(m, q) * (u[a] * (v[m] * w[q] - v[q] * w[m]) -
                         v[a] * (u[m] * w[q] - u[q] * w[m]) +
                         w[a] * (u[m] * v[q] - u[q] * v[m]));
      }
    return cval(cplx(0.0, s));
  };
  return r;
}

SymTensor seeded_sym(SpacePtr base, const LieGroupModel& bm, double sc,
                     int salt, VSpace tsp) {
  int n = bm.dim();
  SymTensor h;
  h.base = base;
  h.V = tsp;
  h.eval = [bm, n, sc, salt](const Vec& p, const Vec& u, const Vec& v) {
    RVec x = additive_coords(bm, p);
    RVec uc = additive_coords(bm, u), vc = additive_coords(bm, v);
    double s = 0;
    for (int m = 0; m < n; ++m)
      for (int q = 0; q < n; ++q)
        s += sc *
             (std::sin(1.7 + 0.6 * (m + q) + 0.3 * m * q + salt) +
              0.4 * std::sin(0.9 + 0.5 * (m + q) + salt) * x[(m + q) % n]) *
             uc[m] * vc[q];
    return cval(cplx(0.0, s));
  };
  return h;
}

// h0 plus half the pairing square of A.
SymTensor enhanced(const SymTensor& h0, const VForm& A, const Pairing& pr) {
  SymTensor h = h0;
  h.eval = [h0, A, pr](const Vec& p, const Vec& u, const Vec& v) {
    return Vec(h0.eval(p, u, v) +
               0.5 * pr.eval(A.eval(p, {u}), A.eval(p, {v})));
  };
  return h;
}

SmoothMap pair_map(SpacePtr src, SpacePtr dst, const SmoothMap& a,
                   const SmoothMap& b) {
  SmoothMap m;
  m.src = src;
  m.dst = dst;
  m.fwd = [a, b](const Vec& p) {
    Vec x = a.fwd(p), y = b.fwd(p);
    Vec r(x.size() + y.size());
    r << x, y;
    return r;
  };
  m.tan = [a, b](const Vec& p, const Vec& v) {
    Vec x = a.tan(p, v), y = b.tan(p, v);
    Vec r(x.size() + y.size());
    r << x, y;
    return r;
  };
  return m;
}

Pairing plane_pairing(const LieGroupModel& G, const RMat& kap) {
  Pairing pr;
  pr.out = algebra_space(u1_model());
  pr.eval = [G, kap](const Vec& u, const Vec& v) {
    RVec xu = additive_coords(G, u), xv = additive_coords(G, v);
    return cval(cplx(0.0, xu.dot(kap * xv)));
  };
  return pr;
}

// exp(i ca x1(g1) x1(g2) x2(g3)) on the third nerve level.
PointMap assoc_map(const LieGroupModel& G, const LieGroupModel& T,
                   double ca) {
  int ga = G.amb();
  return [G, T, ca, ga](const Vec& p) {
    RVec x1 = additive_coords(G, Vec(p.segment(0, ga)));
    RVec x2 = additive_coords(G, Vec(p.segment(ga, ga)));
    RVec x3 = additive_coords(G, Vec(p.segment(2 * ga, ga)));
    RVec w(1);
    w[0] = ca * x1[0] * x2[0] * x3[1];
    return T.expv(w);
  };
}

PointMap hom_phase(const LieGroupModel& G, const LieGroupModel& T,
                   const RVec& wl) {
  return [G, T, wl](const Vec& p) {
    RVec w(1);
    w[0] = wl.dot(additive_coords(G, p));
    return T.expv(w);
  };
}

VForm hom_phase_form(SpacePtr base, const LieGroupModel& G, const RVec& wl,
                     VSpace tsp) {
  VForm r;
  r.base = base;
  r.deg = 1;
  r.V = tsp;
  r.eval = [G, wl](const Vec&, const std::vector<Vec>& vs) {
    return cval(cplx(0.0, wl.dot(additive_coords(G, vs[0]))));
  };
  r.dexact = [tsp](const Vec&, const std::vector<Vec>&) {
    return tsp.zero();
  };
  return r;
}

// i(e1 x0 x1 dx0 - e2 x0^2 dx1) on the group, with its exact d.
VForm fiber_potential(SpacePtr base, const LieGroupModel& G, double e1,
                      double e2, VSpace tsp) {
  VForm r;
  r.base = base;
  r.deg = 1;
  r.V = tsp;
  r.eval = [G, e1, e2](const Vec& p, const std::vector<Vec>& vs) {
    RVec x = additive_coords(G, p), u = additive_coords(G, vs[0]);
    return cval(cplx(0.0, e1 * x[0] * x[1] * u[0] - e2 * x[0] * x[0] * u[1]));
  };
  r.dexact = [G, e1, e2](const Vec& p, const std::vector<Vec>& vs) {
    RVec x = additive_coords(G, p);
    RVec u = additive_coords(G, vs[0]), v = additive_coords(G, vs[1]);
    return cval(cplx(0.0, -(e1 + 2.0 * e2) * x[0] *
                              (u[0] * v[1] - u[1] * v[0])));
  };
  return r;
}

// Potential on the second nerve level in three parts: the pairing term
// -<x(g1), dg2>, the simplicial difference of the fiber potential, and the
// closed primitive whose simplicial alternation cancels dlog alpha.
VForm plane_m_form(const SimplicialSpace& nv, const LieGroupModel& G,
                   const RMat& kap, double ca, const VForm& eta,
                   VSpace tsp) {
  int ga = G.amb();
  auto slc = [G, ga](const Vec& p, int k) {
    return additive_coords(G, Vec(p.segment(k * ga, ga)));
  };
  VForm m;
  m.base = nv.level[2];
  m.deg = 1;
  m.V = tsp;
  m.eval = [slc, kap, ca](const Vec& p, const std::vector<Vec>& vs) {
    RVec x1 = slc(p, 0), x2 = slc(p, 1);
    RVec w1 = slc(vs[0], 0), w2 = slc(vs[0], 1);
    double v = -x1.dot(kap * w2) + ca * x1[0] * x2[1] * w1[0] +
               0.5 * ca * x1[0] * x1[0] * w2[1];
    return cval(cplx(0.0, v));
  };
  m.dexact = [slc, kap](const Vec&, const std::vector<Vec>& vs) {
    RVec u1 = slc(vs[0], 0), u2 = slc(vs[0], 1);
    RVec v1 = slc(vs[1], 0), v2 = slc(vs[1], 1);
    return cval(cplx(0.0, -(u1.dot(kap * v2) - v1.dot(kap * u2))));
  };
  VForm de = add(sub(pullback(nv.d(2, 0), eta), pullback(nv.d(2, 1), eta)),
                 pullback(nv.d(2, 2), eta));
  return add(m, de);
}

// i d psi for psi = k1 x0 x1 + k2 x2 + k3 x3^2; closed by construction.
VForm phase_grad(SpacePtr base, const LieGroupModel& bm, double k1,
                 double k2, double k3, VSpace tsp) {
  VForm r;
  r.base = base;
  r.deg = 1;
  r.V = tsp;
  r.eval = [bm, k1, k2, k3](const Vec& p, const std::vector<Vec>& vs) {
    RVec x = additive_coords(bm, p), u = additive_coords(bm, vs[0]);
    return cval(cplx(0.0, k1 * (x[1] * u[0] + x[0] * u[1]) + k2 * u[2] +
                              2.0 * k3 * x[3] * u[3]));
  };
  r.dexact = [tsp](const Vec&, const std::vector<Vec>&) {
    return tsp.zero();
  };
  return r;
}

// Right translation on the group block starting at ambient offset `off`.
GroupAction slot_translation(SpacePtr total, int off,
                             const LieGroupModel& G) {
  GroupAction a;
  a.total = total;
  int ga = G.amb();
  a.act = [off, ga, G](const Vec& p, const Vec& g) {
    Vec q = p;
    q.segment(off, ga) = G.mul(Vec(p.segment(off, ga)), g);
    return q;
  };
  a.act_tan = [off, ga, G](const Vec& p, const Vec& g, const Vec& vp,
                           const Vec& vg) {
    Vec q = vp;
    q.segment(off, ga) = G.rmul_tan(Vec(vp.segment(off, ga)), g) +
                         G.lmul_tan(Vec(p.segment(off, ga)), vg);
    return q;
  };
  return a;
}

// theta_L on the fiber plus the adjoint-twisted pullback of rho.
VForm twisted_connection(SpacePtr total, int mp, const LieGroupModel& G,
                         const VForm& rho) {
  VForm A;
  A.base = total;
  A.deg = 1;
  A.V = algebra_space(G);
  int ga = G.amb();
  A.eval = [mp, ga, G, rho](const Vec& p, const std::vector<Vec>& vs) {
    Vec h = p.segment(mp, ga), vh = vs[0].segment(mp, ga);
    Vec hx = G.inv(h);
    Vec rv = rho.eval(Vec(p.head(mp)), {Vec(vs[0].head(mp))});
    return Vec(G.lmul_tan(hx, Vec(vh)) + G.Ad(hx, rv));
  };
  return A;
}

MultGerbeData trivial_gerbe(const LieGroupModel& G, const LieGroupModel& T,
                            bool with_conn) {
  MultGerbeData g;
  g.cover = one_chart_simplicial_cover(G, 4);
  g.G = G;
  g.T = T;
  g.t = algebra_space(T);
  PointMap tid = const_pt(T.id());
  g.lambda = [tid](int, int, int) { return tid; };
  g.m = [tid](int, int) { return tid; };
  g.alpha = [tid](int) { return tid; };
  if (with_conn) {
    g.has_conn = true;
    VForm za = zero_form(g.cover.nerve.level[1], 1, g.t);
    VForm zm = zero_form(g.cover.nerve.level[2], 1, g.t);
    g.A = [za](int, int) { return za; };
    g.M = [zm](int) { return zm; };
  }
  return g;
}

}  // namespace

PlaneTwoBundle plane_two_bundle() {
  PlaneTwoBundle s;
  LieGroupModel pl4 = additive_model(4, "patch-space");
  s.G = additive_model(2, "plane-group");
  s.T = u1_model();
  LieGroupModel G = s.G, T = s.T;
  s.base = sp(pl4.space());
  SpacePtr base = s.base;
  VSpace tsp = algebra_space(T);
  VSpace gv = algebra_space(G);

  s.cover.base = base;
  for (int i = 0; i < 4; ++i) {
    s.cover.names.push_back("P" + std::to_string(i));
    s.cover.member.push_back([](const Vec&) { return true; });
  }

  RMat kap(2, 2);
  kap << 0.8, 0.3, 0.3, -0.5;
  double ca = 0.4;
  RVec wl(2);
  wl << 0.6, -0.35;

  // one-chart gerbe: trivial lambda and m, cubic associator phase, M built
  // so that its simplicial alternation cancels dlog alpha exactly
  s.mg = trivial_gerbe(G, T, false);
  const SimplicialSpace& nv = s.mg.cover.nerve;
  PointMap al = assoc_map(G, T, ca);
  s.mg.alpha = [al](int) { return al; };
  s.mg.has_conn = true;
  VForm eta = fiber_potential(nv.level[1], G, 0.6, 0.2, tsp);
  VForm M = plane_m_form(nv, G, kap, ca, eta, tsp);
  VForm za = zero_form(nv.level[1], 1, tsp);
  s.mg.A = [za](int, int) { return za; };
  s.mg.M = [M](int) { return M; };
  SpacePtr l2 = nv.level[2];

  s.pd = pairing_data(G, nv, plane_pairing(G, kap));
  Pairing pr = s.pd.pair;
  VForm Theta = curving_form(s.mg, 0);

  // the same gerbe over a cover with several charts per level; lambda a
  // homomorphism phase so its potential has constant coefficients
  s.mg_dup = s.mg;
  {
    SimplicialCover scd;
    scd.nerve = nv;
    std::vector<int> sizes = {1, 4, 3, 2, 1};
    for (int n = 0; n <= 4; ++n) {
      IndexedCover cv;
      cv.base = nv.level[n];
      for (int i = 0; i < sizes[n]; ++i) {
        cv.names.push_back("L" + std::to_string(n) + "c" + std::to_string(i));
        cv.member.push_back([](const Vec&) { return true; });
      }
      scd.cover.push_back(cv);
    }
    scd.dmap.resize(5);
    for (int n = 1; n <= 4; ++n) {
      scd.dmap[n].resize(n + 1);
      for (int j = 0; j <= n; ++j) {
        scd.dmap[n][j].resize(sizes[n]);
        for (int i = 0; i < sizes[n]; ++i) {
          int v = 0;  // downmaps stay monotone in the chart index
          if (n == 2) v = i + (j == 1 ? 1 : 0);
          if (n == 3) v = i + (j & 1);
          if (n == 4) v = j & 1;
          scd.dmap[n][j][i] = v;
        }
      }
    }
    s.mg_dup.cover = scd;
  }
  PointMap lam = hom_phase(G, T, wl);
  s.mg_dup.lambda = [lam](int, int, int) { return lam; };
  VForm Astar = hom_phase_form(nv.level[1], G, wl, tsp);
  s.mg_dup.A = [Astar](int, int) { return Astar; };

  // gauge coordinates, their sections and transitions
  std::vector<CoordFn> f, f2, f12;
  for (int a = 0; a < 4; ++a) {
    f.push_back(seeded_coords(2, a));
    f2.push_back(seeded_coords(2, 10 + a));
    f12.push_back(coord_sum(f[a], f2[a]));
  }
  auto mkmaps = [&](const std::vector<CoordFn>& F) {
    std::vector<SmoothMap> v;
    for (int a = 0; a < 4; ++a) v.push_back(coord_map(base, pl4, G, F[a]));
    return v;
  };
  std::vector<SmoothMap> fm = mkmaps(f), fm2 = mkmaps(f2),
                         fm12 = mkmaps(f12);
  auto mkg = [&](const std::vector<CoordFn>& F) {
    std::vector<std::vector<SmoothMap>> g(4, std::vector<SmoothMap>(4));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        g[a][b] = coord_map(base, pl4, G, coord_diff(F[a], F[b]));
    return g;
  };
  std::vector<std::vector<SmoothMap>> g1 = mkg(f), g3 = mkg(f12);
  s.sec = fm;
  s.gmap = g1;

  VForm rho = seeded_potential(base, pl4, G, 0.45, 3);
  s.rho = rho;
  VForm B0 = seeded_two_form(base, pl4, 0.4, 5, tsp);
  SymTensor h0 = seeded_sym(base, pl4, 0.5, 6, tsp);

  // chart potentials of the two gauges; the composed one carries the M
  // correction that makes the two-step and one-step transports agree
  std::vector<VForm> pf, p2f, p12f;
  for (int a = 0; a < 4; ++a) {
    pf.push_back(seeded_potential(base, pl4, T, 0.5, 20 + a));
    p2f.push_back(seeded_potential(base, pl4, T, 0.5, 30 + a));
    p12f.push_back(add(add(pf[a], p2f[a]),
                       pullback(pair_map(base, l2, fm2[a], fm[a]), M)));
  }

  auto kpsi = [](int a, int b, int k) {
    if (k == 0) return 0.3 + 0.1 * (a + b);
    if (k == 1) return 0.2 * std::sin(1.0 + a * b);
    return 0.15 * std::sin(2.0 + a - b);
  };
  auto dlv = [base, &pl4, kpsi, tsp](int a, int b) {
    return phase_grad(base, pl4, kpsi(a, b, 0), kpsi(a, b, 1),
                      kpsi(a, b, 2), tsp);
  };
  // associator phase along (g_ab, g_bc, f_c), salted by a phase coboundary
  auto t_triple = [pl4, T, ca, kpsi](const std::vector<CoordFn>& F, int a,
                                     int b, int c) -> PointMap {
    CoordFn fa = F[a], fb = F[b], fc = F[c];
    return [pl4, T, ca, kpsi, fa, fb, fc, a, b, c](const Vec& x) {
      RVec xc = additive_coords(pl4, x);
      RVec wa = fa.w(xc), wb = fb.w(xc), wc = fc.w(xc);
      auto psi = [&](int i, int j) {
        return kpsi(i, j, 0) * xc[0] * xc[1] + kpsi(i, j, 1) * xc[2] +
               kpsi(i, j, 2) * xc[3] * xc[3];
      };
      RVec w(1);
      w[0] = ca * (wa[0] - wb[0]) * (wb[0] - wc[0]) * wc[1] + psi(b, c) -
             psi(a, c) + psi(a, b);
      return T.expv(w);
    };
  };

  // identity cocycle with its flat and seeded connections
  PointMap gid = const_pt(G.id());
  PointMap tid = const_pt(T.id());
  s.triv.mg = s.mg;
  s.triv.cover = s.cover;
  s.triv.g = [gid](int, int) { return gid; };
  s.triv.s = [tid](int, int, int, int) { return tid; };
  s.triv.t = [tid](int, int, int, int) { return tid; };

  VForm zs = zero_form(base, 1, tsp);
  VForm zA = zero_form(base, 1, gv);
  VForm zB = zero_form(base, 2, tsp);
  s.flat.sigma = [zs](int, int, int) { return zs; };
  s.flat.A = [zA](int) { return zA; };
  s.flat.B = [zB](int) { return zB; };

  s.conn.sigma = [zs](int, int, int) { return zs; };
  s.conn.A = [rho](int) { return rho; };
  s.conn.B = [B0](int) { return B0; };
  SymTensor hr = enhanced(h0, rho, pr);
  s.conn.h = [hr](int) { return hr; };

  // first gauge image and the transported connection in closed form
  s.twisted.mg = s.mg;
  s.twisted.cover = s.cover;
  s.twisted.g = [g1](int a, int b) { return g1[a][b].fwd; };
  s.twisted.s = [tid](int, int, int, int) { return tid; };
  s.twisted.t = [t_triple, f](int a, int b, int c, int) {
    return t_triple(f, a, b, c);
  };

  std::vector<std::vector<VForm>> sg2(4, std::vector<VForm>(4, zs));
  std::vector<std::vector<VForm>> sg3 = sg2;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      VForm d = dlv(a, b);
      sg2[a][b] = add(
          add(sub(pf[a], pf[b]),
              scale(-1.0, pullback(pair_map(base, l2, g1[a][b], fm[b]), M))),
          d);
      sg2[b][a] = scale(-1.0, sg2[a][b]);
      sg3[a][b] = add(add(sub(p12f[a], p12f[b]),
                          scale(-1.0, pullback(pair_map(base, l2, g3[a][b],
                                                        fm12[b]),
                                               M))),
                      d);
      sg3[b][a] = scale(-1.0, sg3[a][b]);
    }

  std::vector<VForm> A2, B2, b1, b2, b12;
  std::vector<SymTensor> h2;
  for (int a = 0; a < 4; ++a) {
    VForm df = tan_form(fm[a], gv);
    A2.push_back(sub(rho, df));
    B2.push_back(sub(sub(sub(B0, wedge_pair(df, rho, pr)), d_form(pf[a])),
                     pullback(fm[a], Theta)));
    h2.push_back(enhanced(h0, A2[a], pr));
    b1.push_back(add(d_form(pf[a]), pullback(fm[a], Theta)));
    b2.push_back(add(d_form(p2f[a]), pullback(fm2[a], Theta)));
    b12.push_back(add(d_form(p12f[a]), pullback(fm12[a], Theta)));
  }
  s.conn2.sigma = [sg2](int a, int b, int) { return sg2[a][b]; };
  s.conn2.A = [A2](int a) { return A2[a]; };
  s.conn2.B = [B2](int a) { return B2[a]; };
  s.conn2.h = [h2](int a) { return h2[a]; };

  s.twisted2.mg = s.mg;
  s.twisted2.cover = s.cover;
  s.twisted2.g = [g3](int a, int b) { return g3[a][b].fwd; };
  s.twisted2.s = [tid](int, int, int, int) { return tid; };
  s.twisted2.t = [t_triple, f12](int a, int b, int c, int) {
    return t_triple(f12, a, b, c);
  };

  auto sig_of = [](const std::vector<std::vector<VForm>>& g) {
    return [g](int a, int b, int) { return g[a][b]; };
  };
  s.gauge.src = s.triv;
  s.gauge.dst = s.twisted;
  s.gauge.phi = [fm](int a) { return fm[a].fwd; };
  s.gauge.b = [b1](int a) { return b1[a]; };
  s.gauge.sigma2 = sig_of(sg2);
  s.gauge2.src = s.twisted;
  s.gauge2.dst = s.twisted2;
  s.gauge2.phi = [fm2](int a) { return fm2[a].fwd; };
  s.gauge2.b = [b2](int a) { return b2[a]; };
  s.gauge2.sigma2 = sig_of(sg3);
  s.gauge12.src = s.triv;
  s.gauge12.dst = s.twisted2;
  s.gauge12.phi = [fm12](int a) { return fm12[a].fwd; };
  s.gauge12.b = [b12](int a) { return b12[a]; };
  s.gauge12.sigma2 = sig_of(sg3);

  // twisted again, over the duplicated cover: s absorbs lambda through the
  // transitions, everything else is shared
  s.dup.mg = s.mg_dup;
  s.dup.cover = s.cover;
  s.dup.g = s.twisted.g;
  s.dup.s = [g1, lam, T](int a, int b, int, int) -> PointMap {
    SmoothMap g = g1[a][b];
    return [g, lam, T](const Vec& x) { return T.inv(lam(g.fwd(x))); };
  };
  s.dup.t = s.twisted.t;

  VForm ash = seeded_potential(base, pl4, G, 0.3, 40);
  s.shift.a = [ash](int) { return ash; };
  s.shift.b = seeded_two_form(base, pl4, 0.3, 41, tsp);
  s.shift.h = seeded_sym(base, pl4, 0.3, 42, tsp);
  std::vector<VForm> tv;
  for (int a = 0; a < 4; ++a)
    tv.push_back(seeded_potential(base, pl4, T, 0.4, 50 + a));
  s.tau = [tv](int a) { return tv[a]; };
  return s;
}

HopfTwist hopf_twist() {
  HopfTwist w;
  w.h = hopf_surface();
  LieGroupModel su2 = su2_model(), t1 = u1_model();
  VSpace tsp = algebra_space(t1);
  w.mg = trivial_gerbe(su2, t1, true);

  Pairing zp;
  zp.out = tsp;
  zp.eval = [tsp](const Vec&, const Vec&) { return tsp.zero(); };
  w.pd = pairing_data(su2, w.mg.cover.nerve, zp);

  w.bundle.mg = w.mg;
  w.bundle.cover = w.h.cover;
  PointMap gid = const_pt(su2.id());
  PointMap tid = const_pt(t1.id());
  w.bundle.g = [gid](int, int) { return gid; };
  w.bundle.s = [tid](int, int, int, int) { return tid; };
  GerbeData u = w.h.unitary;
  w.bundle.t = [u, t1](int a, int b, int c, int) -> PointMap {
    PointMap l = u.lambda(a, b, c);
    return [l, t1](const Vec& x) { return t1.inv(l(x)); };
  };
  w.conn.sigma = [u](int a, int b, int) { return scale(-1.0, u.conn(a, b)); };
  VForm zA = zero_form(w.h.cover.base, 1, algebra_space(su2));
  w.conn.A = [zA](int) { return zA; };
  w.conn.B = [u](int a) { return u.curving(a); };
  return w;
}

FreeConnScenario free_conn_su2() {
  FreeConnScenario s;
  s.G = su2_model();
  LieGroupModel pl4 = additive_model(4, "patch-space");
  LieGroupModel t1 = u1_model();
  VSpace tsp = algebra_space(t1);
  s.base = sp(pl4.space());
  s.pd = pairing_data(s.G, trace_pairing(cplx(0.0, 4.0), 2, tsp));

  s.bundle.mg = trivial_gerbe(s.G, t1, true);
  s.bundle.cover = one_chart_cover(s.base, "patch");
  PointMap gid = const_pt(s.G.id());
  PointMap tid = const_pt(t1.id());
  s.bundle.g = [gid](int, int) { return gid; };
  s.bundle.s = [tid](int, int, int, int) { return tid; };
  s.bundle.t = [tid](int, int, int, int) { return tid; };

  VForm zs = zero_form(s.base, 1, tsp);
  VForm A = seeded_potential(s.base, pl4, s.G, 0.5, 7);
  VForm B = seeded_two_form(s.base, pl4, 0.4, 8, tsp);
  s.conn.sigma = [zs](int, int, int) { return zs; };
  s.conn.A = [A](int) { return A; };
  s.conn.B = [B](int) { return B; };
  return s;
}

CsScenario cs_scenario_su2() {
  CsScenario s;
  s.G = su2_model();
  LieGroupModel pl4 = additive_model(4, "patch-space");
  SpacePtr base = sp(pl4.space());
  SpacePtr total = sp(product(*base, s.G.space()));
  GroupAction act = slot_translation(total, base->amb, s.G);
  s.pd = pairing_data(s.G, trace_pairing(cplx(4.0, 0.0), 2, scalar_real()));
  s.rho = seeded_potential(base, pl4, s.G, 0.5, 13);
  s.in = {act, s.G, twisted_connection(total, base->amb, s.G, s.rho)};
  s.mc = {act, s.G,
          twisted_connection(total, base->amb, s.G,
                             zero_form(base, 1, algebra_space(s.G)))};
  return s;
}

CsScenario cs_scenario_plane() {
  CsScenario s;
  s.G = additive_model(2, "plane-group");
  LieGroupModel pl4 = additive_model(4, "patch-space");
  SpacePtr base = sp(pl4.space());
  SpacePtr total = sp(product(*base, s.G.space()));
  GroupAction act = slot_translation(total, base->amb, s.G);
  RMat kap(2, 2);
  kap << 0.8, 0.3, 0.3, -0.5;
  s.pd = pairing_data(s.G, plane_pairing(s.G, kap));
  s.rho = seeded_potential(base, pl4, s.G, 0.5, 17);
  s.in = {act, s.G, twisted_connection(total, base->amb, s.G, s.rho)};
  s.mc = {act, s.G,
          twisted_connection(total, base->amb, s.G,
                             zero_form(base, 1, algebra_space(s.G)))};
  return s;
}

PlanePgScenario plane_pg_scenario() {
  PlanePgScenario s;
  s.tb = plane_two_bundle();
  const PlaneTwoBundle tb = s.tb;
  LieGroupModel G = tb.G, T = tb.T;
  SpacePtr base = tb.base;
  int mp = base->amb, ga = G.amb();
  SpacePtr total = sp(product(*base, G.space()));
  s.total = total;
  s.act = slot_translation(total, mp, G);
  SimplicialSpace an = action_nerve(s.act, G, 3);
  int mpp = mp + ga;

  SimplicialCover vc;
  vc.nerve = an;
  for (int n = 0; n <= 3; ++n) {
    IndexedCover cv;
    cv.base = an.level[n];
    for (int i = 0; i < 4; ++i) {
      cv.names.push_back("V" + std::to_string(n) + "c" + std::to_string(i));
      cv.member.push_back([](const Vec&) { return true; });
    }
    vc.cover.push_back(cv);
  }
  vc.dmap.resize(4);
  for (int n = 1; n <= 3; ++n) vc.dmap[n].assign(n + 1, {0, 1, 2, 3});
  s.data.mg = tb.mg;
  s.data.vcover = vc;
  s.data.pi.assign(4, {0, 0, 0, 0});

  // torsor sections w + f_a and maps factoring through the base
  auto secm = [total, mp, ga, G](const SmoothMap& fa) {
    SmoothMap m;
    m.src = total;
    m.dst = fa.dst;
    m.fwd = [mp, ga, G, fa](const Vec& p) {
      return G.mul(Vec(p.segment(mp, ga)), fa.fwd(Vec(p.head(mp))));
    };
    m.tan = [mp, ga, fa](const Vec& p, const Vec& v) {
      return Vec(Vec(v.segment(mp, ga)) +
                 fa.tan(Vec(p.head(mp)), Vec(v.head(mp))));
    };
    return m;
  };
  std::vector<SmoothMap> r;
  for (int a = 0; a < 4; ++a) r.push_back(secm(tb.sec[a]));
  SmoothMap pim;
  pim.src = total;
  pim.dst = base;
  pim.fwd = [mp](const Vec& p) { return Vec(p.head(mp)); };
  pim.tan = [mp](const Vec&, const Vec& v) { return Vec(v.head(mp)); };
  auto through = [total, mp](const SmoothMap& m) {
    SmoothMap t;
    t.src = total;
    t.dst = m.dst;
    t.fwd = [m, mp](const Vec& p) { return m.fwd(Vec(p.head(mp))); };
    t.tan = [m, mp](const Vec& p, const Vec& v) {
      return m.tan(Vec(p.head(mp)), Vec(v.head(mp)));
    };
    return t;
  };

  PointMap al = tb.mg.alpha(0);
  auto cat3 = [](const Vec& a, const Vec& b, const Vec& c) {
    Vec out(a.size() + b.size() + c.size());
    out << a, b, c;
    return out;
  };

  std::vector<std::vector<PointMap>> gm(4, std::vector<PointMap>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) gm[a][b] = tb.gmap[a][b].fwd;
  auto tw = tb.twisted.t;
  s.data.b = [gm, tw, r, al, cat3, mp, T](int i, int j, int k) -> PointMap {
    PointMap tt = tw(i, j, k, 0), gij = gm[i][j], gjk = gm[j][k];
    SmoothMap rk = r[k];
    return [tt, gij, gjk, rk, al, cat3, mp, T](const Vec& p) {
      Vec x = p.head(mp);
      return T.mul(T.inv(tt(x)), al(cat3(gij(x), gjk(x), rk.fwd(p))));
    };
  };
  s.data.act = [gm, r, al, cat3, mp, mpp, ga, T](int i, int j) -> PointMap {
    PointMap gij = gm[i][j];
    SmoothMap rj = r[j];
    return [gij, rj, al, cat3, mp, mpp, ga, T](const Vec& q) {
      Vec p = q.head(mpp);
      return T.inv(al(cat3(gij(Vec(p.head(mp))), rj.fwd(p),
                           Vec(q.segment(mpp, ga)))));
    };
  };
  s.data.beta = [r, al, cat3, mpp, ga](int i) -> PointMap {
    SmoothMap ri = r[i];
    return [ri, al, cat3, mpp, ga](const Vec& q) {
      return al(cat3(ri.fwd(Vec(q.head(mpp))), Vec(q.segment(mpp, ga)),
                     Vec(q.segment(mpp + ga, ga))));
    };
  };

  // invariant potential dw + rho and the descended connection fields
  VForm rho = tb.rho;
  VForm A;
  A.base = total;
  A.deg = 1;
  A.V = algebra_space(G);
  A.eval = [mp, ga, rho](const Vec& p, const std::vector<Vec>& vs) {
    return Vec(Vec(vs[0].segment(mp, ga)) +
               rho.eval(Vec(p.head(mp)), {Vec(vs[0].head(mp))}));
  };
  A.dexact = [mp, rho](const Vec& p, const std::vector<Vec>& vs) {
    return rho.dexact(Vec(p.head(mp)),
                      {Vec(vs[0].head(mp)), Vec(vs[1].head(mp))});
  };
  s.conn.A = A;

  VForm M0 = tb.mg.M(0);
  SpacePtr l2 = tb.mg.cover.nerve.level[2];
  std::vector<std::vector<VForm>> spg(
      4, std::vector<VForm>(4, zero_form(total, 1, tb.mg.t)));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      spg[i][j] = scale(
          -1.0, add(pullback(pim, tb.conn2.sigma(i, j, 0)),
                    pullback(pair_map(total, l2, through(tb.gmap[i][j]),
                                      r[j]),
                             M0)));
    }
  s.conn.sigma = [spg](int i, int j) { return spg[i][j]; };

  std::vector<VForm> etapg;
  for (int a = 0; a < 4; ++a) {
    SmoothMap em;
    em.src = an.level[1];
    em.dst = l2;
    SmoothMap ra = r[a];
    em.fwd = [ra, mpp, ga](const Vec& q) {
      Vec out(2 * ga);
      out << ra.fwd(Vec(q.head(mpp))), Vec(q.segment(mpp, ga));
      return out;
    };
    em.tan = [ra, mpp, ga](const Vec& q, const Vec& v) {
      Vec out(2 * ga);
      out << ra.tan(Vec(q.head(mpp)), Vec(v.head(mpp))),
          Vec(v.segment(mpp, ga));
      return out;
    };
    etapg.push_back(pullback(em, M0));
  }
  s.conn.eta = [etapg](int a) { return etapg[a]; };

  VForm Theta = curving_form(tb.mg, 0);
  VForm thR = maurer_cartan_right(G, sp(G.space()));
  std::vector<VForm> Bpg;
  for (int a = 0; a < 4; ++a)
    Bpg.push_back(sub(add(pullback(r[a], Theta),
                          pullback(pim, tb.conn2.B(a))),
                      wedge_pair(pullback(pim, tb.conn2.A(a)),
                                 pullback(r[a], thR), tb.pd.pair)));
  s.conn.B = [Bpg](int a) { return Bpg[a]; };
  return s;
}

}  // namespace hgt
