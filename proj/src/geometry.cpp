#include "hgt/geometry.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cassert>
#include <cmath>

namespace hgt {

RVec chart_coords(const Chart& c, const Vec& v) {
  RMat P(2 * v.size(), c.dim);
  RVec zero = RVec::Zero(c.dim);
  for (int i = 0; i < c.dim; ++i) {
    P.col(i) = realify(c.push(zero, RVec::Unit(c.dim, i)));
  }
  return P.colPivHouseholderQr().solve(realify(v));
}

std::vector<Vec> ChartedSpace::frame(const Vec& p) const {
  Chart c = chart_at(p);
  RVec zero = RVec::Zero(c.dim);
  std::vector<Vec> out;
  out.reserve(c.dim);
  for (int i = 0; i < c.dim; ++i) out.push_back(c.push(zero, RVec::Unit(c.dim, i)));
  return out;
}

Vec ChartedSpace::random_tangent(const Vec& p, Rng& rng) const {
  Chart c = chart_at(p);
  RVec coeff(c.dim);
  for (int i = 0; i < c.dim; ++i) coeff[i] = urand(rng, -1.0, 1.0);
  return c.push(RVec::Zero(c.dim), coeff);
}

SpacePtr sp(ChartedSpace s) {
  return std::make_shared<const ChartedSpace>(std::move(s));
}

Vec slot(const Vec& p, int i, int m) { return p.segment(i * m, m); }

void set_slot(Vec& p, int i, const Vec& x) { p.segment(i * x.size(), x.size()) = x; }

ChartedSpace point_space() {
  ChartedSpace s;
  s.dim = 0;
  s.amb = 0;
  s.chart_at = [](const Vec&) {
    Chart c;
    c.dim = 0;
    c.point = [](const RVec&) { return Vec(0); };
    c.push = [](const RVec&, const RVec&) { return Vec::Zero(0); };
    return c;
  };
  s.sample = [](Rng&) { return Vec(0); };
  s.member = [](const Vec&) { return true; };
  return s;
}

ChartedSpace product(const ChartedSpace& a, const ChartedSpace& b) {
  ChartedSpace s;
  s.dim = a.dim + b.dim;
  s.amb = a.amb + b.amb;
  int da = a.dim, ma = a.amb;
  s.chart_at = [a, b, da, ma](const Vec& p) {
    Chart ca = a.chart_at(p.head(ma));
    Chart cb = b.chart_at(p.tail(p.size() - ma));
    Chart c;
    c.dim = ca.dim + cb.dim;
    c.point = [ca, cb, da](const RVec& u) {
      Vec pa = ca.point(u.head(da));
      Vec pb = cb.point(u.tail(u.size() - da));
      Vec out(pa.size() + pb.size());
      out << pa, pb;
      return out;
    };
    c.push = [ca, cb, da](const RVec& u, const RVec& w) {
      Vec va = ca.push(u.head(da), w.head(da));
      Vec vb = cb.push(u.tail(u.size() - da), w.tail(w.size() - da));
      Vec out(va.size() + vb.size());
      out << va, vb;
      return out;
    };
    return c;
  };
  s.sample = [a, b](Rng& rng) {
    Vec pa = a.sample(rng);
    Vec pb = b.sample(rng);
    Vec out(pa.size() + pb.size());
    out << pa, pb;
    return out;
  };
  if (a.J && b.J) {
    s.J = [a, b, ma](const Vec& p, const Vec& v) {
      Vec ja = a.J(p.head(ma), v.head(ma));
      Vec jb = b.J(p.tail(p.size() - ma), v.tail(v.size() - ma));
      Vec out(ja.size() + jb.size());
      out << ja, jb;
      return out;
    };
  }
  if (a.member && b.member) {
    s.member = [a, b, ma](const Vec& p) {
      return a.member(p.head(ma)) && b.member(p.tail(p.size() - ma));
    };
  }
  return s;
}

ChartedSpace power(const ChartedSpace& g, int n) {
  if (n == 0) return point_space();
  ChartedSpace s = g;
  for (int i = 1; i < n; ++i) s = product(s, g);
  return s;
}

ChartedSpace complex_affine_space(int n, double box) {
  ChartedSpace s;
  s.dim = 2 * n;
  s.amb = n;
  s.chart_at = [n](const Vec& p) {
    Chart c;
    c.dim = 2 * n;
    c.point = [p, n](const RVec& u) {
      Vec q = p;
      for (int j = 0; j < n; ++j) q[j] += cplx(u[2 * j], u[2 * j + 1]);
      return q;
    };
    c.push = [n](const RVec&, const RVec& w) {
      Vec v(n);
      for (int j = 0; j < n; ++j) v[j] = cplx(w[2 * j], w[2 * j + 1]);
      return v;
    };
    return c;
  };
  s.sample = [n, box](Rng& rng) {
    Vec p(n);
    for (int j = 0; j < n; ++j)
      p[j] = cplx(urand(rng, -box, box), urand(rng, -box, box));
    return p;
  };
  s.J = [](const Vec&, const Vec& v) { return Vec(kI * v); };
  s.member = [](const Vec&) { return true; };
  return s;
}

Vec SmoothMap::push(const Vec& p, const Vec& v) const {
  if (tan) return tan(p, v);
  Chart c = src->chart_at(p);
  RVec x = chart_coords(c, v);
  auto f = fwd;
  return fd_deriv([&](double t) { return f(c.point(t * x)); });
}

SmoothMap identity_map(SpacePtr s) {
  SmoothMap m;
  m.src = s;
  m.dst = s;
  m.fwd = [](const Vec& p) { return p; };
  m.tan = [](const Vec&, const Vec& v) { return v; };
  return m;
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  SmoothMap m;
  m.src = inner.src;
  m.dst = outer.dst;
  auto of = outer.fwd;
  auto inf = inner.fwd;
  m.fwd = [of, inf](const Vec& p) { return of(inf(p)); };
  if (outer.tan && inner.tan) {
    auto ot = outer.tan;
    auto it = inner.tan;
    m.tan = [of, inf, ot, it](const Vec& p, const Vec& v) {
      return ot(inf(p), it(p, v));
    };
  }
  return m;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~ matrix Lie groups ~~~~~~~~~~~~~~~~~~~~~~~~~~~

Vec LieGroupModel::id() const { return flat(Mat::Identity(n, n)); }

Vec LieGroupModel::mul(const Vec& a, const Vec& b) const {
  return flat(unflat(a, n) * unflat(b, n));
}

Vec LieGroupModel::inv(const Vec& g) const {
  return flat(unflat(g, n).inverse());
}

Vec LieGroupModel::expm(const Mat& a) const { return flat(a.exp()); }

Mat LieGroupModel::algv(const RVec& coeffs) const {
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < dim(); ++i) a += coeffs[i] * alg[i];
  return a;
}

Vec LieGroupModel::expv(const RVec& coeffs) const { return expm(algv(coeffs)); }

Vec LieGroupModel::Ad(const Vec& g, const Vec& u) const {
  Mat gm = unflat(g, n);
  return flat(gm * unflat(u, n) * gm.inverse());
}

Vec LieGroupModel::bracket(const Vec& u, const Vec& v) const {
  Mat um = unflat(u, n), vm = unflat(v, n);
  return flat(um * vm - vm * um);
}

bool LieGroupModel::member(const Vec& g, double tol) const {
  if (g.size() != amb()) return false;
  return member_mat ? member_mat(unflat(g, n), tol) : true;
}

Vec LieGroupModel::lmul_tan(const Vec& h, const Vec& v) const {
  return flat(unflat(h, n) * unflat(v, n));
}

Vec LieGroupModel::rmul_tan(const Vec& v, const Vec& h) const {
  return flat(unflat(v, n) * unflat(h, n));
}

Vec LieGroupModel::inv_tan(const Vec& g, const Vec& v) const {
  Mat gi = unflat(g, n).inverse();
  return flat(-gi * unflat(v, n) * gi);
}

Mat LieGroupModel::dexp(const Mat& a, const Mat& b) const {
  // d/dt exp(a+tb) = exp(a) * sum_k (-1)^k ad_a^k(b) / (k+1)!
  Mat cur = b;
  Mat acc = b;
  double coef = 1.0;
  for (int k = 1; k < 40; ++k) {
    cur = a * cur - cur * a;
    coef *= -1.0 / (k + 1);
    acc += coef * cur;
    if (cur.norm() * std::abs(coef) < 1e-17 * (1.0 + acc.norm())) break;
  }
  return a.exp() * acc;
}

Chart LieGroupModel::chart(const Vec& g0) const {
  Chart c;
  c.dim = dim();
  Mat g0m = unflat(g0, n);
  LieGroupModel self = *this;
  c.point = [self, g0m](const RVec& u) { return flat(g0m * unflat(self.expv(u), self.n)); };
  c.push = [self, g0m](const RVec& u, const RVec& w) {
    return flat(g0m * self.dexp(self.algv(u), self.algv(w)));
  };
  return c;
}

ChartedSpace LieGroupModel::space() const {
  ChartedSpace s;
  s.dim = dim();
  s.amb = amb();
  LieGroupModel self = *this;
  s.chart_at = [self](const Vec& p) { return self.chart(p); };
  s.sample = sampler;
  if (complex_group) {
    s.J = [](const Vec&, const Vec& v) { return Vec(kI * v); };
  }
  s.member = [self](const Vec& p) { return self.member(p); };
  return s;
}

namespace {

Mat pauli(int j) {
  Mat s(2, 2);
  switch (j) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace

LieGroupModel su2_model() {
  LieGroupModel g;
  g.name = "SU(2)";
  g.n = 2;
  // e_j = -(i/2) sigma_j, so [e1,e2] = e3 cyclically.
  for (int j = 1; j <= 3; ++j) g.alg.push_back(-0.5 * kI * pauli(j));
  g.member_mat = [](const Mat& m, double tol) {
    return (m.adjoint() * m - Mat::Identity(2, 2)).norm() < tol &&
           std::abs(m.determinant() - 1.0) < tol;
  };
  g.sampler = [](Rng& rng) {
    // Haar: normalized quaternion.
    double q[4];
    double nn = 0;
    for (double& x : q) {
      x = nrand(rng);
      nn += x * x;
    }
    nn = std::sqrt(nn);
    for (double& x : q) x /= nn;
    Mat m(2, 2);
    m << cplx(q[0], q[1]), cplx(q[2], q[3]), cplx(-q[2], q[3]), cplx(q[0], -q[1]);
    return flat(m);
  };
  return g;
}

LieGroupModel sl2c_model() {
  LieGroupModel su = su2_model();
  LieGroupModel g;
  g.name = "SL(2,C)";
  g.n = 2;
  g.complex_group = true;
  for (const Mat& b : su.alg) g.alg.push_back(b);
  for (const Mat& b : su.alg) g.alg.push_back(kI * b);
  g.member_mat = [](const Mat& m, double tol) {
    return std::abs(m.determinant() - 1.0) < tol;
  };
  g.sampler = [su, g0 = g](Rng& rng) {
    RVec c(6);
    for (int i = 0; i < 6; ++i) c[i] = urand(rng, -0.5, 0.5);
    Vec k = su.sampler(rng);
    return g0.mul(k, g0.expv(c));
  };
  return g;
}

LieGroupModel u1_model() {
  LieGroupModel g;
  g.name = "U(1)";
  g.n = 1;
  g.alg.push_back(kI * Mat::Identity(1, 1));
  g.member_mat = [](const Mat& m, double tol) {
    return std::abs(std::abs(m(0, 0)) - 1.0) < tol;
  };
  g.sampler = [](Rng& rng) {
    Vec v(1);
    v[0] = std::exp(kI * urand(rng, -kPi, kPi));
    return v;
  };
  return g;
}

LieGroupModel cstar_model() {
  LieGroupModel g;
  g.name = "C*";
  g.n = 1;
  g.complex_group = true;
  g.alg.push_back(Mat::Identity(1, 1));
  g.alg.push_back(kI * Mat::Identity(1, 1));
  g.member_mat = [](const Mat& m, double) { return std::abs(m(0, 0)) > 1e-8; };
  g.sampler = [](Rng& rng) {
    Vec v(1);
    v[0] = std::exp(cplx(urand(rng, -1.0, 1.0), urand(rng, -kPi, kPi)));
    return v;
  };
  return g;
}

LieGroupModel additive_model(int k, const std::string& name) {
  LieGroupModel g;
  g.name = name.empty() ? "R^" + std::to_string(k) : name;
  g.n = k + 1;
  for (int j = 0; j < k; ++j) {
    Mat b = Mat::Zero(k + 1, k + 1);
    b(0, j + 1) = 1;
    g.alg.push_back(b);
  }
  int n = g.n;
  g.member_mat = [n](const Mat& m, double tol) {
    Mat r = m - Mat::Identity(n, n);
    double off = 0;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j) off += std::abs(r(i, j));
    for (int j = 1; j < n; ++j) off += std::abs(r(0, j).imag());
    return off + std::abs(r(0, 0)) < tol;
  };
  LieGroupModel self = g;
  g.sampler = [self](Rng& rng) {
    RVec c(self.dim());
    for (int i = 0; i < self.dim(); ++i) c[i] = urand(rng, -2.0, 2.0);
    return self.expv(c);
  };
  return g;
}

LieGroupModel unipotent_model(int n, const std::string& name) {
  LieGroupModel g;
  g.name = name.empty() ? "Uni(" + std::to_string(n) + ")" : name;
  g.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat b = Mat::Zero(n, n);
      b(i, j) = 1;
      g.alg.push_back(b);
    }
  g.member_mat = [n](const Mat& m, double tol) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        off += std::abs(m(i, j) - (i == j ? cplx(1) : cplx(0)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += std::abs(m(i, j).imag());
    return off < tol;
  };
  LieGroupModel self = g;
  g.sampler = [self](Rng& rng) {
    RVec c(self.dim());
    for (int i = 0; i < self.dim(); ++i) c[i] = urand(rng, -1.5, 1.5);
    return self.expv(c);
  };
  return g;
}

LieGroupModel direct_product_model(const LieGroupModel& a,
                                   const LieGroupModel& b) {
  LieGroupModel g;
  g.name = a.name + " x " + b.name;
  g.n = a.n + b.n;
  g.complex_group = a.complex_group && b.complex_group;
  auto embed = [&](const Mat& m, bool first) {
    Mat out = Mat::Zero(g.n, g.n);
    if (first)
      out.topLeftCorner(a.n, a.n) = m;
    else
      out.bottomRightCorner(b.n, b.n) = m;
    return out;
  };
  for (const Mat& m : a.alg) g.alg.push_back(embed(m, true));
  for (const Mat& m : b.alg) g.alg.push_back(embed(m, false));
  int na = a.n, nb = b.n;
  auto amem = a.member_mat, bmem = b.member_mat;
  g.member_mat = [na, nb, amem, bmem](const Mat& m, double tol) {
    if (m.topRightCorner(na, nb).norm() > tol) return false;
    if (m.bottomLeftCorner(nb, na).norm() > tol) return false;
    return amem(m.topLeftCorner(na, na), tol) &&
           bmem(m.bottomRightCorner(nb, nb), tol);
  };
  auto asamp = a.sampler, bsamp = b.sampler;
  g.sampler = [na, nb, asamp, bsamp](Rng& rng) {
    Mat m = Mat::Zero(na + nb, na + nb);
    m.topLeftCorner(na, na) = unflat(asamp(rng), na);
    m.bottomRightCorner(nb, nb) = unflat(bsamp(rng), nb);
    return flat(m);
  };
  return g;
}

RVec additive_coords(const LieGroupModel& g, const Vec& p) {
  Mat m = unflat(p, g.n);
  RVec x(g.n - 1);
  for (int j = 0; j < g.n - 1; ++j) x[j] = m(0, j + 1).real();
  return x;
}

Vec additive_point(const LieGroupModel& g, const RVec& x) {
  Mat m = Mat::Identity(g.n, g.n);
  for (int j = 0; j < g.n - 1; ++j) m(0, j + 1) = x[j];
  return flat(m);
}

}  // namespace hgt
