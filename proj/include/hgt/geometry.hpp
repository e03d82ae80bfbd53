#pragma once

// Charted spaces, smooth maps, and matrix Lie group models.
//
// A Chart is a parametrization u in R^d -> ambient point together with its
// exact derivative. All differentiation downstream happens through charts:
// coordinate vector fields commute, so exterior derivatives reduce to
// directional derivatives of functions of the chart parameter, which we take
// by central differences. Charts themselves are exact (closed-form push),
// so the only numerical error is the final difference quotient.

#include "hgt/base.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hgt {

struct Chart {
  int dim = 0;
  std::function<Vec(const RVec&)> point;
  // push(u, c) = d/dt point(u + t c): exact, valid at any u in the domain.
  std::function<Vec(const RVec&, const RVec&)> push;
};

// Coordinates of an ambient tangent vector in the chart frame at the chart
// center. Least squares over the realified ambient; exact for true tangents.
RVec chart_coords(const Chart& c, const Vec& v);

struct ChartedSpace {
  int dim = 0;
  int amb = 0;  // ambient complex dimension
  std::function<Chart(const Vec&)> chart_at;
  std::function<Vec(Rng&)> sample;
  // Complex structure on tangents, present only for complex models.
  std::function<Vec(const Vec&, const Vec&)> J;
  std::function<bool(const Vec&)> member;

  std::vector<Vec> frame(const Vec& p) const;
  Vec random_tangent(const Vec& p, Rng& rng) const;
};

// Spaces are shared between forms, maps and scenario data; handing out
// owning pointers keeps every closure safe regardless of creation order.
using SpacePtr = std::shared_ptr<const ChartedSpace>;
SpacePtr sp(ChartedSpace s);

// Products concatenate ambient blocks; slot i of a point or tangent is the
// i-th block. Charts, samplers and J act blockwise.
ChartedSpace product(const ChartedSpace& a, const ChartedSpace& b);
ChartedSpace power(const ChartedSpace& g, int n);
ChartedSpace point_space();  // the one-point space (empty product)

// C^n as a real 2n-dimensional space with linear charts, J = i and a box
// sampler. Open subsets customize sample/member on top of this.
ChartedSpace complex_affine_space(int n, double box = 1.5);

Vec slot(const Vec& p, int i, int m);
void set_slot(Vec& p, int i, const Vec& x);

struct SmoothMap {
  SpacePtr src;
  SpacePtr dst;
  std::function<Vec(const Vec&)> fwd;
  std::function<Vec(const Vec&, const Vec&)> tan;  // exact differential, optional

  Vec operator()(const Vec& p) const { return fwd(p); }
  // Exact differential when available, chart finite differences otherwise.
  Vec push(const Vec& p, const Vec& v) const;
};

SmoothMap identity_map(SpacePtr s);
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~ matrix Lie groups ~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Points are column-flattened n x n complex matrices; the Lie algebra is a
// real basis of ambient matrices. Additive groups (R^k and quotients of it)
// are modeled as unipotent blocks so that matrix multiplication is literal
// addition and every formula below applies unchanged.
struct LieGroupModel {
  std::string name;
  int n = 1;
  std::vector<Mat> alg;
  std::function<bool(const Mat&, double)> member_mat;
  std::function<Vec(Rng&)> sampler;
  bool complex_group = false;  // multiplication by i preserves the algebra

  int dim() const { return static_cast<int>(alg.size()); }
  int amb() const { return n * n; }

  Vec id() const;
  Vec mul(const Vec& a, const Vec& b) const;
  Vec inv(const Vec& g) const;
  Vec expm(const Mat& a) const;         // group element exp(a)
  Vec expv(const RVec& coeffs) const;   // exp(sum_i coeffs_i alg_i)
  Mat algv(const RVec& coeffs) const;   // sum_i coeffs_i alg_i
  Vec Ad(const Vec& g, const Vec& u) const;
  Vec bracket(const Vec& u, const Vec& v) const;
  bool member(const Vec& g, double tol = 1e-9) const;

  // Tangent translations. A tangent at g is an ambient matrix (flattened);
  // left/right translation by h acts by matrix multiplication.
  Vec lmul_tan(const Vec& h, const Vec& v) const;  // h . v
  Vec rmul_tan(const Vec& v, const Vec& h) const;  // v . h
  Vec inv_tan(const Vec& g, const Vec& v) const;   // d(inv)_g v = -g^-1 v g^-1

  // d/dt exp(a + t b) at t = 0. Convergent series, used by exp charts.
  Mat dexp(const Mat& a, const Mat& b) const;

  Chart chart(const Vec& g0) const;  // exp chart centered at g0
  ChartedSpace space() const;
};

LieGroupModel su2_model();
LieGroupModel sl2c_model();
LieGroupModel u1_model();
LieGroupModel cstar_model();
// (R^k, +) as (k+1) x (k+1) unipotent matrices with top-row entries.
LieGroupModel additive_model(int k, const std::string& name = "");
// Full upper-triangular unipotent group of real n x n matrices. The algebra
// basis runs over E_ij with i < j in lexicographic order.
LieGroupModel unipotent_model(int n, const std::string& name = "");
// Block-diagonal direct product.
LieGroupModel direct_product_model(const LieGroupModel& a,
                                   const LieGroupModel& b);

// Coordinates of an additive_model point (the top-row entries).
RVec additive_coords(const LieGroupModel& g, const Vec& p);
Vec additive_point(const LieGroupModel& g, const RVec& x);

}  // namespace hgt
