#pragma once

// Vector-valued differential forms as evaluators.
//
// A VForm is a degree, a coefficient space and a callable that eats a point
// plus k tangent vectors. Nothing is stored symbolically; operations wrap
// evaluators in new evaluators. The exterior derivative works through the
// base space's charts, so a chain of two derivatives costs a nested central
// difference (and carries the looser tolerance tier).
//
// Wedge products use shuffle sums with no factorial normalization:
//   (a ^ b)(u, v) = a(u) b(v) - a(v) b(u)   for two 1-forms,
// and similarly for paired or bracketed coefficients. Every identity checked
// in this project is stated with this single convention.

#include "hgt/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hgt {

// Coefficient space: a real subspace of C^amb. i_closed marks spaces stable
// under ambient multiplication by i (complex coefficients); only those admit
// (p,q) type decompositions directly. A scalar space may carry a lattice
// generator, used to express periods as lattice multiples.
struct VSpace {
  std::string name;
  int amb = 1;
  std::vector<Vec> basis;
  bool i_closed = false;
  std::optional<cplx> lattice;
  std::function<Vec(const Vec&)> conj;  // reality structure, optional

  Vec zero() const { return Vec::Zero(amb); }
};

VSpace scalar_real(std::optional<cplx> lattice = std::nullopt);
VSpace scalar_complex(std::optional<cplx> lattice = std::nullopt);
VSpace algebra_space(const LieGroupModel& g);

using FormEval = std::function<Vec(const Vec&, const std::vector<Vec>&)>;

struct VForm {
  SpacePtr base;
  int deg = 0;
  VSpace V;
  FormEval eval;
  FormEval dexact;  // exact exterior derivative, optional

  Vec operator()(const Vec& p, const std::vector<Vec>& vs) const {
    return eval(p, vs);
  }
};

VForm zero_form(SpacePtr base, int deg, VSpace V);
VForm d_form(const VForm& a);
VForm add(const VForm& a, const VForm& b);
VForm sub(const VForm& a, const VForm& b);
VForm scale(cplx c, const VForm& a);
VForm pullback(const SmoothMap& f, const VForm& a);

// Bilinear pairing on coefficients, g x g -> t style.
struct Pairing {
  VSpace out;
  std::function<Vec(const Vec&, const Vec&)> eval;
};

Pairing trace_pairing(cplx coef, int n, VSpace out);  // <u,v> = coef tr(uv)
Pairing scalar_pairing();                             // plain multiplication

// Shuffle-sum wedge with values combined by `mul` (not assumed symmetric).
VForm wedge(const VForm& a, const VForm& b, VSpace out,
            std::function<Vec(const Vec&, const Vec&)> mul);
VForm wedge_pair(const VForm& a, const VForm& b, const Pairing& pr);
VForm wedge_scalar(const VForm& a, const VForm& b);
VForm wedge_bracket(const VForm& a, const VForm& b, const LieGroupModel& g);

// ~~~~~~~~~~~~~~~~~~~~ complex structure and (p,q) types ~~~~~~~~~~~~~~~~~~~

// J* acts on arguments; requires base->J.
VForm j_pullback(const VForm& a);
// Component with p arguments projected holomorphically, q antiholomorphically.
// 2^k evaluations of a, combined with complex coefficients.
VForm type_component(const VForm& a, int p, int q);
// (J*)^-1 d J*: a single derivative, equal to i (dbar - d) on i-closed
// coefficients. The identity is cross-checked in the test suite.
VForm dc_form(const VForm& a);
// Apply the coefficient reality structure to values.
VForm conj_form(const VForm& a);

// ~~~~~~~~~~~~~~~~~~~~~~~~ symmetric / mixed tensors ~~~~~~~~~~~~~~~~~~~~~~

struct SymTensor {
  SpacePtr base;
  VSpace V;
  std::function<Vec(const Vec&, const Vec&, const Vec&)> eval;  // p, u, v
};

// <a . b>(u,v) = <a(u), b(v)> + <a(v), b(u)> for 1-forms a, b.
SymTensor sym_wedge(const VForm& a, const VForm& b, const Pairing& pr);

// A general section of T* x T*, with its alternating and symmetric halves.
struct TwoTensor {
  SpacePtr base;
  VSpace V;
  std::function<Vec(const Vec&, const Vec&, const Vec&)> eval;
};

VForm alt_part(const TwoTensor& t);
SymTensor sym_part(const TwoTensor& t);
TwoTensor combine(const VForm& two_form, const SymTensor& sym);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~ group-level forms ~~~~~~~~~~~~~~~~~~~~~~~~~~~

// theta_L(v at g) = g^-1 v, theta_R(v at g) = v g^-1, values in the algebra.
VForm maurer_cartan_left(const LieGroupModel& g, SpacePtr gs);
VForm maurer_cartan_right(const LieGroupModel& g, SpacePtr gs);

// Max residual of Ad-invariance of a pairing over sampled group elements and
// algebra vectors, both the group-level and the infinitesimal statement.
double ad_invariance_residual(const LieGroupModel& g, const Pairing& pr,
                              Rng& rng, int samples);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ integration ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// A parametrized cycle: a smooth box image with exact pushforward.
struct Cycle {
  std::string name;
  SpacePtr space;
  int dim = 0;
  RVec lo, hi;
  std::function<Vec(const RVec&)> point;
  std::function<Vec(const RVec&, const RVec&)> push;
};

void gauss_legendre(int n, RVec& x, RVec& w);  // nodes/weights on [-1, 1]

// Product Gauss-Legendre integral of a dim-degree form over the cycle.
cplx integrate_form(const VForm& a, const Cycle& c, int nodes);

}  // namespace hgt
