#pragma once

// Crossed modules of matrix groups with central kernel, the linear data
// (two splittings plus a group cochain) that equips them with an
// adjustment, and the two equivalent cocycle presentations of connections
// on bundles glued from such a module. Everything here is checkable: each
// defining identity becomes a seeded residual sampler.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hgt/cech.hpp"
#include "hgt/forms.hpp"
#include "hgt/geometry.hpp"

namespace hgt {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~ homomorphisms ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Group homomorphism between matrix models. `alg` is its derivative at the
// identity on flattened ambient tangents; tangent maps elsewhere follow by
// translation, so only the pair (map, alg) is stored.
struct GroupHom {
  LieGroupModel src;
  LieGroupModel dst;
  std::function<Vec(const Vec&)> map;
  Mat alg;

  Vec operator()(const Vec& p) const { return map(p); }
  Vec at1(const Vec& u) const { return alg * u; }
  // Pushforward of the tangent vector vh at the point h.
  Vec tan(const Vec& h, const Vec& vh) const;
};

GroupHom identity_hom(const LieGroupModel& g);
GroupHom constant_hom(const LieGroupModel& src, const LieGroupModel& dst);

// Worst multiplicativity / derivative-consistency residual over `samples`
// random pairs. Useful when wiring up a new example by hand.
double hom_residual(const GroupHom& f, Rng& rng, int samples = 20);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~ crossed modules ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// f: H -> Gt together with an action of Gt on H. The kernel of f is
// assumed central in H with trivial induced action, so it carries a group
// model T of its own; G models the quotient of Gt by the image of f.
// inc and pr realize T -> H and Gt -> G.
struct CrossedModule {
  LieGroupModel Gt;
  LieGroupModel H;
  GroupHom f;
  std::function<Vec(const Vec&, const Vec&)> act;  // (g, h) -> g |> h

  LieGroupModel T;
  LieGroupModel G;
  GroupHom inc;
  GroupHom pr;

  // Optional exact differentials of the action; finite differences fill in
  // when these are left empty.
  std::function<Vec(const Vec&, const Vec&)> act_pt;   // g |> u, u in Lie(H)
  std::function<Vec(const Vec&, const Vec&)> act_alg;  // v |> u, v in Lie(Gt)
};

// g |> u: derivative of h -> g |> h at the identity in the direction u.
Vec act_point_alg(const CrossedModule& c, const Vec& g, const Vec& u);
// v |> u: derivative of act_point_alg in the group slot.
Vec act_alg_alg(const CrossedModule& c, const Vec& v, const Vec& u);
// v |> h: tangent vector at g |> h for the curve exp(tv) |> h.
Vec act_alg_point(const CrossedModule& c, const Vec& v, const Vec& h);
// Full differential of (g, h) -> g |> h.
Vec act_tan(const CrossedModule& c, const Vec& g, const Vec& h, const Vec& vg,
            const Vec& vh);

// Structure identities: f equivariant, Peiffer rule, kernel central and
// fixed, quotient compatibilities, tangent consistency of the action.
std::vector<Check> crossed_checks(const CrossedModule& c, const Tols& tol = {});
std::vector<Report> check_crossed(const CrossedModule& c, int samples = 40,
                                  std::uint64_t seed = 1, const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~~~ strong adjustments ~~~~~~~~~~~~~~~~~~~~~~~~~~~

// s: Lie(H) -> Lie(T) splits the kernel inclusion, l: Lie(G) -> Lie(Gt)
// splits the projection, and kappa(g, .) : Lie(Gt) -> Lie(T) is linear for
// each group element with the crossed-homomorphism property in g. Both
// matrices act on flattened ambient coordinates.
struct StrongAdjustment {
  Mat s;
  Mat l;
  std::function<Vec(const Vec&, const Vec&)> kappa;
};

// Matrix sending `from`-coefficients to `to`-values: B_to coef pinv(B_from).
Mat basis_map(const VSpace& from, const VSpace& to, const Mat& coef);

// The unique r: Lie(Gt) -> Lie(H) making the splittings two-sided exact:
// f r = id - l pr, s r = 0, r l = 0. Built columnwise by least squares.
Mat retraction(const CrossedModule& c, const StrongAdjustment& a);

// d/dt kappa(exp(tu), v) at t = 0.
Vec d1_kappa(const CrossedModule& c, const StrongAdjustment& a, const Vec& u,
             const Vec& v);
// Derivative of g -> kappa(g, v) at g along the tangent vector vg.
Vec dg_kappa(const CrossedModule& c, const StrongAdjustment& a, const Vec& g,
             const Vec& vg, const Vec& v);

// Symmetric part of d1_kappa on quotient vectors lifted along l. Descends
// from Lie(Gt) whenever the adjustment identities hold.
Vec adjustment_pairing(const CrossedModule& c, const StrongAdjustment& a,
                       const Vec& u, const Vec& v);
// Skew part, left-translated to the point g: the curving candidate.
Vec adjustment_curving(const CrossedModule& c, const StrongAdjustment& a,
                       const Vec& g, const Vec& ug, const Vec& vg);

std::vector<Check> adjustment_checks(const CrossedModule& c,
                                     const StrongAdjustment& a,
                                     const Tols& tol = {});
std::vector<Report> check_adjustment(const CrossedModule& c,
                                     const StrongAdjustment& a,
                                     int samples = 40, std::uint64_t seed = 1,
                                     const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~ connective structures ~~~~~~~~~~~~~~~~~~~~~~~~~~

// t-valued one-forms on Gt x H and on Gt x Gt induced by an adjustment.
// nabla at (g, h) eats (vg, vh) and tau at (g1, g2) eats (v1, v2).
struct ConnectivePair {
  VForm nabla;
  VForm tau;
};

ConnectivePair connective_from_adjustment(const CrossedModule& c,
                                          const StrongAdjustment& a);

// The four compatibility laws of the pair: kernel translation, partial
// multiplicativity, the mixed product law tying tau to nabla, and the
// group cocycle law for tau.
std::vector<Check> connective_checks(const CrossedModule& c,
                                     const StrongAdjustment& a,
                                     const Tols& tol = {});

// phi: Lie(Gt) -> Lie(T) deforms (s, kappa) to an isomorphic adjustment.
// The two connective pairs then differ by pullbacks of sigma_g = phi(g^-1 .).
std::vector<Check> connective_iso_checks(const CrossedModule& c,
                                         const StrongAdjustment& a,
                                         const Mat& phi, const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~ the h-valued extension ~~~~~~~~~~~~~~~~~~~~~~~~~

// kt(g, v) = kappa(g, v) + r(Ad(g^-1) v - v), valued in Lie(H). Satisfies
// a twisted cocycle law in which the action of Gt on Lie(H) appears.
std::function<Vec(const Vec&, const Vec&)> adjustment_tilde(
    const CrossedModule& c, const StrongAdjustment& a);
std::vector<Check> tilde_checks(const CrossedModule& c,
                                const StrongAdjustment& a,
                                const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~ bundles glued from the module ~~~~~~~~~~~~~~~~~~~~~

// Cocycle data on a cover: overlap maps gt(a,b) into Gt and triple maps
// h(a,b,c) into H correcting their failure to compose.
struct AdjustedBundle {
  CrossedModule cm;
  StrongAdjustment adj;
  IndexedCover cover;
  std::function<PointMap(int, int)> gt;
  std::function<PointMap(int, int, int)> h;
};

std::vector<Check> bundle_checks(const AdjustedBundle& b, const Tols& tol = {});

// Connection in quotient form: t-valued overlap one-forms sigma(a,b),
// G-algebra gauge fields A(a) and t-valued curvings B(a).
struct GConnection {
  std::function<VForm(int, int)> sigma;
  std::function<VForm(int)> A;
  std::function<VForm(int)> B;
};

// Connection in crossed-module form: h-valued overlap one-forms, Gt-algebra
// gauge fields and h-valued curvings.
struct AdjConnection {
  std::function<VForm(int, int)> Lambda;
  std::function<VForm(int)> At;
  std::function<VForm(int)> Bt;
};

std::vector<Check> gconn_checks(const AdjustedBundle& b, const GConnection& con,
                                const Tols& tol = {});
std::vector<Check> adjconn_checks(const AdjustedBundle& b,
                                  const AdjConnection& con,
                                  const Tols& tol = {});
// y must be x shifted by the h-valued one-forms lambda(a).
std::vector<Check> adjconn_iso_checks(const AdjustedBundle& b,
                                      const AdjConnection& x,
                                      const AdjConnection& y,
                                      const std::function<VForm(int)>& lambda,
                                      const Tols& tol = {});

// Conversions between the presentations. Inputs are screened on a few
// seeded samples first; data violating its defining laws is rejected with
// the name of the worst offender.
AdjConnection to_adjusted(const AdjustedBundle& b, const GConnection& con);
GConnection from_adjusted(const AdjustedBundle& b, const AdjConnection& con);
// Shift a crossed-module connection by lambda along the isomorphism law.
AdjConnection adjconn_shift(const AdjustedBundle& b, const AdjConnection& con,
                            const std::function<VForm(int)>& lambda);

std::vector<Report> check_bundle(const AdjustedBundle& b, int samples = 30,
                                 std::uint64_t seed = 1, const Tols& tol = {});
std::vector<Report> check_gconn(const AdjustedBundle& b, const GConnection& con,
                                int samples = 30, std::uint64_t seed = 1,
                                const Tols& tol = {});
std::vector<Report> check_adjconn(const AdjustedBundle& b,
                                  const AdjConnection& con, int samples = 30,
                                  std::uint64_t seed = 1, const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~ pure-gauge constructions ~~~~~~~~~~~~~~~~~~~~~~~

// Seed data for a bundle that is glued by chart trivializations:
// gt(a,b) = phi(a)^-1 phi(b), triple maps from the T-valued psi, overlap
// forms from kappa plus the layer potentials rho, curvings integrated off
// chart zero. The result satisfies every quotient-form law, most of them
// exactly, making it a reusable oracle.
struct GaugeSeed {
  std::function<PointMap(int)> phi;       // charts into Gt
  std::function<VForm(int)> rho;          // t-valued one-forms
  std::function<PointMap(int, int)> psi;  // into T; empty means trivial
};

AdjustedBundle gauge_bundle(const CrossedModule& cm, const StrongAdjustment& adj,
                            const IndexedCover& cover, const GaugeSeed& seed);
GConnection gauge_connection(const AdjustedBundle& b, const GaugeSeed& seed);

}  // namespace hgt
