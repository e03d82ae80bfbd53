#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hgt/cech.hpp"
#include "hgt/forms.hpp"
#include "hgt/geometry.hpp"
#include "hgt/multgerbe.hpp"

namespace hgt {

// ~~~~~~~~~~~~~~~~~~~~ cocycles for a 2-group bundle ~~~~~~~~~~~~~~~~~~~~~~

// Bundle over a covered base whose structure 2-group is the multiplicative
// gerbe mg on G. g holds ordinary transition functions. s compares the two
// pulled-back gerbe trivializations over a double overlap, indexed by a
// pair of level-1 charts of mg's cover; t fills the resulting triangle over
// a triple overlap, indexed by one level-2 chart. Both are T-valued
// functions on the base, stored on strictly increasing base tuples, and are
// only evaluated where the image of the transition functions lies in the
// charts named by the gerbe indices.
struct TwoBundleData {
  MultGerbeData mg;
  IndexedCover cover;
  std::function<PointMap(int, int)> g;            // (a,b)
  std::function<PointMap(int, int, int, int)> s;  // (a,b, i1,j1)
  std::function<PointMap(int, int, int, int)> t;  // (a,b,c, i2)
};

// Cocycle identities: g closes on triple overlaps, s absorbs the pulled
// back lambda, t intertwines s with the gerbe product over triples and
// closes on quadruple overlaps up to the pulled-back associator.
std::vector<Check> bundle_checks(const TwoBundleData& b, const Tols& tol = {});
std::vector<Report> check_2bundle(const TwoBundleData& b, int samples = 40,
                                  std::uint64_t seed = 1,
                                  const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~~ connective structures ~~~~~~~~~~~~~~~~~~~~~~~~~

// Connection data subordinate to a cocycle: per chart a G-algebra valued
// potential A and a T-algebra valued curving 2-form B, plus T-algebra
// 1-forms sigma on double overlaps along level-1 gerbe charts. h, when
// present, carries per-chart symmetric 2-tensors refining B; leave it
// empty for plain data.
struct TwoBundleConnection {
  std::function<VForm(int, int, int)> sigma;  // (a,b, i1)
  std::function<VForm(int)> A;
  std::function<VForm(int)> B;
  std::function<SymTensor(int)> h;
};

// Identities tying the connection to the cocycle and to mg's potentials:
// sigma steps across level-1 charts against dlog s and the pulled-back
// potential, matches dlog t against the pulled-back M over triples, A glues
// by the adjoint rule, and B glues through d sigma, the pulled-back curving
// and the pairing of A against the transition differential. With h present,
// subtracting half the pairing square of A must give tensors that agree on
// overlaps. Needs mg.has_conn and throws std::invalid_argument without it.
std::vector<Check> bundle_conn_checks(const TwoBundleData& b,
                                      const TwoBundleConnection& c,
                                      const PairingData& pd,
                                      const Tols& tol = {});
std::vector<Report> check_connection(const TwoBundleData& b,
                                     const TwoBundleConnection& c,
                                     const PairingData& pd, int samples = 40,
                                     std::uint64_t seed = 1,
                                     const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ curvature ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Chart curvature: F = dA + [A,A]/2 and the 3-form
// H = dB + <dA ^ A> + <A ^ [A ^ A]>/3.
VForm curvature_f(const LieGroupModel& G, const TwoBundleConnection& c,
                  int a);
VForm curvature_h(const TwoBundleConnection& c, const PairingData& pd, int a);

// F glues by the adjoint action of the transitions, H agrees across
// overlaps outright, and both satisfy their Bianchi identities. All of
// these stack two derivative levels, so they run in the fd2 tier.
std::vector<Check> bundle_curvature_checks(const TwoBundleData& b,
                                           const TwoBundleConnection& c,
                                           const PairingData& pd,
                                           const Tols& tol = {});
std::vector<Report> check_bundle_curvature(const TwoBundleData& b,
                                           const TwoBundleConnection& c,
                                           const PairingData& pd,
                                           int samples = 30,
                                           std::uint64_t seed = 1,
                                           const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~ the affine space of connections ~~~~~~~~~~~~~~~~~~~

// Shift of connection data: a G-algebra 1-form per chart glued by the
// adjoint rule, a global T-algebra 2-form, and an optional global symmetric
// tensor picked up by enhanced data.
struct TorsorShift {
  std::function<VForm(int)> a;
  VForm b;
  std::optional<SymTensor> h;
};

// A += a, B += <A ^ a> + b, sigma unchanged; an enhancement absorbs the
// symmetric cross and square terms of a, plus sh.h when present (sh.h is
// ignored on data without h). The shift must glue by the adjoint rule;
// sampled violations throw std::invalid_argument.
TwoBundleConnection torsor_translate(const TwoBundleData& bd,
                                     const TwoBundleConnection& c,
                                     const TorsorShift& sh,
                                     const PairingData& pd,
                                     std::uint64_t gate_seed = 11);

// Reindexing by per-chart T-algebra 1-forms tau: sigma gains the tau
// coboundary, B its differential. Every curvature form is untouched.
TwoBundleConnection conn_iso_apply(const TwoBundleConnection& c,
                                   const std::function<VForm(int)>& tau);

// ~~~~~~~~~~~~~~~~~~~~~~~~~ gauge transformations ~~~~~~~~~~~~~~~~~~~~~~~~~

// Equivalence of two cocycles over one base cover: phi conjugates the
// transitions, b records the per-chart curvature 2-form of the mediating
// 2-arrow, sigma2 carries the overlap forms chosen on the destination side.
struct GaugeData {
  TwoBundleData src, dst;
  std::function<PointMap(int)> phi;
  std::function<VForm(int)> b;
  std::function<VForm(int, int, int)> sigma2;
};

// phi intertwines the two transition cocycles, d b matches the pulled-back
// trilinear group form, and across overlaps the b's differ by the two
// curvature corrections of sigma together with the mixed log-derivative
// pairing terms.
std::vector<Check> gauge_checks(const GaugeData& gd,
                                const TwoBundleConnection& c,
                                const PairingData& pd, const Tols& tol = {});
std::vector<Report> check_gauge(const GaugeData& gd,
                                const TwoBundleConnection& c,
                                const PairingData& pd, int samples = 40,
                                std::uint64_t seed = 1, const Tols& tol = {});

// Transport of a connection along the gauge: A twists by phi, B absorbs the
// pairing cross term and b, sigma comes from gd.sigma2, and an enhancement
// keeps its corrected tensor.
TwoBundleConnection gauge_apply(const GaugeData& gd,
                                const TwoBundleConnection& c,
                                const PairingData& pd);

// ~~~~~~~~~~~~~~~~~~~ invariant forms on a total space ~~~~~~~~~~~~~~~~~~~~

// Right G-space carrying a connection 1-form: along the action A restricts
// to the left logarithmic form and transforms by the adjoint rule.
struct CsInput {
  GroupAction act;
  LieGroupModel G;
  VForm A;
};

// <dA ^ A> + <A ^ [A ^ A]>/3 on the total space.
VForm cs_form(const CsInput& in, const PairingData& pd);
// <pr*A ^ g*thetaR> on total x G, the simplicial correction of cs_form.
VForm cs_r_form(const CsInput& in, const PairingData& pd);

// d of cs_form closes on <F ^ F>; the simplicial step of cs_form is d of
// cs_r_form minus the pulled-back trilinear group form; the simplicial step
// of cs_r_form cancels the pulled-back bilinear group form. Samples the
// adjoint transformation rule of A first and throws std::invalid_argument
// when it fails.
std::vector<Check> cs_checks(const CsInput& in, const PairingData& pd,
                             const Tols& tol = {},
                             std::uint64_t gate_seed = 7);
std::vector<Report> check_cs(const CsInput& in, const PairingData& pd,
                             int samples = 30, std::uint64_t seed = 1,
                             const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~ quotient presentations ~~~~~~~~~~~~~~~~~~~~~~~~~

// The same kind of bundle exhibited on a total right G-space: vcover runs
// over the action levels P x G^n with faces from the action nerve, pi names
// the mg chart sitting under each vcover chart, and the cocycle consists of
// T-valued b on level-0 triples, act on level-1 pairs, and beta on level-2
// charts.
struct PgBundleData {
  MultGerbeData mg;
  SimplicialCover vcover;
  std::vector<std::vector<int>> pi;
  std::function<PointMap(int, int, int)> b;
  std::function<PointMap(int, int)> act;
  std::function<PointMap(int)> beta;
};

// Connection data in the quotient presentation: one global potential A on
// the total space, overlap 1-forms sigma and curvings B at level 0, and
// action comparison 1-forms eta at level 1.
struct PgConnection {
  VForm A;
  std::function<VForm(int, int)> sigma;
  std::function<VForm(int)> eta;
  std::function<VForm(int)> B;
};

// Cocycle side: b closes on quadruples; the act coboundary matches b
// through the outer faces against the pulled-back lambda; the beta
// coboundary matches act through the faces against the pulled-back m; beta
// closes through the faces against the pulled-back associator.
std::vector<Check> pg_bundle_checks(const PgBundleData& d,
                                    const Tols& tol = {});
// Connection side: sigma is a cochain for dlog b; eta steps sigma across
// the action against dlog act and the pulled-back potential; dlog beta
// closes eta against the pulled-back M; B glues through d sigma; and the
// action step of B is d eta corrected by the pulled-back curving and the
// pairing of A against the fiber log form. Needs mg.has_conn.
std::vector<Check> pg_conn_checks(const PgBundleData& d,
                                  const PgConnection& c,
                                  const PairingData& pd,
                                  const Tols& tol = {});

std::vector<Report> check_pg_cover_presentation(const PgBundleData& d,
                                                int samples = 30,
                                                std::uint64_t seed = 1,
                                                const Tols& tol = {});
std::vector<Report> check_pg_cover_presentation(const PgBundleData& d,
                                                const PgConnection& c,
                                                const PairingData& pd,
                                                int samples = 30,
                                                std::uint64_t seed = 1,
                                                const Tols& tol = {});

}  // namespace hgt
