#pragma once

// Concrete scenario ingredients shared by the test suites and the runner.
// Everything here is assembled from the generic modules; nothing below adds
// new machinery, it only fixes spaces, covers and cocycle data.

#include "hgt/bundle2.hpp"
#include "hgt/crossed.hpp"
#include "hgt/gerbe.hpp"

namespace hgt {

// Branch logarithms. log_plus has imaginary part in (0, 2pi) and is defined
// away from the positive real ray; log_minus has imaginary part in (-pi, pi)
// and avoids the negative real ray. Their difference is 0 above the real
// axis and 2 pi i below it.
cplx log_plus(cplx z);
cplx log_minus(cplx z);

// Quotient of C^2 minus the origin by coordinate doubling. The sampler
// draws representatives in the fundamental annulus 1 <= |x| < 2; every field
// below is invariant under the doubling, so representatives are free.
//
// Cover indices: 0 = U1+, 1 = U1-, 2 = U2+, 3 = U2-, where Uc+/- keeps
// x_c != 0 and removes the ray through +1 (resp. -1). Membership carries a
// small radial and angular margin so finite differences never straddle the
// branch jump loci.
struct HopfSurface {
  SpacePtr space;
  IndexedCover cover;
  LieGroupModel u1, cstar;

  // Multiplicative cocycle with its piecewise-branch connective structure
  // and the compatible (2,0) curving dlog x_c ^ del log |x|^2 / (2 pi i).
  GerbeData hol;

  // Unit-modulus shadow of the same data: angles replace logarithms. Its
  // curvature is -i d^c omega, so the sphere period is +2 pi i.
  GerbeData unitary;

  VForm omega;     // Hermitian form of the round (Boothby) metric, real
  VForm dc_omega;  // d^c omega, carrying period lattice 2 pi
  Cycle s3;        // unit sphere in angle coordinates, oriented (eta, a1, a2)
};

HopfSurface hopf_surface();

// ~~~~~~~~~~~~~~~~~~~ crossed modules with adjustments ~~~~~~~~~~~~~~~~~~~~

// A crossed module packaged with a strong adjustment and a deformation
// direction phi: Lie(Gt) -> Lie(T) for the isomorphism checks.
struct CrossedExample {
  std::string name;
  CrossedModule cm;
  StrongAdjustment adj;
  Mat phi;
};

// U(1) under SU(2): trivial map and action, the kernel is everything, the
// cochain is the coboundary of a linear functional.
CrossedExample crossed_su2_u1();
// Plane over the line, both additive, cochain bilinear.
CrossedExample crossed_plane_line();
// Plane onto its first axis inside another plane: every splitting map is
// nontrivial yet all four groups stay abelian.
CrossedExample crossed_split_plane();
// Heisenberg total group over the plane with central one-dimensional
// kernel. The only example whose adjoint action is nontrivial, so the
// retraction term of the h-valued cochain is active.
CrossedExample crossed_heisenberg();

std::vector<CrossedExample> crossed_examples();

// Pure-gauge bundle and connection over a four-chart plane, glued from the
// example's module with deterministic smooth data. Satisfies every law of
// the quotient presentation, so it feeds the conversion round trips.
struct CrossedScenario {
  CrossedExample ex;
  AdjustedBundle bundle;
  GConnection con;
  GaugeSeed seed;
};

CrossedScenario crossed_scenario(const CrossedExample& ex);

// Additive plane group paired into the circle's algebra by a fixed
// symmetric bilinear form, with a one-chart gerbe whose associator is a
// cubic coordinate phase and whose potential M realizes its coboundary in
// closed form. Over a four-chart base with four coordinates the scenario
// carries a chain of cocycles related by explicit gauges with complete
// connection data, plus a presentation of the twisted cocycle over a
// duplicated-chart gerbe cover where the chartwise identities are active.
struct PlaneTwoBundle {
  LieGroupModel G, T;
  SpacePtr base;
  IndexedCover cover;
  MultGerbeData mg;      // one chart per level, trivial lambda and m
  MultGerbeData mg_dup;  // several charts per level, homomorphism lambda
  PairingData pd;

  TwoBundleData triv;        // identity transitions
  TwoBundleConnection flat;  // all-zero connection on triv
  TwoBundleConnection conn;  // seeded potential and curving on triv

  TwoBundleData twisted;      // image of triv under the first gauge
  TwoBundleConnection conn2;  // the transported connection in closed form
  TwoBundleData twisted2;     // image under both gauges
  GaugeData gauge;            // triv -> twisted
  GaugeData gauge2;           // twisted -> twisted2
  GaugeData gauge12;          // triv -> twisted2 in one step
  TwoBundleData dup;          // twisted, presented over mg_dup

  // Chart sections of the gauges and the global potential they twist;
  // gmap(a,b) is the transition a<-b with exact differential.
  std::vector<SmoothMap> sec;
  std::vector<std::vector<SmoothMap>> gmap;
  VForm rho;

  TorsorShift shift;               // seeded, glues by the adjoint rule
  std::function<VForm(int)> tau;  // seeded chartwise iso potentials
};

PlaneTwoBundle plane_two_bundle();

// The unitary Hopf cocycle rewritten over the trivial SU(2) gerbe with zero
// potentials and zero pairing: transitions stay at the identity while t
// carries the inverse 2-cocycle, sigma the negated connective forms and B
// the curvings, so the 3-curvature reproduces -i d^c omega of the surface.
struct HopfTwist {
  HopfSurface h;
  MultGerbeData mg;
  PairingData pd;
  TwoBundleData bundle;
  TwoBundleConnection conn;
};

HopfTwist hopf_twist();

// One-chart identity cocycle on the four-coordinate base with a seeded
// nonabelian potential and curving: every curvature quantity is nonzero, so
// the differential identities run with honest bracket and pairing terms.
struct FreeConnScenario {
  LieGroupModel G;
  SpacePtr base;
  PairingData pd;
  TwoBundleData bundle;
  TwoBundleConnection conn;
};

FreeConnScenario free_conn_su2();

// Right translation on base x G with the connection form assembled from the
// fiber logarithmic derivative and an adjoint-twisted base potential rho.
// `in` carries the seeded rho, `mc` the same action with rho = 0.
struct CsScenario {
  LieGroupModel G;
  PairingData pd;
  VForm rho;
  CsInput in;
  CsInput mc;
};

CsScenario cs_scenario_su2();
CsScenario cs_scenario_plane();

// Quotient presentation of the twisted plane cocycle on the trivial torsor
// base x G with identity chart downmaps: local sections w + f_a turn the
// associator into the comparison data in closed form, and the connection
// fields descend from the chart data of the underlying cocycle.
struct PlanePgScenario {
  PlaneTwoBundle tb;
  SpacePtr total;
  GroupAction act;
  PgBundleData data;
  PgConnection conn;
};

PlanePgScenario plane_pg_scenario();

}  // namespace hgt
