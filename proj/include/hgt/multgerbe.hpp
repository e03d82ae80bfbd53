#pragma once

// Cocycle data on the nerve of a group. Transition functions live at level
// one, a product comparison at level two, an associator at level three;
// optional potentials at levels one and two carry the differential
// refinement. The level-two potential determines curving two-forms whose
// invariant content is a single bilinear pairing on the Lie algebra, and
// dictionaries convert delta-closed one- and two-forms on G^2 into group
// cocycles and pairings and back.

#include "hgt/cech.hpp"

namespace hgt {

// ~~~~~~~~~~~~~~~~~~~~~~~~~ covers of nerve levels ~~~~~~~~~~~~~~~~~~~~~~~~~

// A cover per nerve level together with index maps compatible with the
// faces: d_j carries chart i at level n into chart dmap[n][j][i] at level
// n-1. Compatibility is the sampled containment below, not a proof.
struct SimplicialCover {
  SimplicialSpace nerve;
  std::vector<IndexedCover> cover;  // cover[n] covers nerve.level[n]
  std::vector<std::vector<std::vector<int>>> dmap;

  int depth() const { return static_cast<int>(cover.size()) - 1; }
  int down(int n, int j, int i) const { return dmap[n][j][i]; }
};

SimplicialCover one_chart_simplicial_cover(const LieGroupModel& g, int N);

// Fraction of sampled points failing d_j(U^n_i) c U^{n-1}_{dmap[n][j][i]}.
double cover_compat_residual(const SimplicialCover& c, Rng& rng, int samples);

// ~~~~~~~~~~~~~~~~~~~~~~~~ alternating-tuple access ~~~~~~~~~~~~~~~~~~~~~~~~

// Cochains are stored on strictly increasing index tuples. These accessors
// extend them to arbitrary tuples: a repeated index gives the identity (or
// the zero form), an odd permutation inverts (or negates).
PointMap alt_map2(const std::function<PointMap(int, int)>& f, int i, int j,
                  const LieGroupModel& t);
PointMap alt_map3(const std::function<PointMap(int, int, int)>& f, int i,
                  int j, int k, const LieGroupModel& t);
VForm alt_form2(const std::function<VForm(int, int)>& f, int i, int j,
                SpacePtr base, int deg, const VSpace& V);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ cocycle data ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// T-valued data on the covered nerve of G. lambda, m, alpha are indexed by
// charts at levels one, two and three; A and M are potentials at levels one
// and two, valued in the algebra of T.
struct MultGerbeData {
  SimplicialCover cover;  // depth 4 for the full set of equations
  LieGroupModel G;
  LieGroupModel T;
  VSpace t;

  std::function<PointMap(int, int, int)> lambda;
  std::function<PointMap(int, int)> m;
  std::function<PointMap(int)> alpha;

  bool has_conn = false;
  std::function<VForm(int, int)> A;  // level-one pairs
  std::function<VForm(int)> M;       // level-two charts
};

// The four cocycle equations (levels one through four) and, when potentials
// are present, the three compatibility equations tying them to the data.
std::vector<Check> mult_checks(const MultGerbeData& g, const Tols& tol = {});
std::vector<Report> check_mult(const MultGerbeData& g, int samples = 40,
                               std::uint64_t seed = 1, const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~ derived pairing and its forms ~~~~~~~~~~~~~~~~~~~~~~

// A bilinear pairing on the algebra of G with its two derived forms: mu at
// level one from the pairing of theta_L with its own bracket square, nu at
// level two from the cross pairing of the slotwise pulled back frames.
// table freezes the pairing on the algebra basis.
struct PairingData {
  LieGroupModel G;
  SimplicialSpace nerve;
  Pairing pair;
  std::vector<std::vector<Vec>> table;
  VForm mu;
  VForm nu;
};

PairingData pairing_data(const LieGroupModel& G, const SimplicialSpace& nerve,
                         const Pairing& pr);
PairingData pairing_data(const LieGroupModel& G, const Pairing& pr);

// Pairing read off the level-two potential by translating a pair of algebra
// vectors to a base pair of group elements. The identity pair is used when
// covered, otherwise a sampled admissible basepoint.
PairingData extract_pairing(const MultGerbeData& g,
                            std::uint64_t seed = 0x9a12);

// Structure of the pairing and its forms: symmetry, Ad-invariance,
// closedness of mu, the level relation between mu and nu, and closedness of
// nu under the alternating face sum.
std::vector<Check> pairing_checks(const PairingData& p, const Tols& tol = {});
std::vector<Report> check_pairing(const PairingData& p, int samples = 40,
                                  std::uint64_t seed = 1,
                                  const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~ curving tensors ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Full curving tensor on level-one chart i1, recovered from the potentials
// at the inverse pair (g^-1, g). Its alternating part is the curving proper;
// its symmetric part reproduces the pairing in the left frame.
TwoTensor curving_tensor(const MultGerbeData& g, int i1);
VForm curving_form(const MultGerbeData& g, int i1);

// Curving laws against the derived forms: basepoint independence of the
// extraction, the cochain law between charts, curvature mu, the symmetric
// part against the pairing, and the product curvature against nu.
std::vector<Check> curving_checks(const MultGerbeData& g,
                                  const PairingData& p, const Tols& tol = {});
std::vector<Report> check_curving(const MultGerbeData& g,
                                  const PairingData& p, int samples = 40,
                                  std::uint64_t seed = 1,
                                  const Tols& tol = {});

// ~~~~~~~~~~~ dictionaries between level forms and group cochains ~~~~~~~~~~

// kappa(g, u): linear in u, satisfying the twisted multiplication rule
// kappa(g1 g2, u) = kappa(g1, u) + kappa(g2, Ad_{g1^-1} u) when it comes
// from a closed form.
using GroupCocycle = std::function<Vec(const Vec&, const Vec&)>;

// Max sampled residual of that multiplication rule.
double cocycle_residual(const LieGroupModel& G, const GroupCocycle& k,
                        Rng& rng, int samples);

// Delta-closed one-forms on G^2 correspond to group cocycles; delta-closed
// two-forms correspond to symmetric pairings. Closedness of the form inputs
// is validated by sampling and a violation throws invalid_argument. The
// form_of_* directions are exact; the *_of_form directions evaluate at
// translated identity pairs, and composing the two is the identity.
GroupCocycle cocycle_of_form(const SimplicialSpace& nerve,
                             const LieGroupModel& G, const VForm& tau);
VForm form_of_cocycle(const SimplicialSpace& nerve, const LieGroupModel& G,
                      const GroupCocycle& kappa, const VSpace& V);
Pairing pairing_of_form(const SimplicialSpace& nerve, const LieGroupModel& G,
                        const VForm& nu);
VForm form_of_pairing(const SimplicialSpace& nerve, const LieGroupModel& G,
                      const Pairing& pr);

}  // namespace hgt
