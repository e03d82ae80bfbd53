#pragma once

// Covers, nerve-style face maps, the alternating differential, and the
// residual-sampling verification driver.
//
// Identities are verified by drawing points from overlap samplers and
// measuring a residual; a Check bundles one identity restricted to one index
// tuple, and Reports aggregate residual statistics. Sampling is seeded per
// check, so a fixed configuration reproduces byte-identical output.

#include "hgt/forms.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hgt {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ covers ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Intensional cover: membership predicates plus a proposal sampler with
// rejection. Contractibility of the pieces is an assumption, not a check.
struct IndexedCover {
  SpacePtr base;
  std::vector<std::string> names;
  std::vector<std::function<bool(const Vec&)>> member;
  std::function<Vec(Rng&)> propose;  // defaults to base->sample
  int max_tries = 500;

  int size() const { return static_cast<int>(names.size()); }
  bool in(int i, const Vec& p) const { return member[i](p); }
  bool in_all(const std::vector<int>& tuple, const Vec& p) const;
  std::optional<Vec> sample_overlap(const std::vector<int>& tuple,
                                    Rng& rng) const;
  std::string tuple_label(const std::vector<int>& tuple) const;
};

IndexedCover one_chart_cover(SpacePtr base, const std::string& name);

// ~~~~~~~~~~~~~~~~~~~~~~~ nerve spaces and face maps ~~~~~~~~~~~~~~~~~~~~~~

// Levels 0..N of a simplicial manifold together with its face maps.
// face[n][j] maps level n to level n-1 for 0 <= j <= n.
struct SimplicialSpace {
  std::vector<SpacePtr> level;
  std::vector<std::vector<SmoothMap>> face;

  const SmoothMap& d(int n, int j) const { return face[n][j]; }
  int depth() const { return static_cast<int>(level.size()) - 1; }
};

// Nerve of a group: level n is G^n, with
//   d_0 (g1,...,gn) = (g2,...,gn),
//   d_j (g1,...,gn) = (g1,...,g_j g_{j+1},...,gn)  for 0 < j < n,
//   d_n (g1,...,gn) = (g1,...,g_{n-1}).
SimplicialSpace group_nerve(const LieGroupModel& g, int N);

// Action nerve: level n is P x G^n, with d_0 acting on P by the given right
// action and the remaining faces as in the group nerve.
struct GroupAction {
  SpacePtr total;  // P
  std::function<Vec(const Vec&, const Vec&)> act;  // (p, g) -> p.g
  // exact tangent: (p, g, vp, vg) -> tangent at p.g
  std::function<Vec(const Vec&, const Vec&, const Vec&, const Vec&)> act_tan;
};

GroupAction right_translation_action(const LieGroupModel& g, SpacePtr gs);
SimplicialSpace action_nerve(const GroupAction& a, const LieGroupModel& g,
                             int N);

// Sampled residual of d_i d_j = d_{j-1} d_i (i < j), exhaustive over faces.
double face_identity_residual(const SimplicialSpace& s, Rng& rng, int samples);

// ~~~~~~~~~~~~~~~~~~~~~~~~ alternating differentials ~~~~~~~~~~~~~~~~~~~~~~

// Cover-direction differential at a fixed tuple: the alternating sum (or
// multiplicative product for group-valued data) over dropped indices. All
// terms are evaluated at the same point; for quotient-style residuals this
// cancels shared factors exactly in floating point.
VForm cover_delta_form(const std::function<VForm(const std::vector<int>&)>& at,
                       const std::vector<int>& tuple);

using PointMap = std::function<Vec(const Vec&)>;
PointMap cover_delta_map(
    const std::function<PointMap(const std::vector<int>&)>& at,
    const std::vector<int>& tuple, const LieGroupModel& t);

// Product of nums times inverses of dens in an abelian group, with
// bitwise-equal numerator/denominator pairs cancelled before any arithmetic.
// Identities whose factors collapse pairwise evaluate to the identity
// element exactly, with zero rounding.
PointMap quotient_product(std::vector<PointMap> nums,
                          std::vector<PointMap> dens, const LieGroupModel& t);

// f*theta for pointwise-given f: base -> T. The differential of f comes from
// chart finite differences, so residuals built on this sit in the fd tier.
VForm mc_pullback(const PointMap& f, SpacePtr base, const LieGroupModel& t);

// Level-direction differential on a simplicial space: pullback alternating
// sum of forms living at level n-1, producing a form at level n. The index
// dependence is a callback from the face index j to the cochain member.
VForm level_delta_form(const SimplicialSpace& s, int n,
                       const std::function<VForm(int)>& at_face);
PointMap level_delta_map(const SimplicialSpace& s, int n,
                         const std::function<PointMap(int)>& at_face,
                         const LieGroupModel& t);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~ verification driver ~~~~~~~~~~~~~~~~~~~~~~~~~~

// Tolerance tiers: alg for identities with no difference quotients, fd for
// one level of finite differencing, fd2 for two.
struct Tols {
  double alg = 1e-10;
  double fd = 1e-6;
  double fd2 = 1e-4;
};

struct Report {
  std::string identity;
  std::string anchor;
  int samples = 0;
  double max_residual = 0;
  double mean_residual = 0;
  double tol = 0;
  bool pass = false;
  bool vacuous = false;

  nlohmann::json to_json() const;
  std::string line() const;  // one-line human rendering
};

// One identity restricted to one tuple. draw() produces a single residual
// sample, or nothing when its domain sampler comes up empty.
struct Check {
  std::string identity;
  std::string anchor;
  double tol = 0;
  std::function<std::optional<double>(Rng&)> draw;
};

Report run_check(const Check& c, int samples, std::uint64_t seed);

// Runs all checks, merging those that share an identity name into a single
// Report (max of maxima, sample-weighted mean). Vacuous tuples are kept
// visible: a merged Report is vacuous only if every tuple was.
std::vector<Report> run_checks(const std::vector<Check>& cs, int samples,
                               std::uint64_t seed);

bool all_pass(const std::vector<Report>& rs);

}  // namespace hgt
