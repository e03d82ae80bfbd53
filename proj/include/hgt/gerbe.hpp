#pragma once

// Abelian gerbes at the cocycle level: 2-cocycles with connective
// structures, curvings (plain or enhanced by a symmetric tensor),
// isomorphisms carrying connections, curvature 3-forms, the two
// semiconnection flavors, and fibrewise complexification.
//
// Data is index-driven: callables produce the cochain member for a strictly
// increasing index tuple, and are never queried outside that range. Every
// defining identity turns into a list of Checks for the sampling driver.

#include "hgt/cech.hpp"

namespace hgt {

struct GerbeData {
  IndexedCover cover;
  LieGroupModel T;  // abelian structure group
  VSpace t;         // coefficient space of A and B (algebra of T + lattice)
  std::function<PointMap(int, int, int)> lambda;
  std::function<VForm(int, int)> conn;        // A_ij
  std::function<VForm(int)> curving;          // B_i
  std::function<SymTensor(int)> sym_curving;  // h_i, enhanced part
  bool has_conn = false;
  bool has_curving = false;
  bool has_sym = false;
  // chart selector for globally defined fields; defaults to first member
  std::function<int(const Vec&)> pick;

  int pick_chart(const Vec& p) const;
};

// s_ab on the common cover of two gerbes, with an optional connection.
struct GerbeIso {
  std::function<PointMap(int, int)> s;
  std::function<VForm(int)> conn;  // A_a
  bool has_conn = false;
};

enum class SemiFlavor { one, two };

// Flavor one: D_ij of type (0,1), D_i of type (0,2). Flavor two: D_ij a
// full 1-form, D_i of type (1,1)+(0,2).
struct SemiconnData {
  SemiFlavor flavor = SemiFlavor::one;
  std::function<VForm(int, int)> Dij;
  std::function<VForm(int)> Di;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~ identity checks ~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Cocycle identity on quadruples, connective identity on triples when A is
// present, curving identity on pairs when B is present, and the enhanced
// full-tensor variant when h is present.
std::vector<Check> gerbe_checks(const GerbeData& g, const Tols& tol = {});

// Overlap agreement of dB_i and closedness of the glued 3-form.
std::vector<Check> curvature_checks(const GerbeData& g, const Tols& tol = {});

// Cocycle compatibility of s, the connection identity, and d(iso curvature)
// against the difference of gerbe curvatures. Covers must coincide.
std::vector<Check> iso_checks(const GerbeIso& f, const GerbeData& src,
                              const GerbeData& dst, const Tols& tol = {});

// All equations of the chosen flavor, plus type conformance of the data.
std::vector<Check> semiconn_checks(const SemiconnData& d, const GerbeData& g,
                                   const Tols& tol = {});

std::vector<Report> check_gerbe(const GerbeData& g, int samples,
                                std::uint64_t seed, const Tols& tol = {});
std::vector<Report> check_iso(const GerbeIso& f, const GerbeData& src,
                              const GerbeData& dst, int samples,
                              std::uint64_t seed, const Tols& tol = {});
std::vector<Report> check_semiconn(const SemiconnData& d, const GerbeData& g,
                                   int samples, std::uint64_t seed,
                                   const Tols& tol = {});

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ curvature ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

VForm gerbe_curvature(const GerbeData& g, int i);  // dB_i, valid on U_i
VForm gerbe_curvature(const GerbeData& g);         // chart-picked global view

// F_a = dA_a - B^src_a + B^dst_a; globally consistent when the iso checks
// hold, so the one-argument view patches charts like gerbe_curvature.
VForm iso_curvature(const GerbeIso& f, const GerbeData& src,
                    const GerbeData& dst, int a);
VForm iso_curvature(const GerbeIso& f, const GerbeData& src,
                    const GerbeData& dst);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~ complexification ~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Post-compose the cocycle with a group embedding jmap and the forms with
// its derivative dj. Residuals carry over: the checks of the image evaluate
// the same data through the embedding.
GerbeData complexify(const GerbeData& g, const LieGroupModel& dst,
                     const std::function<Vec(const Vec&)>& jmap,
                     const Mat& dj, const VSpace& t_out);

}  // namespace hgt
