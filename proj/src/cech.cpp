#include "hgt/cech.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace hgt {

bool IndexedCover::in_all(const std::vector<int>& tuple, const Vec& p) const {
  for (int i : tuple)
    if (!member[i](p)) return false;
  return true;
}

std::optional<Vec> IndexedCover::sample_overlap(const std::vector<int>& tuple,
                                                Rng& rng) const {
  auto gen = propose ? propose : base->sample;
  for (int t = 0; t < max_tries; ++t) {
    Vec p = gen(rng);
    if (in_all(tuple, p)) return p;
  }
  return std::nullopt;
}

std::string IndexedCover::tuple_label(const std::vector<int>& tuple) const {
  std::string s = "(";
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += ",";
    s += names[tuple[i]];
  }
  return s + ")";
}

IndexedCover one_chart_cover(SpacePtr base, const std::string& name) {
  IndexedCover c;
  c.base = base;
  c.names = {name};
  c.member.push_back([](const Vec&) { return true; });
  return c;
}

// ~~~~~~~~~~~~~~~~~~~~~~~ nerve spaces and face maps ~~~~~~~~~~~~~~~~~~~~~~

SimplicialSpace group_nerve(const LieGroupModel& g, int N) {
  SimplicialSpace s;
  s.level.resize(N + 1);
  s.face.resize(N + 1);
  for (int n = 0; n <= N; ++n) s.level[n] = sp(power(g.space(), n));
  int m = g.amb();
  for (int n = 1; n <= N; ++n) {
    for (int j = 0; j <= n; ++j) {
      SmoothMap f;
      f.src = s.level[n];
      f.dst = s.level[n - 1];
      f.fwd = [g, m, n, j](const Vec& p) {
        Vec out((n - 1) * m);
        if (j == 0) {
          for (int i = 0; i + 1 < n; ++i) set_slot(out, i, slot(p, i + 1, m));
        } else if (j == n) {
          for (int i = 0; i + 1 < n; ++i) set_slot(out, i, slot(p, i, m));
        } else {
          for (int i = 0; i < j - 1; ++i) set_slot(out, i, slot(p, i, m));
          set_slot(out, j - 1, g.mul(slot(p, j - 1, m), slot(p, j, m)));
          for (int i = j; i + 1 < n; ++i) set_slot(out, i, slot(p, i + 1, m));
        }
        return out;
      };
      f.tan = [g, m, n, j](const Vec& p, const Vec& v) {
        Vec out((n - 1) * m);
        if (j == 0) {
          for (int i = 0; i + 1 < n; ++i) set_slot(out, i, slot(v, i + 1, m));
        } else if (j == n) {
          for (int i = 0; i + 1 < n; ++i) set_slot(out, i, slot(v, i, m));
        } else {
          for (int i = 0; i < j - 1; ++i) set_slot(out, i, slot(v, i, m));
          Vec merged = g.rmul_tan(slot(v, j - 1, m), slot(p, j, m)) +
                       g.lmul_tan(slot(p, j - 1, m), slot(v, j, m));
          set_slot(out, j - 1, merged);
          for (int i = j; i + 1 < n; ++i) set_slot(out, i, slot(v, i + 1, m));
        }
        return out;
      };
      s.face[n].push_back(f);
    }
  }
  return s;
}

GroupAction right_translation_action(const LieGroupModel& g, SpacePtr gs) {
  GroupAction a;
  a.total = gs;
  a.act = [g](const Vec& p, const Vec& h) { return g.mul(p, h); };
  a.act_tan = [g](const Vec& p, const Vec& h, const Vec& vp, const Vec& vh) {
    return Vec(g.rmul_tan(vp, h) + g.lmul_tan(p, vh));
  };
  return a;
}

SimplicialSpace action_nerve(const GroupAction& a, const LieGroupModel& g,
                             int N) {
  SimplicialSpace s;
  s.level.resize(N + 1);
  s.face.resize(N + 1);
  s.level[0] = a.total;
  for (int n = 1; n <= N; ++n)
    s.level[n] = sp(product(*a.total, power(g.space(), n)));
  int m = g.amb();
  int mp = a.total->amb;
  for (int n = 1; n <= N; ++n) {
    for (int j = 0; j <= n; ++j) {
      SmoothMap f;
      f.src = s.level[n];
      f.dst = s.level[n - 1];
      auto gslot = [m, mp](const Vec& p, int i) {
        return Vec(p.segment(mp + i * m, m));
      };
      f.fwd = [a, g, m, mp, n, j, gslot](const Vec& p) {
        Vec out(mp + (n - 1) * m);
        Vec pp = p.head(mp);
        if (j == 0) {
          out.head(mp) = a.act(pp, gslot(p, 0));
          for (int i = 0; i + 1 < n; ++i)
            out.segment(mp + i * m, m) = gslot(p, i + 1);
        } else {
          out.head(mp) = pp;
          for (int i = 0; i < j - 1; ++i) out.segment(mp + i * m, m) = gslot(p, i);
          if (j < n) {
            out.segment(mp + (j - 1) * m, m) = g.mul(gslot(p, j - 1), gslot(p, j));
            for (int i = j; i + 1 < n; ++i)
              out.segment(mp + i * m, m) = gslot(p, i + 1);
          } else {
            for (int i = j - 1; i + 1 < n; ++i)
              out.segment(mp + i * m, m) = gslot(p, i);
          }
        }
        return out;
      };
      f.tan = [a, g, m, mp, n, j, gslot](const Vec& p, const Vec& v) {
        Vec out(mp + (n - 1) * m);
        Vec pp = p.head(mp), vp = v.head(mp);
        if (j == 0) {
          out.head(mp) = a.act_tan(pp, gslot(p, 0), vp, gslot(v, 0));
          for (int i = 0; i + 1 < n; ++i)
            out.segment(mp + i * m, m) = gslot(v, i + 1);
        } else {
          out.head(mp) = vp;
          for (int i = 0; i < j - 1; ++i) out.segment(mp + i * m, m) = gslot(v, i);
          if (j < n) {
            Vec merged = g.rmul_tan(gslot(v, j - 1), gslot(p, j)) +
                         g.lmul_tan(gslot(p, j - 1), gslot(v, j));
            out.segment(mp + (j - 1) * m, m) = merged;
            for (int i = j; i + 1 < n; ++i)
              out.segment(mp + i * m, m) = gslot(v, i + 1);
          } else {
            for (int i = j - 1; i + 1 < n; ++i)
              out.segment(mp + i * m, m) = gslot(v, i);
          }
        }
        return out;
      };
      s.face[n].push_back(f);
    }
  }
  return s;
}

double face_identity_residual(const SimplicialSpace& s, Rng& rng,
                              int samples) {
  double worst = 0;
  for (int n = 2; n <= s.depth(); ++n) {
    for (int j = 1; j <= n; ++j) {
      for (int i = 0; i < j; ++i) {
        for (int t = 0; t < samples; ++t) {
          Vec p = s.level[n]->sample(rng);
          Vec lhs = s.d(n - 1, i)(s.d(n, j)(p));
          Vec rhs = s.d(n - 1, j - 1)(s.d(n, i)(p));
          if (lhs.size() == 0) continue;  // both land on the point space
          worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
      }
    }
  }
  return worst;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~ alternating differentials ~~~~~~~~~~~~~~~~~~~~~~

namespace {

std::vector<int> drop(const std::vector<int>& tuple, int m) {
  std::vector<int> out;
  out.reserve(tuple.size() - 1);
  for (size_t i = 0; i < tuple.size(); ++i)
    if (static_cast<int>(i) != m) out.push_back(tuple[i]);
  return out;
}

// Alternating wrapper over quotient_product: f0 f1^-1 f2 f3^-1 ...
PointMap paired_product(std::vector<PointMap> terms, const LieGroupModel& t) {
  std::vector<PointMap> num, den;
  for (size_t i = 0; i < terms.size(); ++i)
    ((i % 2 == 0) ? num : den).push_back(std::move(terms[i]));
  return quotient_product(std::move(num), std::move(den), t);
}

}  // namespace

// Coefficient groups here are abelian, so reordering factors is sound, and a
// cocycle whose terms collapse pairwise evaluates to the identity exactly,
// with zero rounding.
PointMap quotient_product(std::vector<PointMap> nums,
                          std::vector<PointMap> dens, const LieGroupModel& t) {
  return [nums, dens, t](const Vec& x) {
    std::vector<Vec> num, den;
    for (const PointMap& f : nums) num.push_back(f(x));
    for (const PointMap& f : dens) den.push_back(f(x));
    std::vector<bool> used(den.size(), false);
    Vec acc = t.id();
    for (const Vec& f : num) {
      bool cancelled = false;
      for (size_t j = 0; j < den.size(); ++j) {
        if (!used[j] && (f.array() == den[j].array()).all()) {
          used[j] = true;
          cancelled = true;
          break;
        }
      }
      if (!cancelled) acc = t.mul(acc, f);
    }
    for (size_t j = 0; j < den.size(); ++j)
      if (!used[j]) acc = t.mul(acc, t.inv(den[j]));
    return acc;
  };
}

VForm mc_pullback(const PointMap& f, SpacePtr base, const LieGroupModel& t) {
  VForm r;
  r.base = base;
  r.deg = 1;
  r.V = algebra_space(t);
  SmoothMap m{base, sp(t.space()), f, nullptr};
  r.eval = [f, m, t](const Vec& p, const std::vector<Vec>& vs) {
    return t.lmul_tan(t.inv(f(p)), m.push(p, vs[0]));
  };
  return r;
}

VForm cover_delta_form(const std::function<VForm(const std::vector<int>&)>& at,
                       const std::vector<int>& tuple) {
  VForm acc = at(drop(tuple, 0));
  for (size_t m = 1; m < tuple.size(); ++m) {
    VForm term = at(drop(tuple, static_cast<int>(m)));
    acc = (m % 2 == 1) ? sub(acc, term) : add(acc, term);
  }
  return acc;
}

PointMap cover_delta_map(
    const std::function<PointMap(const std::vector<int>&)>& at,
    const std::vector<int>& tuple, const LieGroupModel& t) {
  std::vector<PointMap> terms;
  for (size_t m = 0; m < tuple.size(); ++m)
    terms.push_back(at(drop(tuple, static_cast<int>(m))));
  return paired_product(std::move(terms), t);
}

VForm level_delta_form(const SimplicialSpace& s, int n,
                       const std::function<VForm(int)>& at_face) {
  VForm acc = pullback(s.d(n, 0), at_face(0));
  for (int j = 1; j <= n; ++j) {
    VForm term = pullback(s.d(n, j), at_face(j));
    acc = (j % 2 == 1) ? sub(acc, term) : add(acc, term);
  }
  return acc;
}

PointMap level_delta_map(const SimplicialSpace& s, int n,
                         const std::function<PointMap(int)>& at_face,
                         const LieGroupModel& t) {
  std::vector<PointMap> terms;
  for (int j = 0; j <= n; ++j) {
    PointMap f = at_face(j);
    SmoothMap dj = s.d(n, j);
    terms.push_back([f, dj](const Vec& x) { return f(dj(x)); });
  }
  return paired_product(std::move(terms), t);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~ verification driver ~~~~~~~~~~~~~~~~~~~~~~~~~~

nlohmann::json Report::to_json() const {
  return nlohmann::json{
      {"identity", identity},       {"anchor", anchor},
      {"samples", samples},         {"max_residual", max_residual},
      {"mean_residual", mean_residual}, {"tol", tol},
      {"pass", pass},               {"vacuous", vacuous}};
}

std::string Report::line() const {
  char buf[256];
  const char* tag = vacuous ? "VACUOUS" : (pass ? "PASS" : "FAIL");
  std::snprintf(buf, sizeof buf,
                "[%s] %-34s %-18s samples=%-5d max=%.3e mean=%.3e tol=%.1e",
                tag, identity.c_str(), anchor.c_str(), samples, max_residual,
                mean_residual, tol);
  return buf;
}

Report run_check(const Check& c, int samples, std::uint64_t seed) {
  Rng rng(mix_seed(seed, c.identity + "|" + c.anchor));
  Report r;
  r.identity = c.identity;
  r.anchor = c.anchor;
  r.tol = c.tol;
  double sum = 0;
  int got = 0, attempts = 0;
  while (got < samples && attempts < samples + 50) {
    ++attempts;
    std::optional<double> res = c.draw(rng);
    if (!res) continue;
    ++got;
    sum += *res;
    r.max_residual = std::max(r.max_residual, *res);
  }
  r.samples = got;
  r.vacuous = (got == 0);
  r.mean_residual = r.vacuous ? 0.0 : sum / got;
  r.pass = r.vacuous || r.max_residual <= r.tol;
  return r;
}

std::vector<Report> run_checks(const std::vector<Check>& cs, int samples,
                               std::uint64_t seed) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<Report>> grouped;
  for (const Check& c : cs) {
    if (!grouped.count(c.identity)) order.push_back(c.identity);
    grouped[c.identity].push_back(run_check(c, samples, seed));
  }
  std::vector<Report> out;
  for (const std::string& name : order) {
    const auto& parts = grouped[name];
    Report m = parts.front();
    for (size_t i = 1; i < parts.size(); ++i) {
      const Report& p = parts[i];
      m.max_residual = std::max(m.max_residual, p.max_residual);
      m.mean_residual = m.mean_residual * m.samples + p.mean_residual * p.samples;
      m.samples += p.samples;
      m.mean_residual = m.samples ? m.mean_residual / m.samples : 0.0;
      m.vacuous = m.vacuous && p.vacuous;
      m.pass = m.pass && p.pass;
    }
    if (parts.size() > 1) m.anchor = std::to_string(parts.size()) + " tuples";
    out.push_back(m);
  }
  return out;
}

bool all_pass(const std::vector<Report>& rs) {
  for (const Report& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace hgt
