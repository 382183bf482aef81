#include "sos/lts.hpp"

#include <algorithm>

namespace sos {

std::optional<Notion> notion_from_name(const std::string& name) {
  if (name == "standard") return Notion::Standard;
  if (name == "s") return Notion::Supported;
  if (name == "ws") return Notion::WellSupported;
  return std::nullopt;
}

std::string notion_name(Notion n) {
  switch (n) {
    case Notion::Standard: return "standard";
    case Notion::Supported: return "s";
    case Notion::WellSupported: return "ws";
  }
  return "?";
}

std::set<Term> LtsFragment::successors(const Term& t, const Action& a) const {
  std::set<Term> out;
  for (auto it = rel.positive.lower_bound({t, a, Term::var("")}); it != rel.positive.end(); ++it) {
    if (!(std::get<0>(*it) == t) || std::get<1>(*it) != a) break;
    out.insert(std::get<2>(*it));
  }
  return out;
}

std::set<Action> LtsFragment::initials(const Term& t) const {
  std::set<Action> out;
  for (const Action& a : actions)
    if (!successors(t, a).empty()) out.insert(a);
  return out;
}

std::set<Term> LtsFragment::reachable(const Term& p) const {
  std::set<Term> seen{p};
  std::vector<Term> todo{p};
  while (!todo.empty()) {
    Term t = todo.back();
    todo.pop_back();
    for (const Action& a : actions)
      for (const Term& q : successors(t, a))
        if (seen.insert(q).second) todo.push_back(q);
  }
  return seen;
}

bool LtsFragment::two_valued_reachable(const Term& p) const {
  for (const Term& t : reachable(p)) {
    if (is_frontier(t)) return false;
    for (const Action& a : actions)
      if (rel.unknown.count({t, a})) return false;
  }
  return true;
}

LtsFragment fragment_from_relation(const GroundProgram& g, TransitionRelation3 rel) {
  LtsFragment lts;
  lts.states = g.universe;
  lts.actions = g.tss.actions;
  lts.frontier = g.frontier;
  // Targets can fall outside the closed universe; keep them as states so the
  // fragment is self-contained, marking them frontier.
  for (const auto& [t, a, t2] : rel.positive) {
    (void)t;
    (void)a;
    if (!lts.states.count(t2)) {
      lts.states.insert(t2);
      lts.frontier.insert(t2);
    }
  }
  lts.rel = std::move(rel);
  return lts;
}

LtsFragment build_lts(const Tss& tss, const std::vector<Term>& roots, int depth, Notion notion,
                      const GroundOptions& opts) {
  if (!tss.standard() && notion != Notion::Standard)
    throw Error("3-valued semantics requires a standard TSS");
  GroundProgram g = ground_program(tss, roots, depth, opts);
  TransitionRelation3 rel;
  switch (notion) {
    case Notion::Standard: rel = standard_relation(g); break;
    case Notion::Supported: rel = supported_provable(g); break;
    case Notion::WellSupported: rel = ws_provable(g); break;
  }
  return fragment_from_relation(g, std::move(rel));
}

SemanticConservativityReport check_conservative_semantic(const Tss& base, const Tss& ext,
                                                         const std::vector<Term>& roots,
                                                         int depth) {
  SemanticConservativityReport rep;
  if (!base.signature.subset_of(ext.signature)) {
    rep.counterexamples.push_back("base signature is not included in the extension");
    return rep;
  }

  auto base_term = [&](const Term& t) {
    std::set<Term> subs;
    collect_subterms(t, subs);
    for (const Term& s : subs)
      if (!s.is_var() && !base.signature.contains(s.head())) return false;
    return true;
  };

  // First pass to find every base-signature source either side reaches, then
  // recompute both fragments over the joint root set.
  GroundProgram g1 = ground_program(base, roots, depth);
  GroundProgram g2 = ground_program(ext, roots, depth);
  std::set<Term> joint(roots.begin(), roots.end());
  for (const GroundProgram* g : {&g1, &g2})
    for (const Term& t : g->universe)
      if (t.is_closed() && base_term(t)) joint.insert(t);
  std::vector<Term> joint_roots(joint.begin(), joint.end());

  GroundProgram h1 = ground_program(base, joint_roots, depth);
  GroundProgram h2 = ground_program(ext, joint_roots, depth);
  TransitionRelation3 r1 = ws_provable(h1);
  TransitionRelation3 r2 = ws_provable(h2);

  for (const Term& t : joint) {
    if (h1.is_frontier(t) || h2.is_frontier(t)) continue;
    for (const Action& a : ext.actions) {
      std::set<Term> s1, s2;
      for (const auto& [u, b, u2] : r1.positive)
        if (u == t && b == a) s1.insert(u2);
      for (const auto& [u, b, u2] : r2.positive)
        if (u == t && b == a) s2.insert(u2);
      if (s1 != s2) {
        for (const Term& u2 : s2)
          if (!s1.count(u2))
            rep.counterexamples.push_back(t.str() + " -" + a + "-> " + u2.str() +
                                          " holds in the extension only");
        for (const Term& u2 : s1)
          if (!s2.count(u2))
            rep.counterexamples.push_back(t.str() + " -" + a + "-> " + u2.str() +
                                          " holds in the base only");
      }
      // Literals over actions the base never mentions are vacuously refutable there.
      bool n1 = base.has_action(a) ? r1.negative.count({t, a}) != 0 : s1.empty();
      bool n2 = r2.negative.count({t, a}) != 0;
      if (n1 != n2)
        rep.counterexamples.push_back(t.str() + " -/" + a + "-> " + (n1 ? "holds" : "fails") +
                                      " in the base but " + (n2 ? "holds" : "fails") +
                                      " in the extension");
    }
  }
  rep.verdict = rep.counterexamples.empty();
  return rep;
}

}  // namespace sos
