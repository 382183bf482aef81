#include "sos/provability.hpp"

#include <algorithm>

namespace sos {

bool TransitionRelation3::has_positive(const Term& t, const Action& a) const {
  auto it = positive.lower_bound({t, a, Term::var("")});
  return it != positive.end() && std::get<0>(*it) == t && std::get<1>(*it) == a;
}

namespace {

// (source, action) pairs whose verdicts the program determines.
std::vector<std::pair<Term, Action>> domain(const GroundProgram& g) {
  std::vector<std::pair<Term, Action>> out;
  for (const Term& t : g.universe) {
    if (g.is_frontier(t)) continue;
    for (const Action& a : g.tss.actions) out.emplace_back(t, a);
  }
  return out;
}

}  // namespace

std::set<Literal> standard_provable(const GroundProgram& g) {
  std::set<Literal> established;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const GroundInstance& inst : g.instances) {
      if (established.count(inst.conclusion)) continue;
      bool fire = true;
      for (const Literal& p : inst.premises)
        if (!established.count(p)) {
          fire = false;
          break;
        }
      if (fire) {
        established.insert(inst.conclusion);
        changed = true;
      }
    }
  }
  return established;
}

TransitionRelation3 standard_relation(const GroundProgram& g) {
  std::set<Literal> est = standard_provable(g);
  TransitionRelation3 rel;
  for (const Literal& l : est)
    if (l.positive()) rel.positive.insert({l.lhs, l.action, *l.rhs});
  for (const auto& [t, a] : domain(g)) {
    if (est.count(Literal{t, a, std::nullopt}))
      rel.negative.insert({t, a});
    else if (!rel.has_positive(t, a))
      rel.unknown.insert({t, a});
  }
  return rel;
}

TransitionRelation3 supported_provable(const GroundProgram& g) {
  if (!g.tss.standard()) throw Error("supported provability requires a standard TSS");
  TransitionRelation3 rel;
  auto dom = domain(g);

  bool changed = true;
  while (changed) {
    changed = false;
    // positives by rule application over established literals
    for (const GroundInstance& inst : g.instances) {
      std::tuple<Term, Action, Term> concl{inst.conclusion.lhs, inst.conclusion.action,
                                           inst.conclusion.rhs.value()};
      if (rel.positive.count(concl)) continue;
      bool fire = true;
      for (const Literal& p : inst.premises) {
        bool ok = p.positive() ? rel.positive.count({p.lhs, p.action, *p.rhs}) != 0
                               : rel.negative.count({p.lhs, p.action}) != 0;
        if (!ok) {
          fire = false;
          break;
        }
      }
      if (fire) {
        rel.positive.insert(concl);
        changed = true;
      }
    }
    // a negative holds when every instance concluding the denied transition
    // has a premise whose denial is established
    for (const auto& [t, a] : dom) {
      if (rel.negative.count({t, a})) continue;
      bool all_refuted = true;
      for (const GroundInstance& inst : g.instances) {
        if (!(inst.conclusion.lhs == t) || inst.conclusion.action != a ||
            !inst.conclusion.positive())
          continue;
        bool refuted = false;
        for (const Literal& p : inst.premises) {
          if (p.positive() ? rel.negative.count({p.lhs, p.action}) != 0
                           : rel.has_positive(p.lhs, p.action)) {
            refuted = true;
            break;
          }
        }
        if (!refuted) {
          all_refuted = false;
          break;
        }
      }
      if (all_refuted) {
        rel.negative.insert({t, a});
        changed = true;
      }
    }
  }

  for (const auto& [t, a] : dom)
    if (!rel.negative.count({t, a}) && !rel.has_positive(t, a)) rel.unknown.insert({t, a});

  for (const auto& [t, a] : rel.negative)
    if (rel.has_positive(t, a))
      throw Error("inconsistent supported relation at " + t.str() + " -" + a + "->");
  return rel;
}

namespace {

using Triples = std::set<std::tuple<Term, Action, Term>>;

bool has_source_action(const Triples& I, const Term& t, const Action& a) {
  auto it = I.lower_bound({t, a, Term::var("")});
  return it != I.end() && std::get<0>(*it) == t && std::get<1>(*it) == a;
}

// Least set of transitions derivable when a negative premise u -/c-> counts
// as true iff I has no transition from u labelled c.
Triples derive_relative(const GroundProgram& g, const Triples& I) {
  Triples out;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const GroundInstance& inst : g.instances) {
      std::tuple<Term, Action, Term> concl{inst.conclusion.lhs, inst.conclusion.action,
                                           inst.conclusion.rhs.value()};
      if (out.count(concl)) continue;
      bool fire = true;
      for (const Literal& p : inst.premises) {
        bool ok = p.positive() ? out.count({p.lhs, p.action, *p.rhs}) != 0
                               : !has_source_action(I, p.lhs, p.action);
        if (!ok) {
          fire = false;
          break;
        }
      }
      if (fire) {
        out.insert(concl);
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace

TransitionRelation3 ws_provable(const GroundProgram& g) {
  if (!g.tss.standard()) throw Error("well-founded provability requires a standard TSS");

  Triples truths;                          // monotonically growing
  Triples possible = derive_relative(g, truths);  // monotonically shrinking
  for (;;) {
    Triples t2 = derive_relative(g, possible);
    Triples p2 = derive_relative(g, t2);
    if (t2 == truths && p2 == possible) break;
    truths = std::move(t2);
    possible = std::move(p2);
  }

  TransitionRelation3 rel;
  rel.positive = truths;
  for (const auto& [t, a] : domain(g)) {
    if (!has_source_action(possible, t, a))
      rel.negative.insert({t, a});
    else if (!has_source_action(truths, t, a))
      rel.unknown.insert({t, a});
  }

  for (const auto& [t, a] : rel.negative)
    if (rel.has_positive(t, a))
      throw Error("inconsistent well-founded relation at " + t.str() + " -" + a + "->");
  return rel;
}

CompletenessReport check_complete(const GroundProgram& g) {
  TransitionRelation3 rel = ws_provable(g);
  CompletenessReport rep;
  rep.witnesses.assign(rel.unknown.begin(), rel.unknown.end());
  rep.complete = rep.witnesses.empty();
  return rep;
}

}  // namespace sos
