#include "sos/ground.hpp"

#include <algorithm>

namespace sos {

namespace {

bool match(const Term& pattern, const Term& term, Substitution& s) {
  if (pattern.is_var()) {
    auto it = s.mapping.find(pattern.head());
    if (it != s.mapping.end()) return it->second == term;
    s.mapping.emplace(pattern.head(), term);
    return true;
  }
  if (term.is_var() || term.head() != pattern.head() ||
      term.args().size() != pattern.args().size())
    return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match(pattern.args()[i], term.args()[i], s)) return false;
  return true;
}

using Triples = std::set<std::tuple<Term, Action, Term>>;

// Transitions derivable when every negative premise is assumed to hold,
// restricted to sources in `sources`. Used to discover reachable terms.
Triples optimistic_step(const Tss& tss, const std::set<Term>& sources,
                        const std::set<Term>& universe) {
  Triples derived;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : tss.rules) {
      if (!r.conclusion.positive()) continue;
      std::vector<Substitution> partial;
      for (const Term& t : sources) {
        Substitution s;
        if (match(r.source(), t, s)) partial.push_back(std::move(s));
      }
      if (partial.empty()) continue;
      // Free variables range over the universe.
      std::set<std::string> bound = vars(r.source());
      for (const std::string& v : rhs_vars(r.premises)) bound.insert(v);
      std::vector<std::string> free;
      for (const std::string& v : vars(r))
        if (!bound.count(v)) free.push_back(v);
      for (const std::string& v : free) {
        std::vector<Substitution> next;
        for (const Substitution& s : partial)
          for (const Term& t : universe) {
            Substitution s2 = s;
            s2.mapping[v] = t;
            next.push_back(std::move(s2));
          }
        partial = std::move(next);
      }
      // Positive premises bind their targets from already-derived triples,
      // solved in dependency order so lookahead chains resolve.
      std::vector<const Literal*> positive;
      for (const Literal& p : r.premises)
        if (p.positive()) positive.push_back(&p);
      struct State {
        Substitution s;
        std::set<const Literal*> open;
      };
      std::vector<State> states;
      for (Substitution& s : partial)
        states.push_back({std::move(s), {positive.begin(), positive.end()}});
      std::vector<Substitution> solved;
      while (!states.empty()) {
        State st = std::move(states.back());
        states.pop_back();
        if (st.open.empty()) {
          solved.push_back(std::move(st.s));
          continue;
        }
        const Literal* pick = nullptr;
        for (const Literal* p : st.open)
          if (st.s(p->lhs).is_closed()) {
            pick = p;
            break;
          }
        if (!pick) continue;  // circular lookahead; no derivation this way
        Term lhs = st.s(pick->lhs);
        for (const auto& [u, a, u2] : derived) {
          if (!(u == lhs) || a != pick->action) continue;
          State st2 = st;
          st2.open.erase(pick);
          if (match(st2.s(pick->rhs.value()), u2, st2.s)) states.push_back(std::move(st2));
        }
      }
      for (const Substitution& s : solved) {
        Term target = s(r.conclusion.rhs.value());
        if (!target.is_closed()) continue;
        if (derived.insert({s(r.conclusion.lhs), r.conclusion.action, target}).second)
          changed = true;
      }
    }
  }
  return derived;
}

}  // namespace

GroundProgram ground_program(const Tss& tss, const std::vector<Term>& roots, int depth,
                             const GroundOptions& opts) {
  GroundProgram g;
  g.tss = tss;
  g.roots = roots;
  g.depth = depth;

  for (const Term& r : roots) {
    if (!r.is_closed()) throw Error("ground program roots must be closed terms: " + r.str());
    collect_subterms(r, g.universe);
  }

  // Unfold: each round derives optimistic transitions from the terms not yet
  // unfolded and adds targets, their subterms, and instantiated premise
  // left-hand sides to the universe.
  std::set<Term> unfolded;
  for (int round = 0; round < depth; ++round) {
    std::set<Term> fresh_terms;
    for (const Term& t : g.universe)
      if (!unfolded.count(t)) fresh_terms.insert(t);
    if (fresh_terms.empty()) break;
    unfolded.insert(fresh_terms.begin(), fresh_terms.end());

    Triples derived = optimistic_step(tss, unfolded, g.universe);
    std::set<Term> grown = g.universe;
    for (const auto& [u, a, u2] : derived) collect_subterms(u2, grown);

    // Premise left-hand sides that are proper instantiated terms (outside the
    // universe) matter for rules matching unfolded sources.
    for (const Rule& r : tss.rules) {
      for (const Term& t : unfolded) {
        Substitution s;
        if (!match(r.source(), t, s)) continue;
        for (const Literal& p : r.premises) {
          Term lhs = s(p.lhs);
          if (lhs.is_closed()) collect_subterms(lhs, grown);
        }
      }
    }
    g.universe = std::move(grown);
  }
  for (const Term& t : g.universe)
    if (!unfolded.count(t)) g.frontier.insert(t);
  g.closure_note = "subterm closure of roots plus optimistically derivable targets and premise "
                   "left-hand sides, " + std::to_string(depth) + " rounds";

  // Optimistic successor index for the premise-directed mode.
  Triples directed;
  if (opts.premise_directed) directed = optimistic_step(tss, unfolded, g.universe);

  // Enumerate instances for unfolded sources.
  for (size_t ri = 0; ri < tss.rules.size(); ++ri) {
    const Rule& r = tss.rules[ri];
    std::vector<Substitution> partial;
    for (const Term& t : unfolded) {
      Substitution s;
      if (match(r.source(), t, s)) partial.push_back(std::move(s));
    }
    if (partial.empty()) continue;

    std::set<std::string> src_vars = vars(r.source());
    std::set<std::string> rhs = rhs_vars(r.premises);
    std::vector<std::string> rest;  // free variables and premise targets
    for (const std::string& v : vars(r))
      if (!src_vars.count(v)) rest.push_back(v);

    for (const std::string& v : rest) {
      bool is_rhs = rhs.count(v) != 0;
      std::vector<Substitution> next;
      for (const Substitution& s : partial) {
        if (is_rhs && opts.premise_directed) {
          // Bind only to optimistic successors of the premise source.
          for (const Literal& p : r.premises) {
            if (!p.positive() || !p.rhs->is_var() || p.rhs->head() != v) continue;
            Term lhs = s(p.lhs);
            for (const auto& [u, a, u2] : directed) {
              if (!lhs.is_closed() || !(u == lhs) || a != p.action) continue;
              Substitution s2 = s;
              s2.mapping[v] = u2;
              next.push_back(std::move(s2));
            }
            break;
          }
        } else {
          for (const Term& t : g.universe) {
            Substitution s2 = s;
            s2.mapping[v] = t;
            next.push_back(std::move(s2));
          }
        }
        if (next.size() > opts.max_instances)
          throw Error("ground instance explosion: more than " +
                      std::to_string(opts.max_instances) + " instances for rule `" + r.name + "`");
      }
      partial = std::move(next);
    }

    for (const Substitution& s : partial) {
      GroundInstance inst;
      inst.rule_index = static_cast<int>(ri);
      bool ok = true;
      for (const Literal& p : r.premises) {
        Literal q = s(p);
        if (!q.lhs.is_closed() || (q.rhs && !q.rhs->is_closed())) {
          ok = false;
          break;
        }
        if (!g.universe.count(q.lhs)) {
          ok = false;  // premise source outside the universe
          break;
        }
        inst.premises.push_back(std::move(q));
      }
      if (!ok) continue;
      inst.conclusion = s(r.conclusion);
      if (!inst.conclusion.lhs.is_closed() ||
          (inst.conclusion.rhs && !inst.conclusion.rhs->is_closed()))
        continue;
      g.instances.push_back(std::move(inst));
      if (g.instances.size() > opts.max_instances)
        throw Error("ground instance explosion: more than " + std::to_string(opts.max_instances) +
                    " instances");
    }
  }
  return g;
}

}  // namespace sos
