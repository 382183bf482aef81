#pragma once

#include "sos/provability.hpp"

namespace sos {

enum class Notion { Standard, Supported, WellSupported };

std::optional<Notion> notion_from_name(const std::string& name);
std::string notion_name(Notion n);

// A depth-bounded 3-valued transition system fragment. Frontier states were
// never unfolded: every query about their outgoing behavior is unknown.
struct LtsFragment {
  std::set<Term> states;
  std::vector<Action> actions;
  TransitionRelation3 rel;
  std::set<Term> frontier;

  bool is_frontier(const Term& t) const { return frontier.count(t) != 0; }
  std::set<Term> successors(const Term& t, const Action& a) const;
  std::set<Action> initials(const Term& t) const;
  // every (state, action) pair reachable from p resolves to a definite verdict
  bool two_valued_reachable(const Term& p) const;
  std::set<Term> reachable(const Term& p) const;
};

LtsFragment build_lts(const Tss& tss, const std::vector<Term>& roots, int depth,
                      Notion notion = Notion::WellSupported, const GroundOptions& opts = {});

LtsFragment fragment_from_relation(const GroundProgram& g, TransitionRelation3 rel);

struct SemanticConservativityReport {
  bool verdict = false;
  std::vector<std::string> counterexamples;  // literals with differing verdicts
};

// Compares well-founded verdicts of base and extension on literals whose
// source is a base-signature term, within the bounded fragments from `roots`.
SemanticConservativityReport check_conservative_semantic(const Tss& base, const Tss& ext,
                                                         const std::vector<Term>& roots,
                                                         int depth);

}  // namespace sos
