#pragma once

#include "sos/ground.hpp"

// Proof-theoretic semantics over ground programs: standard provability (every
// literal an atom with its own rules, as in closure outputs), supported
// provability (negation by refuting each instance), and well-founded
// provability via the alternating fixpoint.

namespace sos {

struct TransitionRelation3 {
  std::set<std::tuple<Term, Action, Term>> positive;
  std::set<std::pair<Term, Action>> negative;
  std::set<std::pair<Term, Action>> unknown;

  bool two_valued() const { return unknown.empty(); }
  bool has_positive(const Term& t, const Action& a) const;
  bool operator==(const TransitionRelation3& o) const {
    return positive == o.positive && negative == o.negative && unknown == o.unknown;
  }
};

// Least fixpoint treating positive and negative literals alike: a literal is
// provable iff some instance concludes it with all premises provable.
std::set<Literal> standard_provable(const GroundProgram& g);

// Stage iteration of supported provability: negatives require every instance
// concluding the denied transition to contain an already-refuted premise.
TransitionRelation3 supported_provable(const GroundProgram& g);

// Well-founded (alternating fixpoint) semantics; consistency is asserted on
// every run.
TransitionRelation3 ws_provable(const GroundProgram& g);

// Interprets standard provability of a closure output as a 3-valued relation
// over the program's unfolded sources.
TransitionRelation3 standard_relation(const GroundProgram& g);

struct CompletenessReport {
  bool complete = false;
  std::vector<std::pair<Term, Action>> witnesses;  // unknown non-frontier pairs
};

CompletenessReport check_complete(const GroundProgram& g);

}  // namespace sos
