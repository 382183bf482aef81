#pragma once

#include "sos/syntax.hpp"

// Bounded ground instantiation of a TSS. The universe is the closure of the
// roots under subterms, optimistically derivable rule targets, and premise
// left-hand-side instantiation, unfolded for `depth` rounds. Instances are
// all closed substitution instances whose source and premise left-hand sides
// lie in the universe; right-hand sides of positive premises range over the
// whole universe.

namespace sos {

struct GroundOptions {
  std::size_t max_instances = 500000;
  // When set, right-hand sides of positive premises are only bound to targets
  // optimistically derivable from their left-hand side. Sound for standard
  // and well-founded provability, not for supported provability.
  bool premise_directed = false;
};

struct GroundInstance {
  int rule_index = -1;
  std::vector<Literal> premises;
  Literal conclusion;
};

struct GroundProgram {
  Tss tss;
  std::vector<Term> roots;
  int depth = 0;
  std::set<Term> universe;
  std::set<Term> frontier;  // never unfolded; outgoing behavior is unknown
  std::vector<GroundInstance> instances;
  std::string closure_note;

  bool is_frontier(const Term& t) const { return frontier.count(t) != 0; }
};

GroundProgram ground_program(const Tss& tss, const std::vector<Term>& roots, int depth,
                             const GroundOptions& opts = {});

}  // namespace sos
