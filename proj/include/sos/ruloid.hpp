#pragma once

#include "sos/syntax.hpp"

// Ruloids: decent rules with variable premise left-hand sides derived for an
// arbitrary open source term from a closure output, by structural recursion
// on the term.

namespace sos {

struct Ruloid {
  Rule rule;          // premises on variables of source_term, fresh targets
  Term source_term;
  bool positive = true;
  std::string provenance;  // closure rule names used in the derivation
};

class RuloidDeriver {
 public:
  // `pplus` must be a closure output: every premise left-hand side a variable,
  // every rule decent with a function-headed source.
  explicit RuloidDeriver(Tss pplus);

  // All ruloids with conclusion `t -a-> _` (positive) or `t -/a->`, up to
  // alpha renaming, memoized on the alpha-canonical source term.
  std::vector<Ruloid> derive(const Term& t, const Action& a, bool positive);

  const Tss& pplus() const { return pplus_; }

 private:
  Tss pplus_;
  FreshVars fresh_;
  std::map<std::string, std::vector<Ruloid>> memo_;

  std::vector<Ruloid> derive_uncached(const Term& t, const Action& a, bool positive);
};

}  // namespace sos
