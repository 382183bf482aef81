#pragma once

#include <random>

#include "sos/format.hpp"
#include "sos/observe.hpp"
#include "sos/ruloid.hpp"
#include "sos/transform.hpp"

// Modal decomposition: mapping an observation on an open term to observations
// on its variables, with the brute-force validator, sublanguage preservation
// reporting and the precongruence fuzz harness.

namespace sos {

struct Decomposition {
  std::map<std::string, Formula> psi;  // defaults to top off-domain

  Formula at(const std::string& var) const {
    auto it = psi.find(var);
    return it == psi.end() ? Formula::top() : it->second;
  }
  bool operator<(const Decomposition& o) const { return psi < o.psi; }
  bool operator==(const Decomposition& o) const { return psi == o.psi; }
};

class Decomposer {
 public:
  explicit Decomposer(const Tss& tss, const std::vector<Term>* universe = nullptr,
                      const TransformOptions& opts = {});

  // The decompositions of `f` for source term `t`; entries are normalized and
  // deduplicated, and maps with a syntactically contradictory entry (both a
  // prefix and the matching inability in one conjunction) are pruned.
  std::vector<Decomposition> inverse(const Term& t, const Formula& f);

  const Tss& pplus() const { return deriver_.pplus(); }
  RuloidDeriver& deriver() { return deriver_; }

 private:
  RuloidDeriver deriver_;
};

struct InverseCheckResult {
  enum class Status { Agree, Mismatch, Inconclusive } status = Status::Agree;
  int substitutions_checked = 0;
  int inconclusive = 0;
  std::string detail;
};

// Brute-forces the decomposition equivalence: sigma(t) satisfies f iff some
// decomposition is satisfied variable-wise, over all substitutions into the
// universe.
InverseCheckResult check_inverse_lemma(const Tss& tss, const Term& t, const Formula& f,
                                       const std::vector<Term>& universe, int depth);

struct PreservationEntry {
  std::string var;
  Formula psi;
  bool in_language = false;
};

struct PreservationReport {
  SublanguageTag tag{SublanguageTag::Notion::RS, 2, true};
  std::vector<PreservationEntry> entries;
  bool all_preserved = true;
};

// Decomposes f for t and reports whether every variable formula stays inside
// the conjunctive sublanguage matching the format.
PreservationReport preservation_report(Decomposer& dec, Format fmt, const Term& t,
                                       const Formula& f, const std::set<Action>& actions);

struct PrecongruenceResult {
  bool pass = true;
  int pairs_checked = 0;
  std::string counterexample;
};

// For each context and each pair with p below q, checks that the context
// instantiated with p stays below the context instantiated with q. Contexts
// are open terms; every variable is instantiated by the same process.
PrecongruenceResult precongruence_test(const Tss& tss, Preorder n,
                                       const std::vector<Term>& contexts,
                                       const std::vector<std::pair<Term, Term>>& pairs,
                                       int depth);

// All closed terms of height <= max_height over the signature, capped.
std::vector<Term> enumerate_closed_terms(const Tss& tss, int max_height, std::size_t cap = 4000);

// One-variable contexts: x itself plus every symbol applied with x in one
// argument position and a constant elsewhere.
std::vector<Term> default_contexts(const Tss& tss);

struct FuzzReport {
  bool pass = true;
  int pairs_tested = 0;
  int checks = 0;
  std::string counterexample;
};

// Seeded end-to-end harness: enumerates closed terms, finds related pairs at
// the given depth and checks every default context. `equivalence` tests both
// directions of the relation instead of one.
FuzzReport fuzz_precongruence(const Tss& tss, Preorder n, int depth, unsigned long long seed,
                              int max_pairs, bool equivalence = false);

}  // namespace sos
