#pragma once

#include <optional>

#include "sos/syntax.hpp"

// Rule classification, variable occurrence analysis, liquid/frozen argument
// inference and the format membership checks.

namespace sos {

// Liquidity predicate on (symbol, argument index) pairs, 0-based indices.
struct Lambda {
  std::set<std::pair<std::string, int>> liquid;

  bool is_liquid(const std::string& sym, int idx) const { return liquid.count({sym, idx}) != 0; }
  bool subset_of(const Lambda& o) const;
  std::string str() const;  // prints 1-based positions, e.g. {(seq,1)}
};

// All argument positions of a signature (symbols with arity >= 1).
std::vector<std::pair<std::string, int>> argument_positions(const Signature& sig);
Lambda universal_lambda(const Signature& sig);
Lambda declared_lambda(const Signature& sig);

struct RuleClassification {
  bool ntytt = false, ntyxt = false, ntyft = false;
  bool nxytt = false, nxyft = false, xyntt = false, xynft = false;
  bool no_lookahead = false, no_free_vars = false, decent = false;
  bool standard_conclusion = false;
};

RuleClassification classify_rule(const Rule& r);
std::set<std::string> free_vars(const Rule& r);

// One variable occurrence inside a rule.
struct Occurrence {
  enum Where { Source, Target, PremiseLhs } where = Source;
  int premise_index = -1;
  bool premise_positive = false;
  bool premise_rhs_in_target = false;
  std::vector<int> path;  // argument indices from the root of the housing term

  bool propagated() const {
    return where == Target || (where == PremiseLhs && premise_positive && premise_rhs_in_target);
  }
  bool polled() const {
    return where == PremiseLhs && !(premise_positive && premise_rhs_in_target);
  }
};

// True iff every step of `path` descends through a liquid argument of `t`.
// Throws on paths that do not address a variable occurrence.
bool liquid_occurrence(const Term& t, const std::vector<int>& path, const Lambda& L);

struct VariableOccurrences {
  std::vector<Occurrence> occurrences;
  int propagated = 0;
  int polled = 0;
  bool floating = false;
};

struct OccurrenceReport {
  std::map<std::string, VariableOccurrences> by_var;
};

// Requires an ntytt rule.
OccurrenceReport occurrence_report(const Rule& r, const Lambda& L);

enum class Format {
  NtyftNtyxt,
  TyftTyxt,
  ReadySimulation,
  ReadyTrace,
  Readiness,
  FailureTrace,
  PartialTrace,
  DeSimone,
  Gsos,
};

std::string format_name(Format f);
std::optional<Format> format_from_name(const std::string& name);

struct Violation {
  std::string rule;
  std::string variable;  // may be empty for shape violations
  std::string clause;    // stable code, e.g. "polled-in-negative-premise"
  std::string detail;
};

struct FormatReport {
  Format format = Format::NtyftNtyxt;
  bool verdict = false;
  Lambda lambda_used;
  std::vector<Violation> violations;
  std::string lambda_note;
};

enum class LambdaMode { Auto, Exhaustive, Declared };

// Least liquidity predicate forced by propagation demands: right-hand sides
// of positive premises float, every floating variable's propagated occurrence
// paths must be liquid, and new liquidity can float more source variables.
Lambda infer_lambda0_demand(const Tss& tss);

// All subset-minimal lambdas under which every rule passes the per-rule
// safety predicate of `fmt`. Refuses signatures with more than 20 argument
// positions.
std::vector<Lambda> infer_lambda0_exhaustive(const Tss& tss, Format fmt);

FormatReport check_format(const Tss& tss, Format fmt,
                          std::optional<Lambda> lambda = std::nullopt,
                          LambdaMode mode = LambdaMode::Auto);

struct SyntacticConservativityReport {
  bool verdict = false;
  std::vector<std::string> reasons;
};

// Syntactic criterion: both TSSs standard and in decent ntyft format, the
// base signature and rules embed in the extension, and every new rule has a
// new function symbol in its source.
SyntacticConservativityReport check_conservative_syntactic(const Tss& base, const Tss& ext);

}  // namespace sos
