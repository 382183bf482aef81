#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Core syntactic objects: terms over a first-order signature, transition
// literals, rules and whole transition system specifications. All values are
// immutable after construction and safe to share between threads.

namespace sos {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the parser with position info already formatted into the message.
struct ParseError : Error {
  int line = 0, column = 0;
  ParseError(const std::string& what, int line_, int col_)
      : Error(what), line(line_), column(col_) {}
};

class Term {
 public:
  static Term var(std::string name);
  static Term app(std::string symbol, std::vector<Term> args = {});

  bool is_var() const { return is_var_; }
  const std::string& head() const { return head_; }
  const std::vector<Term>& args() const { return args_; }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const;

  bool is_closed() const;
  int height() const;  // variables and constants have height 0
  std::string str() const;

 private:
  bool is_var_ = true;
  std::string head_;
  std::vector<Term> args_;
};

using Action = std::string;

// A positive literal `lhs -a-> rhs` or, when rhs is absent, the negative
// literal `lhs -/a->`.
struct Literal {
  Term lhs;
  Action action;
  std::optional<Term> rhs;

  bool positive() const { return rhs.has_value(); }
  bool operator==(const Literal& o) const;
  bool operator<(const Literal& o) const;
  std::string str() const;
};

// Two literals deny each other when one asserts the transition the other
// forbids: t -a-> t' vs t -/a-> with identical t and a.
bool deny(const Literal& a, const Literal& b);

struct Rule {
  std::string name;
  std::vector<Literal> premises;  // kept sorted and duplicate-free
  Literal conclusion;

  // Elaboration / pipeline provenance. `template_name` and `binding` are set
  // when the rule came from expanding an action-metavariable template;
  // `origin` records the constructor for pipeline-generated rules.
  std::string template_name;
  std::vector<std::pair<std::string, std::string>> binding;
  std::string origin;

  Rule() = default;
  Rule(std::string name_, std::vector<Literal> premises_, Literal conclusion_);

  const Term& source() const { return conclusion.lhs; }
  std::string str() const;
};

struct FunctionDecl {
  std::string name;
  int arity = 0;
  // Optional per-argument liquid marks from `sig f/2 [liquid frozen]`.
  std::optional<std::vector<bool>> lambda_hint;
};

struct Signature {
  std::vector<FunctionDecl> functions;  // declaration order

  const FunctionDecl* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  void add(FunctionDecl d);
  // True when every declaration of `*this` appears in `other` with the same arity.
  bool subset_of(const Signature& other) const;
};

struct Tss {
  Signature signature;
  std::vector<Action> actions;  // declaration order, unique
  std::vector<std::pair<Action, Action>> ordering;  // declared v < w pairs
  std::vector<Rule> rules;

  bool has_action(const Action& a) const;
  // Transitive closure of the declared ordering; throws on cycles.
  std::set<std::pair<Action, Action>> ordering_closure() const;
  bool action_less(const Action& v, const Action& w) const;

  // Derived flags, recomputed by scanning the rules.
  bool standard() const;  // all conclusions positive
  bool positive() const;  // standard and all premises positive
};

// ---- substitutions ----

struct Substitution {
  std::map<std::string, Term> mapping;

  Term operator()(const Term& t) const;
  Literal operator()(const Literal& l) const;
  Rule operator()(const Rule& r) const;
};

// s2 after s1: (compose(s2,s1))(x) == s2(s1(x)).
Substitution compose(const Substitution& s2, const Substitution& s1);

// ---- variable queries ----

void collect_vars(const Term& t, std::vector<std::string>& out);
std::set<std::string> vars(const Term& t);
std::set<std::string> vars(const Literal& l);
std::set<std::string> vars(const Rule& r);

// Variables in premise left-hand sides / right-hand sides of positive premises.
std::set<std::string> lvar(const std::vector<Literal>& premises);
std::set<std::string> rhs_vars(const std::vector<Literal>& premises);

class FreshVars {
 public:
  FreshVars(long start = 0) : next_(start) {}
  std::string next() { return "_g" + std::to_string(next_++); }

 private:
  long next_;
};

// ---- alpha equivalence ----

// Canonical renaming: variables become v0, v1, ... in a deterministic
// traversal order, premises are reordered so that alpha-equivalent rules map
// to the identical rule (rule names are preserved but ignored by the key).
Rule alpha_canonical(const Rule& r);
// Serialization of alpha_canonical(r) without the rule name.
std::string alpha_key(const Rule& r);
bool alpha_equal(const Rule& a, const Rule& b);

// Deduplicate up to alpha, keeping first occurrences in order.
std::vector<Rule> dedup_alpha(const std::vector<Rule>& rules);
bool same_rules_up_to_alpha(const std::vector<Rule>& a, const std::vector<Rule>& b);

// ---- subterms ----

void collect_subterms(const Term& t, std::set<Term>& out);

// FNV-1a over a canonical rendering; used for pipeline trace digests.
std::string digest(const Tss& tss);

}  // namespace sos
