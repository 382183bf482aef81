#pragma once

#include <memory>

#include "sos/syntax.hpp"

// Modal observations: top, action prefix, inability, finite conjunction and
// negation, with the sublanguage grammars that characterize the preorders.

namespace sos {

class Formula {
 public:
  enum class Kind { Top, Prefix, Cannot, Conj, Neg };

  static Formula top();
  static Formula prefix(Action a, Formula f);
  static Formula cannot(Action a);
  static Formula conj(std::vector<Formula> fs);
  static Formula neg(Formula f);

  Kind kind() const { return kind_; }
  const Action& action() const { return action_; }
  const std::vector<Formula>& children() const { return children_; }
  const Formula& child() const { return children_.at(0); }

  bool operator==(const Formula& o) const;
  bool operator<(const Formula& o) const;
  std::string str() const;
  int prefix_depth() const;

 private:
  Kind kind_ = Kind::Top;
  Action action_;
  std::vector<Formula> children_;
};

// Canonical form: conjunctions flattened, top units dropped, conjuncts sorted;
// the empty conjunction is top and singletons collapse. Idempotent and
// satisfaction-preserving.
Formula normalize(const Formula& f);

// `tt`, `<a> phi`, `no a`, `phi & phi`, `not phi`, parentheses.
Formula parse_formula(const std::string& text);
std::string print_formula(const Formula& f);

struct SublanguageTag {
  enum class Notion { T, CT, F, R, FT, RT, S1, RS, NS, B, TTilde } notion;
  int n = 2;                 // for NS
  bool conj_closure = false; // the ^-closed variant

  static std::optional<SublanguageTag> from_name(const std::string& name);
  std::string name() const;
};

// Grammar membership for a normalized formula. The action set is needed for
// the completed-trace language, whose refusal conjunction spans all actions.
bool in_sublanguage(const Formula& f, const SublanguageTag& tag,
                    const std::set<Action>& actions);

}  // namespace sos
