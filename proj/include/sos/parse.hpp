#pragma once

#include <string>

#include "sos/syntax.hpp"

// Textual TSS language. Line-oriented:
//
//   sig f/2 [liquid frozen]      declare a function symbol, optional per-
//                                argument liquidity hints
//   act a b sqrt                 declare actions
//   ord c < b                    declare ordering pairs (strict)
//   rule NAME: p1, p2 |- c if $v != sqrt, $v < $w
//
// Literals are written `t -a-> t'` (positive) and `t -/a->` (negative).
// `$v` is an action metavariable; a rule mentioning metavariables is a
// template that parse_tss expands over the declared actions, subject to its
// side conditions. Metavariables bound by the conclusion enumerate one rule
// per instantiation; metavariables local to a premise enumerate premises
// within the rule. `$v` in a term position stands for the constant named
// after the action. Comments start with `#`.

namespace sos {

// Parse and elaborate. The returned TSS carries no metavariables and no side
// conditions; expanded rules record their template name and binding.
Tss parse_tss(const std::string& text);

// Term in the same prefix syntax, validated against the signature: an
// identifier is a declared symbol or else a variable. Rejects metavariables
// and arity mismatches.
Term parse_term(const std::string& text, const Tss& tss);
Term parse_closed_term(const std::string& text, const Tss& tss);

// Deterministic rendering in the grammar above; parse_tss(print_tss(t)) equals
// t up to alpha renaming and rule order.
std::string print_tss(const Tss& tss);
std::string print_rule(const Rule& r);

}  // namespace sos
