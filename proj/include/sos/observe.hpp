#pragma once

#include "sos/formula.hpp"
#include "sos/lts.hpp"

// Satisfaction over 3-valued fragments, decorated trace extraction,
// simulation-style preorders and the modal route to the same preorders.

namespace sos {

enum class Tri { False, Unknown, True };

// 3-valued evaluation: prefixes need definite transitions, inabilities need
// definite refusals, indeterminacy propagates from unknown and frontier
// literals. Negation demands a fragment that is 2-valued on the part
// reachable from p.
Tri satisfies(const LtsFragment& L, const Term& p, const Formula& f);

enum class TraceKind { Trace, Completed, ReadyPair, FailurePair, ReadyTrace, FailureTrace };

std::optional<TraceKind> trace_kind_from_name(const std::string& name);

// Decorated execution record: the action sequence plus, depending on the
// kind, ready sets or maximal refusal sets (one per visited state for the
// trace-decorated kinds, one for the end state for the pair kinds).
struct Decorated {
  std::vector<Action> acts;
  std::vector<std::set<Action>> menus;

  bool operator==(const Decorated& o) const { return acts == o.acts && menus == o.menus; }
  bool operator<(const Decorated& o) const {
    return acts != o.acts ? acts < o.acts : menus < o.menus;
  }
  std::string str() const;
};

// Exact decorated trace sets up to `depth` actions. Failure kinds carry their
// maximal refusal sets; all pointwise subsets are entailed. Requires the
// fragment to be 2-valued and non-frontier on the explored part.
std::set<Decorated> decorated_traces(const LtsFragment& L, const Term& p, TraceKind kind,
                                     int depth);

// Set inclusion, with pointwise refusal-set domination for the failure kinds.
bool decorated_included(const std::set<Decorated>& sub, const std::set<Decorated>& super,
                        TraceKind kind);

// Subset-closure expansion of one failure-decorated record; throws when the
// expansion would exceed `limit` records.
std::set<Decorated> expand_refusal_subsets(const Decorated& d, std::size_t limit = 100000);

enum class SimKind { Simulation, Nested2, Ready, Bisimulation };

// Greatest fixpoint computation over a finite 2-valued fragment.
std::set<std::pair<Term, Term>> simulation_preorder(const LtsFragment& L, SimKind kind);

enum class Preorder { T, CT, F, R, FT, RT, S1, S2, RS, B };

std::optional<Preorder> preorder_from_name(const std::string& name);
std::string preorder_name(Preorder n);

// Decides the preorder by decorated trace inclusion or simulation fixpoint.
bool preorder_holds(const LtsFragment& L, const Term& p, const Term& q, Preorder n, int depth);

struct ModalResult {
  bool holds = false;
  std::optional<std::string> witness;  // a distinguishing observation
};

// Decides the same preorders by observation-set inclusion at matched depth:
// for the decorated notions by evaluating the strongest observations along
// the paths of p on q, for the simulation notions by closing satisfaction
// sets under the sublanguage grammar.
ModalResult preorder_modal(const LtsFragment& L, const Term& p, const Term& q, Preorder n,
                           int depth);

}  // namespace sos
