#include "sos/observe.hpp"

#include <algorithm>

namespace sos {

namespace {

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

// Verdict for the literal p -a-> _ on the fragment.
Tri can_step(const LtsFragment& L, const Term& p, const Action& a) {
  if (!L.successors(p, a).empty()) return Tri::True;
  if (L.is_frontier(p) || L.rel.unknown.count({p, a})) return Tri::Unknown;
  return Tri::False;
}

}  // namespace

Tri satisfies(const LtsFragment& L, const Term& p, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return Tri::True;
    case Formula::Kind::Cannot: {
      Tri step = can_step(L, p, f.action());
      if (step == Tri::True) return Tri::False;
      if (step == Tri::False) return Tri::True;
      return Tri::Unknown;
    }
    case Formula::Kind::Prefix: {
      Tri best = can_step(L, p, f.action()) == Tri::Unknown ? Tri::Unknown : Tri::False;
      for (const Term& q : L.successors(p, f.action())) {
        Tri sub = satisfies(L, q, f.child());
        if (sub == Tri::True) return Tri::True;
        if (sub == Tri::Unknown) best = Tri::Unknown;
      }
      return best;
    }
    case Formula::Kind::Conj: {
      Tri acc = Tri::True;
      for (const Formula& c : f.children()) acc = tri_and(acc, satisfies(L, p, c));
      return acc;
    }
    case Formula::Kind::Neg: {
      if (!L.two_valued_reachable(p))
        throw Error("negation requires a fragment that is 2-valued from " + p.str());
      Tri sub = satisfies(L, p, f.child());
      return sub == Tri::True ? Tri::False : Tri::True;
    }
  }
  return Tri::Unknown;
}

std::optional<TraceKind> trace_kind_from_name(const std::string& name) {
  if (name == "trace") return TraceKind::Trace;
  if (name == "completed") return TraceKind::Completed;
  if (name == "ready-pair") return TraceKind::ReadyPair;
  if (name == "failure-pair") return TraceKind::FailurePair;
  if (name == "ready-trace") return TraceKind::ReadyTrace;
  if (name == "failure-trace") return TraceKind::FailureTrace;
  return std::nullopt;
}

std::string Decorated::str() const {
  auto menu = [](const std::set<Action>& m) {
    std::string s = "{";
    bool first = true;
    for (const Action& a : m) {
      if (!first) s += ",";
      first = false;
      s += a;
    }
    return s + "}";
  };
  std::string s;
  if (menus.size() == acts.size() + 1) {
    for (size_t i = 0; i < acts.size(); ++i) s += menu(menus[i]) + " " + acts[i] + " ";
    s += menu(menus.back());
    return s;
  }
  for (size_t i = 0; i < acts.size(); ++i) s += (i ? " " : "") + acts[i];
  if (menus.size() == 1) s += (acts.empty() ? "" : " ") + menu(menus[0]);
  return s.empty() ? "<empty>" : s;
}

namespace {

struct PathWalker {
  const LtsFragment& L;
  TraceKind kind;
  std::set<Decorated> out;

  void require_determined(const Term& t) {
    if (L.is_frontier(t))
      throw Error("frontier truncation within depth at " + t.str());
    for (const Action& a : L.actions)
      if (L.rel.unknown.count({t, a}))
        throw Error("fragment is not 2-valued at " + t.str() + " -" + a + "->");
  }

  std::set<Action> refused(const Term& t) {
    std::set<Action> out_;
    for (const Action& a : L.actions)
      if (L.rel.negative.count({t, a})) out_.insert(a);
    return out_;
  }

  void emit(const std::vector<Action>& acts, const std::vector<std::set<Action>>& menus,
            const Term& end) {
    Decorated d;
    d.acts = acts;
    switch (kind) {
      case TraceKind::Trace:
        break;
      case TraceKind::Completed:
        if (!L.initials(end).empty()) return;
        break;
      case TraceKind::ReadyPair:
        d.menus = {L.initials(end)};
        break;
      case TraceKind::FailurePair:
        d.menus = {refused(end)};
        break;
      case TraceKind::ReadyTrace:
      case TraceKind::FailureTrace:
        d.menus = menus;
        d.menus.push_back(kind == TraceKind::ReadyTrace ? L.initials(end) : refused(end));
        break;
    }
    out.insert(std::move(d));
  }

  void walk(const Term& t, int remaining, std::vector<Action>& acts,
            std::vector<std::set<Action>>& menus) {
    require_determined(t);
    emit(acts, menus, t);
    if (remaining == 0) return;
    menus.push_back(kind == TraceKind::ReadyTrace ? L.initials(t) : refused(t));
    for (const Action& a : L.actions) {
      for (const Term& q : L.successors(t, a)) {
        acts.push_back(a);
        walk(q, remaining - 1, acts, menus);
        acts.pop_back();
      }
    }
    menus.pop_back();
  }
};

}  // namespace

std::set<Decorated> decorated_traces(const LtsFragment& L, const Term& p, TraceKind kind,
                                     int depth) {
  PathWalker w{L, kind};
  std::vector<Action> acts;
  std::vector<std::set<Action>> menus;
  w.walk(p, depth, acts, menus);
  return w.out;
}

bool decorated_included(const std::set<Decorated>& sub, const std::set<Decorated>& super,
                        TraceKind kind) {
  bool failure = kind == TraceKind::FailurePair || kind == TraceKind::FailureTrace;
  if (!failure)
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
  for (const Decorated& d : sub) {
    bool dominated = false;
    for (const Decorated& e : super) {
      if (e.acts != d.acts || e.menus.size() != d.menus.size()) continue;
      bool ok = true;
      for (size_t i = 0; i < d.menus.size(); ++i)
        if (!std::includes(e.menus[i].begin(), e.menus[i].end(), d.menus[i].begin(),
                           d.menus[i].end())) {
          ok = false;
          break;
        }
      if (ok) {
        dominated = true;
        break;
      }
    }
    if (!dominated) return false;
  }
  return true;
}

std::set<Decorated> expand_refusal_subsets(const Decorated& d, std::size_t limit) {
  std::set<Decorated> out{Decorated{d.acts, std::vector<std::set<Action>>(d.menus.size())}};
  for (size_t i = 0; i < d.menus.size(); ++i) {
    std::set<Decorated> next;
    for (const Decorated& partial : out)
      for (std::size_t mask = 0; mask < (1ull << d.menus[i].size()); ++mask) {
        Decorated e = partial;
        std::size_t bit = 0;
        for (const Action& a : d.menus[i]) {
          if (mask & (1ull << bit)) e.menus[i].insert(a);
          ++bit;
        }
        next.insert(std::move(e));
        if (next.size() > limit) throw Error("refusal subset expansion exceeds limit");
      }
    out = std::move(next);
  }
  return out;
}

namespace {

void require_two_valued(const LtsFragment& L) {
  if (!L.rel.unknown.empty() || !L.frontier.empty())
    throw Error("simulation preorders require a 2-valued, frontier-free fragment");
}

using Relation = std::set<std::pair<Term, Term>>;

Relation refine_simulation(const LtsFragment& L, Relation rel) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = rel.begin(); it != rel.end();) {
      const auto& [p, q] = *it;
      bool ok = true;
      for (const Action& a : L.actions) {
        for (const Term& p2 : L.successors(p, a)) {
          bool matched = false;
          for (const Term& q2 : L.successors(q, a))
            if (rel.count({p2, q2})) {
              matched = true;
              break;
            }
          if (!matched) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (!ok) {
        it = rel.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return rel;
}

}  // namespace

std::set<std::pair<Term, Term>> simulation_preorder(const LtsFragment& L, SimKind kind) {
  require_two_valued(L);
  Relation all;
  for (const Term& p : L.states)
    for (const Term& q : L.states) all.insert({p, q});

  switch (kind) {
    case SimKind::Simulation:
      return refine_simulation(L, std::move(all));
    case SimKind::Ready: {
      Relation start;
      for (const auto& [p, q] : all)
        if (std::includes(L.initials(p).begin(), L.initials(p).end(), L.initials(q).begin(),
                          L.initials(q).end()))
          start.insert({p, q});
      return refine_simulation(L, std::move(start));
    }
    case SimKind::Nested2: {
      Relation sim = refine_simulation(L, all);
      Relation start;
      for (const auto& [p, q] : all)
        if (sim.count({q, p})) start.insert({p, q});
      return refine_simulation(L, std::move(start));
    }
    case SimKind::Bisimulation: {
      Relation rel = all;
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto it = rel.begin(); it != rel.end();) {
          const auto& [p, q] = *it;
          bool ok = true;
          for (const Action& a : L.actions) {
            for (const Term& p2 : L.successors(p, a)) {
              bool matched = false;
              for (const Term& q2 : L.successors(q, a))
                if (rel.count({p2, q2})) matched = true;
              if (!matched) ok = false;
            }
            for (const Term& q2 : L.successors(q, a)) {
              bool matched = false;
              for (const Term& p2 : L.successors(p, a))
                if (rel.count({p2, q2})) matched = true;
              if (!matched) ok = false;
            }
            if (!ok) break;
          }
          if (!ok) {
            it = rel.erase(it);
            changed = true;
          } else {
            ++it;
          }
        }
      }
      return rel;
    }
  }
  return {};
}

std::optional<Preorder> preorder_from_name(const std::string& name) {
  if (name == "T") return Preorder::T;
  if (name == "CT") return Preorder::CT;
  if (name == "F") return Preorder::F;
  if (name == "R") return Preorder::R;
  if (name == "FT") return Preorder::FT;
  if (name == "RT") return Preorder::RT;
  if (name == "1S") return Preorder::S1;
  if (name == "2S") return Preorder::S2;
  if (name == "RS") return Preorder::RS;
  if (name == "B") return Preorder::B;
  return std::nullopt;
}

std::string preorder_name(Preorder n) {
  switch (n) {
    case Preorder::T: return "T";
    case Preorder::CT: return "CT";
    case Preorder::F: return "F";
    case Preorder::R: return "R";
    case Preorder::FT: return "FT";
    case Preorder::RT: return "RT";
    case Preorder::S1: return "1S";
    case Preorder::S2: return "2S";
    case Preorder::RS: return "RS";
    case Preorder::B: return "B";
  }
  return "?";
}

bool preorder_holds(const LtsFragment& L, const Term& p, const Term& q, Preorder n, int depth) {
  auto by_traces = [&](TraceKind kind) {
    return decorated_included(decorated_traces(L, p, kind, depth),
                              decorated_traces(L, q, kind, depth), kind);
  };
  switch (n) {
    case Preorder::T: return by_traces(TraceKind::Trace);
    case Preorder::CT: return by_traces(TraceKind::Trace) && by_traces(TraceKind::Completed);
    case Preorder::F: return by_traces(TraceKind::FailurePair);
    case Preorder::R: return by_traces(TraceKind::ReadyPair);
    case Preorder::FT: return by_traces(TraceKind::FailureTrace);
    case Preorder::RT: return by_traces(TraceKind::ReadyTrace);
    case Preorder::S1: return simulation_preorder(L, SimKind::Simulation).count({p, q}) != 0;
    case Preorder::S2: return simulation_preorder(L, SimKind::Nested2).count({p, q}) != 0;
    case Preorder::RS: return simulation_preorder(L, SimKind::Ready).count({p, q}) != 0;
    case Preorder::B: return simulation_preorder(L, SimKind::Bisimulation).count({p, q}) != 0;
  }
  return false;
}

// ---- modal route ----

namespace {

// Definitely refused actions, i.e. those with a negative literal.
std::set<Action> definite_refusals(const LtsFragment& L, const Term& t) {
  std::set<Action> out;
  for (const Action& a : L.actions)
    if (L.rel.negative.count({t, a})) out.insert(a);
  return out;
}

void require_unfolded(const LtsFragment& L, const Term& p, int depth) {
  std::set<Term> level{p};
  for (int d = 0; d <= depth; ++d) {
    std::set<Term> next;
    for (const Term& t : level) {
      if (L.is_frontier(t))
        throw Error("observation depth exceeds the explored fragment at " + t.str());
      if (d == depth) continue;
      for (const Action& a : L.actions)
        for (const Term& q : L.successors(t, a)) next.insert(q);
    }
    level = std::move(next);
  }
}

// Strongest observations of p along its paths, per decorated notion. Refusal
// conjuncts come from the definite negative literals, ready conjuncts from
// the definite transitions, so on complete fragments these are the maximal
// decorations and every satisfied observation of the language is entailed by
// one of them.
struct CriticalObservations {
  const LtsFragment& L;
  Preorder n;
  std::vector<Formula> out;

  std::vector<Formula> state_conjuncts(const Term& t) const {
    std::vector<Formula> conjs;
    bool refusals = n == Preorder::F || n == Preorder::R || n == Preorder::FT ||
                    n == Preorder::RT;
    bool readies = n == Preorder::R || n == Preorder::RT;
    if (refusals)
      for (const Action& a : definite_refusals(L, t)) conjs.push_back(Formula::cannot(a));
    if (readies)
      for (const Action& a : L.initials(t)) conjs.push_back(Formula::prefix(a, Formula::top()));
    return conjs;
  }

  Formula path_formula(const Term& end, const std::vector<std::pair<Term, Action>>& path,
                       bool completed_tail) const {
    Formula acc;
    if (completed_tail) {
      std::vector<Formula> conjs;
      for (const Action& a : L.actions) conjs.push_back(Formula::cannot(a));
      acc = Formula::conj(std::move(conjs));
    } else {
      acc = Formula::conj(state_conjuncts(end));
    }
    bool interleaved = n == Preorder::FT || n == Preorder::RT;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      Formula step = Formula::prefix(it->second, std::move(acc));
      if (interleaved) {
        std::vector<Formula> conjs = state_conjuncts(it->first);
        conjs.push_back(std::move(step));
        acc = Formula::conj(std::move(conjs));
      } else {
        acc = std::move(step);
      }
    }
    return normalize(acc);
  }

  void walk(const Term& t, int remaining, std::vector<std::pair<Term, Action>>& path) {
    out.push_back(path_formula(t, path, false));
    if (n == Preorder::CT && definite_refusals(L, t).size() == L.actions.size())
      out.push_back(path_formula(t, path, true));
    if (remaining == 0) return;
    for (const Action& a : L.actions)
      for (const Term& q : L.successors(t, a)) {
        path.emplace_back(t, a);
        walk(q, remaining - 1, path);
        path.pop_back();
      }
  }
};

// Satisfaction-set closure for the simulation-style observation languages.
struct SignatureClosure {
  const LtsFragment& L;
  std::vector<Term> states;
  std::map<Term, int> index;
  std::size_t cap = 20000;

  using Sig = std::set<int>;
  std::map<Sig, std::string> sigs;  // signature -> representative formula

  explicit SignatureClosure(const LtsFragment& L_) : L(L_) {
    for (const Term& t : L.states) {
      index[t] = static_cast<int>(states.size());
      states.push_back(t);
    }
  }

  Sig all_states() const {
    Sig s;
    for (size_t i = 0; i < states.size(); ++i) s.insert(static_cast<int>(i));
    return s;
  }

  Sig cannot_set(const Action& a) const {
    Sig s;
    for (size_t i = 0; i < states.size(); ++i)
      if (L.rel.negative.count({states[i], a})) s.insert(static_cast<int>(i));
    return s;
  }

  Sig pre(const Action& a, const Sig& s) const {
    Sig out;
    for (size_t i = 0; i < states.size(); ++i)
      for (const Term& q : L.successors(states[i], a))
        if (s.count(index.at(q))) {
          out.insert(static_cast<int>(i));
          break;
        }
    return out;
  }

  void add(Sig s, std::string formula) {
    if (sigs.size() > cap) throw Error("observation closure exceeds the signature cap");
    sigs.emplace(std::move(s), std::move(formula));
  }

  void close_under_intersection() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::pair<Sig, std::string>> snapshot(sigs.begin(), sigs.end());
      for (size_t i = 0; i < snapshot.size(); ++i)
        for (size_t j = i + 1; j < snapshot.size(); ++j) {
          Sig inter;
          std::set_intersection(snapshot[i].first.begin(), snapshot[i].first.end(),
                                snapshot[j].first.begin(), snapshot[j].first.end(),
                                std::inserter(inter, inter.begin()));
          if (!sigs.count(inter)) {
            add(inter, snapshot[i].second + " & " + snapshot[j].second);
            changed = true;
          }
        }
    }
  }

  void build(Preorder n, int depth) {
    add(all_states(), "tt");
    if (n == Preorder::RS)
      for (const Action& a : L.actions) add(cannot_set(a), "no " + a);
    if (n == Preorder::S2) {
      SignatureClosure inner(L);
      inner.build(Preorder::S1, depth);
      Sig all = all_states();
      for (const auto& [s, f] : inner.sigs) {
        Sig comp;
        std::set_difference(all.begin(), all.end(), s.begin(), s.end(),
                            std::inserter(comp, comp.begin()));
        add(comp, "not (" + f + ")");
      }
    }
    close_under_intersection();
    for (int d = 0; d < depth; ++d) {
      std::vector<std::pair<Sig, std::string>> snapshot(sigs.begin(), sigs.end());
      for (const Action& a : L.actions)
        for (const auto& [s, f] : snapshot) {
          Sig ps = pre(a, s);
          if (!sigs.count(ps)) add(ps, "<" + a + "> (" + f + ")");
        }
      if (n == Preorder::B) {
        Sig all = all_states();
        std::vector<std::pair<Sig, std::string>> snap2(sigs.begin(), sigs.end());
        for (const auto& [s, f] : snap2) {
          Sig comp;
          std::set_difference(all.begin(), all.end(), s.begin(), s.end(),
                              std::inserter(comp, comp.begin()));
          if (!sigs.count(comp)) add(comp, "not (" + f + ")");
        }
      }
      close_under_intersection();
    }
  }
};

}  // namespace

ModalResult preorder_modal(const LtsFragment& L, const Term& p, const Term& q, Preorder n,
                           int depth) {
  require_unfolded(L, p, depth);
  require_unfolded(L, q, depth);
  ModalResult res;

  bool decorated = n == Preorder::T || n == Preorder::CT || n == Preorder::F ||
                   n == Preorder::R || n == Preorder::FT || n == Preorder::RT;
  if (decorated) {
    CriticalObservations crit{L, n};
    std::vector<std::pair<Term, Action>> path;
    crit.walk(p, depth, path);
    for (const Formula& f : crit.out) {
      if (satisfies(L, q, f) != Tri::True) {
        res.holds = false;
        res.witness = print_formula(f);
        return res;
      }
    }
    res.holds = true;
    return res;
  }

  if ((n == Preorder::B || n == Preorder::S2) && (!L.rel.unknown.empty() || !L.frontier.empty()))
    throw Error("negation-based observations require a 2-valued, frontier-free fragment");

  SignatureClosure closure(L);
  closure.build(n, depth);
  int pi = closure.index.at(p), qi = closure.index.at(q);
  for (const auto& [s, f] : closure.sigs) {
    if (s.count(pi) && !s.count(qi)) {
      res.holds = false;
      res.witness = f;
      return res;
    }
  }
  res.holds = true;
  return res;
}

}  // namespace sos
