#include "sos/decompose.hpp"

#include <algorithm>

namespace sos {

namespace {

Tss closure_of(const Tss& tss, const std::vector<Term>* universe, const TransformOptions& opts) {
  return plus_pipeline(tss, universe, opts).tss;
}

// A conjunction which demands an action and forbids it at the same level can
// never be satisfied; such entries are dropped.
bool manifestly_contradictory(const Formula& f) {
  if (f.kind() == Formula::Kind::Conj) {
    std::set<Action> can, cannot;
    for (const Formula& c : f.children()) {
      if (c.kind() == Formula::Kind::Prefix) can.insert(c.action());
      if (c.kind() == Formula::Kind::Cannot) cannot.insert(c.action());
      if (manifestly_contradictory(c)) return true;
    }
    for (const Action& a : can)
      if (cannot.count(a)) return true;
    return false;
  }
  for (const Formula& c : f.children())
    if (manifestly_contradictory(c)) return true;
  return false;
}

}  // namespace

Decomposer::Decomposer(const Tss& tss, const std::vector<Term>* universe,
                       const TransformOptions& opts)
    : deriver_(closure_of(tss, universe, opts)) {}

std::vector<Decomposition> Decomposer::inverse(const Term& t, const Formula& f) {
  Formula nf = normalize(f);
  std::vector<Decomposition> raw;
  std::set<std::string> tvars = vars(t);

  auto conj_of = [](std::vector<Formula> fs) { return normalize(Formula::conj(std::move(fs))); };

  switch (nf.kind()) {
    case Formula::Kind::Top:
      raw.push_back({});
      break;
    case Formula::Kind::Cannot: {
      for (const Ruloid& r : deriver_.derive(t, nf.action(), false)) {
        Decomposition d;
        for (const std::string& x : tvars) {
          std::vector<Formula> conjs;
          for (const Literal& h : r.rule.premises) {
            if (h.lhs.head() != x) continue;
            if (h.positive())
              conjs.push_back(Formula::prefix(h.action, Formula::top()));
            else
              conjs.push_back(Formula::cannot(h.action));
          }
          d.psi[x] = conj_of(std::move(conjs));
        }
        raw.push_back(std::move(d));
      }
      break;
    }
    case Formula::Kind::Prefix: {
      for (const Ruloid& r : deriver_.derive(t, nf.action(), true)) {
        const Term& target = r.rule.conclusion.rhs.value();
        for (const Decomposition& chi : inverse(target, nf.child())) {
          Decomposition d;
          for (const std::string& x : tvars) {
            std::vector<Formula> conjs{chi.at(x)};
            for (const Literal& h : r.rule.premises) {
              if (h.lhs.head() != x) continue;
              if (h.positive())
                conjs.push_back(Formula::prefix(h.action, chi.at(h.rhs->head())));
              else
                conjs.push_back(Formula::cannot(h.action));
            }
            d.psi[x] = conj_of(std::move(conjs));
          }
          raw.push_back(std::move(d));
        }
      }
      break;
    }
    case Formula::Kind::Conj: {
      std::vector<Decomposition> acc{{}};
      for (const Formula& c : nf.children()) {
        std::vector<Decomposition> parts = inverse(t, c);
        std::vector<Decomposition> next;
        for (const Decomposition& base : acc)
          for (const Decomposition& part : parts) {
            Decomposition d;
            for (const std::string& x : tvars)
              d.psi[x] = conj_of({base.at(x), part.at(x)});
            next.push_back(std::move(d));
          }
        acc = std::move(next);
      }
      raw = std::move(acc);
      break;
    }
    case Formula::Kind::Neg:
      throw Error("decomposition is undefined for negation");
  }

  std::set<Decomposition> dedup;
  for (Decomposition& d : raw) {
    for (auto it = d.psi.begin(); it != d.psi.end();) {
      if (it->second.kind() == Formula::Kind::Top)
        it = d.psi.erase(it);
      else
        ++it;
    }
    bool contradictory = false;
    for (const auto& [x, g] : d.psi)
      if (manifestly_contradictory(g)) contradictory = true;
    if (!contradictory) dedup.insert(std::move(d));
  }
  return {dedup.begin(), dedup.end()};
}

InverseCheckResult check_inverse_lemma(const Tss& tss, const Term& t, const Formula& f,
                                       const std::vector<Term>& universe, int depth) {
  InverseCheckResult res;
  Decomposer dec(tss, &universe);
  std::vector<Decomposition> psis = dec.inverse(t, f);

  std::vector<std::string> tvars;
  for (const std::string& v : vars(t)) tvars.push_back(v);

  std::vector<Substitution> sigmas{{}};
  for (const std::string& v : tvars) {
    std::vector<Substitution> next;
    for (const Substitution& s : sigmas)
      for (const Term& u : universe) {
        Substitution s2 = s;
        s2.mapping[v] = u;
        next.push_back(std::move(s2));
      }
    sigmas = std::move(next);
  }

  std::vector<Term> roots = universe;
  for (const Substitution& s : sigmas) roots.push_back(s(t));
  GroundOptions opts;
  opts.premise_directed = true;  // sound for well-founded verdicts
  LtsFragment L = build_lts(tss, roots, depth, Notion::WellSupported, opts);

  for (const Substitution& s : sigmas) {
    Tri lhs = satisfies(L, s(t), normalize(f));
    bool any_unknown = lhs == Tri::Unknown;
    bool rhs = false;
    for (const Decomposition& psi : psis) {
      bool all = true;
      for (const std::string& x : tvars) {
        Tri v = satisfies(L, s.mapping.at(x), psi.at(x));
        if (v == Tri::Unknown) any_unknown = true;
        if (v != Tri::True) {
          all = false;
          break;
        }
      }
      if (all) {
        rhs = true;
        break;
      }
    }
    ++res.substitutions_checked;
    if (lhs == Tri::True ? rhs : (lhs == Tri::False && !rhs)) continue;
    if (any_unknown) {
      ++res.inconclusive;
      if (res.status == InverseCheckResult::Status::Agree)
        res.status = InverseCheckResult::Status::Inconclusive;
      continue;
    }
    res.status = InverseCheckResult::Status::Mismatch;
    res.detail = "mismatch at sigma(t) = " + s(t).str() + ": direct satisfaction is " +
                 (lhs == Tri::True ? "true" : "false") + " but the decomposition side is " +
                 (rhs ? "true" : "false");
    return res;
  }
  return res;
}

PreservationReport preservation_report(Decomposer& dec, Format fmt, const Term& t,
                                       const Formula& f, const std::set<Action>& actions) {
  PreservationReport rep;
  switch (fmt) {
    case Format::ReadyTrace: rep.tag = {SublanguageTag::Notion::RT, 2, true}; break;
    case Format::Readiness: rep.tag = {SublanguageTag::Notion::R, 2, true}; break;
    case Format::FailureTrace: rep.tag = {SublanguageTag::Notion::FT, 2, true}; break;
    case Format::PartialTrace: rep.tag = {SublanguageTag::Notion::T, 2, true}; break;
    default: rep.tag = {SublanguageTag::Notion::RS, 2, true}; break;
  }
  for (const Decomposition& psi : dec.inverse(t, f)) {
    for (const std::string& x : vars(t)) {
      PreservationEntry e;
      e.var = x;
      e.psi = psi.at(x);
      e.in_language = in_sublanguage(e.psi, rep.tag, actions);
      if (!e.in_language) rep.all_preserved = false;
      rep.entries.push_back(std::move(e));
    }
  }
  return rep;
}

namespace {

Term plug(const Term& context, const Term& filler) {
  if (context.is_var()) return filler;
  std::vector<Term> args;
  for (const Term& a : context.args()) args.push_back(plug(a, filler));
  return Term::app(context.head(), std::move(args));
}

}  // namespace

PrecongruenceResult precongruence_test(const Tss& tss, Preorder n,
                                       const std::vector<Term>& contexts,
                                       const std::vector<std::pair<Term, Term>>& pairs,
                                       int depth) {
  PrecongruenceResult res;
  GroundOptions opts;
  opts.premise_directed = true;  // sound for well-founded verdicts
  for (const auto& [p, q] : pairs) {
    for (const Term& ctx : contexts) {
      Term cp = plug(ctx, p), cq = plug(ctx, q);
      LtsFragment L = build_lts(tss, {p, q, cp, cq}, depth + 8, Notion::WellSupported, opts);
      if (!preorder_holds(L, p, q, n, depth)) continue;
      ++res.pairs_checked;
      if (!preorder_holds(L, cp, cq, n, depth)) {
        res.pass = false;
        res.counterexample = p.str() + " below " + q.str() + " under " + preorder_name(n) +
                             " but " + cp.str() + " is not below " + cq.str() +
                             " (context " + ctx.str() + ")";
        return res;
      }
    }
  }
  return res;
}

std::vector<Term> enumerate_closed_terms(const Tss& tss, int max_height, std::size_t cap) {
  std::vector<Term> all;
  for (const FunctionDecl& f : tss.signature.functions)
    if (f.arity == 0) all.push_back(Term::app(f.name));
  for (int h = 1; h <= max_height && all.size() < cap; ++h) {
    std::vector<Term> snapshot = all;
    for (const FunctionDecl& f : tss.signature.functions) {
      if (f.arity == 0 || all.size() >= cap) continue;
      std::vector<size_t> odo(f.arity, 0);
      for (;;) {
        std::vector<Term> args;
        int max_arg_height = -1;
        for (size_t i : odo) {
          args.push_back(snapshot[i]);
          max_arg_height = std::max(max_arg_height, snapshot[i].height());
        }
        if (max_arg_height == h - 1) {
          all.push_back(Term::app(f.name, std::move(args)));
          if (all.size() >= cap) break;
        }
        int pos = f.arity - 1;
        while (pos >= 0 && ++odo[pos] == snapshot.size()) odo[pos--] = 0;
        if (pos < 0) break;
      }
    }
  }
  return all;
}

std::vector<Term> default_contexts(const Tss& tss) {
  std::vector<Term> out{Term::var("x")};
  const FunctionDecl* constant = nullptr;
  for (const FunctionDecl& f : tss.signature.functions)
    if (f.arity == 0) {
      constant = &f;
      break;
    }
  for (const FunctionDecl& f : tss.signature.functions) {
    if (f.arity == 0) continue;
    for (int hole = 0; hole < f.arity; ++hole) {
      std::vector<Term> args;
      bool ok = true;
      for (int i = 0; i < f.arity; ++i) {
        if (i == hole)
          args.push_back(Term::var("x"));
        else if (constant)
          args.push_back(Term::app(constant->name));
        else
          ok = false;
      }
      if (ok) out.push_back(Term::app(f.name, std::move(args)));
    }
  }
  return out;
}

FuzzReport fuzz_precongruence(const Tss& tss, Preorder n, int depth, unsigned long long seed,
                              int max_pairs, bool equivalence) {
  FuzzReport rep;
  GroundOptions opts;
  opts.premise_directed = true;  // sound for well-founded verdicts
  std::vector<Term> terms = enumerate_closed_terms(tss, 2, 120);
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Term, Term>> candidates;
  for (const Term& p : terms)
    for (const Term& q : terms) candidates.emplace_back(p, q);
  std::shuffle(candidates.begin(), candidates.end(), rng);

  std::vector<Term> contexts = default_contexts(tss);
  int attempts = 0, max_attempts = std::max(1000, 25 * max_pairs);
  for (const auto& [p, q] : candidates) {
    if (rep.pairs_tested >= max_pairs || ++attempts > max_attempts) break;
    LtsFragment base = build_lts(tss, {p, q}, depth + 8, Notion::WellSupported, opts);
    bool related = preorder_holds(base, p, q, n, depth) &&
                   (!equivalence || preorder_holds(base, q, p, n, depth));
    if (!related) continue;
    ++rep.pairs_tested;
    for (const Term& ctx : contexts) {
      Term cp = plug(ctx, p), cq = plug(ctx, q);
      LtsFragment L = build_lts(tss, {p, q, cp, cq}, depth + 8, Notion::WellSupported, opts);
      ++rep.checks;
      bool ok = preorder_holds(L, cp, cq, n, depth) &&
                (!equivalence || preorder_holds(L, cq, cp, n, depth));
      if (!ok) {
        rep.pass = false;
        rep.counterexample = p.str() + (equivalence ? " equivalent to " : " below ") + q.str() +
                             " under " + preorder_name(n) + " but the context " + ctx.str() +
                             " separates them";
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace sos
