#include "sos/transform.hpp"

#include <algorithm>

#include "sos/format.hpp"

namespace sos {

Tss remove_ntyxt(const Tss& tss) {
  Tss out = tss;
  out.rules.clear();
  FreshVars fresh;
  for (const Rule& r : tss.rules) {
    RuleClassification c = classify_rule(r);
    if (c.ntyft) {
      out.rules.push_back(r);
      continue;
    }
    if (!c.ntyxt) throw Error("rule `" + r.name + "` is neither ntyxt nor ntyft");
    const std::string& x = r.source().head();
    for (const FunctionDecl& f : tss.signature.functions) {
      std::vector<Term> args;
      Substitution s;
      for (int i = 0; i < f.arity; ++i) args.push_back(Term::var(fresh.next()));
      s.mapping[x] = Term::app(f.name, args);
      Rule inst = s(r);
      inst.name = r.name + "@" + f.name;
      inst.origin = "instantiate(" + r.name + ";" + f.name + ")";
      out.rules.push_back(std::move(inst));
    }
  }
  return out;
}

Tss ground_free_vars(const Tss& tss, const std::vector<Term>& universe) {
  Tss out = tss;
  out.rules.clear();
  for (const Rule& r : tss.rules) {
    std::set<std::string> fv = free_vars(r);
    if (fv.empty()) {
      out.rules.push_back(r);
      continue;
    }
    if (universe.empty()) throw Error("rule `" + r.name + "` has free variables but the universe is empty");
    std::vector<Substitution> subs{{}};
    for (const std::string& v : fv) {
      std::vector<Substitution> next;
      for (const Substitution& s : subs)
        for (const Term& t : universe) {
          if (!t.is_closed()) throw Error("grounding universe contains an open term: " + t.str());
          Substitution s2 = s;
          s2.mapping[v] = t;
          next.push_back(std::move(s2));
        }
      subs = std::move(next);
    }
    int i = 0;
    for (const Substitution& s : subs) {
      Rule inst = s(r);
      inst.name = r.name + "@g" + std::to_string(i++);
      inst.origin = "instantiate(" + r.name + ")";
      out.rules.push_back(std::move(inst));
    }
  }
  return out;
}

namespace {

// Decent rules with conclusion `u -c-> _` whose positive premises have
// variable left-hand sides, derived by composing through non-variable premise
// left-hand sides. `u` is an open term; premise left-hand sides of the
// results are variables of u and negative premises are kept as instantiated.
struct XynftDeriver {
  const Tss& tss;
  int fuel;
  bool exhausted = false;
  FreshVars fresh;

  struct Derived {
    std::vector<Literal> premises;
    Term target = Term::var("_pending");
    std::vector<std::string> origins;
    std::vector<std::pair<std::string, Term>> bindings;
  };

  std::vector<Derived> derive(const Term& u, const Action& c, int budget) {
    if (u.is_var()) {
      Term y = Term::var(fresh.next());
      Literal prem{u, c, y};
      return {{{prem}, y, {}}};
    }
    if (budget <= 0) {
      exhausted = true;
      return {};
    }
    std::vector<Derived> out;
    for (const Rule& r : tss.rules) {
      if (r.conclusion.action != c || !r.conclusion.positive()) continue;
      if (r.source().is_var() || r.source().head() != u.head()) continue;
      // match source f(x1..xn) to u = f(u1..un)
      Substitution rho0;
      for (size_t i = 0; i < r.source().args().size(); ++i)
        rho0.mapping[r.source().args()[i].head()] = u.args()[i];

      std::vector<Derived> partials(1);
      partials[0].origins.push_back(r.name);
      bool dead = false;
      Substitution rho1 = rho0;
      for (const Literal& p : r.premises) {
        Term lhs = rho0(p.lhs);
        if (!p.positive()) {
          for (Derived& d : partials) d.premises.push_back({lhs, p.action, std::nullopt});
          continue;
        }
        if (lhs.is_var()) {
          Term y = Term::var(fresh.next());
          rho1.mapping[p.rhs->head()] = y;
          for (Derived& d : partials) d.premises.push_back({lhs, p.action, y});
          continue;
        }
        // compose through a non-variable positive premise left-hand side
        std::vector<Derived> subs = derive(lhs, p.action, budget - 1);
        if (subs.empty()) {
          dead = true;
          break;
        }
        std::vector<Derived> next;
        for (const Derived& d : partials)
          for (const Derived& s : subs) {
            Derived d2 = d;
            d2.premises.insert(d2.premises.end(), s.premises.begin(), s.premises.end());
            d2.origins.insert(d2.origins.end(), s.origins.begin(), s.origins.end());
            // Record the target binding for this premise's right-hand side in
            // a per-combination substitution: stash it in the premises for
            // now and resolve below via a dedicated map.
            d2.bindings.push_back({p.rhs->head(), s.target});
            next.push_back(std::move(d2));
          }
        partials = std::move(next);
      }
      if (dead) continue;
      for (Derived& d : partials) {
        Substitution bind = rho1;
        for (auto& [v, t] : d.bindings) bind.mapping[v] = t;
        d.target = bind(r.conclusion.rhs.value());
        out.push_back(std::move(d));
      }
    }
    return out;
  }
};

}  // namespace

Tss to_decent_xynft(const Tss& tss, int fuel, bool* fuel_exhausted) {
  for (const Rule& r : tss.rules) {
    RuleClassification c = classify_rule(r);
    if (!c.ntyft || !c.decent)
      throw Error("xynft reduction requires a decent ntyft TSS; rule `" + r.name + "` violates this");
    if (!r.conclusion.positive())
      throw Error("xynft reduction requires a standard TSS; rule `" + r.name + "` has a negative conclusion");
  }
  XynftDeriver der{tss, fuel};
  std::vector<Rule> rules;
  for (const Rule& r : tss.rules) {
    if (classify_rule(r).xynft) {
      rules.push_back(r);
      continue;
    }
    int idx = 0;
    for (auto& d : der.derive(r.source(), r.conclusion.action, fuel)) {
      Rule nr(r.name + "'" + std::to_string(idx++), d.premises,
              Literal{r.source(), r.conclusion.action, d.target});
      std::string origin = "compose(";
      for (size_t i = 0; i < d.origins.size(); ++i) origin += (i ? "," : "") + d.origins[i];
      nr.origin = origin + ")";
      rules.push_back(std::move(nr));
    }
  }
  if (fuel_exhausted) *fuel_exhausted = der.exhausted;
  Tss out = tss;
  out.rules = dedup_alpha(rules);
  return out;
}

Tss uniformize(const Tss& tss) {
  Tss out = tss;
  out.rules.clear();
  for (const Rule& r : tss.rules) {
    RuleClassification c = classify_rule(r);
    if (!c.ntyft || !c.decent) throw Error("uniformization requires a decent ntyft TSS; rule `" + r.name + "` violates this");
    Substitution s;
    for (size_t i = 0; i < r.source().args().size(); ++i)
      s.mapping[r.source().args()[i].head()] = Term::var("_u" + std::to_string(i));
    // Other variables keep their names; decent rules only mention source
    // variables and premise targets, and the latter never collide with _u*.
    out.rules.push_back(s(r));
  }
  return out;
}

Tss rplus(const Tss& tss, const TransformOptions& opts) {
  if (opts.check_preconditions) {
    if (!tss.standard()) throw Error("the closure requires a standard TSS");
    std::map<std::string, Term> sources;
    for (const Rule& r : tss.rules) {
      RuleClassification c = classify_rule(r);
      if (!c.xynft || !c.decent) {
        std::string why = !c.no_free_vars ? " has free variables"
                          : !c.no_lookahead ? " has lookahead"
                                            : " is not an xynft rule";
        throw Error("the closure requires a decent uniform xynft TSS; rule `" + r.name + "`" + why);
      }
      auto [it, fresh] = sources.emplace(r.source().head(), r.source());
      if (!fresh && !(it->second == r.source()))
        throw Error("the closure requires uniform sources; symbol `" + r.source().head() +
                    "` has sources " + it->second.str() + " and " + r.source().str());
    }
  }

  FreshVars fresh;
  std::vector<Rule> added;
  for (const FunctionDecl& f : tss.signature.functions) {
    // Canonical source for this symbol: from a rule if present, else _u*.
    Term source = Term::app(f.name);
    bool have = false;
    for (const Rule& r : tss.rules)
      if (!r.source().is_var() && r.source().head() == f.name) {
        source = r.source();
        have = true;
        break;
      }
    if (!have && f.arity > 0) {
      std::vector<Term> args;
      for (int i = 0; i < f.arity; ++i) args.push_back(Term::var("_u" + std::to_string(i)));
      source = Term::app(f.name, args);
    }

    for (const Action& a : tss.actions) {
      std::vector<const Rule*> matching;
      for (const Rule& r : tss.rules)
        if (!r.source().is_var() && r.source().head() == f.name && r.conclusion.positive() &&
            r.conclusion.action == a)
          matching.push_back(&r);

      // Every pick takes one premise from every matching rule; a rule without
      // premises admits no pick, so nothing is added for this (f, a).
      bool empty_pick_product = false;
      std::size_t product = 1;
      for (const Rule* r : matching) {
        if (r->premises.empty()) {
          empty_pick_product = true;
          break;
        }
        product *= r->premises.size();
        if (product > opts.max_pick_product)
          throw Error("premise choice explosion for (" + f.name + "," + a + "): more than " +
                      std::to_string(opts.max_pick_product) + " picks");
      }
      if (empty_pick_product) continue;

      std::vector<std::set<Literal>> picks{{}};
      for (const Rule* r : matching) {
        std::vector<std::set<Literal>> next;
        for (const std::set<Literal>& h : picks)
          for (const Literal& p : r->premises) {
            std::set<Literal> h2 = h;
            h2.insert(p);
            next.push_back(std::move(h2));
          }
        picks = std::move(next);
      }

      std::string origin = "pick(";
      for (size_t i = 0; i < matching.size(); ++i)
        origin += (i ? "," : "") + matching[i]->name;
      origin += ")/deny";

      int idx = 0;
      for (const std::set<Literal>& h : picks) {
        std::vector<Literal> denied;
        for (const Literal& p : h) {
          if (p.positive())
            denied.push_back({p.lhs, p.action, std::nullopt});
          else
            denied.push_back({p.lhs, p.action, Term::var(fresh.next())});
        }
        Rule nr("no-" + f.name + "-" + a + "-" + std::to_string(idx++), std::move(denied),
                Literal{source, a, std::nullopt});
        nr.origin = origin;
        added.push_back(std::move(nr));
      }
    }
  }

  Tss out = tss;
  for (Rule& r : dedup_alpha(added)) out.rules.push_back(std::move(r));
  out.rules = dedup_alpha(out.rules);
  return out;
}

PipelineResult plus_pipeline(const Tss& tss, const std::vector<Term>* universe,
                             const TransformOptions& opts) {
  if (opts.check_preconditions) {
    if (!tss.standard()) throw Error("the pipeline requires a standard TSS");
    FormatReport rs = check_format(tss, Format::ReadySimulation);
    if (!rs.verdict) {
      std::string why = "the pipeline requires ready simulation format";
      for (const Violation& v : rs.violations) {
        why += "; rule `" + v.rule + "`: " + v.clause;
        break;
      }
      throw Error(why);
    }
  }

  PipelineResult res;
  PipelineTrace& trace = res.trace;
  Tss cur = tss;
  auto record = [&](const std::string& stage, const Tss& in, const Tss& out, std::string note = "") {
    trace.stages.push_back({stage, digest(in), digest(out), static_cast<int>(in.rules.size()),
                            static_cast<int>(out.rules.size()), std::move(note)});
  };

  Tss step = remove_ntyxt(cur);
  record("ntyxt", cur, step);
  cur = std::move(step);

  bool any_free = false;
  for (const Rule& r : cur.rules)
    if (!free_vars(r).empty()) any_free = true;
  if (any_free) {
    if (!universe || universe->empty())
      throw Error("the pipeline requires a grounding universe: rules have free variables");
    step = ground_free_vars(cur, *universe);
    trace.universe_relative = true;
    record("ground", cur, step, "universe-relative");
    cur = std::move(step);
  } else {
    record("ground", cur, cur, "identity: no free variables");
  }

  bool exhausted = false;
  step = to_decent_xynft(cur, opts.fuel, &exhausted);
  trace.fuel_exhausted = exhausted;
  record("xynft", cur, step, exhausted ? "fuel exhausted" : "");
  cur = std::move(step);

  step = uniformize(cur);
  record("uniform", cur, step);
  cur = std::move(step);

  step = rplus(cur, opts);
  record("rplus", cur, step);
  res.tss = std::move(step);
  return res;
}

}  // namespace sos
