#include "sos/ruloid.hpp"

#include <algorithm>

#include "sos/format.hpp"

namespace sos {

namespace {

void canonical_naming(const Term& t, std::map<std::string, std::string>& naming) {
  if (t.is_var()) {
    if (!naming.count(t.head()))
      naming.emplace(t.head(), "v" + std::to_string(naming.size()));
    return;
  }
  for (const Term& a : t.args()) canonical_naming(a, naming);
}

Term rename(const Term& t, const std::map<std::string, std::string>& naming) {
  if (t.is_var()) return Term::var(naming.at(t.head()));
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(rename(a, naming));
  return Term::app(t.head(), std::move(args));
}

}  // namespace

RuloidDeriver::RuloidDeriver(Tss pplus) : pplus_(std::move(pplus)) {
  for (const Rule& r : pplus_.rules) {
    if (r.source().is_var())
      throw Error("ruloid derivation requires function-headed sources; rule `" + r.name + "`");
    RuleClassification c = classify_rule(r);
    if (!c.decent) throw Error("ruloid derivation requires decent rules; rule `" + r.name + "`");
    for (const Literal& p : r.premises)
      if (!p.lhs.is_var())
        throw Error("ruloid derivation requires variable premise sources; rule `" + r.name + "`");
    std::set<std::string> seen;
    for (const Term& a : r.source().args())
      if (!a.is_var() || !seen.insert(a.head()).second)
        throw Error("ruloid derivation requires distinct variable source arguments; rule `" +
                    r.name + "`");
  }
}

std::vector<Ruloid> RuloidDeriver::derive(const Term& t, const Action& a, bool positive) {
  std::map<std::string, std::string> naming;
  canonical_naming(t, naming);
  Term canon = rename(t, naming);
  std::string key = canon.str() + "|" + a + "|" + (positive ? "+" : "-");

  auto it = memo_.find(key);
  if (it == memo_.end()) {
    std::vector<Ruloid> derived = derive_uncached(canon, a, positive);
    it = memo_.emplace(key, std::move(derived)).first;
  }

  // Rename canonical source variables back to the query's and freshen the rest.
  std::map<std::string, std::string> back;
  for (const auto& [orig, canon_name] : naming) back[canon_name] = orig;
  std::vector<Ruloid> out;
  for (const Ruloid& r : it->second) {
    Substitution s;
    for (const std::string& v : vars(r.rule)) {
      auto b = back.find(v);
      s.mapping[v] = Term::var(b != back.end() ? b->second : fresh_.next());
    }
    Ruloid ren = r;
    ren.rule = s(r.rule);
    ren.source_term = t;
    out.push_back(std::move(ren));
  }
  return out;
}

std::vector<Ruloid> RuloidDeriver::derive_uncached(const Term& t, const Action& a, bool positive) {
  std::vector<Ruloid> out;
  if (t.is_var()) {
    Ruloid r;
    r.source_term = t;
    r.positive = positive;
    r.provenance = "default";
    if (positive) {
      Term y = Term::var(fresh_.next());
      r.rule = Rule("ruloid", {Literal{t, a, y}}, Literal{t, a, y});
    } else {
      r.rule = Rule("ruloid", {Literal{t, a, std::nullopt}}, Literal{t, a, std::nullopt});
    }
    out.push_back(std::move(r));
    return out;
  }

  for (const Rule& rule : pplus_.rules) {
    if (rule.conclusion.positive() != positive || rule.conclusion.action != a) continue;
    if (rule.source().head() != t.head()) continue;
    Substitution rho0;
    for (size_t i = 0; i < rule.source().args().size(); ++i)
      rho0.mapping[rule.source().args()[i].head()] = t.args()[i];

    struct Partial {
      std::vector<Literal> premises;
      Substitution binder;  // premise targets of the rule -> composed targets
      std::string provenance;
    };
    std::vector<Partial> partials{{{}, {}, rule.name}};
    bool dead = false;
    for (const Literal& prem : rule.premises) {
      Term sub_source = rho0(prem.lhs);
      std::vector<Ruloid> subs = derive(sub_source, prem.action, prem.positive());
      if (subs.empty()) {
        dead = true;
        break;
      }
      std::vector<Partial> next;
      for (const Partial& part : partials)
        for (const Ruloid& sub : subs) {
          Partial p2 = part;
          for (const Literal& h : sub.rule.premises) p2.premises.push_back(h);
          if (prem.positive())
            p2.binder.mapping[prem.rhs->head()] = sub.rule.conclusion.rhs.value();
          if (!sub.provenance.empty() && sub.provenance != "default")
            p2.provenance += "," + sub.provenance;
          next.push_back(std::move(p2));
        }
      partials = std::move(next);
    }
    if (dead) continue;
    for (Partial& part : partials) {
      Ruloid r;
      r.source_term = t;
      r.positive = positive;
      r.provenance = part.provenance;
      Literal concl{t, a, std::nullopt};
      if (positive) {
        Substitution bind = part.binder;
        for (const auto& [v, term] : rho0.mapping) bind.mapping.emplace(v, term);
        concl.rhs = bind(rule.conclusion.rhs.value());
      }
      r.rule = Rule("ruloid", std::move(part.premises), std::move(concl));
      out.push_back(std::move(r));
    }
  }

  // Deduplicate up to alpha.
  std::vector<Ruloid> dedup;
  std::set<std::string> seen;
  for (Ruloid& r : out)
    if (seen.insert(alpha_key(r.rule)).second) dedup.push_back(std::move(r));
  return dedup;
}

}  // namespace sos
