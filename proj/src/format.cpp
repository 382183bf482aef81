#include "sos/format.hpp"

#include <algorithm>
#include <functional>

namespace sos {

bool Lambda::subset_of(const Lambda& o) const {
  return std::includes(o.liquid.begin(), o.liquid.end(), liquid.begin(), liquid.end());
}

std::string Lambda::str() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [f, i] : liquid) {
    if (!first) s += ", ";
    first = false;
    s += "(" + f + "," + std::to_string(i + 1) + ")";
  }
  return s + "}";
}

std::vector<std::pair<std::string, int>> argument_positions(const Signature& sig) {
  std::vector<std::pair<std::string, int>> out;
  for (const FunctionDecl& f : sig.functions)
    for (int i = 0; i < f.arity; ++i) out.emplace_back(f.name, i);
  return out;
}

Lambda universal_lambda(const Signature& sig) {
  Lambda L;
  for (const auto& p : argument_positions(sig)) L.liquid.insert(p);
  return L;
}

Lambda declared_lambda(const Signature& sig) {
  Lambda L;
  for (const FunctionDecl& f : sig.functions)
    if (f.lambda_hint)
      for (int i = 0; i < f.arity; ++i)
        if ((*f.lambda_hint)[i]) L.liquid.insert({f.name, i});
  return L;
}

std::set<std::string> free_vars(const Rule& r) {
  std::set<std::string> bound = vars(r.source());
  for (const std::string& v : rhs_vars(r.premises)) bound.insert(v);
  std::set<std::string> out;
  for (const std::string& v : vars(r)) {
    if (!bound.count(v)) out.insert(v);
  }
  return out;
}

RuleClassification classify_rule(const Rule& r) {
  RuleClassification c;
  c.standard_conclusion = r.conclusion.positive();

  // ntytt: right-hand sides of positive premises are distinct variables that
  // do not occur in the source.
  std::set<std::string> source_vars = vars(r.source());
  std::set<std::string> rhs_seen;
  bool ntytt = true;
  for (const Literal& p : r.premises) {
    if (!p.positive()) continue;
    if (!p.rhs->is_var()) {
      ntytt = false;
      break;
    }
    const std::string& y = p.rhs->head();
    if (source_vars.count(y) || !rhs_seen.insert(y).second) {
      ntytt = false;
      break;
    }
  }
  c.ntytt = ntytt;

  bool src_var = r.source().is_var();
  bool src_f = false;
  if (!src_var) {
    src_f = true;
    std::set<std::string> seen;
    for (const Term& a : r.source().args()) {
      if (!a.is_var() || !seen.insert(a.head()).second) {
        src_f = false;
        break;
      }
    }
  }
  c.ntyxt = ntytt && src_var;
  c.ntyft = ntytt && src_f;

  bool all_lhs_var = true, pos_lhs_var = true;
  for (const Literal& p : r.premises) {
    if (!p.lhs.is_var()) {
      all_lhs_var = false;
      if (p.positive()) pos_lhs_var = false;
    }
  }
  c.nxytt = c.ntytt && all_lhs_var;
  c.nxyft = c.ntyft && all_lhs_var;
  c.xyntt = c.ntytt && pos_lhs_var;
  c.xynft = c.ntyft && pos_lhs_var;

  std::set<std::string> rhs = rhs_vars(r.premises);
  std::set<std::string> lv = lvar(r.premises);
  c.no_lookahead = true;
  for (const std::string& y : rhs)
    if (lv.count(y)) c.no_lookahead = false;
  c.no_free_vars = free_vars(r).empty();
  c.decent = c.no_lookahead && c.no_free_vars;
  return c;
}

bool liquid_occurrence(const Term& t, const std::vector<int>& path, const Lambda& L) {
  const Term* cur = &t;
  bool liquid = true;
  for (int idx : path) {
    if (cur->is_var() || idx < 0 || idx >= static_cast<int>(cur->args().size()))
      throw Error("invalid occurrence path");
    if (!L.is_liquid(cur->head(), idx)) liquid = false;
    cur = &cur->args()[idx];
  }
  if (!cur->is_var()) throw Error("occurrence path does not address a variable");
  return liquid;
}

namespace {

void walk_occurrences(const Term& t, std::vector<int>& path,
                      const std::function<void(const std::string&, const std::vector<int>&)>& fn) {
  if (t.is_var()) {
    fn(t.head(), path);
    return;
  }
  for (size_t i = 0; i < t.args().size(); ++i) {
    path.push_back(static_cast<int>(i));
    walk_occurrences(t.args()[i], path, fn);
    path.pop_back();
  }
}

// Occurrence structure of a rule, computed once; liquidity is evaluated per
// lambda afterwards.
struct RuleOccurrences {
  struct Occ {
    std::string var;
    Occurrence occ;
    const Term* housing;  // term the path starts from
  };
  std::vector<Occ> all;
  std::set<std::string> rhs_of_positive;
  std::map<std::string, std::vector<const Occ*>> source_occs;

  explicit RuleOccurrences(const Rule& r) {
    std::set<std::string> target_vars;
    if (r.conclusion.rhs) target_vars = vars(*r.conclusion.rhs);
    rhs_of_positive = rhs_vars(r.premises);

    std::vector<int> path;
    auto add = [&](Occurrence base, const Term& housing) {
      walk_occurrences(housing, path, [&](const std::string& v, const std::vector<int>& p) {
        Occ o{v, base, &housing};
        o.occ.path = p;
        all.push_back(std::move(o));
      });
    };
    Occurrence src;
    src.where = Occurrence::Source;
    add(src, r.conclusion.lhs);
    if (r.conclusion.rhs) {
      Occurrence tgt;
      tgt.where = Occurrence::Target;
      add(tgt, *r.conclusion.rhs);
    }
    for (size_t i = 0; i < r.premises.size(); ++i) {
      const Literal& p = r.premises[i];
      Occurrence pl;
      pl.where = Occurrence::PremiseLhs;
      pl.premise_index = static_cast<int>(i);
      pl.premise_positive = p.positive();
      pl.premise_rhs_in_target =
          p.positive() && p.rhs->is_var() && target_vars.count(p.rhs->head()) != 0;
      add(pl, p.lhs);
    }
    for (const Occ& o : all)
      if (o.occ.where == Occurrence::Source) source_occs[o.var].push_back(&o);
  }

  bool occ_liquid(const Occ& o, const Lambda& L) const {
    return liquid_occurrence(*o.housing, o.occ.path, L);
  }

  bool is_floating(const std::string& v, const Lambda& L) const {
    if (rhs_of_positive.count(v)) return true;
    auto it = source_occs.find(v);
    if (it == source_occs.end() || it->second.size() != 1) return false;
    return occ_liquid(*it->second[0], L);
  }
};

std::string path_str(const Occurrence& o) {
  std::string s = o.where == Occurrence::Source   ? "source"
                  : o.where == Occurrence::Target ? "target"
                                                  : "premise " + std::to_string(o.premise_index + 1);
  if (!o.path.empty()) {
    s += " at ";
    for (size_t i = 0; i < o.path.size(); ++i) {
      if (i) s += ".";
      s += std::to_string(o.path[i] + 1);
    }
  }
  return s;
}

}  // namespace

OccurrenceReport occurrence_report(const Rule& r, const Lambda& L) {
  RuleClassification c = classify_rule(r);
  if (!c.ntytt) throw Error("occurrence report requires an ntytt rule: " + r.name);
  RuleOccurrences ro(r);
  OccurrenceReport rep;
  for (const std::string& v : vars(r)) rep.by_var[v];  // ensure presence
  for (const RuleOccurrences::Occ& o : ro.all) {
    VariableOccurrences& vo = rep.by_var[o.var];
    vo.occurrences.push_back(o.occ);
    if (o.occ.propagated()) ++vo.propagated;
    if (o.occ.polled()) ++vo.polled;
  }
  for (auto& [v, vo] : rep.by_var) vo.floating = ro.is_floating(v, L);
  return rep;
}

std::string format_name(Format f) {
  switch (f) {
    case Format::NtyftNtyxt: return "ntyft-ntyxt";
    case Format::TyftTyxt: return "tyft-tyxt";
    case Format::ReadySimulation: return "ready-simulation";
    case Format::ReadyTrace: return "ready-trace";
    case Format::Readiness: return "readiness";
    case Format::FailureTrace: return "failure-trace";
    case Format::PartialTrace: return "partial-trace";
    case Format::DeSimone: return "de-simone";
    case Format::Gsos: return "gsos";
  }
  return "?";
}

std::optional<Format> format_from_name(const std::string& name) {
  for (Format f : {Format::NtyftNtyxt, Format::TyftTyxt, Format::ReadySimulation,
                   Format::ReadyTrace, Format::Readiness, Format::FailureTrace,
                   Format::PartialTrace, Format::DeSimone, Format::Gsos})
    if (format_name(f) == name) return f;
  return std::nullopt;
}

namespace {

// Per-rule safety predicate for the lambda-parameterized formats.
void check_rule_safety(const Rule& r, const RuleClassification& c, const Lambda& L,
                       Format fmt, std::vector<Violation>& out) {
  auto violate = [&](const std::string& var, const std::string& clause, const std::string& detail) {
    out.push_back({r.name, var, clause, detail});
  };

  if (!c.no_lookahead) {
    violate("", "lookahead", "a premise target reappears in a premise left-hand side");
    return;  // occurrence analysis below presumes no lookahead is meaningful
  }
  RuleOccurrences ro(r);

  std::set<std::string> all_vars = vars(r);
  if (!r.conclusion.positive()) {
    // Rules with negative conclusions: nothing to check for ready trace and
    // readiness; for failure trace, floating variables may be polled only at
    // liquid positions and only in negative premises.
    if (fmt == Format::ReadyTrace || fmt == Format::Readiness) return;
    for (const std::string& v : all_vars) {
      if (!ro.is_floating(v, L)) continue;
      for (const RuleOccurrences::Occ& o : ro.all) {
        if (o.var != v || !o.occ.polled()) continue;
        if (o.occ.premise_positive)
          violate(v, "polled-in-positive-premise",
                  v + " is polled in a positive premise of a negative-conclusion rule (" +
                      path_str(o.occ) + ")");
        if (!ro.occ_liquid(o, L))
          violate(v, "polled-at-frozen-position", v + " is polled at a frozen position (" + path_str(o.occ) + ")");
      }
    }
    return;
  }

  for (const std::string& v : all_vars) {
    if (!ro.is_floating(v, L)) continue;
    int propagated = 0, polled = 0;
    std::vector<const RuleOccurrences::Occ*> prop_occs, poll_occs;
    for (const RuleOccurrences::Occ& o : ro.all) {
      if (o.var != v) continue;
      if (o.occ.propagated()) {
        ++propagated;
        prop_occs.push_back(&o);
      }
      if (o.occ.polled()) {
        ++polled;
        poll_occs.push_back(&o);
      }
    }
    // ready trace safety
    if (propagated > 1)
      violate(v, "propagated-more-than-once",
              v + " is propagated " + std::to_string(propagated) + " times");
    for (const auto* o : prop_occs)
      if (!ro.occ_liquid(*o, L))
        violate(v, "propagated-at-frozen-position",
                v + " is propagated at a frozen position (" + path_str(o->occ) + ")");
    if (fmt == Format::ReadyTrace) continue;
    // readiness safety
    if (propagated > 0 && polled > 0)
      violate(v, "propagated-and-polled", v + " is both propagated and polled");
    if (fmt == Format::Readiness) continue;
    // failure trace safety
    if (polled > 1)
      violate(v, "polled-more-than-once", v + " is polled " + std::to_string(polled) + " times");
    for (const auto* o : poll_occs) {
      if (!o->occ.premise_positive)
        violate(v, "polled-in-negative-premise",
                v + " is polled in a negative premise (" + path_str(o->occ) + ")");
      if (!ro.occ_liquid(*o, L))
        violate(v, "polled-at-frozen-position",
                v + " is polled at a frozen position (" + path_str(o->occ) + ")");
    }
  }
}

bool lambda_safety_ok(const Tss& tss, Format fmt, const Lambda& L) {
  for (const Rule& r : tss.rules) {
    std::vector<Violation> v;
    RuleClassification c = classify_rule(r);
    if (!c.ntytt) return false;
    check_rule_safety(r, c, L, fmt, v);
    if (!v.empty()) return false;
  }
  return true;
}

Format safety_level(Format fmt) {
  // Formats sharing the failure-trace per-rule predicate.
  if (fmt == Format::PartialTrace || fmt == Format::DeSimone) return Format::FailureTrace;
  return fmt;
}

}  // namespace

Lambda infer_lambda0_demand(const Tss& tss) {
  std::vector<RuleOccurrences> occs;
  for (const Rule& r : tss.rules) {
    if (!classify_rule(r).ntytt) throw Error("lambda inference requires ntytt rules: " + r.name);
    occs.emplace_back(r);
  }
  Lambda L;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < tss.rules.size(); ++i) {
      const RuleOccurrences& ro = occs[i];
      for (const std::string& v : vars(tss.rules[i])) {
        if (!ro.is_floating(v, L)) continue;
        for (const RuleOccurrences::Occ& o : ro.all) {
          if (o.var != v || !o.occ.propagated()) continue;
          const Term* cur = o.housing;
          for (int idx : o.occ.path) {
            if (L.liquid.insert({cur->head(), idx}).second) changed = true;
            cur = &cur->args()[idx];
          }
        }
      }
    }
  }
  return L;
}

std::vector<Lambda> infer_lambda0_exhaustive(const Tss& tss, Format fmt) {
  auto positions = argument_positions(tss.signature);
  if (positions.size() > 20)
    throw Error("exhaustive lambda search refused: " + std::to_string(positions.size()) +
                " argument positions (limit 20)");
  Format level = safety_level(fmt);
  std::vector<Lambda> passing;
  for (unsigned long long mask = 0; mask < (1ull << positions.size()); ++mask) {
    Lambda L;
    for (size_t i = 0; i < positions.size(); ++i)
      if (mask & (1ull << i)) L.liquid.insert(positions[i]);
    if (lambda_safety_ok(tss, level, L)) passing.push_back(std::move(L));
  }
  std::vector<Lambda> minimal;
  for (const Lambda& L : passing) {
    bool is_min = true;
    for (const Lambda& M : passing)
      if (!(M.liquid == L.liquid) && M.subset_of(L)) {
        is_min = false;
        break;
      }
    if (is_min) minimal.push_back(L);
  }
  return minimal;
}

FormatReport check_format(const Tss& tss, Format fmt, std::optional<Lambda> lambda, LambdaMode mode) {
  FormatReport rep;
  rep.format = fmt;

  // Shape requirements first.
  std::vector<Violation> shape;
  bool all_ntytt = true;
  for (const Rule& r : tss.rules) {
    RuleClassification c = classify_rule(r);
    if (!c.ntytt) all_ntytt = false;
    switch (fmt) {
      case Format::NtyftNtyxt:
      case Format::ReadySimulation:
      case Format::ReadyTrace:
      case Format::Readiness:
      case Format::FailureTrace:
      case Format::PartialTrace:
        if (!c.ntyft && !c.ntyxt)
          shape.push_back({r.name, "", "not-ntyft-ntyxt", "rule is not an ntyft or ntyxt rule"});
        break;
      case Format::TyftTyxt:
        if (!c.ntyft && !c.ntyxt)
          shape.push_back({r.name, "", "not-ntyft-ntyxt", "rule is not an ntyft or ntyxt rule"});
        break;
      case Format::DeSimone:
      case Format::Gsos:
        if (!(c.ntyft && c.nxyft && c.decent))
          shape.push_back({r.name, "", "not-decent-nxyft", "rule is not a decent nxyft rule"});
        break;
    }
    if (fmt == Format::ReadySimulation && !c.no_lookahead)
      shape.push_back({r.name, "", "lookahead", "rule has lookahead"});
  }
  if (fmt == Format::TyftTyxt || fmt == Format::PartialTrace || fmt == Format::DeSimone) {
    if (!tss.positive())
      shape.push_back({"", "", "not-positive", "TSS has negative premises or conclusions"});
  }
  if (fmt == Format::Gsos && !tss.standard())
    shape.push_back({"", "", "not-standard", "TSS has negative conclusions"});

  bool needs_lambda = fmt == Format::ReadyTrace || fmt == Format::Readiness ||
                      fmt == Format::FailureTrace || fmt == Format::PartialTrace ||
                      fmt == Format::DeSimone;

  if (!needs_lambda || !all_ntytt) {
    rep.violations = shape;
    rep.verdict = shape.empty();
    return rep;
  }

  Format level = safety_level(fmt);
  auto run = [&](const Lambda& L) {
    std::vector<Violation> v = shape;
    for (const Rule& r : tss.rules) check_rule_safety(r, classify_rule(r), L, level, v);
    return v;
  };

  Lambda L;
  if (fmt == Format::DeSimone) {
    L = universal_lambda(tss.signature);
    rep.lambda_note = "universal";
  } else if (lambda.has_value()) {
    L = *lambda;
  } else if (mode == LambdaMode::Declared) {
    L = declared_lambda(tss.signature);
    Lambda demand = infer_lambda0_demand(tss);
    if (!demand.subset_of(L))
      rep.lambda_note = "declared lambda misses demanded liquid positions " + demand.str();
  } else {
    Lambda demand = infer_lambda0_demand(tss);
    bool demand_ok = run(demand).empty();
    if (mode == LambdaMode::Auto && demand_ok) {
      L = demand;
    } else if (argument_positions(tss.signature).size() <= 20) {
      auto minimal = infer_lambda0_exhaustive(tss, fmt);
      if (!minimal.empty()) {
        L = minimal.front();
        rep.lambda_note = "minimal lambda from exhaustive search (" +
                          std::to_string(minimal.size()) + " minimal candidates)";
      } else {
        L = demand;
        rep.lambda_note = "no lambda passes; reporting violations under the demanded lambda";
      }
    } else {
      L = demand;
      rep.lambda_note = "too many argument positions for exhaustive search";
    }
  }
  rep.lambda_used = L;
  rep.violations = run(L);
  rep.verdict = rep.violations.empty();
  return rep;
}

SyntacticConservativityReport check_conservative_syntactic(const Tss& base, const Tss& ext) {
  SyntacticConservativityReport rep;
  auto reason = [&](const std::string& r) { rep.reasons.push_back(r); };

  if (!base.standard()) reason("base TSS is not standard");
  if (!ext.standard()) reason("extension TSS is not standard");
  for (const Tss* t : {&base, &ext})
    for (const Rule& r : t->rules) {
      RuleClassification c = classify_rule(r);
      if (!(c.ntyft && c.decent))
        reason(std::string(t == &base ? "base" : "extension") + " rule `" + r.name +
               "` is not a decent ntyft rule");
    }
  if (!base.signature.subset_of(ext.signature)) reason("base signature is not included in the extension");

  std::set<std::string> base_keys;
  for (const Rule& r : base.rules) base_keys.insert(alpha_key(r));
  std::set<std::string> ext_keys;
  for (const Rule& r : ext.rules) ext_keys.insert(alpha_key(r));
  for (const std::string& k : base_keys)
    if (!ext_keys.count(k)) {
      reason("a base rule is missing from the extension");
      break;
    }

  for (const Rule& r : ext.rules) {
    if (base_keys.count(alpha_key(r))) continue;
    const Term& src = r.source();
    bool new_head = !src.is_var() && !base.signature.contains(src.head());
    if (!new_head)
      reason("new rule `" + r.name + "` has no new function symbol in its source");
  }

  rep.verdict = rep.reasons.empty();
  return rep;
}

}  // namespace sos
