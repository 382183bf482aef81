#include "sos/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace sos {

Term Term::var(std::string name) {
  Term t;
  t.is_var_ = true;
  t.head_ = std::move(name);
  return t;
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  Term t;
  t.is_var_ = false;
  t.head_ = std::move(symbol);
  t.args_ = std::move(args);
  return t;
}

bool Term::operator==(const Term& o) const {
  return is_var_ == o.is_var_ && head_ == o.head_ && args_ == o.args_;
}

bool Term::operator<(const Term& o) const {
  if (is_var_ != o.is_var_) return is_var_ && !o.is_var_;
  if (head_ != o.head_) return head_ < o.head_;
  return args_ < o.args_;
}

bool Term::is_closed() const {
  if (is_var_) return false;
  for (const Term& a : args_)
    if (!a.is_closed()) return false;
  return true;
}

int Term::height() const {
  int h = 0;
  for (const Term& a : args_) h = std::max(h, a.height() + 1);
  return h;
}

std::string Term::str() const {
  if (is_var_ || args_.empty()) return head_;
  std::string s = head_ + "(";
  for (size_t i = 0; i < args_.size(); ++i) {
    if (i) s += ",";
    s += args_[i].str();
  }
  return s + ")";
}

bool Literal::operator==(const Literal& o) const {
  return lhs == o.lhs && action == o.action && rhs == o.rhs;
}

bool Literal::operator<(const Literal& o) const {
  if (!(lhs == o.lhs)) return lhs < o.lhs;
  if (action != o.action) return action < o.action;
  if (rhs.has_value() != o.rhs.has_value()) return !rhs.has_value();
  if (rhs && o.rhs && !(*rhs == *o.rhs)) return *rhs < *o.rhs;
  return false;
}

std::string Literal::str() const {
  if (positive()) return lhs.str() + " -" + action + "-> " + rhs->str();
  return lhs.str() + " -/" + action + "->";
}

bool deny(const Literal& a, const Literal& b) {
  if (a.positive() == b.positive()) return false;
  return a.lhs == b.lhs && a.action == b.action;
}

Rule::Rule(std::string name_, std::vector<Literal> premises_, Literal conclusion_)
    : name(std::move(name_)), premises(std::move(premises_)), conclusion(std::move(conclusion_)) {
  std::sort(premises.begin(), premises.end());
  premises.erase(std::unique(premises.begin(), premises.end()), premises.end());
}

std::string Rule::str() const {
  std::string s;
  for (size_t i = 0; i < premises.size(); ++i) {
    if (i) s += ", ";
    s += premises[i].str();
  }
  if (!premises.empty()) s += " ";
  return s + "|- " + conclusion.str();
}

const FunctionDecl* Signature::find(const std::string& name) const {
  for (const FunctionDecl& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

void Signature::add(FunctionDecl d) {
  if (contains(d.name)) throw Error("duplicate function symbol: " + d.name);
  if (d.lambda_hint && static_cast<int>(d.lambda_hint->size()) != d.arity)
    throw Error("lambda hint arity mismatch for symbol: " + d.name);
  functions.push_back(std::move(d));
}

bool Signature::subset_of(const Signature& other) const {
  for (const FunctionDecl& f : functions) {
    const FunctionDecl* g = other.find(f.name);
    if (!g || g->arity != f.arity) return false;
  }
  return true;
}

bool Tss::has_action(const Action& a) const {
  return std::find(actions.begin(), actions.end(), a) != actions.end();
}

std::set<std::pair<Action, Action>> Tss::ordering_closure() const {
  std::set<std::pair<Action, Action>> rel(ordering.begin(), ordering.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : rel)
      for (const auto& q : rel)
        if (p.second == q.first && rel.insert({p.first, q.second}).second) changed = true;
  }
  for (const auto& p : rel)
    if (p.first == p.second) throw Error("action ordering is not a strict partial order: cycle at " + p.first);
  return rel;
}

bool Tss::action_less(const Action& v, const Action& w) const {
  auto rel = ordering_closure();
  return rel.count({v, w}) != 0;
}

bool Tss::standard() const {
  for (const Rule& r : rules)
    if (!r.conclusion.positive()) return false;
  return true;
}

bool Tss::positive() const {
  if (!standard()) return false;
  for (const Rule& r : rules)
    for (const Literal& p : r.premises)
      if (!p.positive()) return false;
  return true;
}

Term Substitution::operator()(const Term& t) const {
  if (t.is_var()) {
    auto it = mapping.find(t.head());
    return it == mapping.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back((*this)(a));
  return Term::app(t.head(), std::move(args));
}

Literal Substitution::operator()(const Literal& l) const {
  Literal out;
  out.lhs = (*this)(l.lhs);
  out.action = l.action;
  if (l.rhs) out.rhs = (*this)(*l.rhs);
  return out;
}

Rule Substitution::operator()(const Rule& r) const {
  std::vector<Literal> prems;
  prems.reserve(r.premises.size());
  for (const Literal& p : r.premises) prems.push_back((*this)(p));
  Rule out(r.name, std::move(prems), (*this)(r.conclusion));
  out.template_name = r.template_name;
  out.binding = r.binding;
  out.origin = r.origin;
  return out;
}

Substitution compose(const Substitution& s2, const Substitution& s1) {
  Substitution out = s2;
  for (const auto& [v, t] : s1.mapping) out.mapping[v] = s2(t);
  return out;
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    out.push_back(t.head());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

std::set<std::string> vars(const Term& t) {
  std::vector<std::string> v;
  collect_vars(t, v);
  return {v.begin(), v.end()};
}

std::set<std::string> vars(const Literal& l) {
  std::vector<std::string> v;
  collect_vars(l.lhs, v);
  if (l.rhs) collect_vars(*l.rhs, v);
  return {v.begin(), v.end()};
}

std::set<std::string> vars(const Rule& r) {
  std::set<std::string> out = vars(r.conclusion);
  for (const Literal& p : r.premises) {
    auto pv = vars(p);
    out.insert(pv.begin(), pv.end());
  }
  return out;
}

std::set<std::string> lvar(const std::vector<Literal>& premises) {
  std::set<std::string> out;
  for (const Literal& p : premises) {
    auto v = vars(p.lhs);
    out.insert(v.begin(), v.end());
  }
  return out;
}

std::set<std::string> rhs_vars(const std::vector<Literal>& premises) {
  std::set<std::string> out;
  for (const Literal& p : premises)
    if (p.rhs && p.rhs->is_var()) out.insert(p.rhs->head());
  return out;
}

// ---- alpha canonicalization ----
//
// Variables are renamed to v0, v1, ... by first occurrence in: conclusion
// source, then premises in the order that minimizes the serialized rule, then
// the conclusion target. Ties between premises whose serializations coincide
// under the partial naming are resolved by exploring both branches and keeping
// the least result, so alpha-equivalent rules always canonicalize identically.

namespace {

void serialize_term(const Term& t, const std::map<std::string, int>& naming,
                    std::string& out) {
  if (t.is_var()) {
    auto it = naming.find(t.head());
    if (it == naming.end())
      out += "?";  // unnamed variables sort after everything concrete
    else
      out += "v" + std::to_string(it->second);
    return;
  }
  out += t.head();
  if (!t.args().empty()) {
    out += "(";
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ",";
      serialize_term(t.args()[i], naming, out);
    }
    out += ")";
  }
}

std::string serialize_literal(const Literal& l, const std::map<std::string, int>& naming) {
  std::string out;
  serialize_term(l.lhs, naming, out);
  out += l.positive() ? " -" + l.action + "-> " : " -/" + l.action + "->";
  if (l.rhs) serialize_term(*l.rhs, naming, out);
  return out;
}

void name_vars(const Term& t, std::map<std::string, int>& naming) {
  if (t.is_var()) {
    naming.emplace(t.head(), static_cast<int>(naming.size()));
    return;
  }
  for (const Term& a : t.args()) name_vars(a, naming);
}

void name_vars(const Literal& l, std::map<std::string, int>& naming) {
  name_vars(l.lhs, naming);
  if (l.rhs) name_vars(*l.rhs, naming);
}

struct CanonSearch {
  const Rule& rule;
  std::string best;
  std::vector<int> best_order;
  std::map<std::string, int> best_naming;
  bool have_best = false;

  void run(std::map<std::string, int> naming, std::vector<int> remaining,
           std::vector<int> order, const std::string& acc) {
    if (have_best) {
      // Prune branches that already serialize above the incumbent.
      size_t n = std::min(acc.size(), best.size());
      int cmp = acc.compare(0, n, best, 0, n);
      if (cmp > 0) return;
    }
    if (remaining.empty()) {
      auto full_naming = naming;
      name_vars(rule.conclusion, full_naming);
      std::string full = acc + "|- " + serialize_literal(rule.conclusion, full_naming);
      if (!have_best || full < best) {
        best = full;
        best_order = order;
        best_naming = full_naming;
        have_best = true;
      }
      return;
    }
    std::string min_key;
    std::vector<int> min_idx;
    for (int i : remaining) {
      std::string key = serialize_literal(rule.premises[i], naming);
      if (min_idx.empty() || key < min_key) {
        min_key = key;
        min_idx = {i};
      } else if (key == min_key) {
        min_idx.push_back(i);
      }
    }
    for (int pick : min_idx) {
      auto naming2 = naming;
      name_vars(rule.premises[pick], naming2);
      std::vector<int> rem2;
      for (int i : remaining)
        if (i != pick) rem2.push_back(i);
      auto order2 = order;
      order2.push_back(pick);
      run(std::move(naming2), std::move(rem2), std::move(order2), acc + min_key + ", ");
    }
  }

  void search_all() {
    std::map<std::string, int> naming0;
    name_vars(rule.conclusion.lhs, naming0);
    std::vector<int> all(rule.premises.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    run(std::move(naming0), std::move(all), {}, "");
  }
};

}  // namespace

Rule alpha_canonical(const Rule& r) {
  CanonSearch search{r};
  search.search_all();

  Substitution rename;
  for (const auto& [v, idx] : search.best_naming)
    rename.mapping[v] = Term::var("v" + std::to_string(idx));
  std::vector<Literal> prems;
  for (int i : search.best_order) prems.push_back(rename(r.premises[i]));
  Rule out;
  out.name = r.name;
  out.premises = std::move(prems);
  out.conclusion = rename(r.conclusion);
  out.template_name = r.template_name;
  out.binding = r.binding;
  out.origin = r.origin;
  return out;
}

std::string alpha_key(const Rule& r) {
  CanonSearch search{r};
  search.search_all();
  return search.best;
}

bool alpha_equal(const Rule& a, const Rule& b) { return alpha_key(a) == alpha_key(b); }

std::vector<Rule> dedup_alpha(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  std::set<std::string> seen;
  for (const Rule& r : rules)
    if (seen.insert(alpha_key(r)).second) out.push_back(r);
  return out;
}

bool same_rules_up_to_alpha(const std::vector<Rule>& a, const std::vector<Rule>& b) {
  std::set<std::string> ka, kb;
  for (const Rule& r : a) ka.insert(alpha_key(r));
  for (const Rule& r : b) kb.insert(alpha_key(r));
  return ka == kb;
}

void collect_subterms(const Term& t, std::set<Term>& out) {
  out.insert(t);
  for (const Term& a : t.args()) collect_subterms(a, out);
}

std::string digest(const Tss& tss) {
  std::string data;
  for (const FunctionDecl& f : tss.signature.functions) data += f.name + "/" + std::to_string(f.arity) + ";";
  for (const Action& a : tss.actions) data += a + ";";
  std::set<std::string> keys;
  for (const Rule& r : tss.rules) keys.insert(alpha_key(r));
  for (const std::string& k : keys) data += k + "\n";
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace sos
