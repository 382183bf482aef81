#include "sos/parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sos {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

struct Cond {
  enum Kind { Neq, Lt } kind;
  std::string lhs, rhs;  // action names or "$v"
};

struct TemplateRule {
  std::string name;
  std::vector<Literal> premises;  // metavariables appear as $-headed vars/actions
  Literal conclusion;
  std::vector<Cond> conds;
  int line = 0;
};

struct Scanner {
  const std::string& s;
  int line;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(pos + 1) + ": " + msg,
                     line, static_cast<int>(pos + 1));
  }

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool try_lit(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& w) {
    if (!try_lit(w)) fail("expected `" + w + "`");
  }
  std::string ident() {
    skip_ws();
    if (pos >= s.size() || !ident_start(s[pos])) fail("expected identifier");
    size_t start = pos;
    while (pos < s.size() && ident_char(s[pos])) ++pos;
    return s.substr(start, pos - start);
  }
  // action name or $metavariable; returned with the `$` kept
  std::string action_expr() {
    skip_ws();
    if (pos < s.size() && s[pos] == '$') {
      ++pos;
      return "$" + ident();
    }
    return ident();
  }
};

bool is_meta(const std::string& s) { return !s.empty() && s[0] == '$'; }

Term parse_term_rec(Scanner& sc) {
  sc.skip_ws();
  if (sc.pos < sc.s.size() && sc.s[sc.pos] == '$') {
    ++sc.pos;
    return Term::var("$" + sc.ident());
  }
  if (sc.pos < sc.s.size() && sc.s[sc.pos] == '_')
    sc.fail("identifiers may not start with `_` (reserved for generated variables)");
  std::string name = sc.ident();
  std::vector<Term> args;
  if (sc.try_lit("(")) {
    if (!sc.try_lit(")")) {
      for (;;) {
        args.push_back(parse_term_rec(sc));
        if (sc.try_lit(")")) break;
        sc.expect(",");
      }
    }
    return Term::app(name, std::move(args));
  }
  // Bare identifier: resolved against the signature later.
  return Term::var(name);
}

// `t -a-> t'` or `t -/a->`
Literal parse_literal(Scanner& sc) {
  Literal lit;
  lit.lhs = parse_term_rec(sc);
  sc.skip_ws();
  if (!sc.try_lit("-")) sc.fail("expected `-a->` or `-/a->` after term");
  bool neg = false;
  if (sc.pos < sc.s.size() && sc.s[sc.pos] == '/') {
    ++sc.pos;
    neg = true;
  }
  lit.action = sc.action_expr();
  sc.expect("->");
  if (!neg) lit.rhs = parse_term_rec(sc);
  return lit;
}

// Resolve bare identifiers: declared nullary symbols become constants,
// everything else stays a variable. Validates arities.
Term resolve_term(const Term& t, const Signature& sig, Scanner& sc) {
  if (t.is_var()) {
    if (is_meta(t.head())) return t;
    const FunctionDecl* f = sig.find(t.head());
    if (f) {
      if (f->arity != 0)
        sc.fail("symbol `" + t.head() + "` has arity " + std::to_string(f->arity) +
                " but is used without arguments");
      return Term::app(t.head());
    }
    return t;
  }
  const FunctionDecl* f = sig.find(t.head());
  if (!f) sc.fail("undeclared symbol `" + t.head() + "`");
  if (f->arity != static_cast<int>(t.args().size()))
    sc.fail("symbol `" + t.head() + "` has arity " + std::to_string(f->arity) + " but is applied to " +
            std::to_string(t.args().size()) + " arguments");
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(resolve_term(a, sig, sc));
  return Term::app(t.head(), std::move(args));
}

void collect_metavars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    if (is_meta(t.head())) out.insert(t.head());
    return;
  }
  for (const Term& a : t.args()) collect_metavars(a, out);
}

std::set<std::string> metavars(const Literal& l) {
  std::set<std::string> out;
  collect_metavars(l.lhs, out);
  if (is_meta(l.action)) out.insert(l.action);
  if (l.rhs) collect_metavars(*l.rhs, out);
  return out;
}

struct Elaborator {
  const Signature& sig;
  const std::vector<Action>& actions;
  const std::set<std::pair<Action, Action>>& order;
  int line;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line) + ": " + msg, line, 1);
  }

  Term subst_meta(const Term& t, const std::map<std::string, Action>& env) const {
    if (t.is_var()) {
      if (!is_meta(t.head())) return t;
      auto it = env.find(t.head());
      if (it == env.end()) return t;
      const FunctionDecl* f = sig.find(it->second);
      if (!f || f->arity != 0)
        fail("metavariable `" + t.head() + "` instantiated to `" + it->second +
             "` in a term position, but no constant of that name is declared");
      return Term::app(it->second);
    }
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(subst_meta(a, env));
    return Term::app(t.head(), std::move(args));
  }

  Literal subst_meta(const Literal& l, const std::map<std::string, Action>& env) const {
    Literal out;
    out.lhs = subst_meta(l.lhs, env);
    out.action = l.action;
    if (is_meta(l.action)) {
      auto it = env.find(l.action);
      if (it != env.end()) out.action = it->second;
    }
    if (l.rhs) out.rhs = subst_meta(*l.rhs, env);
    return out;
  }

  std::string side(const std::string& s, const std::map<std::string, Action>& env) const {
    if (!is_meta(s)) return s;
    auto it = env.find(s);
    if (it == env.end()) fail("condition mentions unbound metavariable `" + s + "`");
    return it->second;
  }

  bool eval(const Cond& c, const std::map<std::string, Action>& env) const {
    std::string l = side(c.lhs, env), r = side(c.rhs, env);
    if (c.kind == Cond::Neq) return l != r;
    return order.count({l, r}) != 0;
  }

  bool cond_ready(const Cond& c, const std::map<std::string, Action>& env) const {
    return (!is_meta(c.lhs) || env.count(c.lhs)) && (!is_meta(c.rhs) || env.count(c.rhs));
  }

  std::vector<Rule> expand(const TemplateRule& tr) const {
    std::set<std::string> concl_meta = metavars(tr.conclusion);
    // Premise-local metavariables must belong to exactly one premise.
    std::map<std::string, int> owner;
    for (size_t i = 0; i < tr.premises.size(); ++i) {
      for (const std::string& m : metavars(tr.premises[i])) {
        if (concl_meta.count(m)) continue;
        auto [it, fresh] = owner.emplace(m, static_cast<int>(i));
        if (!fresh && it->second != static_cast<int>(i))
          fail("metavariable `" + m + "` is shared between premises but not bound by the conclusion");
      }
    }
    for (const Cond& c : tr.conds) {
      for (const std::string& m : {c.lhs, c.rhs}) {
        if (is_meta(m) && !concl_meta.count(m) && !owner.count(m))
          fail("condition mentions unbound metavariable `" + m + "`");
      }
    }

    std::vector<std::string> rule_meta(concl_meta.begin(), concl_meta.end());
    std::vector<Rule> out;
    std::vector<std::map<std::string, Action>> envs{{}};
    for (const std::string& m : rule_meta) {
      std::vector<std::map<std::string, Action>> next;
      for (const auto& env : envs)
        for (const Action& a : actions) {
          auto e = env;
          e[m] = a;
          next.push_back(std::move(e));
        }
      envs = std::move(next);
    }
    for (const auto& env : envs) {
      bool ok = true;
      for (const Cond& c : tr.conds)
        if (cond_ready(c, env) && !eval(c, env)) {
          ok = false;
          break;
        }
      if (!ok) continue;

      std::vector<Literal> prems;
      for (size_t i = 0; i < tr.premises.size(); ++i) {
        std::vector<std::string> locals;
        for (const auto& [m, o] : owner)
          if (o == static_cast<int>(i)) locals.push_back(m);
        if (locals.empty()) {
          prems.push_back(subst_meta(tr.premises[i], env));
          continue;
        }
        std::vector<std::map<std::string, Action>> lenvs{env};
        for (const std::string& m : locals) {
          std::vector<std::map<std::string, Action>> next;
          for (const auto& le : lenvs)
            for (const Action& a : actions) {
              auto e = le;
              e[m] = a;
              next.push_back(std::move(e));
            }
          lenvs = std::move(next);
        }
        for (const auto& le : lenvs) {
          bool keep = true;
          for (const Cond& c : tr.conds) {
            bool mentions_local = false;
            for (const std::string& m : locals)
              if (c.lhs == m || c.rhs == m) mentions_local = true;
            if (mentions_local && !eval(c, le)) {
              keep = false;
              break;
            }
          }
          if (keep) prems.push_back(subst_meta(tr.premises[i], le));
        }
      }

      std::string name = tr.name;
      std::vector<std::pair<std::string, std::string>> binding;
      if (!rule_meta.empty()) {
        name += "[";
        for (size_t i = 0; i < rule_meta.size(); ++i) {
          if (i) name += ",";
          name += rule_meta[i].substr(1) + "=" + env.at(rule_meta[i]);
          binding.emplace_back(rule_meta[i].substr(1), env.at(rule_meta[i]));
        }
        name += "]";
      }
      Rule r(name, std::move(prems), subst_meta(tr.conclusion, env));
      r.template_name = tr.name;
      r.binding = std::move(binding);
      out.push_back(std::move(r));
    }
    return out;
  }
};

void check_literal_actions(const Literal& l, const Tss& tss, int line) {
  auto bad = [&](const std::string& a) {
    throw ParseError("line " + std::to_string(line) + ": undeclared action `" + a + "`", line, 1);
  };
  if (!is_meta(l.action) && !tss.has_action(l.action)) bad(l.action);
}

}  // namespace

Tss parse_tss(const std::string& text) {
  Tss tss;
  std::vector<TemplateRule> templates;
  bool have_ord = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    Scanner sc{line, lineno};
    if (sc.eof()) continue;

    if (sc.try_lit("sig")) {
      FunctionDecl d;
      d.name = sc.ident();
      sc.expect("/");
      sc.skip_ws();
      size_t start = sc.pos;
      while (sc.pos < line.size() && std::isdigit(static_cast<unsigned char>(line[sc.pos]))) ++sc.pos;
      if (sc.pos == start) sc.fail("expected arity");
      d.arity = std::stoi(line.substr(start, sc.pos - start));
      if (sc.try_lit("[")) {
        std::vector<bool> hint;
        while (!sc.try_lit("]")) {
          std::string w = sc.ident();
          if (w == "liquid")
            hint.push_back(true);
          else if (w == "frozen")
            hint.push_back(false);
          else
            sc.fail("expected `liquid` or `frozen`");
        }
        d.lambda_hint = std::move(hint);
      }
      if (!sc.eof()) sc.fail("trailing input after declaration");
      try {
        tss.signature.add(std::move(d));
      } catch (const Error& e) {
        sc.fail(e.what());
      }
    } else if (sc.try_lit("act")) {
      while (!sc.eof()) {
        std::string a = sc.ident();
        if (tss.has_action(a)) sc.fail("duplicate action `" + a + "`");
        tss.actions.push_back(a);
      }
    } else if (sc.try_lit("ord")) {
      std::string v = sc.ident();
      sc.expect("<");
      std::string w = sc.ident();
      if (!sc.eof()) sc.fail("trailing input after ordering pair");
      if (!tss.has_action(v) || !tss.has_action(w)) sc.fail("ordering mentions undeclared action");
      tss.ordering.emplace_back(v, w);
      have_ord = true;
    } else if (sc.try_lit("rule")) {
      TemplateRule tr;
      tr.line = lineno;
      sc.skip_ws();
      size_t start = sc.pos;
      while (sc.pos < line.size() && line[sc.pos] != ':') ++sc.pos;
      if (sc.pos >= line.size()) sc.fail("expected `:` after rule name");
      tr.name = line.substr(start, sc.pos - start);
      while (!tr.name.empty() && tr.name.back() == ' ') tr.name.pop_back();
      if (tr.name.empty()) sc.fail("empty rule name");
      ++sc.pos;  // ':'

      // premises up to |-
      sc.skip_ws();
      if (!sc.try_lit("|-")) {
        for (;;) {
          tr.premises.push_back(parse_literal(sc));
          if (sc.try_lit("|-")) break;
          sc.expect(",");
        }
      }
      tr.conclusion = parse_literal(sc);
      if (sc.try_lit("if")) {
        for (;;) {
          Cond c;
          c.lhs = sc.action_expr();
          if (sc.try_lit("!="))
            c.kind = Cond::Neq;
          else if (sc.try_lit("<"))
            c.kind = Cond::Lt;
          else
            sc.fail("expected `!=` or `<` in condition");
          c.rhs = sc.action_expr();
          tr.conds.push_back(c);
          if (!sc.try_lit(",")) break;
        }
      }
      if (!sc.eof()) sc.fail("trailing input after rule");

      for (const Cond& c : tr.conds) {
        if (c.kind == Cond::Lt && !have_ord)
          sc.fail("condition uses `<` but no ordering is declared");
        for (const std::string& s : {c.lhs, c.rhs})
          if (!is_meta(s) && !tss.has_action(s))
            sc.fail("condition mentions undeclared action `" + s + "`");
      }

      // Resolve constants and validate symbols/arities now, actions too.
      for (Literal& p : tr.premises) {
        p.lhs = resolve_term(p.lhs, tss.signature, sc);
        if (p.rhs) p.rhs = resolve_term(*p.rhs, tss.signature, sc);
        check_literal_actions(p, tss, lineno);
      }
      tr.conclusion.lhs = resolve_term(tr.conclusion.lhs, tss.signature, sc);
      if (tr.conclusion.rhs) tr.conclusion.rhs = resolve_term(*tr.conclusion.rhs, tss.signature, sc);
      check_literal_actions(tr.conclusion, tss, lineno);

      templates.push_back(std::move(tr));
    } else {
      sc.fail("expected `sig`, `act`, `ord` or `rule`");
    }
  }

  auto order = tss.ordering_closure();
  for (const TemplateRule& tr : templates) {
    Elaborator el{tss.signature, tss.actions, order, tr.line};
    for (Rule& r : el.expand(tr)) tss.rules.push_back(std::move(r));
  }
  return tss;
}

Term parse_term(const std::string& text, const Tss& tss) {
  Scanner sc{text, 0};
  Term t = parse_term_rec(sc);
  if (!sc.eof()) sc.fail("trailing input after term");
  t = resolve_term(t, tss.signature, sc);
  std::set<std::string> mv;
  collect_metavars(t, mv);
  if (!mv.empty()) sc.fail("metavariables are not allowed here");
  return t;
}

Term parse_closed_term(const std::string& text, const Tss& tss) {
  Term t = parse_term(text, tss);
  if (!t.is_closed()) throw Error("expected a closed term: " + text);
  return t;
}

std::string print_rule(const Rule& r) {
  std::string s = "rule " + r.name + ": ";
  for (size_t i = 0; i < r.premises.size(); ++i) {
    if (i) s += ", ";
    s += r.premises[i].str();
  }
  if (!r.premises.empty()) s += " ";
  s += "|- " + r.conclusion.str();
  return s;
}

std::string print_tss(const Tss& tss) {
  std::string out;
  for (const FunctionDecl& f : tss.signature.functions) {
    out += "sig " + f.name + "/" + std::to_string(f.arity);
    if (f.lambda_hint) {
      out += " [";
      for (size_t i = 0; i < f.lambda_hint->size(); ++i) {
        if (i) out += " ";
        out += (*f.lambda_hint)[i] ? "liquid" : "frozen";
      }
      out += "]";
    }
    out += "\n";
  }
  if (!tss.actions.empty()) {
    out += "act";
    for (const Action& a : tss.actions) out += " " + a;
    out += "\n";
  }
  for (const auto& [v, w] : tss.ordering) out += "ord " + v + " < " + w + "\n";
  for (const Rule& r : tss.rules) out += print_rule(r) + "\n";
  return out;
}

}  // namespace sos
