#include "sos/formula.hpp"

#include <algorithm>
#include <cctype>

namespace sos {

Formula Formula::top() { return Formula(); }

Formula Formula::prefix(Action a, Formula f) {
  Formula out;
  out.kind_ = Kind::Prefix;
  out.action_ = std::move(a);
  out.children_.push_back(std::move(f));
  return out;
}

Formula Formula::cannot(Action a) {
  Formula out;
  out.kind_ = Kind::Cannot;
  out.action_ = std::move(a);
  return out;
}

Formula Formula::conj(std::vector<Formula> fs) {
  Formula out;
  out.kind_ = Kind::Conj;
  out.children_ = std::move(fs);
  return out;
}

Formula Formula::neg(Formula f) {
  Formula out;
  out.kind_ = Kind::Neg;
  out.children_.push_back(std::move(f));
  return out;
}

bool Formula::operator==(const Formula& o) const {
  return kind_ == o.kind_ && action_ == o.action_ && children_ == o.children_;
}

bool Formula::operator<(const Formula& o) const {
  if (kind_ != o.kind_) return kind_ < o.kind_;
  if (action_ != o.action_) return action_ < o.action_;
  return children_ < o.children_;
}

int Formula::prefix_depth() const {
  int d = 0;
  for (const Formula& c : children_) d = std::max(d, c.prefix_depth());
  return kind_ == Kind::Prefix ? d + 1 : d;
}

std::string Formula::str() const { return print_formula(*this); }

Formula normalize(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Cannot:
      return f;
    case Formula::Kind::Prefix:
      return Formula::prefix(f.action(), normalize(f.child()));
    case Formula::Kind::Neg:
      return Formula::neg(normalize(f.child()));
    case Formula::Kind::Conj: {
      std::vector<Formula> flat;
      for (const Formula& c : f.children()) {
        Formula n = normalize(c);
        if (n.kind() == Formula::Kind::Top) continue;
        if (n.kind() == Formula::Kind::Conj)
          for (const Formula& g : n.children()) flat.push_back(g);
        else
          flat.push_back(std::move(n));
      }
      std::sort(flat.begin(), flat.end());
      if (flat.empty()) return Formula::top();
      if (flat.size() == 1) return flat[0];
      return Formula::conj(std::move(flat));
    }
  }
  return f;
}

namespace {

struct FScanner {
  const std::string& s;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("formula: " + msg + " at column " + std::to_string(pos + 1));
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool lit(const std::string& w) {
    skip();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
      ++pos;
    if (start == pos) fail("expected an action name");
    return s.substr(start, pos - start);
  }
  bool word(const std::string& w) {
    skip();
    if (s.compare(pos, w.size(), w) != 0) return false;
    size_t end = pos + w.size();
    if (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
      return false;
    pos = end;
    return true;
  }
};

Formula parse_conj(FScanner& sc);

Formula parse_unary(FScanner& sc) {
  if (sc.word("tt")) return Formula::top();
  if (sc.word("no")) return Formula::cannot(sc.ident());
  if (sc.word("not")) return Formula::neg(parse_unary(sc));
  if (sc.lit("<")) {
    std::string a = sc.ident();
    if (!sc.lit(">")) sc.fail("expected `>`");
    return Formula::prefix(a, parse_unary(sc));
  }
  if (sc.lit("(")) {
    Formula f = parse_conj(sc);
    if (!sc.lit(")")) sc.fail("expected `)`");
    return f;
  }
  sc.fail("expected a formula");
}

Formula parse_conj(FScanner& sc) {
  std::vector<Formula> fs{parse_unary(sc)};
  while (sc.lit("&")) fs.push_back(parse_unary(sc));
  if (fs.size() == 1) return fs[0];
  return Formula::conj(std::move(fs));
}

}  // namespace

Formula parse_formula(const std::string& text) {
  FScanner sc{text};
  Formula f = parse_conj(sc);
  sc.skip();
  if (sc.pos != text.size()) sc.fail("trailing input");
  return f;
}

std::string print_formula(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return "tt";
    case Formula::Kind::Cannot:
      return "no " + f.action();
    case Formula::Kind::Prefix: {
      const Formula& c = f.child();
      std::string body = print_formula(c);
      if (c.kind() == Formula::Kind::Conj) body = "(" + body + ")";
      return "<" + f.action() + "> " + body;
    }
    case Formula::Kind::Neg: {
      std::string body = print_formula(f.child());
      if (f.child().kind() == Formula::Kind::Conj) body = "(" + body + ")";
      return "not " + body;
    }
    case Formula::Kind::Conj: {
      std::string out;
      for (size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += " & ";
        std::string body = print_formula(f.children()[i]);
        if (f.children()[i].kind() == Formula::Kind::Conj) body = "(" + body + ")";
        out += body;
      }
      return out;
    }
  }
  return "?";
}

std::optional<SublanguageTag> SublanguageTag::from_name(const std::string& name) {
  SublanguageTag tag{Notion::T};
  std::string base = name;
  if (!base.empty() && base.back() == '^') {
    tag.conj_closure = true;
    base.pop_back();
  }
  if (base == "T") tag.notion = Notion::T;
  else if (base == "CT") tag.notion = Notion::CT;
  else if (base == "F") tag.notion = Notion::F;
  else if (base == "R") tag.notion = Notion::R;
  else if (base == "FT") tag.notion = Notion::FT;
  else if (base == "RT") tag.notion = Notion::RT;
  else if (base == "1S") tag.notion = Notion::S1;
  else if (base == "RS") tag.notion = Notion::RS;
  else if (base == "B") tag.notion = Notion::B;
  else if (base == "T~") tag.notion = Notion::TTilde;
  else if (base.size() > 1 && base.back() == 'S' && std::isdigit(static_cast<unsigned char>(base[0]))) {
    tag.notion = Notion::NS;
    tag.n = std::stoi(base.substr(0, base.size() - 1));
    if (tag.n < 2) return std::nullopt;
  } else {
    return std::nullopt;
  }
  return tag;
}

std::string SublanguageTag::name() const {
  std::string base;
  switch (notion) {
    case Notion::T: base = "T"; break;
    case Notion::CT: base = "CT"; break;
    case Notion::F: base = "F"; break;
    case Notion::R: base = "R"; break;
    case Notion::FT: base = "FT"; break;
    case Notion::RT: base = "RT"; break;
    case Notion::S1: base = "1S"; break;
    case Notion::RS: base = "RS"; break;
    case Notion::NS: base = std::to_string(n) + "S"; break;
    case Notion::B: base = "B"; break;
    case Notion::TTilde: base = "T~"; break;
  }
  return conj_closure ? base + "^" : base;
}

namespace {

using N = SublanguageTag::Notion;

bool member(const Formula& f, N notion, int n, const std::set<Action>& actions);

bool all_children(const Formula& f, N notion, int n, const std::set<Action>& actions) {
  for (const Formula& c : f.children())
    if (!member(c, notion, n, actions)) return false;
  return true;
}

bool member(const Formula& f, N notion, int n, const std::set<Action>& actions) {
  using K = Formula::Kind;
  switch (notion) {
    case N::T:
      if (f.kind() == K::Top) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::T, n, actions);
      return false;
    case N::CT: {
      if (f.kind() == K::Top) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::CT, n, actions);
      // the complete refusal: one inability conjunct per action
      std::set<Action> refused;
      if (f.kind() == K::Cannot) refused.insert(f.action());
      else if (f.kind() == K::Conj) {
        for (const Formula& c : f.children()) {
          if (c.kind() != K::Cannot) return false;
          refused.insert(c.action());
        }
      } else {
        return false;
      }
      return refused == actions;
    }
    case N::F:
      if (f.kind() == K::Top || f.kind() == K::Cannot) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::F, n, actions);
      if (f.kind() == K::Conj) {
        for (const Formula& c : f.children())
          if (c.kind() != K::Cannot) return false;
        return true;
      }
      return false;
    case N::R:
      if (f.kind() == K::Top || f.kind() == K::Cannot) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::R, n, actions);
      if (f.kind() == K::Conj) {
        for (const Formula& c : f.children()) {
          bool ok = c.kind() == K::Cannot ||
                    (c.kind() == K::Prefix && c.child().kind() == K::Top);
          if (!ok) return false;
        }
        return true;
      }
      return false;
    case N::FT: {
      if (f.kind() == K::Top || f.kind() == K::Cannot) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::FT, n, actions);
      if (f.kind() != K::Conj) return false;
      int deep = 0;
      for (const Formula& c : f.children()) {
        if (c.kind() == K::Cannot) continue;
        if (c.kind() == K::Prefix && member(c.child(), N::FT, n, actions))
          ++deep;
        else
          return false;
      }
      return deep <= 1;
    }
    case N::RT: {
      if (f.kind() == K::Top || f.kind() == K::Cannot) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::RT, n, actions);
      if (f.kind() != K::Conj) return false;
      int deep = 0;
      for (const Formula& c : f.children()) {
        if (c.kind() == K::Cannot) continue;
        if (c.kind() != K::Prefix) return false;
        if (c.child().kind() == K::Top) continue;  // a ready conjunct b<tt>
        if (!member(c.child(), N::RT, n, actions)) return false;
        ++deep;
      }
      return deep <= 1;
    }
    case N::S1:
      if (f.kind() == K::Top) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::S1, n, actions);
      if (f.kind() == K::Conj) return all_children(f, N::S1, n, actions);
      return false;
    case N::RS:
      if (f.kind() == K::Top || f.kind() == K::Cannot) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::RS, n, actions);
      if (f.kind() == K::Conj) return all_children(f, N::RS, n, actions);
      return false;
    case N::NS:
      if (f.kind() == K::Top) return true;
      if (f.kind() == K::Prefix) return member(f.child(), N::NS, n, actions);
      if (f.kind() == K::Conj) return all_children(f, N::NS, n, actions);
      if (f.kind() == K::Neg)
        return n - 1 == 1 ? member(f.child(), N::S1, 1, actions)
                          : member(f.child(), N::NS, n - 1, actions);
      return false;
    case N::B:
      if (f.kind() == K::Top) return true;
      if (f.kind() == K::Prefix || f.kind() == K::Neg) return member(f.child(), N::B, n, actions);
      if (f.kind() == K::Conj) return all_children(f, N::B, n, actions);
      return false;
    case N::TTilde: {
      // conjunctions of trace observations and inabilities
      auto part_ok = [&](const Formula& c) {
        return c.kind() == K::Cannot || member(c, N::T, n, actions);
      };
      if (f.kind() == K::Conj) {
        for (const Formula& c : f.children())
          if (!part_ok(c)) return false;
        return true;
      }
      return part_ok(f);
    }
  }
  return false;
}

}  // namespace

bool in_sublanguage(const Formula& f, const SublanguageTag& tag, const std::set<Action>& actions) {
  Formula nf = normalize(f);
  if (!tag.conj_closure) return member(nf, tag.notion, tag.n, actions);
  if (member(nf, tag.notion, tag.n, actions)) return true;
  if (nf.kind() != Formula::Kind::Conj) return false;
  // A flattened conjunction is in the closure iff every conjunct is a member,
  // except that for the completed-trace language the inability conjuncts form
  // one block that must cover the whole action set.
  std::set<Action> refused;
  for (const Formula& c : nf.children()) {
    if (tag.notion == N::CT && c.kind() == Formula::Kind::Cannot) {
      refused.insert(c.action());
      continue;
    }
    if (!member(c, tag.notion, tag.n, actions)) return false;
  }
  if (tag.notion == N::CT && !refused.empty() && refused != actions) return false;
  return true;
}

}  // namespace sos
