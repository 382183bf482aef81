#include <doctest.h>

#include <random>

#include "sos/parse.hpp"
#include "sos/syntax.hpp"

using namespace sos;

namespace {

Rule parse_rule_line(const std::string& sig, const std::string& line) {
  Tss t = parse_tss(sig + "\n" + line + "\n");
  REQUIRE(t.rules.size() == 1);
  return t.rules[0];
}

const char* kTinySig = "sig c/0\nsig f/1\nsig g/2\nact a b\n";

}  // namespace

TEST_CASE("substitution application") {
  Tss t = parse_tss(kTinySig);
  Term fxx = parse_term("g(x,x)", t);
  Substitution s;
  s.mapping["x"] = parse_term("c", t);
  CHECK(s(fxx) == parse_term("g(c,c)", t));

  // empty substitution is the identity on rules
  Rule r = parse_rule_line(kTinySig, "rule r: x -a-> y |- f(x) -a-> y");
  Substitution empty;
  CHECK(empty(r).str() == r.str());
}

TEST_CASE("substitution composition") {
  Tss t = parse_tss(kTinySig);
  std::mt19937_64 rng(7);
  std::vector<Term> pool{parse_term("c", t), parse_term("x", t), parse_term("y", t),
                         parse_term("f(x)", t), parse_term("g(x,y)", t),
                         parse_term("g(f(c),z)", t)};
  for (int i = 0; i < 200; ++i) {
    Substitution s1, s2;
    for (const std::string& v : {"x", "y", "z"}) {
      if (rng() % 2) s1.mapping[v] = pool[rng() % pool.size()];
      if (rng() % 2) s2.mapping[v] = pool[rng() % pool.size()];
    }
    Term term = pool[rng() % pool.size()];
    CHECK(s2(s1(term)) == compose(s2, s1)(term));
  }
}

TEST_CASE("vars and premise partitions") {
  Tss t = parse_tss(kTinySig);
  CHECK(vars(parse_term("f(g(x,y))", t)) == std::set<std::string>{"x", "y"});
  CHECK(vars(parse_term("g(x, f(x))", t)) == std::set<std::string>{"x"});

  // the first sequencing rule: premise targets vs premise sources
  const char* bpa = "sig eps/0\nsig seq/2\nact a sqrt\n";
  Rule seq1 = parse_rule_line(bpa, "rule s1: x1 -a-> y |- seq(x1,x2) -a-> seq(y,x2)");
  CHECK(rhs_vars(seq1.premises) == std::set<std::string>{"y"});
  Rule seq2 = parse_rule_line(bpa, "rule s2: x1 -sqrt-> y1, x2 -a-> y2 |- seq(x1,x2) -a-> y2");
  CHECK(lvar(seq2.premises) == std::set<std::string>{"x1", "x2"});
}

TEST_CASE("deny is symmetric and irreflexive across polarities") {
  Tss t = parse_tss(kTinySig);
  Literal pos{parse_term("f(c)", t), "a", parse_term("c", t)};
  Literal neg{parse_term("f(c)", t), "a", std::nullopt};
  Literal other{parse_term("c", t), "a", std::nullopt};
  CHECK(deny(pos, neg));
  CHECK(deny(neg, pos));
  CHECK(!deny(pos, pos));
  CHECK(!deny(neg, neg));
  CHECK(!deny(pos, other));
}

TEST_CASE("alpha equivalence") {
  Rule r1 = parse_rule_line(kTinySig, "rule r: x -a-> y |- f(x) -a-> y");
  Rule r2 = parse_rule_line(kTinySig, "rule r: u -a-> w |- f(u) -a-> w");
  Rule r3 = parse_rule_line(kTinySig, "rule r: x -a-> y |- f(x) -a-> x");
  CHECK(alpha_equal(r1, r2));
  CHECK(!alpha_equal(r1, r3));

  // canonicalization is idempotent and characterizes alpha equivalence
  CHECK(alpha_canonical(r1).str() == alpha_canonical(r2).str());
  Rule c1 = alpha_canonical(r1);
  CHECK(alpha_canonical(c1).str() == c1.str());
}

TEST_CASE("alpha canonicalization handles symmetric premises") {
  Rule r1 = parse_rule_line(kTinySig, "rule r: x -a-> y1, x -b-> y2 |- f(x) -a-> g(y1,y2)");
  Rule r2 = parse_rule_line(kTinySig, "rule r: x -b-> u2, x -a-> u1 |- f(x) -a-> g(u1,u2)");
  CHECK(alpha_equal(r1, r2));
  Rule r3 = parse_rule_line(kTinySig, "rule r: x -a-> y1, x -b-> y2 |- f(x) -a-> g(y2,y1)");
  CHECK(!alpha_equal(r1, r3));
}

TEST_CASE("parser expands the two-action base system") {
  Tss t = parse_tss(
      "sig delta/0\nsig eps/0\nsig a/0\nsig b/0\nsig alt/2\nsig seq/2 [liquid frozen]\n"
      "act a b sqrt\n"
      "rule act: |- $v -$v-> eps if $v != sqrt\n"
      "rule eps: |- eps -sqrt-> delta\n"
      "rule alt-l: x1 -$v-> y |- alt(x1,x2) -$v-> y\n"
      "rule alt-r: x2 -$v-> y |- alt(x1,x2) -$v-> y\n"
      "rule seq-l: x1 -$v-> y |- seq(x1,x2) -$v-> seq(y,x2) if $v != sqrt\n"
      "rule seq-r: x1 -sqrt-> y1, x2 -$v-> y2 |- seq(x1,x2) -$v-> y2\n");
  // 2 action axioms, the termination axiom, 3 instances for each alternative
  // composition rule, 2 + 3 instances for the sequencing rules
  CHECK(t.rules.size() == 2 + 1 + 3 + 3 + 2 + 3);
  CHECK(t.standard());
  CHECK(t.positive());
  int with_template = 0;
  for (const Rule& r : t.rules)
    if (r.template_name == "act") ++with_template;
  CHECK(with_template == 2);
}

TEST_CASE("empty rule section") {
  Tss t = parse_tss("sig c/0\nact a\n");
  CHECK(t.rules.empty());
  CHECK(t.standard());
  CHECK(t.positive());
}

TEST_CASE("priority template expansion") {
  Tss t = parse_tss(
      "sig theta/1\nact a b c d sqrt\nord c < b\n"
      "rule theta: x -$v-> y, x -/$w-> |- theta(x) -$v-> theta(y) if $v < $w\n");
  CHECK(t.rules.size() == 5);
  int with_neg = 0;
  for (const Rule& r : t.rules) {
    bool neg = false;
    for (const Literal& p : r.premises)
      if (!p.positive()) {
        neg = true;
        CHECK(p.action == "b");  // only c < b is declared
      }
    if (neg) {
      ++with_neg;
      CHECK(r.conclusion.action == "c");
    }
  }
  CHECK(with_neg == 1);
}

TEST_CASE("parser error positions") {
  CHECK_THROWS_AS(parse_tss("sig f/2\nact a\nrule r: |- f(x) -b-> x\n"), ParseError);
  CHECK_THROWS_AS(parse_tss("act a\nrule r: |- g(x) -a-> x\n"), ParseError);
  CHECK_THROWS_AS(parse_tss("sig f/2\nact a\nrule r: |- f(x) -a-> x\n"), ParseError);  // arity
  CHECK_THROWS_AS(parse_tss("act a b\nrule r: x -$v-> y |- x -$v-> y if $v < $w\n"), ParseError);
  CHECK_THROWS_AS(parse_tss("sig f/1 [liquid frozen]\nact a\n"), ParseError);
}

TEST_CASE("print then parse is identity up to alpha and rule order") {
  for (const char* src : {
           "sig c/0\nsig f/2\nact a b\nrule ax: |- c -a-> c\n"
           "rule f1: x1 -a-> y |- f(x1,x2) -b-> y\n"
           "rule f2: x2 -a-> y, x1 -/b-> |- f(x1,x2) -b-> y\n",
           "sig theta/1 [liquid]\nact a b c\nord a < b\nord b < c\n"
           "rule t: x -$v-> y, x -/$w-> |- theta(x) -$v-> theta(y) if $v < $w\n",
       }) {
    Tss t1 = parse_tss(src);
    Tss t2 = parse_tss(print_tss(t1));
    CHECK(same_rules_up_to_alpha(t1.rules, t2.rules));
    CHECK(t1.actions == t2.actions);
    CHECK(digest(t1) == digest(t2));
  }
}

TEST_CASE("rules collapse duplicate premises") {
  Rule r = parse_rule_line(kTinySig, "rule r: x -a-> y, x -a-> y |- f(x) -a-> y");
  CHECK(r.premises.size() == 1);
}
