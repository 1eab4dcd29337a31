#include <random>

#include "doctest.h"
#include "esq/error.hpp"
#include "expression.hpp"
#include "json.hpp"
#include "suites.hpp"

using namespace esq;
using namespace esq::cli;

TEST_CASE("parse: product of a generator and a form") {
  const Expression e = parse("x1*dx2", 3);
  REQUIRE(e->kind == Node::Kind::mul);
  CHECK(e->lhs->kind == Node::Kind::generator);
  CHECK(e->lhs->index == 1);
  CHECK(e->rhs->kind == Node::Kind::form);
  CHECK(e->rhs->basis == Basis::dx);
  CHECK(e->rhs->index == 2);
}

TEST_CASE("parse: scalar-scaled wedge, '*' binding tighter than '^'") {
  const Expression e = parse("(1-q)/(1-q^2) * g+1 ^ g+2", 3);
  REQUIRE(e->kind == Node::Kind::wedge);
  CHECK(e->lhs->kind == Node::Kind::mul);
  CHECK(e->rhs->kind == Node::Kind::form);
  CHECK(e->rhs->basis == Basis::gamma_plus);
  Evaluator ev(3, Sign::plus);
  const Value v = ev.evaluate(e);
  REQUIRE(v.kind == Value::Kind::wedge);
  CHECK(v.wedge == wedge_word({1, 2}, Scalar(1L) / (Scalar::q() + 1)));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("dx4", 3), IndexOutOfRange);
  CHECK_THROWS_AS(parse("x0", 3), IndexOutOfRange);
  CHECK_THROWS_AS(parse("x1 +", 3), ParseError);
  CHECK_THROWS_AS(parse("(x1", 3), ParseError);
  CHECK_THROWS_AS(parse("y1", 3), ParseError);
  try {
    parse("x1 * * x2", 3);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("scalar syntax") {
  Evaluator ev(3, Sign::plus);
  auto scalar = [&](const std::string& s) {
    const Value v = ev.evaluate(parse(s, 3));
    REQUIRE(v.kind == Value::Kind::scalar);
    return v.scalar;
  };
  const Scalar q = Scalar::q();
  CHECK(scalar("q^(1/2) * q^(1/2)") == q);
  CHECK(scalar("q^-2") == Scalar::q_power(-2));
  CHECK(scalar("(q^2 - 1)/(q - 1)") == q + 1);
  CHECK(scalar("-3/4") == Scalar(Rational(-3, 4)));
  CHECK_THROWS_AS(scalar("1/(q - q)"), DivisionByZero);
}

TEST_CASE("reduce: sphere sugar and relations") {
  Evaluator ev(4, Sign::plus);
  CHECK(ev.print(ev.reduce(ev.evaluate(parse("sphere", 4)))) == "1");
  CHECK(ev.print(ev.reduce(ev.evaluate(parse("theta - x1*dx4*q^(-3/2)", 4)))) != "");
  const Value d = ev.reduce(ev.evaluate(parse("x2*dx3 - dx3*x2", 4)));
  CHECK(d.kind == Value::Kind::one_form);
}

TEST_CASE("parse of print is the identity on canonical forms") {
  std::mt19937 gen(23);
  std::uniform_int_distribution<int> idx(1, 3), len(0, 3), coeff(-3, 3), expo(-3, 3);
  for (Sign s : {Sign::plus, Sign::minus}) {
    Evaluator ev(3, s);
    for (int t = 0; t < 40; ++t) {
      std::string text;
      for (int k = 0; k < 3; ++k) {
        text += (k ? " + " : "") + std::to_string(coeff(gen)) + "*q^(" + std::to_string(expo(gen)) + "/2)";
        for (int p = len(gen); p > 0; --p) text += "*x" + std::to_string(idx(gen));
        const int kind = t % 3;
        if (kind == 1) text += "*dx" + std::to_string(idx(gen));
        if (kind == 2) text += "*g-" + std::to_string(idx(gen));
      }
      const Value v = ev.reduce(ev.evaluate(parse(text, 3)));
      const std::string printed = ev.print(v);
      const Value back = ev.reduce(ev.evaluate(parse(printed, 3)));
      CHECK(ev.print(back) == printed);
    }
  }
  Evaluator ev(3, Sign::plus);
  for (const std::string text : {"g1 ^ g2 ^ g3", "x1*g2^g1 + q*g3^g3", "g1 (x) g2 - x3*g2 (x) g2"}) {
    const std::string printed = ev.print(ev.reduce(ev.evaluate(parse(text, 3))));
    CHECK(ev.print(ev.reduce(ev.evaluate(parse(printed, 3)))) == printed);
  }
}

TEST_CASE("wedge normal form of one-forms") {
  Evaluator ev(3, Sign::plus);
  const WedgeForm w = ev.wedge_normal(ev.evaluate(parse("dx1 ^ dx1", 3)));
  CHECK(w == ev.wedges().normal_form(w));
  CHECK(ev.wedge_normal(ev.evaluate(parse("g2 ^ g1 + q*g1 ^ g2", 3))).is_zero());
}

TEST_CASE("suite reports") {
  SuiteOptions o;
  o.n = 3;
  o.sign = Sign::plus;
  const auto reports = run_suites("limit", o);
  REQUIRE(reports.size() == 1);
  const SuiteReport& r = reports.front();
  CHECK(r.ok());
  CHECK(format_text(r).find("limit: 8/8 checks passed") != std::string::npos);
  const std::string rec = format_records(r);
  const auto first = nlohmann::ordered_json::parse(rec.substr(0, rec.find('\n')));
  std::vector<std::string> keys;
  for (const auto& [k, v] : first.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"suite", "check", "n", "params", "status", "witness"});
  CHECK(first["params"]["sign"] == "plus");
  CHECK(first["witness"].is_null());
  CHECK(format_records(r) == format_records(run_suites("limit", o).front()));
  CHECK_THROWS_AS(run_suites("nonsense", o), InvalidParameter);
}

TEST_CASE("failing checks carry witnesses") {
  SuiteReport r;
  r.suite = "demo";
  r.checks.push_back({"a", true, ""});
  r.checks.push_back({"b", false, "x_1"});
  CHECK_FALSE(r.ok());
  CHECK(format_text(r).find("FAIL  b  witness: x_1") != std::string::npos);
  CHECK(format_records(r).find("\"status\":\"fail\",\"witness\":\"x_1\"") != std::string::npos);
}
