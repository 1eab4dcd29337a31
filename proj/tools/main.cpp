#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "esq/classification.hpp"
#include "esq/error.hpp"
#include "esq/limits.hpp"
#include "expression.hpp"
#include "json.hpp"
#include "suites.hpp"

namespace {

using namespace esq;
using esq::cli::Evaluator;
using json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flags {
  int n = 3;
  std::string sign;
  std::string alpha;
  int max_degree = 0;
  std::string format = "text";
};

std::optional<Sign> parse_sign(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "plus") return Sign::plus;
  if (s == "minus") return Sign::minus;
  throw InvalidParameter("--sign must be plus or minus");
}

bool records(const Flags& f) { return f.format == "records"; }

Scalar parse_scalar(const std::string& text, int n) {
  Evaluator ev(n, Sign::plus);
  const cli::Value v = ev.evaluate(cli::parse(text, n));
  if (v.kind != cli::Value::Kind::scalar) throw InvalidParameter("'" + text + "' is not a scalar");
  return v.scalar;
}

int run_tensor(const std::string& name, const Flags& f) {
  TensorKind kind;
  if (name == "C") kind = TensorKind::C;
  else if (name == "I") kind = TensorKind::I;
  else if (name == "K") kind = TensorKind::K;
  else if (name == "Rhat") kind = TensorKind::Rhat;
  else if (name == "RhatInv") kind = TensorKind::RhatInv;
  else throw InvalidParameter("unknown tensor '" + name + "' (C, I, K, Rhat, RhatInv)");

  const auto t = build_structure_tensor(kind, f.n);
  auto emit = [&](const std::vector<int>& idx, const Scalar& v) {
    if (records(f)) {
      json j;
      j["indices"] = idx;
      j["coefficient"] = v.to_string();
      std::cout << j.dump() << "\n";
    } else {
      for (int i : idx) std::cout << i << " ";
      std::cout << " " << v.to_string() << "\n";
    }
  };
  if (const auto* m = std::get_if<Metric>(&t)) {
    for (const auto& [idx, v] : m->entries()) emit({idx[0], idx[1]}, v);
  } else {
    for (const auto& [idx, v] : std::get<FourTensor>(t).entries()) emit({idx[0], idx[1], idx[2], idx[3]}, v);
  }
  return kExitPass;
}

int run_reduce(const std::string& text, const Flags& f, bool wedge) {
  Evaluator ev(f.n, parse_sign(f.sign).value_or(Sign::plus));
  const cli::Value v = ev.evaluate(cli::parse(text, f.n));
  std::string out;
  std::string kind;
  if (wedge) {
    out = to_string(ev.wedge_normal(v));
    kind = "wedge";
  } else {
    const cli::Value r = ev.reduce(v);
    out = ev.print(r);
    kind = cli::to_string(r.kind);
  }
  if (records(f)) {
    json j;
    j["input"] = text;
    j["kind"] = kind;
    j["normal_form"] = out;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << out << "\n";
  }
  return kExitPass;
}

int run_verify(const std::string& suite, const Flags& f) {
  cli::SuiteOptions o;
  o.n = f.n;
  o.sign = parse_sign(f.sign);
  if (!f.alpha.empty()) o.alpha = parse_scalar(f.alpha, f.n);
  if (f.max_degree > 0) o.max_degree = f.max_degree;
  bool ok = true;
  for (const auto& r : cli::run_suites(suite, o)) {
    std::cout << (records(f) ? cli::format_records(r) : cli::format_text(r)) << std::flush;
    std::cerr << r.suite << ": " << r.seconds << " s\n";
    ok = ok && r.ok();
  }
  return ok ? kExitPass : kExitFail;
}

std::string scalar_list(const std::vector<Scalar>& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].to_string();
  return s + ")";
}

int run_classify(const std::string& constraint, const Flags& f) {
  Constraint c;
  if (constraint == "free") c = Constraint::free;
  else if (constraint == "theta-zero") c = Constraint::theta_zero;
  else throw InvalidParameter("--constraint must be free or theta-zero");
  const ClassificationResult r = classify(c, f.n);
  if (records(f)) {
    json j;
    j["constraint"] = to_string(c);
    j["n"] = f.n;
    j["solvable"] = r.solvable;
    j["basis_complete"] = r.basis_complete;
    json sols = json::array();
    for (const auto& s : r.solutions) {
      json t = json::array();
      for (const auto& a : s) t.push_back(a.to_string());
      sols.push_back(t);
    }
    j["solutions"] = sols;
    j["a1_polynomial"] = r.a1_polynomial.to_string();
    json w = json::array();
    for (const auto& p : r.witnesses) w.push_back(p.to_string());
    j["witnesses"] = w;
    std::cout << j.dump() << "\n";
    return kExitPass;
  }
  std::cout << "classify " << to_string(c) << "  N=" << f.n << "\n";
  if (!r.basis_complete) std::cout << "  ansatz not known to be exhaustive for N < 6\n";
  for (const auto& e : r.eliminations) std::cout << "  elimination  " << e.to_string() << " = 0\n";
  std::cout << "  a1 condition  " << r.a1_polynomial.to_string() << " = 0\n";
  if (r.solvable) {
    for (const auto& s : r.solutions)
      std::cout << "  solution  " << (c == Constraint::free ? "(a1, a2, a3, a4) = " : "(a1, a2) = ")
                << scalar_list(s) << "\n";
  } else {
    std::cout << "  no solution\n";
    for (const auto& p : r.witnesses) std::cout << "  witness  " << p.to_string() << "\n";
  }
  for (const auto& note : r.notes) std::cout << "  note  " << note << "\n";
  return kExitPass;
}

int run_limit(const Flags& f) {
  const std::optional<Sign> only = parse_sign(f.sign);
  bool ok = true;
  for (Sign s : {Sign::plus, Sign::minus}) {
    if (only && *only != s) continue;
    const ClassicalLimit l = classical_limit_table(s, f.n);
    const bool match = l.a == expected_classical_coefficients(s, f.n) &&
                       l.theta_commutator == expected_theta_commutator_limit(s);
    ok = ok && match;
    if (records(f)) {
      json j;
      j["sign"] = to_string(s);
      j["n"] = f.n;
      json a = json::array();
      for (const auto& v : l.a) a.push_back(rational_string(v));
      j["coefficients"] = a;
      j["theta_commutator"] = rational_string(l.theta_commutator);
      j["status"] = match ? "pass" : "fail";
      std::cout << j.dump() << "\n";
    } else {
      std::cout << to_string(l) << "\n";
    }
  }
  return ok ? kExitPass : kExitFail;
}

int run_dim(int wedge, int algebra, const Flags& f) {
  if ((wedge < 0) == (algebra < 0)) throw InvalidParameter("dim needs exactly one of --wedge or --algebra");
  SphereAlgebra x(f.n);
  long d = 0;
  if (wedge >= 0) {
    FirstOrderCalculus g(x, Sign::plus);
    WedgeCalculus wc(g);
    d = wc.graded_dimension(wedge);
  } else {
    d = x.graded_dimension(algebra);
  }
  if (records(f)) {
    json j;
    j[wedge >= 0 ? "wedge_grade" : "algebra_degree"] = wedge >= 0 ? wedge : algebra;
    j["n"] = f.n;
    j["dimension"] = d;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << d << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations on the quantum Euclidean spheres and their differential calculi", "esq"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--N", f.n, "Dimension N >= 3")->check(CLI::Range(3, kMaxDimension));
    sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "records"}));
  };

  std::string tensor_name;
  auto* tensor = app.add_subcommand("tensor", "Print a structure tensor as 'k l i j  coefficient' lines");
  tensor->add_option("name", tensor_name, "C, I, K, Rhat or RhatInv")->required();
  common(tensor);

  std::string expr;
  auto* reduce = app.add_subcommand("reduce", "Normal form of an expression");
  reduce->add_option("expr", expr, "Expression")->required();
  reduce->add_option("--sign", f.sign, "Calculus")->check(CLI::IsMember({"plus", "minus"}));
  common(reduce);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(cli::suite_names()));
  verify->add_option("--sign", f.sign, "Calculus; both when omitted")->check(CLI::IsMember({"plus", "minus"}));
  verify->add_option("--alpha", f.alpha, "Braiding parameter (scalar expression)");
  verify->add_option("--max-degree", f.max_degree, "Degree bound of the suite")->check(CLI::PositiveNumber);
  common(verify);

  std::string constraint = "free";
  auto* classify_cmd = app.add_subcommand("classify", "Solve the compatibility conditions for the coefficients");
  classify_cmd->add_option("--constraint", constraint, "free or theta-zero")
      ->check(CLI::IsMember({"free", "theta-zero"}));
  common(classify_cmd);

  auto* limit = app.add_subcommand("limit", "Bimodule rules at q = 1");
  limit->add_option("--sign", f.sign, "Calculus; both when omitted")->check(CLI::IsMember({"plus", "minus"}));
  common(limit);

  std::string wexpr;
  auto* wedge = app.add_subcommand("wedge-normal", "Wedge normal form in the gamma+ basis");
  wedge->add_option("expr", wexpr, "Expression")->required();
  common(wedge);

  int wedge_grade = -1;
  int algebra_degree = -1;
  auto* dim = app.add_subcommand("dim", "Graded dimensions");
  dim->add_option("--wedge", wedge_grade, "Wedge grade")->check(CLI::NonNegativeNumber);
  dim->add_option("--algebra", algebra_degree, "Algebra degree")->check(CLI::NonNegativeNumber);
  common(dim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (tensor->parsed()) return run_tensor(tensor_name, f);
    if (reduce->parsed()) return run_reduce(expr, f, false);
    if (verify->parsed()) return run_verify(suite, f);
    if (classify_cmd->parsed()) return run_classify(constraint, f);
    if (limit->parsed()) return run_limit(f);
    if (wedge->parsed()) return run_reduce(wexpr, f, true);
    if (dim->parsed()) return run_dim(wedge_grade, algebra_degree, f);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IndexOutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidDimension& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
