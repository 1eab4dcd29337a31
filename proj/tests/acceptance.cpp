// Acceptance run: one pass/fail line per criterion.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "suites.hpp"

using namespace esq;
using namespace esq::cli;

namespace {

struct Run {
  std::string suite;
  std::vector<int> dims;
  bool both_signs = false;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Run> runs;
  /// Seconds; zero means unbounded.
  double budget;
};

class Workspaces {
 public:
  Workspace& at(int n) {
    auto& w = ws_[n];
    if (!w) w = std::make_unique<Workspace>(n);
    return *w;
  }

 private:
  std::map<int, std::unique_ptr<Workspace>> ws_;
};

bool run_criterion(const Criterion& c, Workspaces& ws) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> failures;
  std::size_t checks = 0;
  for (const Run& r : c.runs)
    for (int n : r.dims) {
      std::vector<std::optional<Sign>> signs = {std::nullopt};
      if (r.both_signs) signs = {Sign::plus, Sign::minus};
      for (const auto& s : signs) {
        SuiteOptions o;
        o.n = n;
        o.sign = s;
        try {
          const SuiteReport rep = run_suite(r.suite, o, ws.at(n));
          for (const auto& ch : rep.checks) {
            ++checks;
            if (!ch.pass)
              failures.push_back(r.suite + " N=" + std::to_string(n) + (s ? " " + to_string(*s) : "") + " " +
                                 ch.id + (ch.witness.empty() ? "" : ": " + ch.witness));
          }
        } catch (const std::exception& e) {
          failures.push_back(r.suite + " N=" + std::to_string(n) + " raised: " + e.what());
        }
      }
    }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = c.budget <= 0 || seconds < c.budget;
  if (!in_time) failures.push_back("runtime budget of " + std::to_string(c.budget) + " s exceeded");
  const bool pass = failures.empty();
  std::cout << "criterion " << std::setw(2) << c.id << "  " << (pass ? "PASS" : "FAIL") << "  " << c.title << "  ("
            << checks << " checks, " << std::fixed << std::setprecision(1) << seconds << " s)\n";
  for (const auto& f : failures) std::cout << "    " << f << "\n";
  std::cout.flush();
  return pass;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "structure tensors, N = 3..6", {{"structure", {3, 4, 5, 6}}}, 10},
      {2, "sphere algebra normal forms and graded dimensions, N = 3..5", {{"sphere", {3, 4, 5}}}, 120},
      {3, "compatibility conditions for both calculi, N = 3..6", {{"first-order", {3, 4, 5, 6}, true}}, 300},
      {4, "classification at N = 6", {{"classification", {6}}}, 0},
      {5, "gamma bases, N = 3..5", {{"gamma", {3, 4, 5}, true}}, 0},
      {6, "inner calculus and star identity, N = 3..5", {{"inner-star", {3, 4, 5}, true}}, 0},
      {7, "classical limits", {{"limit", {3, 4, 5, 6}, true}}, 0},
      {8, "second order relations, N = 3, 4", {{"second-order", {3, 4}}}, 600},
      {9, "braiding sigma, N = 3, 4", {{"sigma", {3, 4}}}, 0},
      {10, "wedge normal forms, N = 3, 4", {{"wedge", {3, 4}}}, 120},
  };
  Workspaces ws;
  int failed = 0;
  for (const auto& c : criteria)
    if (!run_criterion(c, ws)) ++failed;
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
