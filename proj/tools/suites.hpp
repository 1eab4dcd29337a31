#pragma once

// Verification suites: each runs a list of exact checks and reports them.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "esq/first_order.hpp"
#include "esq/higher_order.hpp"
#include "esq/wedge.hpp"

namespace esq::cli {

struct CheckResult {
  std::string id;
  bool pass = false;
  /// Offending expression or value when the check fails.
  std::string witness;
};

struct SuiteReport {
  std::string suite;
  int n = 0;
  /// Ordered parameter list, e.g. {"sign", "plus"}.
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<CheckResult> checks;
  /// Measured outcomes that are reported but not asserted.
  std::vector<std::string> notes;
  double seconds = 0;

  bool ok() const;
};

struct SuiteOptions {
  int n = 3;
  /// Suites covering both calculi run both unless a sign is given.
  std::optional<Sign> sign;
  /// Braiding parameter for the sigma checks; q by default.
  std::optional<Scalar> alpha;
  /// Suite specific degree bound; each suite has its own default.
  std::optional<int> max_degree;
  unsigned seed = 20240611;
};

/// Suites accepted by `verify`, "all" last.
const std::vector<std::string>& suite_names();
/// Suites run by "all".
const std::vector<std::string>& all_suites();

/// Builds and shares the algebra and calculi across suites of one N.
class Workspace {
 public:
  explicit Workspace(int n);
  ~Workspace();
  int dimension() const { return n_; }
  const SphereAlgebra& algebra();
  const FirstOrderCalculus& calculus(Sign sign);
  const TensorCalculus& tensors();
  const WedgeCalculus& wedges();

 private:
  int n_;
  std::unique_ptr<SphereAlgebra> x_;
  std::unique_ptr<FirstOrderCalculus> plus_;
  std::unique_ptr<FirstOrderCalculus> minus_;
  std::unique_ptr<TensorCalculus> tc_;
  std::unique_ptr<WedgeCalculus> wc_;
};

/// Throws InvalidParameter for an unknown suite name; "all" is expanded by
/// run_suites.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options, Workspace& ws);
std::vector<SuiteReport> run_suites(const std::string& name, const SuiteOptions& options);

std::string format_text(const SuiteReport& r);
/// One JSON object per check and line, keys suite, check, n, params, status, witness.
std::string format_records(const SuiteReport& r);

}  // namespace esq::cli
