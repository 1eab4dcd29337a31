#include "esq/structure_tensors.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

#include "esq/error.hpp"

namespace esq {

void check_dimension(int n) {
  if (n < kMinDimension || n > kMaxDimension) throw InvalidDimension(n);
}

int two_rho(int i, int n) {
  const int twice = 2 * i;
  if (twice < n + 1) return n - twice;
  if (twice == n + 1) return 0;
  return n - twice + 2;
}

// --------------------------------------------------------------------- Metric

Metric::Metric(int n) : n_(n) {
  check_dimension(n);
  c_.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) c_.push_back(Scalar::s_power(-two_rho(i, n)));
}

Scalar Metric::at(int i, int j) const {
  if (j != prime(i, n_)) return {};
  return row_entry(i);
}

std::vector<std::pair<std::array<int, 2>, Scalar>> Metric::entries() const {
  std::vector<std::pair<std::array<int, 2>, Scalar>> out;
  for (int i = 1; i <= n_; ++i) out.push_back({{i, prime(i, n_)}, row_entry(i)});
  return out;
}

// ----------------------------------------------------------------- FourTensor

FourTensor::FourTensor(int n) : n_(n), cols_(static_cast<std::size_t>(n * n)) {}

FourTensor FourTensor::identity(int n) {
  FourTensor t(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) t.set(i, j, i, j, Scalar(1L));
  return t;
}

Scalar FourTensor::at(int k, int l, int i, int j) const {
  const auto& col = column(i, j);
  auto it = std::lower_bound(col.begin(), col.end(), std::make_pair(k, l),
                             [](const Entry& e, const std::pair<int, int>& key) {
                               return std::make_pair(e.k, e.l) < key;
                             });
  if (it != col.end() && it->k == k && it->l == l) return it->value;
  return {};
}

void FourTensor::set(int k, int l, int i, int j, const Scalar& value) {
  auto& col = cols_[index(i, j)];
  auto it = std::lower_bound(col.begin(), col.end(), std::make_pair(k, l),
                             [](const Entry& e, const std::pair<int, int>& key) {
                               return std::make_pair(e.k, e.l) < key;
                             });
  const bool present = it != col.end() && it->k == k && it->l == l;
  if (value.is_zero()) {
    if (present) col.erase(it);
    return;
  }
  if (present)
    it->value = value;
  else
    col.insert(it, Entry{k, l, value});
}

void FourTensor::add(int k, int l, int i, int j, const Scalar& value) {
  if (value.is_zero()) return;
  set(k, l, i, j, at(k, l, i, j) + value);
}

std::map<std::array<int, 4>, Scalar> FourTensor::entries() const {
  std::map<std::array<int, 4>, Scalar> out;
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      for (const auto& e : column(i, j)) out.emplace(std::array<int, 4>{e.k, e.l, i, j}, e.value);
  return out;
}

std::size_t FourTensor::nonzero_count() const {
  std::size_t count = 0;
  for (const auto& col : cols_) count += col.size();
  return count;
}

FourTensor FourTensor::compose(const FourTensor& b) const {
  FourTensor out(n_);
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) {
      std::map<std::pair<int, int>, Scalar> acc;
      for (const auto& eb : b.column(i, j))
        for (const auto& ea : column(eb.k, eb.l)) acc[{ea.k, ea.l}] += ea.value * eb.value;
      auto& col = out.cols_[out.index(i, j)];
      for (auto& [kl, v] : acc)
        if (!v.is_zero()) col.push_back(Entry{kl.first, kl.second, v});
    }
  return out;
}

FourTensor FourTensor::scaled(const Scalar& c) const {
  FourTensor out(n_);
  if (c.is_zero()) return out;
  out.cols_ = cols_;
  for (auto& col : out.cols_)
    for (auto& e : col) e.value *= c;
  return out;
}

Scalar FourTensor::trace() const {
  Scalar t;
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) t += at(i, j, i, j);
  return t;
}

FourTensor& FourTensor::operator+=(const FourTensor& o) {
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      for (const auto& e : o.column(i, j)) add(e.k, e.l, i, j, e.value);
  return *this;
}

FourTensor& FourTensor::operator-=(const FourTensor& o) {
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      for (const auto& e : o.column(i, j)) add(e.k, e.l, i, j, -e.value);
  return *this;
}

bool FourTensor::operator==(const FourTensor& o) const {
  if (n_ != o.n_) return false;
  for (std::size_t c = 0; c < cols_.size(); ++c) {
    const auto& a = cols_[c];
    const auto& b = o.cols_[c];
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k].k != b[k].k || a[k].l != b[k].l || a[k].value != b[k].value) return false;
  }
  return true;
}

// ------------------------------------------------------------------ builders

namespace {

FourTensor build_k(const Metric& c) {
  const int n = c.dimension();
  FourTensor k(n);
  for (int a = 1; a <= n; ++a)
    for (int i = 1; i <= n; ++i) k.set(a, prime(a, n), i, prime(i, n), c.row_entry(a) * c.row_entry(i));
  return k;
}

FourTensor build_rhat(const Metric& c, const FourTensor& k_tensor) {
  const int n = c.dimension();
  const Scalar q = Scalar::q();
  const Scalar q_diff = q - q.inverse();
  FourTensor r(n);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          Scalar v;
          if (i == l && j == k) v += Scalar::q_power(kronecker(k, l) - kronecker(k, prime(l, n)));
          if (heaviside(i, l)) {
            Scalar inner(static_cast<long>(kronecker(i, k) * kronecker(j, l)));
            inner -= k_tensor.at(k, l, i, j);
            v += q_diff * inner;
          }
          if (!v.is_zero()) r.set(k, l, i, j, v);
        }
  return r;
}

std::unique_ptr<StructureTensors> make_structure(int n) {
  Metric c(n);
  FourTensor id = FourTensor::identity(n);
  FourTensor k = build_k(c);
  FourTensor r = build_rhat(c, k);
  const Scalar q = Scalar::q();
  const Scalar q_diff = q - q.inverse();
  FourTensor rinv = r - id.scaled(q_diff) + k.scaled(q_diff);
  Scalar tau;
  for (int i = 1; i <= n; ++i) tau += Scalar::s_power(-2 * two_rho(i, n));
  return std::make_unique<StructureTensors>(
      StructureTensors{n, std::move(c), std::move(id), std::move(k), std::move(r), std::move(rinv), tau});
}

}  // namespace

std::variant<Metric, FourTensor> build_structure_tensor(TensorKind kind, int n) {
  check_dimension(n);
  const StructureTensors& s = structure(n);
  switch (kind) {
    case TensorKind::C:
      return s.C;
    case TensorKind::I:
      return s.I;
    case TensorKind::K:
      return s.K;
    case TensorKind::Rhat:
      return s.R;
    case TensorKind::RhatInv:
      return s.Rinv;
  }
  throw InvalidParameter("unknown tensor kind");
}

const StructureTensors& structure(int n) {
  check_dimension(n);
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<StructureTensors>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = make_structure(n);
  return *slot;
}

// ------------------------------------------------------------------ spectrum

namespace {

// Solves sum_{e<d} c_e M^e = M^d if possible.
bool solve_dependency(const std::vector<std::map<std::array<int, 4>, Scalar>>& powers,
                      std::vector<Scalar>& coeffs) {
  const std::size_t d = powers.size() - 1;
  std::map<std::array<int, 4>, bool> keys;
  for (const auto& p : powers)
    for (const auto& [k, v] : p) keys[k] = true;
  // Dense augmented system: one row per key, d unknowns.
  std::vector<std::vector<Scalar>> rows;
  rows.reserve(keys.size());
  for (const auto& [key, unused] : keys) {
    std::vector<Scalar> row(d + 1);
    for (std::size_t e = 0; e <= d; ++e) {
      auto it = powers[e].find(key);
      if (it != powers[e].end()) row[e] = it->second;
    }
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) return false;  // powers below d already dependent
    std::swap(rows[rank], rows[piv]);
    const Scalar inv = rows[rank][col].inverse();
    for (auto& x : rows[rank]) x *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      const Scalar f = rows[r][col];
      for (std::size_t c = col; c <= d; ++c) rows[r][c] -= f * rows[rank][c];
    }
    pivot_cols.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (!rows[r][d].is_zero()) return false;
  coeffs.assign(d, Scalar());
  for (std::size_t r = 0; r < rank; ++r) coeffs[pivot_cols[r]] = rows[r][d];
  return true;
}

Scalar evaluate_poly(const std::vector<Scalar>& p, const Scalar& x) {
  Scalar acc;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

}  // namespace

Spectrum spectral_projectors(int n) {
  const StructureTensors& st = structure(n);
  std::vector<FourTensor> powers{st.I, st.R};
  std::vector<Scalar> minimal;
  for (int d = 1; d <= 4; ++d) {
    if (static_cast<int>(powers.size()) <= d) powers.push_back(powers.back().compose(st.R));
    std::vector<std::map<std::array<int, 4>, Scalar>> flat;
    for (int e = 0; e <= d; ++e) flat.push_back(powers[static_cast<std::size_t>(e)].entries());
    std::vector<Scalar> c;
    if (solve_dependency(flat, c)) {
      // M^d - sum c_e M^e = 0
      minimal.clear();
      for (auto& x : c) minimal.push_back(-x);
      minimal.push_back(Scalar(1L));
      break;
    }
  }
  if (minimal.size() != 4) throw SpectralError("minimal polynomial of Rhat is not cubic");

  std::vector<Scalar> roots;
  for (int e = -4 * n; e <= 4 * n && roots.size() < 3; ++e)
    for (int sign : {1, -1}) {
      const Scalar cand = Scalar::s_power(e) * Scalar(static_cast<long>(sign));
      if (evaluate_poly(minimal, cand).is_zero()) roots.push_back(cand);
    }
  if (roots.size() != 3) throw SpectralError("minimal polynomial does not split into monomial roots");

  auto projector = [&](std::size_t which) {
    FourTensor p = st.I;
    for (std::size_t o = 0; o < roots.size(); ++o) {
      if (o == which) continue;
      FourTensor factor = st.R - st.I.scaled(roots[o]);
      p = p.compose(factor).scaled((roots[which] - roots[o]).inverse());
    }
    return p;
  };

  // Identify lambda_0 from R K = lambda_0 K and the others by projector rank.
  const auto k_entries = st.K.entries();
  const auto& k_entry = *k_entries.begin();
  const auto& key = k_entry.first;
  const Scalar ratio = st.R.compose(st.K).at(key[0], key[1], key[2], key[3]) / k_entry.second;
  Spectrum out{minimal, {}, {}, {}, FourTensor(n), FourTensor(n), FourTensor(n)};
  const Scalar rank_plus(static_cast<long>(n * (n + 1) / 2 - 1));
  const Scalar rank_minus(static_cast<long>(n * (n - 1) / 2));
  bool have_plus = false, have_minus = false, have_zero = false;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    FourTensor p = projector(r);
    if (roots[r] == ratio) {
      out.lambda_zero = roots[r];
      out.P_zero = std::move(p);
      have_zero = true;
    } else if (p.trace() == rank_plus) {
      out.lambda_plus = roots[r];
      out.P_plus = std::move(p);
      have_plus = true;
    } else if (p.trace() == rank_minus) {
      out.lambda_minus = roots[r];
      out.P_minus = std::move(p);
      have_minus = true;
    }
  }
  if (!(have_plus && have_minus && have_zero)) throw SpectralError("could not identify the eigenspaces of Rhat");
  return out;
}

// -------------------------------------------------------------------- braids

TripleVector apply_pair(const FourTensor& a, int slot, const TripleVector& v) {
  TripleVector out;
  for (const auto& [idx, c] : v) {
    const int i = slot == 0 ? idx[0] : idx[1];
    const int j = slot == 0 ? idx[1] : idx[2];
    for (const auto& e : a.column(i, j)) {
      std::array<int, 3> key = slot == 0 ? std::array<int, 3>{e.k, e.l, idx[2]}
                                         : std::array<int, 3>{idx[0], e.k, e.l};
      out[key] += c * e.value;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero())
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

bool braid_relation_holds(const FourTensor& a) {
  const int n = a.dimension();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        TripleVector v{{{i, j, k}, Scalar(1L)}};
        TripleVector lhs = apply_pair(a, 0, apply_pair(a, 1, apply_pair(a, 0, v)));
        TripleVector rhs = apply_pair(a, 1, apply_pair(a, 0, apply_pair(a, 1, v)));
        if (lhs != rhs) return false;
      }
  return true;
}

}  // namespace esq
