#pragma once

// Structure data of O_q(N): the metric C, the identity I, the rank-one
// tensor K, the braided matrix Rhat with its inverse, and the spectral
// projectors of Rhat.
//
// A four-index tensor A^{kl}_{ij} acts on pairs by e_i (x) e_j -> A^{kl}_{ij}
// e_k (x) e_l, so (i,j) labels a column and composition is matrix product.

#include <array>
#include <map>
#include <variant>
#include <vector>

#include "esq/scalar.hpp"

namespace esq {

constexpr int kMinDimension = 3;
constexpr int kMaxDimension = 15;

/// Throws InvalidDimension unless kMinDimension <= n <= kMaxDimension.
void check_dimension(int n);

/// i' = N + 1 - i.
inline int prime(int i, int n) { return n + 1 - i; }

/// 2 * rho_i, an integer.
int two_rho(int i, int n);

/// Kronecker and Heaviside symbols as 0/1 integers.
inline int kronecker(int a, int b) { return a == b ? 1 : 0; }
inline int heaviside(int a, int b) { return a < b ? 1 : 0; }

class Metric {
 public:
  explicit Metric(int n);

  int dimension() const { return n_; }
  /// C^{ij} (equal to C_{ij}); zero unless j = i'.
  Scalar at(int i, int j) const;
  /// The single nonzero entry of row i, C^{i i'}.
  const Scalar& row_entry(int i) const { return c_[static_cast<std::size_t>(i - 1)]; }
  /// Nonzero entries in lexicographic index order.
  std::vector<std::pair<std::array<int, 2>, Scalar>> entries() const;

 private:
  int n_;
  std::vector<Scalar> c_;
};

class FourTensor {
 public:
  struct Entry {
    int k;
    int l;
    Scalar value;
  };

  explicit FourTensor(int n);
  static FourTensor identity(int n);

  int dimension() const { return n_; }
  Scalar at(int k, int l, int i, int j) const;
  void set(int k, int l, int i, int j, const Scalar& value);
  void add(int k, int l, int i, int j, const Scalar& value);

  /// Nonzero entries of column (i,j), sorted by (k,l).
  const std::vector<Entry>& column(int i, int j) const { return cols_[index(i, j)]; }
  /// All nonzero entries keyed by (k,l,i,j) in lexicographic order.
  std::map<std::array<int, 4>, Scalar> entries() const;
  std::size_t nonzero_count() const;

  /// (this o b)^{kl}_{ij} = sum_{mn} this^{kl}_{mn} b^{mn}_{ij}.
  FourTensor compose(const FourTensor& b) const;
  FourTensor scaled(const Scalar& c) const;
  Scalar trace() const;

  FourTensor& operator+=(const FourTensor& o);
  FourTensor& operator-=(const FourTensor& o);
  friend FourTensor operator+(FourTensor a, const FourTensor& b) { return a += b; }
  friend FourTensor operator-(FourTensor a, const FourTensor& b) { return a -= b; }
  bool operator==(const FourTensor& o) const;
  bool operator!=(const FourTensor& o) const { return !(*this == o); }

 private:
  int n_;
  std::vector<std::vector<Entry>> cols_;
  std::size_t index(int i, int j) const { return static_cast<std::size_t>((i - 1) * n_ + (j - 1)); }
};

enum class TensorKind { C, I, K, Rhat, RhatInv };

std::variant<Metric, FourTensor> build_structure_tensor(TensorKind kind, int n);

/// Everything derived from N, built once per dimension and shared.
struct StructureTensors {
  int n;
  Metric C;
  FourTensor I;
  FourTensor K;
  FourTensor R;
  FourTensor Rinv;
  Scalar tau;  // sum_i q^{-2 rho_i}
};

/// Cached, thread-safe accessor.
const StructureTensors& structure(int n);

struct Spectrum {
  /// Minimal polynomial of Rhat, lowest coefficient first, monic.
  std::vector<Scalar> minimal_polynomial;
  Scalar lambda_plus;
  Scalar lambda_minus;
  Scalar lambda_zero;
  FourTensor P_plus;
  FourTensor P_minus;
  FourTensor P_zero;
};

/// Eigenvalues are found from the minimal polynomial of Rhat; the
/// projectors by Lagrange interpolation.  Throws SpectralError if the
/// minimal polynomial does not split into three distinct roots of the form
/// +-q^{k/2}.
Spectrum spectral_projectors(int n);

/// Vectors in V (x) V (x) V, used for braid identities.
using TripleVector = std::map<std::array<int, 3>, Scalar>;

/// Applies A to tensor factors 1,2 (slot = 0) or 2,3 (slot = 1).
TripleVector apply_pair(const FourTensor& a, int slot, const TripleVector& v);

/// (A (x) id)(id (x) A)(A (x) id) == (id (x) A)(A (x) id)(id (x) A) on every
/// basis triple.
bool braid_relation_holds(const FourTensor& a);

}  // namespace esq
