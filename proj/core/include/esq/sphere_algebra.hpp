#pragma once

// The quantum Euclidean sphere algebra: generators x_1..x_N, the quadratic
// relations Rinv xx = q^{-1} xx + c K xx and the sphere relation
// C^{kl} x_k x_l = 1.
//
// Two reduction engines are provided.  ReductionTable is plain linear algebra
// on the relation ideal truncated at a fixed degree.  SphereAlgebra extracts
// the degree-2 rewriting rules from that table, certifies that they are
// confluent by resolving every overlap, and then computes normal forms at any
// degree up to a configurable limit by memoised rewriting.

#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "esq/lincomb.hpp"
#include "esq/structure_tensors.hpp"
#include "esq/word.hpp"

namespace esq {

using AlgebraElement = LinComb<Word>;

/// Single word with coefficient 1.
inline AlgebraElement monomial(const Word& w) { return AlgebraElement(w, Scalar(1L)); }
inline AlgebraElement generator(int i) { return monomial(Word::letter(i)); }
/// Concatenation product in the free algebra (no reduction).
AlgebraElement free_product(const AlgebraElement& a, const AlgebraElement& b);
int degree(const AlgebraElement& e);

/// Row-reduced basis of the relation ideal up to a fixed degree.
class ReductionTable {
 public:
  ReductionTable(int n, const std::vector<AlgebraElement>& relations, int max_degree);

  int max_degree() const { return max_degree_; }
  bool is_pivot(const Word& w) const { return rows_.count(w) != 0; }
  /// Pivot rows, each monic in its leading word.
  const std::map<Word, AlgebraElement>& rows() const { return rows_; }
  /// Unique remainder modulo the truncated ideal.  Throws DegreeExceeded.
  AlgebraElement reduce(const AlgebraElement& e) const;
  /// Number of non-pivot words of length k.
  long dimension(int k) const;

 private:
  int n_;
  int max_degree_;
  std::map<Word, AlgebraElement> rows_;
  void insert(AlgebraElement row);
};

struct AlgebraOptions {
  /// Degree of the linear-algebra table used as the reference engine.
  int table_degree = 3;
  /// Highest word length normal forms are computed for.
  int degree_limit = 14;
};

class SphereAlgebra {
 public:
  explicit SphereAlgebra(int n, AlgebraOptions options = {});

  int dimension() const { return n_; }
  const StructureTensors& tensors() const { return st_; }
  const AlgebraOptions& options() const { return options_; }
  int degree_limit() const { return degree_limit_; }

  /// The N^2 quadratic relations followed by the sphere relation.
  const std::vector<AlgebraElement>& defining_relations() const { return relations_; }
  /// Element C^{kl} x_k x_l.
  AlgebraElement sphere_element() const;

  const ReductionTable& table() const { return *table_; }
  /// Degree-2 rewriting rules: leading word -> tail.
  const std::map<Word, AlgebraElement>& rules() const { return rules_; }
  /// True if every overlap of the rules resolves (so rewriting is confluent
  /// and its normal forms are valid at every degree up to the limit).
  bool confluent() const { return confluent_; }

  bool is_normal_word(const Word& w) const;
  bool is_normal(const AlgebraElement& e) const;

  AlgebraElement normal_form(const AlgebraElement& e) const;
  AlgebraElement normal_form(const Word& w) const;
  /// Normal form of u * x_a for a normal word u.  Memoised.
  const AlgebraElement& normal_word_times_letter(const Word& u, int a) const;
  /// Normal form of u * v for normal words u, v.  Memoised.
  const AlgebraElement& normal_word_product(const Word& u, const Word& v) const;
  AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) const;
  /// normal_form(a) * x_i
  AlgebraElement times_letter(const AlgebraElement& a, int i) const;

  AlgebraElement star(const AlgebraElement& e) const;

  /// Number of normal words of length exactly k.
  long graded_dimension(int k) const;
  std::vector<Word> basis_words(int k) const;

 private:
  int n_;
  AlgebraOptions options_;
  int degree_limit_;
  const StructureTensors& st_;
  std::vector<AlgebraElement> relations_;
  std::unique_ptr<ReductionTable> table_;
  std::map<Word, AlgebraElement> rules_;
  std::vector<std::vector<bool>> leading_pair_;
  bool confluent_ = false;
  bool rewriting_ = false;

  mutable std::mutex cache_mutex_;
  mutable std::vector<std::unordered_map<std::uint64_t, std::unique_ptr<AlgebraElement>>> letter_cache_;
  mutable std::map<std::pair<Word, Word>, std::unique_ptr<AlgebraElement>> product_cache_;

  void build_relations();
  bool certify_overlaps() const;
  AlgebraElement compute_word_times_letter(const Word& u, int a) const;
};

/// Classical flat dimension C(N+k-1,k) - C(N+k-3,k-2).
long classical_dimension(int n, int k);

/// "2*x_1*x_3 - q^-1*x_2 + 1" style text.
std::string to_string(const AlgebraElement& e);

}  // namespace esq
