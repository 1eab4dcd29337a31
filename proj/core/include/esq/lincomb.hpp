#pragma once

// Sparse linear combinations over an ordered key type.

#include <map>
#include <utility>

#include "esq/scalar.hpp"

namespace esq {

template <class Key, class Coeff = Scalar>
class LinComb {
 public:
  using Map = std::map<Key, Coeff>;
  using const_iterator = typename Map::const_iterator;

  LinComb() = default;
  LinComb(const Key& key, const Coeff& c) { add(key, c); }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }

  Coeff coefficient(const Key& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Coeff() : it->second;
  }

  void add(const Key& key, const Coeff& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  /// this += c * o
  template <class Factor>
  void add_scaled(const LinComb& o, const Factor& c) {
    if (c.is_zero()) return;
    for (const auto& [key, v] : o.terms_) add(key, v * c);
  }

  void erase(const Key& key) { terms_.erase(key); }
  void clear() { terms_.clear(); }

  LinComb operator-() const {
    LinComb out = *this;
    for (auto& [k, v] : out.terms_) v = -v;
    return out;
  }
  LinComb& operator+=(const LinComb& o) {
    for (const auto& [k, v] : o.terms_) add(k, v);
    return *this;
  }
  LinComb& operator-=(const LinComb& o) {
    for (const auto& [k, v] : o.terms_) add(k, -v);
    return *this;
  }
  LinComb& operator*=(const Scalar& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
  }
  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend LinComb operator*(LinComb a, const Scalar& c) { return a *= c; }
  friend LinComb operator*(const Scalar& c, LinComb a) { return a *= c; }

  bool operator==(const LinComb& o) const { return terms_ == o.terms_; }
  bool operator!=(const LinComb& o) const { return !(*this == o); }

 private:
  Map terms_;
};

}  // namespace esq
