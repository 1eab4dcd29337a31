#pragma once

// Words in the generators, packed into one 64-bit integer.
//
// Letters are 4-bit values 1..15 stored from the most significant end and
// the length sits in the top nibble, so comparing the packed codes is
// exactly the degree-lexicographic order with x_1 < x_2 < ... < x_N.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace esq {

class Word {
 public:
  static constexpr int kMaxLength = 15;

  Word() = default;
  static Word letter(int a);
  static Word from_letters(const std::vector<int>& letters);

  int length() const { return static_cast<int>(code_ >> 60); }
  bool empty() const { return code_ == 0; }
  /// 0-based letter access.
  int at(int pos) const { return static_cast<int>((code_ >> (56 - 4 * pos)) & 0xF); }
  int first() const { return at(0); }
  int last() const { return at(length() - 1); }

  /// Throws DegreeExceeded beyond kMaxLength letters.
  Word append(int a) const;
  Word concat(const Word& o) const;
  Word prefix(int len) const;
  Word suffix(int from) const;
  Word drop_last() const { return prefix(length() - 1); }
  std::vector<int> letters() const;

  std::uint64_t code() const { return code_; }
  static Word from_code(std::uint64_t code) {
    Word w;
    w.code_ = code;
    return w;
  }

  /// "x_1*x_3" style; "1" for the empty word.
  std::string to_string(const std::string& symbol = "x") const;

  friend bool operator==(const Word& a, const Word& b) { return a.code_ == b.code_; }
  friend bool operator!=(const Word& a, const Word& b) { return a.code_ != b.code_; }
  friend bool operator<(const Word& a, const Word& b) { return a.code_ < b.code_; }
  friend bool operator>(const Word& a, const Word& b) { return a.code_ > b.code_; }
  friend bool operator<=(const Word& a, const Word& b) { return a.code_ <= b.code_; }
  friend bool operator>=(const Word& a, const Word& b) { return a.code_ >= b.code_; }

 private:
  std::uint64_t code_ = 0;
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return std::hash<std::uint64_t>()(w.code()); }
};

/// Left-module key: word times basis element i.
struct FormKey {
  Word word;
  int index;
  friend bool operator==(const FormKey& a, const FormKey& b) { return a.word == b.word && a.index == b.index; }
  friend bool operator<(const FormKey& a, const FormKey& b) {
    if (a.word != b.word) return a.word < b.word;
    return a.index < b.index;
  }
};

/// Word times basis pair (i, j).
struct PairKey {
  Word word;
  int i;
  int j;
  friend bool operator==(const PairKey& a, const PairKey& b) {
    return a.word == b.word && a.i == b.i && a.j == b.j;
  }
  friend bool operator<(const PairKey& a, const PairKey& b) {
    if (a.word != b.word) return a.word < b.word;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  }
};

/// Word times an ordered product of basis one-forms, stored as a Word.
struct WedgeKey {
  Word word;
  Word indices;
  friend bool operator==(const WedgeKey& a, const WedgeKey& b) {
    return a.word == b.word && a.indices == b.indices;
  }
  friend bool operator<(const WedgeKey& a, const WedgeKey& b) {
    if (a.word != b.word) return a.word < b.word;
    return a.indices < b.indices;
  }
};

}  // namespace esq
