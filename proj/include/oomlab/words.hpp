#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace oomlab {

using Symbol = std::size_t;
using Word = std::vector<Symbol>;

/// Ordered, duplicate-free list of symbol labels. Symbols are referred to by index.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Symbol s) const;

  /// Throws UnknownSymbolError for labels not in the alphabet.
  Symbol index_of(std::string_view label) const;

  /// Parses a word. Single-character alphabets are read character by character
  /// ("101"); otherwise labels are separated by spaces or commas.
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  /// Throws UnknownSymbolError if any symbol index is out of range.
  void check(const Word& w) const;

  bool operator==(const Alphabet&) const = default;

 private:
  bool single_char() const;
  std::vector<std::string> labels_;
};

/// Number of words over k symbols with length in [min_len, max_len].
/// Saturates at SIZE_MAX instead of overflowing.
std::size_t count_words(std::size_t k, std::size_t min_len, std::size_t max_len);

/// Words ordered by length, then lexicographically by symbol index.
std::vector<Word> enumerate_words(std::size_t k, std::size_t min_len, std::size_t max_len);

Word concat(const Word& a, const Word& b);

}  // namespace oomlab
