#include "oomlab/words.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "oomlab/errors.hpp"

namespace oomlab {

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("alphabet must not be empty");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw ValidationError("alphabet labels must be non-empty");
    if (!seen.insert(l).second) throw ValidationError("duplicate alphabet label '" + l + "'");
  }
}

const std::string& Alphabet::label(Symbol s) const {
  if (s >= labels_.size()) throw UnknownSymbolError("symbol index " + std::to_string(s) + " out of range");
  return labels_[s];
}

Symbol Alphabet::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw UnknownSymbolError("unknown symbol '" + std::string(label) + "'");
  return static_cast<Symbol>(it - labels_.begin());
}

bool Alphabet::single_char() const {
  return std::all_of(labels_.begin(), labels_.end(), [](const std::string& l) { return l.size() == 1; });
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  if (single_char()) {
    for (char c : text) {
      if (c == ' ' || c == ',') continue;
      w.push_back(index_of(std::string_view(&c, 1)));
    }
    return w;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != ',') ++j;
    if (j > i) w.push_back(index_of(text.substr(i, j - i)));
    i = j;
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  const bool compact = single_char();
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += ' ';
    out += label(w[i]);
  }
  return out;
}

void Alphabet::check(const Word& w) const {
  for (Symbol s : w) {
    if (s >= labels_.size()) throw UnknownSymbolError("symbol index " + std::to_string(s) + " out of range");
  }
}

std::size_t count_words(std::size_t k, std::size_t min_len, std::size_t max_len) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t level = 1;
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) {
      if (total > kMax - level) return kMax;
      total += level;
    }
    if (len == max_len) break;
    if (k != 0 && level > kMax / k) {
      // every further level saturates
      return len + 1 <= max_len ? kMax : total;
    }
    level *= k;
  }
  return total;
}

std::vector<Word> enumerate_words(std::size_t k, std::size_t min_len, std::size_t max_len) {
  std::vector<Word> out;
  if (min_len > max_len) return out;
  out.reserve(count_words(k, min_len, max_len));
  std::vector<Word> level{Word{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) out.insert(out.end(), level.begin(), level.end());
    if (len == max_len) break;
    std::vector<Word> next;
    next.reserve(level.size() * k);
    for (const auto& w : level) {
      for (Symbol s = 0; s < k; ++s) {
        Word e = w;
        e.push_back(s);
        next.push_back(std::move(e));
      }
    }
    level = std::move(next);
  }
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace oomlab
