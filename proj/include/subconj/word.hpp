#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "subconj/error.hpp"

namespace subconj {

/// Canonical letters are 0-based internally and print 1-based.
using Letter = std::uint16_t;
using Word = std::vector<Letter>;

/// Sorted, duplicate-free collection of words.
using WordSet = std::vector<Word>;

inline void normalize(WordSet& words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

inline bool contains(const WordSet& words, std::span<const Letter> w) {
  return std::binary_search(words.begin(), words.end(), w,
                            [](const auto& a, const auto& b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                  b.end());
                            });
}

namespace detail {

// Rank order used when sorting parsed symbol tokens.
inline constexpr std::string_view kSymbolOrder =
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

// Names of canonical letters 1..61.
inline constexpr std::string_view kCanonicalSymbols =
    "123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

inline std::size_t symbol_rank(char c) {
  auto pos = kSymbolOrder.find(c);
  return pos == std::string_view::npos ? kSymbolOrder.size() + static_cast<unsigned char>(c) : pos;
}

inline bool is_symbol(char c) { return kSymbolOrder.find(c) != std::string_view::npos; }

}  // namespace detail

/// Ordered set of symbol names; letter i is printed as names()[i].
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw_invalid("alphabet must contain at least one symbol");
    if (names_.size() > std::size_t{1} << (8 * sizeof(Letter))) {
      throw_unsupported("alphabet too large");
    }
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
      if (n.empty()) throw_invalid("empty symbol name");
      if (!seen.insert(n).second) throw_invalid("duplicate symbol '" + n + "'");
    }
  }

  /// Letters named 1..9, a..z, A..Z; beyond 61 letters names are bracketed indices.
  static Alphabet canonical(std::size_t size) {
    std::vector<std::string> names;
    names.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      if (i < detail::kCanonicalSymbols.size()) {
        names.emplace_back(1, detail::kCanonicalSymbols[i]);
      } else {
        names.push_back("[" + std::to_string(i + 1) + "]");
      }
    }
    return Alphabet(std::move(names));
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(Letter a) const { return names_.at(a); }

  std::optional<Letter> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return static_cast<Letter>(i);
    }
    return std::nullopt;
  }

  bool is_canonical() const { return *this == canonical(size()); }

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
};

inline std::string format_word(std::span<const Letter> w, const Alphabet& alphabet) {
  std::string out;
  for (Letter a : w) out += alphabet.name(a);
  return out;
}

/// Parses a word written with single-character symbol names.
inline Word parse_word(std::string_view text, const Alphabet& alphabet) {
  Word w;
  w.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto a = alphabet.find(text.substr(i, 1));
    if (!a) throw ParseError(1, i + 1, std::string(1, text[i]), "undeclared symbol");
    w.push_back(*a);
  }
  return w;
}

}  // namespace subconj
