#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subconj/error.hpp"
#include "subconj/word.hpp"

namespace subconj {

/// A constant-length substitution: letter a maps to images()[a], all of length().
class Substitution {
 public:
  Substitution() = default;

  Substitution(Alphabet alphabet, std::vector<Word> images)
      : alphabet_(std::move(alphabet)), images_(std::move(images)) {
    if (images_.size() != alphabet_.size()) {
      throw_invalid("substitution needs one image per letter");
    }
    length_ = images_.front().size();
    if (length_ == 0) throw_invalid("images must be nonempty");
    for (const auto& w : images_) {
      if (w.size() != length_) throw_invalid("substitution is not of constant length");
      for (Letter a : w) {
        if (a >= images_.size()) throw_invalid("image letter outside the alphabet");
      }
    }
  }

  /// Substitution over the canonical alphabet 1..c.
  static Substitution canonical(std::vector<Word> images) {
    auto c = images.size();
    return Substitution(Alphabet::canonical(c), std::move(images));
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return images_.size(); }
  std::size_t length() const noexcept { return length_; }
  const Word& image(Letter a) const { return images_.at(a); }
  const std::vector<Word>& images() const noexcept { return images_; }

  /// Concatenation image(1)...image(c).
  Word characteristic_word() const {
    Word w;
    w.reserve(size() * length());
    for (const auto& img : images_) w.insert(w.end(), img.begin(), img.end());
    return w;
  }

  Substitution relabeled(Alphabet names) const { return Substitution(std::move(names), images_); }
  Substitution canonicalized() const { return relabeled(Alphabet::canonical(size())); }

  bool same_images(const Substitution& other) const { return images_ == other.images_; }

  bool operator==(const Substitution&) const = default;

 private:
  Alphabet alphabet_;
  std::size_t length_ = 0;
  std::vector<Word> images_;
};

inline Word substitute(const Substitution& s, std::span<const Letter> w) {
  Word out;
  out.reserve(w.size() * s.length());
  for (Letter a : w) {
    if (a >= s.size()) throw_invalid("letter outside the alphabet of the substitution");
    const auto& img = s.image(a);
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

/// outer ∘ inner: each image of inner rewritten by outer. Alphabets must agree in size.
inline Substitution compose(const Substitution& outer, const Substitution& inner) {
  if (outer.size() != inner.size()) throw_invalid("composition needs equal alphabets");
  std::vector<Word> images;
  images.reserve(inner.size());
  for (const auto& w : inner.images()) images.push_back(substitute(outer, w));
  return Substitution(inner.alphabet(), std::move(images));
}

inline Substitution power(const Substitution& s, std::size_t n) {
  if (n == 0) throw_invalid("power requires n >= 1");
  std::size_t len = s.length();
  for (std::size_t i = 1; i < n; ++i) {
    if (len > (std::size_t{1} << 26) / s.length()) throw_unsupported("power image too long");
    len *= s.length();
  }
  Substitution out = s;
  for (std::size_t i = 1; i < n; ++i) out = compose(s, out);
  return out;
}

/// entries(a, b) = occurrences of letter a in the image of b.
class IncidenceMatrix {
 public:
  explicit IncidenceMatrix(std::size_t c) : c_(c), entries_(c * c, 0) {}

  explicit IncidenceMatrix(const Substitution& s) : IncidenceMatrix(s.size()) {
    for (std::size_t b = 0; b < c_; ++b) {
      for (Letter a : s.image(static_cast<Letter>(b))) ++at(a, b);
    }
  }

  std::size_t size() const noexcept { return c_; }
  std::uint64_t& at(std::size_t a, std::size_t b) { return entries_[a * c_ + b]; }
  std::uint64_t at(std::size_t a, std::size_t b) const { return entries_[a * c_ + b]; }

  std::uint64_t column_sum(std::size_t b) const {
    std::uint64_t sum = 0;
    for (std::size_t a = 0; a < c_; ++a) sum += at(a, b);
    return sum;
  }

  bool strictly_positive() const {
    for (auto e : entries_) {
      if (e == 0) return false;
    }
    return true;
  }

  IncidenceMatrix operator*(const IncidenceMatrix& rhs) const {
    IncidenceMatrix out(c_);
    for (std::size_t i = 0; i < c_; ++i) {
      for (std::size_t k = 0; k < c_; ++k) {
        if (at(i, k) == 0) continue;
        for (std::size_t j = 0; j < c_; ++j) out.at(i, j) += at(i, k) * rhs.at(k, j);
      }
    }
    return out;
  }

  /// Zero/one pattern of the matrix.
  IncidenceMatrix support() const {
    IncidenceMatrix out(c_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] != 0;
    return out;
  }

  bool operator==(const IncidenceMatrix&) const = default;

 private:
  std::size_t c_;
  std::vector<std::uint64_t> entries_;
};

// Text format: rules "X->W" separated by commas and/or whitespace, X a single
// alphanumeric symbol, W a string of declared symbols.

namespace detail {

struct RuleToken {
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<RuleToken> split_rules(std::string_view text) {
  std::vector<RuleToken> rules;
  std::size_t line = 1, column = 1;
  RuleToken current{"", 0, 0};
  auto flush = [&] {
    if (!current.text.empty()) rules.push_back(current);
    current = RuleToken{"", 0, 0};
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == ';') {
      flush();
    } else {
      if (current.text.empty()) {
        current.line = line;
        current.column = column;
      }
      current.text += ch;
    }
    if (ch == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  flush();
  return rules;
}

}  // namespace detail

/// Parses e.g. "1->1233,2->2313,3->3123". Letters are ordered by symbol rank
/// (0-9, a-z, A-Z), so rule order does not matter.
inline Substitution parse_substitution(std::string_view text) {
  auto rules = detail::split_rules(text);
  if (rules.empty()) throw ParseError(1, 1, "", "no rules given");

  struct Rule {
    char lhs;
    std::string rhs;
    const detail::RuleToken* token;
  };
  std::vector<Rule> parsed;
  for (const auto& r : rules) {
    auto arrow = r.text.find("->");
    if (arrow == std::string::npos) {
      throw ParseError(r.line, r.column, r.text, "expected a rule of the form X->W");
    }
    if (arrow != 1 || !detail::is_symbol(r.text[0])) {
      throw ParseError(r.line, r.column, r.text.substr(0, arrow),
                       "left-hand side must be a single alphanumeric symbol");
    }
    std::string rhs = r.text.substr(arrow + 2);
    if (rhs.empty()) throw ParseError(r.line, r.column + arrow + 2, r.text, "empty image");
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      if (!detail::is_symbol(rhs[i])) {
        throw ParseError(r.line, r.column + arrow + 2 + i, std::string(1, rhs[i]),
                         "invalid symbol in image");
      }
    }
    for (const auto& p : parsed) {
      if (p.lhs == r.text[0]) {
        throw ParseError(r.line, r.column, std::string(1, r.text[0]), "duplicate left-hand side");
      }
    }
    parsed.push_back(Rule{r.text[0], std::move(rhs), &r});
  }

  std::size_t length = parsed.front().rhs.size();
  for (const auto& p : parsed) {
    if (p.rhs.size() != length) {
      throw ParseError(p.token->line, p.token->column, p.token->text,
                       "image length " + std::to_string(p.rhs.size()) + " differs from " +
                           std::to_string(length) + " (not constant length)");
    }
  }

  std::sort(parsed.begin(), parsed.end(), [](const Rule& a, const Rule& b) {
    return detail::symbol_rank(a.lhs) < detail::symbol_rank(b.lhs);
  });
  std::vector<std::string> names;
  for (const auto& p : parsed) names.emplace_back(1, p.lhs);
  Alphabet alphabet(names);

  std::vector<Word> images;
  for (const auto& p : parsed) {
    Word w;
    for (std::size_t i = 0; i < p.rhs.size(); ++i) {
      auto a = alphabet.find(std::string_view(&p.rhs[i], 1));
      if (!a) {
        throw ParseError(p.token->line, p.token->column + 3 + i, std::string(1, p.rhs[i]),
                         "image uses an undeclared symbol");
      }
      w.push_back(*a);
    }
    images.push_back(std::move(w));
  }
  return Substitution(std::move(alphabet), std::move(images));
}

inline std::string to_string(const Substitution& s) {
  std::string out;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (a) out += ',';
    out += s.alphabet().name(static_cast<Letter>(a));
    out += "->";
    out += format_word(s.image(static_cast<Letter>(a)), s.alphabet());
  }
  return out;
}

}  // namespace subconj
