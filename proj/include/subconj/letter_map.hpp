#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subconj/error.hpp"
#include "subconj/word.hpp"

namespace subconj {

/// A surjective letter-to-letter map stored as a set partition of the source
/// alphabet. Target letters are numbered by the order of the classes' smallest
/// members, so images() is a restricted growth string.
class LetterMap {
 public:
  LetterMap() = default;

  static LetterMap identity(std::size_t n) {
    std::vector<Letter> images(n);
    for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<Letter>(i);
    return LetterMap(std::move(images), n);
  }

  /// Any labelling of the source letters; labels are renumbered canonically.
  static LetterMap from_labels(std::span<const std::size_t> labels) {
    std::vector<std::size_t> renumber;
    std::vector<Letter> images;
    images.reserve(labels.size());
    for (auto label : labels) {
      std::size_t k = 0;
      while (k < renumber.size() && renumber[k] != label) ++k;
      if (k == renumber.size()) renumber.push_back(label);
      images.push_back(static_cast<Letter>(k));
    }
    return LetterMap(std::move(images), renumber.size());
  }

  static LetterMap from_labels(std::span<const Letter> labels) {
    std::vector<std::size_t> wide(labels.begin(), labels.end());
    return from_labels(std::span<const std::size_t>(wide));
  }

  static LetterMap from_classes(std::size_t n, const std::vector<std::vector<Letter>>& classes) {
    std::vector<std::size_t> labels(n, n);
    for (std::size_t k = 0; k < classes.size(); ++k) {
      if (classes[k].empty()) throw_invalid("partition classes must be nonempty");
      for (Letter a : classes[k]) {
        if (a >= n) throw_invalid("partition mentions a letter outside the alphabet");
        if (labels[a] != n) throw_invalid("partition classes must be disjoint");
        labels[a] = k;
      }
    }
    for (auto l : labels) {
      if (l == n) throw_invalid("partition must cover the alphabet");
    }
    return from_labels(std::span<const std::size_t>(labels));
  }

  std::size_t source_size() const noexcept { return images_.size(); }
  std::size_t target_size() const noexcept { return target_size_; }
  const std::vector<Letter>& images() const noexcept { return images_; }
  Letter operator()(Letter a) const { return images_.at(a); }

  bool is_identity() const { return target_size_ == images_.size(); }

  Word apply(std::span<const Letter> w) const {
    Word out;
    out.reserve(w.size());
    for (Letter a : w) out.push_back(images_.at(a));
    return out;
  }

  std::vector<std::vector<Letter>> classes() const {
    std::vector<std::vector<Letter>> out(target_size_);
    for (std::size_t a = 0; a < images_.size(); ++a) out[images_[a]].push_back(static_cast<Letter>(a));
    return out;
  }

  /// Smallest member of class k.
  Letter representative(Letter k) const {
    for (std::size_t a = 0; a < images_.size(); ++a) {
      if (images_[a] == k) return static_cast<Letter>(a);
    }
    throw_invalid("no such class");
  }

  /// Target letters named after the smallest member of their class.
  Alphabet target_alphabet(const Alphabet& source) const {
    std::vector<std::string> names;
    names.reserve(target_size_);
    for (std::size_t k = 0; k < target_size_; ++k) {
      names.push_back(source.name(representative(static_cast<Letter>(k))));
    }
    return Alphabet(std::move(names));
  }

  /// Composition other ∘ this.
  LetterMap then(const LetterMap& other) const {
    if (other.source_size() != target_size_) throw_invalid("letter maps do not compose");
    std::vector<Letter> labels;
    for (Letter a : images_) labels.push_back(other(a));
    return from_labels(std::span<const Letter>(labels));
  }

  bool operator==(const LetterMap&) const = default;
  auto operator<=>(const LetterMap& other) const { return images_ <=> other.images_; }

 private:
  LetterMap(std::vector<Letter> images, std::size_t k) : images_(std::move(images)), target_size_(k) {}

  std::vector<Letter> images_;
  std::size_t target_size_ = 0;
};

/// "{1,2,3}{4,5,6}" using the source symbol names.
inline std::string format_partition(const LetterMap& map, const Alphabet& source) {
  std::string out;
  for (const auto& cls : map.classes()) {
    out += '{';
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (i) out += ',';
      out += source.name(cls[i]);
    }
    out += '}';
  }
  return out;
}

inline LetterMap parse_partition(std::string_view text, const Alphabet& source) {
  std::vector<std::vector<Letter>> classes;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip_space();
  while (i < text.size()) {
    if (text[i] != '{') throw ParseError(1, i + 1, std::string(1, text[i]), "expected '{'");
    ++i;
    std::vector<Letter> cls;
    while (true) {
      skip_space();
      auto start = i;
      while (i < text.size() && text[i] != ',' && text[i] != '}' && text[i] != ' ') ++i;
      auto name = text.substr(start, i - start);
      if (name.empty()) throw ParseError(1, start + 1, "", "expected a symbol");
      auto a = source.find(name);
      if (!a) throw ParseError(1, start + 1, std::string(name), "unknown symbol");
      cls.push_back(*a);
      skip_space();
      if (i >= text.size()) throw ParseError(1, i + 1, "", "unterminated class");
      if (text[i] == '}') {
        ++i;
        break;
      }
      if (text[i] != ',') throw ParseError(1, i + 1, std::string(1, text[i]), "expected ','");
      ++i;
    }
    classes.push_back(std::move(cls));
    skip_space();
  }
  return LetterMap::from_classes(source.size(), classes);
}

}  // namespace subconj
