#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "subconj/core.hpp"
#include "subconj/error.hpp"
#include "subconj/letter_map.hpp"
#include "subconj/substitution.hpp"

namespace subconj {

/// Lexicographically ordered N-factors of a primitive substitution, coded 1..|blocks|.
class BlockCoding {
 public:
  BlockCoding(Alphabet base, std::size_t n, WordSet blocks)
      : base_(std::move(base)), n_(n), blocks_(std::move(blocks)) {
    normalize(blocks_);
  }

  const Alphabet& base_alphabet() const noexcept { return base_; }
  std::size_t block_length() const noexcept { return n_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  const WordSet& blocks() const noexcept { return blocks_; }
  const Word& word_of(Letter code) const { return blocks_.at(code); }

  std::optional<Letter> code_of(std::span<const Letter> w) const {
    auto it = std::lower_bound(blocks_.begin(), blocks_.end(), w, [](const Word& a, std::span<const Letter> b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    if (it == blocks_.end() || !std::equal(it->begin(), it->end(), w.begin(), w.end())) return std::nullopt;
    return static_cast<Letter>(it - blocks_.begin());
  }

  Alphabet coded_alphabet() const { return Alphabet::canonical(size()); }

  /// pi_j([a_0..a_{N-1}]) = a_j; j = 0 is the usual inverse of the block map.
  LetterMap position_map(std::size_t j = 0) const {
    if (j >= n_) throw_invalid("block position out of range");
    std::vector<std::size_t> labels;
    for (const auto& b : blocks_) labels.push_back(b[j]);
    std::vector<std::vector<Letter>> classes(base_.size());
    for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]].push_back(static_cast<Letter>(i));
    classes.erase(std::remove_if(classes.begin(), classes.end(), [](const auto& c) { return c.empty(); }),
                  classes.end());
    return LetterMap::from_classes(size(), classes);
  }

 private:
  Alphabet base_;
  std::size_t n_;
  WordSet blocks_;
};

inline BlockCoding block_coding(const Substitution& s, std::size_t n) {
  if (n == 0) throw_invalid("block length must be positive");
  return BlockCoding(s.alphabet(), n, language(s, n));
}

inline nlohmann::ordered_json to_json(const BlockCoding& coding) {
  auto table = nlohmann::ordered_json::array();
  auto coded = coding.coded_alphabet();
  for (std::size_t i = 0; i < coding.size(); ++i) {
    nlohmann::ordered_json row;
    row["code"] = coded.name(static_cast<Letter>(i));
    row["word"] = format_word(coding.word_of(static_cast<Letter>(i)), coding.base_alphabet());
    table.push_back(std::move(row));
  }
  return table;
}

/// Largest admissible lag (L-1)(N-1).
constexpr std::size_t max_lag(std::size_t length, std::size_t block_length) {
  return (length - 1) * (block_length - 1);
}

/// Lag of H_{N,M} ∘ H_{N,M'}, read as the substitution on s∘s.
constexpr std::size_t compose_lags(std::size_t lag, std::size_t lag_prime, std::size_t length) {
  return lag_prime * length + lag;
}

/// Lag of the n-th power of H_{N,M}: M + ML + ... + ML^{n-1}.
constexpr std::size_t iterated_lag(std::size_t lag, std::size_t length, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total = compose_lags(lag, total, length);
  return total;
}

/// The N-block substitution with lag M: the code of [a_0..a_{N-1}] is sent to
/// the L consecutive N-windows of s(a_0..a_{N-1}) starting at offset M.
inline Substitution hat_substitution(const Substitution& s, const BlockCoding& coding, std::size_t lag) {
  const auto L = s.length();
  const auto N = coding.block_length();
  if (lag > max_lag(L, N)) throw_invalid("lag out of range 0..(L-1)(N-1)");
  std::vector<Word> images;
  images.reserve(coding.size());
  for (const auto& block : coding.blocks()) {
    auto v = substitute(s, block);
    Word img;
    img.reserve(L);
    for (std::size_t i = 0; i < L; ++i) {
      auto code = coding.code_of(std::span<const Letter>(v).subspan(lag + i, N));
      if (!code) throw_invalid("window outside the language; coding does not match the substitution");
      img.push_back(*code);
    }
    images.push_back(std::move(img));
  }
  return Substitution(coding.coded_alphabet(), std::move(images));
}

inline Substitution hat_substitution(const Substitution& s, std::size_t n, std::size_t lag) {
  if (n == 0) throw_invalid("block length must be positive");
  if (lag > max_lag(s.length(), n)) throw_invalid("lag out of range 0..(L-1)(N-1)");
  return hat_substitution(s, block_coding(s, n), lag);
}

/// Records that a generator is the N-block substitution of base with some lag;
/// the whole lag family is then available to the factor verifier.
struct BlockPresentation {
  Substitution base;
  std::size_t block_length = 1;
};

/// The system pi(X_generator).
struct ProjectedSystem {
  Substitution generator;
  LetterMap projection;
  std::optional<BlockPresentation> presentation;

  ProjectedSystem(Substitution gen, LetterMap pi, std::optional<BlockPresentation> pres = {})
      : generator(std::move(gen)), projection(std::move(pi)), presentation(std::move(pres)) {
    if (projection.source_size() != generator.size()) {
      throw_invalid("projection source does not match the generator alphabet");
    }
  }

  Alphabet target_alphabet() const { return projection.target_alphabet(generator.alphabet()); }
};

/// pi(X^{[N]}) generated by the N-block substitution of base with the given lag.
inline ProjectedSystem block_system(const Substitution& base, std::size_t n,
                                    std::optional<LetterMap> projection = {}, std::size_t lag = 0) {
  auto gen = hat_substitution(base, n, lag);
  auto pi = projection.value_or(LetterMap::identity(gen.size()));
  return ProjectedSystem(std::move(gen), std::move(pi), BlockPresentation{base, n});
}

inline Word project_word(const ProjectedSystem& p, std::span<const Letter> w) {
  for (Letter a : w) {
    if (a >= p.generator.size()) throw_invalid("letter outside the generator alphabet");
  }
  return p.projection.apply(w);
}

/// Exact n-factors of pi(X_generator).
inline WordSet projected_language(Language& generator_language, const LetterMap& pi, std::size_t n) {
  WordSet out;
  for (const auto& w : generator_language.of_length(n)) out.push_back(pi.apply(w));
  normalize(out);
  return out;
}

}  // namespace subconj
