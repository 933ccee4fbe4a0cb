#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subconj/error.hpp"
#include "subconj/letter_map.hpp"
#include "subconj/substitution.hpp"
#include "subconj/word.hpp"

namespace subconj {

/// Some power of the incidence matrix is strictly positive. The search stops at
/// the Wielandt bound (c-1)^2+1, past which a primitive matrix is already positive.
inline bool is_primitive(const Substitution& s) {
  const auto c = s.size();
  const auto base = IncidenceMatrix(s).support();
  auto current = base;
  const std::size_t bound = (c - 1) * (c - 1) + 1;
  for (std::size_t n = 1; n <= bound; ++n) {
    if (current.strictly_positive()) return true;
    current = (current * base).support();
  }
  return false;
}

inline bool is_injective(const Substitution& s) {
  auto images = s.images();
  std::sort(images.begin(), images.end());
  return std::adjacent_find(images.begin(), images.end()) == images.end();
}

struct Injectivization {
  Substitution substitution;  // letters named after their surviving representatives
  LetterMap map;              // source letter -> reduced letter
  std::size_t rounds = 0;     // merge rounds performed
};

/// Repeatedly merges letters with equal images into the smallest letter of
/// each class until the substitution is injective.
inline Injectivization injectivize(const Substitution& s) {
  const auto c = s.size();
  std::vector<Letter> rep(c);
  for (std::size_t a = 0; a < c; ++a) rep[a] = static_cast<Letter>(a);
  std::vector<bool> alive(c, true);
  std::vector<Word> images = s.images();
  std::size_t rounds = 0;

  while (true) {
    std::vector<Letter> merge_to(c);
    bool merged = false;
    std::map<Word, Letter> first_with_image;
    for (std::size_t a = 0; a < c; ++a) {
      merge_to[a] = static_cast<Letter>(a);
      if (!alive[a]) continue;
      auto [it, inserted] = first_with_image.emplace(images[a], static_cast<Letter>(a));
      if (!inserted) {
        merge_to[a] = it->second;
        alive[a] = false;
        merged = true;
      }
    }
    if (!merged) break;
    ++rounds;
    for (std::size_t a = 0; a < c; ++a) {
      if (!alive[a]) continue;
      for (auto& x : images[a]) x = merge_to[x];
    }
    for (auto& r : rep) r = merge_to[r];
  }

  std::vector<Letter> index(c, 0);
  std::vector<std::string> names;
  std::vector<Word> reduced;
  for (std::size_t a = 0, k = 0; a < c; ++a) {
    if (!alive[a]) continue;
    index[a] = static_cast<Letter>(k++);
    names.push_back(s.alphabet().name(static_cast<Letter>(a)));
  }
  for (std::size_t a = 0; a < c; ++a) {
    if (!alive[a]) continue;
    Word w;
    for (Letter x : images[a]) w.push_back(index[x]);
    reduced.push_back(std::move(w));
  }
  std::vector<Letter> labels(c);
  for (std::size_t a = 0; a < c; ++a) labels[a] = index[rep[a]];
  return Injectivization{Substitution(Alphabet(std::move(names)), std::move(reduced)),
                         LetterMap::from_labels(std::span<const Letter>(labels)), rounds};
}

/// Exact factor sets of the minimal system of a primitive substitution,
/// memoized by length. Not thread-safe; use one instance per thread.
class Language {
 public:
  explicit Language(Substitution s) : s_(std::move(s)) {
    if (!is_primitive(s_)) throw_unsupported("language requires a primitive substitution");
  }

  const Substitution& substitution() const noexcept { return s_; }

  const WordSet& of_length(std::size_t n) {
    if (n == 0) throw_invalid("factor length must be positive");
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    WordSet words;
    if (n == 1) {
      for (std::size_t a = 0; a < s_.size(); ++a) words.push_back(Word{static_cast<Letter>(a)});
    } else if (s_.length() == 1) {
      // primitive of length one: the single-letter identity
      words.push_back(Word(n, 0));
    } else if (n == 2) {
      words = two_factors();
    } else {
      // Every n-factor lies in the image of some k-factor.
      const auto L = s_.length();
      const std::size_t k = std::max<std::size_t>(2, (n + L - 1 + L - 1) / L);
      const WordSet seeds = of_length(k);
      for (const auto& u : seeds) {
        auto v = substitute(s_, u);
        for (std::size_t i = 0; i + n <= v.size(); ++i) words.emplace_back(v.begin() + i, v.begin() + i + n);
      }
      normalize(words);
    }
    return memo_.emplace(n, std::move(words)).first->second;
  }

 private:
  // Least set containing the 2-factors of letter images and closed under
  // taking 2-factors of images of its members.
  WordSet two_factors() const {
    WordSet words;
    auto add_factors = [&](const Word& v, WordSet& out) {
      for (std::size_t i = 0; i + 2 <= v.size(); ++i) out.push_back(Word{v[i], v[i + 1]});
    };
    for (const auto& img : s_.images()) add_factors(img, words);
    normalize(words);
    while (true) {
      WordSet next = words;
      for (const auto& ab : words) add_factors(substitute(s_, ab), next);
      normalize(next);
      if (next.size() == words.size()) return words;
      words = std::move(next);
    }
  }

  Substitution s_;
  std::map<std::size_t, WordSet> memo_;
};

inline WordSet language(const Substitution& s, std::size_t n) {
  Language lang(s);
  return lang.of_length(n);
}

struct StandardForm {
  Substitution substitution;
  std::vector<Letter> permutation;  // old letter -> new letter
};

namespace detail {

// Lexicographic search for the smallest characteristic word. Letters met while
// reading the word get the next free label; a branch only occurs when the
// image of a still-unlabelled position has to be read.
class StandardFormSearch {
 public:
  explicit StandardFormSearch(const Substitution& s) : s_(s), c_(s.size()) {}

  StandardForm run() {
    State st;
    st.label.assign(c_, kNone);
    st.owner.assign(c_, kNone);
    dfs(st, 0);
    std::vector<Word> images(c_);
    for (std::size_t old = 0; old < c_; ++old) {
      Word w;
      for (Letter x : s_.image(static_cast<Letter>(old))) w.push_back(best_perm_[x]);
      images[best_perm_[old]] = std::move(w);
    }
    return StandardForm{Substitution::canonical(std::move(images)), best_perm_};
  }

 private:
  static constexpr Letter kNone = static_cast<Letter>(-1);

  struct State {
    std::vector<Letter> label;  // old -> new
    std::vector<Letter> owner;  // new -> old
    std::size_t next = 0;
    Word word;
    int cmp = 0;  // -1 once strictly below the best word
    std::size_t version = 0;
  };

  void refresh(State& st) const {
    if (st.version == version_) return;
    st.version = version_;
    st.cmp = 0;
    if (!have_best_) return;
    for (std::size_t i = 0; i < st.word.size(); ++i) {
      if (st.word[i] != best_[i]) {
        st.cmp = st.word[i] < best_[i] ? -1 : 1;
        return;
      }
    }
  }

  bool emit(State& st, Letter x) {
    if (st.label[x] == kNone) {
      st.label[x] = static_cast<Letter>(st.next);
      st.owner[st.next] = x;
      ++st.next;
    }
    Letter v = st.label[x];
    refresh(st);
    if (st.cmp > 0) return false;
    if (have_best_ && st.cmp == 0) {
      Letter b = best_[st.word.size()];
      if (v > b) return false;
      if (v < b) st.cmp = -1;
    }
    st.word.push_back(v);
    return true;
  }

  void dfs(State st, std::size_t j) {
    if (j == c_) {
      if (!have_best_ || st.word < best_) {
        best_ = st.word;
        best_perm_ = st.label;
        have_best_ = true;
        ++version_;
      } else if (st.word == best_ && st.label < best_perm_) {
        best_perm_ = st.label;
      }
      return;
    }
    if (st.owner[j] == kNone) {
      for (std::size_t a = 0; a < c_; ++a) {
        if (st.label[a] != kNone) continue;
        State branch = st;
        branch.label[a] = static_cast<Letter>(j);
        branch.owner[j] = static_cast<Letter>(a);
        branch.next = j + 1;
        if (read_image(branch, j)) dfs(std::move(branch), j + 1);
      }
      return;
    }
    if (read_image(st, j)) dfs(std::move(st), j + 1);
  }

  bool read_image(State& st, std::size_t j) {
    for (Letter x : s_.image(st.owner[j])) {
      if (!emit(st, x)) return false;
    }
    return true;
  }

  const Substitution& s_;
  std::size_t c_;
  bool have_best_ = false;
  std::size_t version_ = 0;
  Word best_;
  std::vector<Letter> best_perm_;
};

}  // namespace detail

/// Relabelling with the lexicographically smallest characteristic word.
/// Ties (possible only for non-injective input) go to the smallest permutation.
inline StandardForm standard_form(const Substitution& s) {
  return detail::StandardFormSearch(s).run();
}

/// Image of s under the relabelling perm (old letter -> new letter).
inline Substitution permute(const Substitution& s, std::span<const Letter> perm) {
  if (perm.size() != s.size()) throw_invalid("permutation size mismatch");
  std::vector<Word> images(s.size());
  for (std::size_t old = 0; old < s.size(); ++old) {
    Word w;
    for (Letter x : s.image(static_cast<Letter>(old))) w.push_back(perm[x]);
    images.at(perm[old]) = std::move(w);
  }
  return Substitution::canonical(std::move(images));
}

enum class Aperiodicity { aperiodic_up_to_bound, periodic, unknown };

inline std::string to_string(Aperiodicity a) {
  switch (a) {
    case Aperiodicity::aperiodic_up_to_bound: return "aperiodic-certified-up-to-bound";
    case Aperiodicity::periodic: return "periodic";
    case Aperiodicity::unknown: return "unknown";
  }
  return "unknown";
}

inline std::size_t default_aperiodicity_bound(const Substitution& s) {
  return s.length() * s.size() * s.size() + 1;
}

/// Factor complexity p(n) for n = 1..bound, counted as distinct prefixes of
/// the factors of length bound.
inline std::vector<std::size_t> factor_complexity(const Substitution& s, std::size_t bound) {
  Language lang(s);
  const auto& words = lang.of_length(bound);
  std::vector<std::size_t> p(bound + 1, 1);
  p[0] = 1;
  for (std::size_t i = 1; i < words.size(); ++i) {
    std::size_t lcp = 0;
    while (lcp < bound && words[i - 1][lcp] == words[i][lcp]) ++lcp;
    for (std::size_t n = lcp + 1; n <= bound; ++n) ++p[n];
  }
  return p;
}

/// Morse-Hedlund: periodic iff p(n) <= n for some n. Only n up to the bound
/// are inspected, so a negative answer is labelled as bounded.
inline Aperiodicity is_aperiodic(const Substitution& s, std::optional<std::size_t> bound = {}) {
  if (!is_primitive(s)) return Aperiodicity::unknown;
  const auto n_max = bound.value_or(default_aperiodicity_bound(s));
  if (n_max == 0) throw_invalid("aperiodicity bound must be positive");
  auto p = factor_complexity(s, n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (p[n] <= n) return Aperiodicity::periodic;
  }
  return Aperiodicity::aperiodic_up_to_bound;
}

/// The unique t with pi∘s = t∘pi, if pi(image(a)) depends only on pi(a).
inline std::optional<Substitution> amalgamate(const Substitution& s, const LetterMap& pi) {
  if (pi.source_size() != s.size()) throw_invalid("letter map does not match the alphabet");
  std::vector<std::optional<Word>> images(pi.target_size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    auto w = pi.apply(s.image(static_cast<Letter>(a)));
    auto& slot = images[pi(static_cast<Letter>(a))];
    if (!slot) {
      slot = std::move(w);
    } else if (*slot != w) {
      return std::nullopt;
    }
  }
  std::vector<Word> out;
  for (auto& w : images) out.push_back(std::move(*w));
  return Substitution(pi.target_alphabet(s.alphabet()), std::move(out));
}

struct AnalysisReport {
  bool primitive = false;
  bool injective = false;
  Aperiodicity aperiodic = Aperiodicity::unknown;
  Substitution standard_form;
  std::vector<Letter> permutation;
  Word characteristic_word;
};

inline AnalysisReport analyze(const Substitution& s, std::optional<std::size_t> bound = {}) {
  AnalysisReport r;
  r.primitive = is_primitive(s);
  r.injective = is_injective(s);
  r.aperiodic = r.primitive ? is_aperiodic(s, bound) : Aperiodicity::unknown;
  auto sf = standard_form(s);
  r.standard_form = sf.substitution;
  r.permutation = sf.permutation;
  r.characteristic_word = r.standard_form.characteristic_word();
  return r;
}

/// Standard form of the injectivization, the dedup key used throughout.
inline Substitution reduced_standard_form(const Substitution& s) {
  return standard_form(injectivize(s).substitution).substitution;
}

}  // namespace subconj
