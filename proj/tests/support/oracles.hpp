#pragma once

// Slow reference implementations used to check the library. None of them
// reuse the library algorithm they are compared against.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "subconj/subconj.hpp"

namespace oracle {

using namespace subconj;

/// Prefix of a one-sided fixed point of some power of s, cut at multiples of L.
inline Word fixed_point_prefix(const Substitution& s, std::size_t min_length) {
  // a -> first letter of s(a) eventually cycles; any letter on the cycle works
  Letter a = 0;
  for (std::size_t i = 0; i < s.size(); ++i) a = s.image(a)[0];
  std::size_t period = 1;
  for (Letter b = s.image(a)[0]; b != a; b = s.image(b)[0]) ++period;
  Word w{a};
  while (w.size() < min_length || w.size() < 2) {
    for (std::size_t k = 0; k < period; ++k) {
      Word next;
      for (Letter x : w) next.insert(next.end(), s.image(x).begin(), s.image(x).end());
      w = std::move(next);
    }
  }
  return w;
}

inline std::set<Word> factors_of(const Word& u, std::size_t n) {
  std::set<Word> out;
  for (std::size_t i = 0; i + n <= u.size(); ++i) out.emplace(u.begin() + i, u.begin() + i + n);
  return out;
}

inline WordSet prefix_language(const Substitution& s, std::size_t n, std::size_t prefix = 60000) {
  auto u = fixed_point_prefix(s, prefix);
  auto f = factors_of(u, n);
  return WordSet(f.begin(), f.end());
}

/// Primitive iff some power up to c^2 + 1 of the incidence matrix is positive,
/// with plain integer matrix products.
inline bool primitive_by_powers(const Substitution& s) {
  const auto c = s.size();
  std::vector<std::vector<std::uint8_t>> m(c, std::vector<std::uint8_t>(c, 0));
  for (std::size_t b = 0; b < c; ++b) {
    for (Letter a : s.image(static_cast<Letter>(b))) m[a][b] = 1;
  }
  auto p = m;
  for (std::size_t k = 1; k <= c * c + 1; ++k) {
    bool positive = true;
    for (const auto& row : p)
      for (auto x : row) positive &= x != 0;
    if (positive) return true;
    std::vector<std::vector<std::uint8_t>> q(c, std::vector<std::uint8_t>(c, 0));
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t l = 0; l < c; ++l) q[i][j] |= p[i][l] & m[l][j];
    p = std::move(q);
  }
  return false;
}

/// Smallest characteristic word over all c! relabellings.
inline Substitution brute_standard_form(const Substitution& s) {
  std::vector<Letter> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<Substitution> best;
  do {
    auto t = permute(s, perm);
    if (!best || t.characteristic_word() < best->characteristic_word()) best = t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

/// G_{L,M} from windows of a long fixed-point prefix.
inline FactorGraph prefix_block_graph(const ProjectedSystem& p, std::size_t target, std::size_t residue,
                                      std::size_t prefix) {
  auto u = p.projection.apply(fixed_point_prefix(p.generator, prefix));
  std::set<Word> vertices;
  std::set<std::pair<Word, Word>> edges;
  for (std::size_t i = residue; i + 2 * target <= u.size(); i += target) {
    Word a(u.begin() + i, u.begin() + i + target);
    Word b(u.begin() + i + target, u.begin() + i + 2 * target);
    vertices.insert(a);
    vertices.insert(b);
    edges.emplace(a, b);
  }
  return FactorGraph(WordSet(vertices.begin(), vertices.end()),
                     std::vector<std::pair<Word, Word>>(edges.begin(), edges.end()));
}

/// Set partitions by inserting each letter into an existing block or a new one.
inline std::vector<std::vector<std::vector<Letter>>> all_partitions(std::size_t n) {
  std::vector<std::vector<std::vector<Letter>>> out{{}};
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::vector<std::vector<Letter>>> next;
    for (const auto& p : out) {
      for (std::size_t k = 0; k <= p.size(); ++k) {
        auto q = p;
        if (k == q.size()) q.push_back({});
        q[k].push_back(static_cast<Letter>(a));
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline Substitution random_substitution(std::mt19937& rng, std::size_t c, std::size_t L) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(c) - 1);
  std::vector<Word> images(c);
  for (auto& w : images) {
    w.resize(L);
    for (auto& x : w) x = static_cast<Letter>(pick(rng));
  }
  return Substitution::canonical(std::move(images));
}

/// Random primitive substitution with 2 <= c <= max_c letters and length 2..max_L.
inline Substitution random_primitive(std::mt19937& rng, std::size_t max_c = 4, std::size_t max_L = 3) {
  std::uniform_int_distribution<std::size_t> cs(2, max_c), ls(2, max_L);
  while (true) {
    auto s = random_substitution(rng, cs(rng), ls(rng));
    if (primitive_by_powers(s)) return s;
  }
}

inline LetterMap random_partition(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> labels(n);
  for (auto& l : labels) l = pick(rng);
  return LetterMap::from_labels(std::span<const std::size_t>(labels));
}

inline std::vector<Letter> random_permutation(std::mt19937& rng, std::size_t n) {
  std::vector<Letter> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline std::set<std::vector<Word>> sf_set(const std::vector<CatalogEntry>& entries) {
  std::set<std::vector<Word>> out;
  for (const auto& e : entries) out.insert(e.standard_form.images());
  return out;
}

}  // namespace oracle
