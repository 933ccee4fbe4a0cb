#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "subconj/error.hpp"
#include "subconj/letter_map.hpp"
#include "subconj/substitution.hpp"

namespace subconj {

using Permutation = std::vector<Letter>;

inline std::uint64_t bell_number(std::size_t n) {
  // Bell triangle
  if (n > 25) throw_unsupported("Bell number overflows 64 bits");
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

/// All letter permutations P with P∘s = s∘P. Since s is primitive, P is fixed by
/// P(0): the relation propagates along images to every letter.
inline std::vector<Permutation> commuting_permutations(const Substitution& s) {
  const auto c = s.size();
  std::vector<Permutation> out;
  constexpr Letter kNone = static_cast<Letter>(-1);
  for (std::size_t t = 0; t < c; ++t) {
    Permutation p(c, kNone);
    std::vector<Letter> queue{0};
    p[0] = static_cast<Letter>(t);
    bool ok = true;
    for (std::size_t qi = 0; qi < queue.size() && ok; ++qi) {
      Letter a = queue[qi];
      const auto& src = s.image(a);
      const auto& dst = s.image(p[a]);
      for (std::size_t k = 0; k < src.size(); ++k) {
        if (p[src[k]] == kNone) {
          p[src[k]] = dst[k];
          queue.push_back(src[k]);
        } else if (p[src[k]] != dst[k]) {
          ok = false;
          break;
        }
      }
    }
    if (!ok || std::find(p.begin(), p.end(), kNone) != p.end()) continue;
    auto sorted = p;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_identity_permutation(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != i) return false;
  }
  return true;
}

/// Set partitions of {0..n-1} as restricted growth strings, in lexicographic
/// order. With symmetries, only partitions whose RGS is minimal in their orbit
/// are produced; the index of every produced partition among all partitions is
/// kept, so provenance does not depend on the reduction.
class PartitionStream {
 public:
  explicit PartitionStream(std::size_t n, std::vector<Permutation> symmetries = {})
      : n_(n), symmetries_(std::move(symmetries)) {
    for (const auto& p : symmetries_) {
      if (p.size() != n_) throw_invalid("symmetry has the wrong size");
    }
    symmetries_.erase(std::remove_if(symmetries_.begin(), symmetries_.end(), is_identity_permutation),
                      symmetries_.end());
    rgs_.assign(n_, 0);
    max_.assign(n_, 0);
  }

  /// Next partition and its raw index, or nullopt when exhausted.
  std::optional<std::pair<LetterMap, std::uint64_t>> next() {
    while (advance()) {
      if (is_representative()) return std::make_pair(LetterMap::from_labels(std::span<const Letter>(rgs_)), index_);
    }
    return std::nullopt;
  }

  std::vector<std::pair<LetterMap, std::uint64_t>> collect() {
    std::vector<std::pair<LetterMap, std::uint64_t>> out;
    while (auto p = next()) out.push_back(std::move(*p));
    return out;
  }

 private:
  bool advance() {
    if (done_) return false;
    if (!started_) {
      started_ = true;
      index_ = 0;
      if (n_ == 0) done_ = true;
      return true;
    }
    for (std::size_t i = n_; i-- > 1;) {
      if (rgs_[i] <= max_[i - 1]) {
        ++rgs_[i];
        max_[i] = std::max<Letter>(max_[i - 1], rgs_[i]);
        for (std::size_t j = i + 1; j < n_; ++j) {
          rgs_[j] = 0;
          max_[j] = max_[i];
        }
        ++index_;
        return true;
      }
    }
    done_ = true;
    return false;
  }

  bool is_representative() const {
    std::vector<Letter> labels(n_);
    for (const auto& p : symmetries_) {
      // labels of the image partition: letter p[a] gets the class of a
      for (std::size_t a = 0; a < n_; ++a) labels[p[a]] = rgs_[a];
      auto image = LetterMap::from_labels(std::span<const Letter>(labels)).images();
      if (image < rgs_) return false;
    }
    return true;
  }

  std::size_t n_;
  std::vector<Permutation> symmetries_;
  std::vector<Letter> rgs_;
  std::vector<Letter> max_;
  std::uint64_t index_ = 0;
  bool started_ = false;
  bool done_ = false;
};

}  // namespace subconj
