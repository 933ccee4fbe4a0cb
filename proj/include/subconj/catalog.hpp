#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subconj/core.hpp"
#include "subconj/epimorph.hpp"
#include "subconj/verify.hpp"

namespace subconj {

inline constexpr std::string_view kToolVersion = "0.3.1";

struct Provenance {
  LetterMap partition;                 // on the 3-block alphabet of the source
  std::uint64_t partition_index = 0;   // position among all partitions in RGS order
  std::size_t residue = 0;
  std::size_t epimorphism_index = 0;   // position in the sorted epimorphism list
  EpiCandidate epimorphism;
};

struct EntryFlags {
  bool injective = true;
  bool primitive = true;
  Aperiodicity aperiodic = Aperiodicity::unknown;
};

struct ConjugacyBasis {
  std::string method;  // "source", "block-presentation", "amalgamation", "factor-list"
  std::string detail;
};

struct CatalogEntry {
  Substitution standard_form;
  std::size_t alphabet_size = 0;
  Provenance provenance;
  Certificate certificate;
  EntryFlags flags;
  std::optional<ConjugacyBasis> conjugacy;
};

struct CatalogStats {
  std::uint64_t partitions_total = 0;
  std::uint64_t partitions_explored = 0;
  std::size_t symmetry_group_order = 1;
  std::uint64_t cases_total = 0;
  std::uint64_t cases_done = 0;
  std::uint64_t epimorphisms = 0;
  std::uint64_t discarded_nonprimitive = 0;
  std::uint64_t refuted = 0;
  std::uint64_t certified = 0;
  std::uint64_t undecided_candidates = 0;
  std::uint64_t discarded_periodic = 0;
  SearchStats search;
  // conjugacy lists only
  std::uint64_t sublists_computed = 0;
  std::uint64_t sublist_cache_hits = 0;
  std::uint64_t amalgamation_shortcuts = 0;
  std::uint64_t excluded = 0;
};

struct CatalogOptionsEcho {
  bool symmetry = true;
  std::optional<std::size_t> kmax;
  std::optional<double> budget_seconds;
};

/// A factor list or conjugacy list.
struct Catalog {
  std::string kind;  // "factors" or "conjugacy"
  Substitution source;
  std::size_t length = 0;
  Substitution presentation_base;
  std::size_t block_alphabet_size = 0;
  std::vector<CatalogEntry> entries;
  std::vector<CatalogEntry> undecided;
  bool complete = true;
  CatalogStats stats;
  CatalogOptionsEcho options;

  bool contains(const Substitution& sf) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const CatalogEntry& e) { return e.standard_form.same_images(sf); });
  }
  bool undecided_contains(const Substitution& sf) const {
    return std::any_of(undecided.begin(), undecided.end(),
                       [&](const CatalogEntry& e) { return e.standard_form.same_images(sf); });
  }
};

using FactorList = Catalog;
using ConjugacyList = Catalog;

class FactorListCache;

struct ProcedureOptions {
  std::size_t jobs = 1;
  bool symmetry = true;
  std::optional<std::size_t> kmax;
  std::optional<double> budget_seconds;
  EpiOptions epi;
  FactorListCache* cache = nullptr;
  std::function<void(std::string_view stage, std::uint64_t done, std::uint64_t total)> progress;
};

using Clock = std::chrono::steady_clock;

inline bool entry_less(const CatalogEntry& a, const CatalogEntry& b) {
  if (a.alphabet_size != b.alphabet_size) return a.alphabet_size < b.alphabet_size;
  return a.standard_form.characteristic_word() < b.standard_form.characteristic_word();
}

/// The catalog key of a substitution: standard form of its injectivization,
/// over canonical names.
inline Substitution catalog_key(const Substitution& s) { return reduced_standard_form(s); }

}  // namespace subconj
