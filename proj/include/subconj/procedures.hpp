#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "subconj/blocks.hpp"
#include "subconj/catalog.hpp"
#include "subconj/catalog_io.hpp"
#include "subconj/core.hpp"
#include "subconj/epimorph.hpp"
#include "subconj/graphs.hpp"
#include "subconj/partitions.hpp"
#include "subconj/verify.hpp"

namespace subconj {

namespace detail {

struct CandidateRecord {
  Substitution standard_form;
  Provenance provenance;
  Certificate certificate;
};

struct CaseResult {
  bool done = false;
  std::vector<CandidateRecord> records;
  SearchStats search;
  std::uint64_t epimorphisms = 0;
  std::uint64_t nonprimitive = 0;
  std::uint64_t refuted = 0;
};

inline void check_source(const Substitution& alpha) {
  if (alpha.length() < 2) throw_unsupported("classification needs substitution length >= 2");
  if (!is_primitive(alpha)) throw_unsupported("substitution is not primitive");
}

inline Catalog factor_list_until(const Substitution& alpha, const ProcedureOptions& opt,
                                 std::optional<Clock::time_point> deadline) {
  check_source(alpha);
  const auto base = catalog_key(alpha);
  if (is_aperiodic(base) == Aperiodicity::periodic) throw_unsupported("substitution generates a periodic system");

  Catalog cat;
  cat.kind = "factors";
  cat.source = base;
  cat.length = base.length();
  cat.presentation_base = base;
  cat.options = CatalogOptionsEcho{opt.symmetry, opt.kmax, opt.budget_seconds};

  const auto L = base.length();
  const auto gen = hat_substitution(base, 3, 0);
  cat.block_alphabet_size = gen.size();
  const auto presentation = BlockPresentation{base, 3};

  Language shared(gen);
  std::vector<BlockWindows> windows;
  for (std::size_t m = 0; m < L; ++m) windows.push_back(BlockWindows::build(shared, L, m));
  shared.of_length(2);
  const auto family = LagFamily::of(ProjectedSystem(gen, LetterMap::identity(gen.size()), presentation));

  std::vector<Permutation> symmetries;
  if (opt.symmetry) symmetries = commuting_permutations(gen);
  cat.stats.symmetry_group_order = std::max<std::size_t>(1, symmetries.size());
  const auto partitions = PartitionStream(gen.size(), symmetries).collect();
  cat.stats.partitions_total = bell_number(gen.size());
  cat.stats.partitions_explored = partitions.size();
  const std::uint64_t total = partitions.size() * L;
  cat.stats.cases_total = total;

  std::vector<CaseResult> results(total);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> finished{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      Language lang(gen);
      lang.of_length(2);
      while (true) {
        if (deadline && Clock::now() >= *deadline) return;
        const auto i = next.fetch_add(1);
        if (i >= total) return;
        const auto& [pi, raw_index] = partitions[i / L];
        const std::size_t m = i % L;
        auto& out = results[i];

        const ProjectedSystem sys(gen, pi, presentation);
        const auto target_names = sys.target_alphabet();
        auto g1 = letter_graph(lang, pi);
        auto g = windows[m].project(pi);
        auto epis = enumerate_epis(g1, g, opt.epi, target_names);
        out.search = epis.stats;
        out.epimorphisms = epis.epimorphisms.size();
        FactorVerifier verifier(sys, lang, family);
        for (std::size_t e = 0; e < epis.epimorphisms.size(); ++e) {
          const auto& phi = epis.epimorphisms[e].induced;
          if (!is_primitive(phi)) {
            ++out.nonprimitive;
            continue;
          }
          auto cert = verifier.verify(phi, VerifyOptions{opt.kmax});
          if (is_refutation(cert)) {
            ++out.refuted;
            continue;
          }
          out.records.push_back(CandidateRecord{catalog_key(phi), Provenance{pi, raw_index, m, e, epis.epimorphisms[e]},
                                                std::move(cert)});
        }
        out.done = true;
        const auto done = finished.fetch_add(1) + 1;
        if (opt.progress) {
          std::lock_guard lock(progress_mutex);
          opt.progress("factors", done, total);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(total);
    }
  };

  const auto jobs = std::max<std::size_t>(1, opt.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Merge in case order, which is (partition index, residue, epimorphism index).
  std::map<std::vector<Word>, CandidateRecord> positive, open;
  for (auto& r : results) {
    if (!r.done) {
      cat.complete = false;
      continue;
    }
    ++cat.stats.cases_done;
    cat.stats.search += r.search;
    cat.stats.epimorphisms += r.epimorphisms;
    cat.stats.discarded_nonprimitive += r.nonprimitive;
    cat.stats.refuted += r.refuted;
    for (auto& rec : r.records) {
      auto key = rec.standard_form.images();
      if (is_positive(rec.certificate)) {
        ++cat.stats.certified;
        positive.try_emplace(std::move(key), std::move(rec));
      } else {
        ++cat.stats.undecided_candidates;
        open.try_emplace(std::move(key), std::move(rec));
      }
    }
  }

  auto make_entry = [](CandidateRecord&& rec) {
    CatalogEntry e;
    e.alphabet_size = rec.standard_form.size();
    e.flags = EntryFlags{is_injective(rec.standard_form), is_primitive(rec.standard_form),
                         is_aperiodic(rec.standard_form)};
    e.standard_form = std::move(rec.standard_form);
    e.provenance = std::move(rec.provenance);
    e.certificate = std::move(rec.certificate);
    return e;
  };
  for (auto& [key, rec] : positive) {
    auto e = make_entry(std::move(rec));
    if (e.flags.aperiodic == Aperiodicity::periodic) {
      ++cat.stats.discarded_periodic;
      continue;
    }
    cat.entries.push_back(std::move(e));
  }
  for (auto& [key, rec] : open) {
    if (positive.count(key)) continue;
    auto e = make_entry(std::move(rec));
    if (e.flags.aperiodic == Aperiodicity::periodic) {
      ++cat.stats.discarded_periodic;
      continue;
    }
    cat.undecided.push_back(std::move(e));
  }
  std::sort(cat.entries.begin(), cat.entries.end(), entry_less);
  std::sort(cat.undecided.begin(), cat.undecided.end(), entry_less);
  return cat;
}

inline std::optional<Clock::time_point> deadline_of(const ProcedureOptions& opt) {
  if (!opt.budget_seconds) return std::nullopt;
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*opt.budget_seconds));
}

inline Catalog cached_factor_list(const Substitution& alpha, const ProcedureOptions& opt,
                                  std::optional<Clock::time_point> deadline, bool* cache_hit = nullptr) {
  if (cache_hit) *cache_hit = false;
  if (opt.cache) {
    check_source(alpha);
    if (auto hit = opt.cache->load(catalog_key(alpha), opt)) {
      if (cache_hit) *cache_hit = true;
      return std::move(*hit);
    }
  }
  auto cat = factor_list_until(alpha, opt, deadline);
  if (opt.cache && cat.complete) opt.cache->store(cat);
  return cat;
}

}  // namespace detail

/// All injective substitutions of the same length, up to standard form, whose
/// systems are factors of X_alpha.
inline FactorList factor_list(const Substitution& alpha, const ProcedureOptions& options = {}) {
  return detail::cached_factor_list(alpha, options, detail::deadline_of(options));
}

/// The members of the factor list whose systems are conjugate to X_alpha.
inline ConjugacyList conjugacy_list(const Substitution& alpha, const ProcedureOptions& options = {}) {
  const auto deadline = detail::deadline_of(options);
  bool hit = false;
  auto factors = detail::cached_factor_list(alpha, options, deadline, &hit);
  const auto& target = factors.source;

  ConjugacyList out;
  out.kind = "conjugacy";
  out.source = factors.source;
  out.length = factors.length;
  out.presentation_base = factors.presentation_base;
  out.block_alphabet_size = factors.block_alphabet_size;
  out.complete = factors.complete;
  out.stats = factors.stats;
  out.stats.sublist_cache_hits = hit ? 1 : 0;
  out.options = factors.options;

  enum class State { open, retained, excluded, undecided };
  std::vector<State> state(factors.entries.size(), State::open);
  std::vector<ConjugacyBasis> basis(factors.entries.size());
  std::set<std::vector<Word>> known;

  auto retain = [&](std::size_t i, ConjugacyBasis why) {
    state[i] = State::retained;
    basis[i] = std::move(why);
    known.insert(factors.entries[i].standard_form.images());
  };

  known.insert(target.images());
  const auto L = target.length();
  std::map<std::vector<Word>, std::size_t> seeds;
  for (std::size_t m = 0; m <= 2 * (L - 1); ++m) {
    seeds.try_emplace(catalog_key(hat_substitution(target, 3, m)).images(), m);
  }
  for (std::size_t i = 0; i < factors.entries.size(); ++i) {
    const auto& sf = factors.entries[i].standard_form;
    if (sf.same_images(target)) {
      retain(i, {"source", ""});
    } else if (auto it = seeds.find(sf.images()); it != seeds.end()) {
      retain(i, {"block-presentation", "3-block lag " + std::to_string(it->second)});
    }
  }

  auto amalgamation_witness = [&](const Substitution& beta) -> std::optional<std::string> {
    if (beta.size() > 10) return std::nullopt;
    PartitionStream stream(beta.size());
    while (auto p = stream.next()) {
      const auto& pi = p->first;
      if (pi.is_identity() || pi.target_size() == 1) continue;
      auto gamma = amalgamate(beta, pi);
      if (!gamma || !is_primitive(*gamma)) continue;
      auto key = catalog_key(*gamma);
      if (known.count(key.images())) return format_partition(pi, beta.alphabet()) + " onto " + to_string(key);
    }
    return std::nullopt;
  };

  std::uint64_t resolved = 0;
  const std::uint64_t total = factors.entries.size();
  while (true) {
    bool progressed = false;
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (state[i] != State::open) continue;
      if (auto w = amalgamation_witness(factors.entries[i].standard_form)) {
        retain(i, {"amalgamation", *w});
        ++out.stats.amalgamation_shortcuts;
        progressed = true;
      }
    }
    if (progressed) continue;
    auto it = std::find(state.begin(), state.end(), State::open);
    if (it == state.end()) break;
    if (deadline && Clock::now() >= *deadline) {
      out.complete = false;
      for (auto& s : state) {
        if (s == State::open) s = State::undecided;
      }
      break;
    }
    const auto i = static_cast<std::size_t>(it - state.begin());
    bool sub_hit = false;
    auto sub = detail::cached_factor_list(factors.entries[i].standard_form, options, deadline, &sub_hit);
    ++out.stats.sublists_computed;
    out.stats.sublist_cache_hits += sub_hit;
    if (sub.contains(target)) {
      retain(i, {"factor-list", "source found among " + std::to_string(sub.entries.size()) + " factors"});
    } else if (!sub.undecided.empty() || !sub.complete) {
      state[i] = State::undecided;
    } else {
      state[i] = State::excluded;
      ++out.stats.excluded;
    }
    if (options.progress) options.progress("conjugacy", ++resolved, total);
  }

  for (std::size_t i = 0; i < state.size(); ++i) {
    auto e = factors.entries[i];
    if (state[i] == State::retained) {
      e.conjugacy = basis[i];
      out.entries.push_back(std::move(e));
    } else if (state[i] == State::undecided) {
      out.undecided.push_back(std::move(e));
    }
  }
  for (const auto& e : factors.undecided) out.undecided.push_back(e);
  std::sort(out.entries.begin(), out.entries.end(), entry_less);
  std::sort(out.undecided.begin(), out.undecided.end(), entry_less);
  return out;
}

enum class Verdict { conjugate, not_conjugate, undecided };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::conjugate: return "conjugate";
    case Verdict::not_conjugate: return "not conjugate";
    case Verdict::undecided: return "undecided";
  }
  return "undecided";
}

struct ConjugacyDecision {
  Verdict verdict = Verdict::undecided;
  Substitution first;   // catalog keys of the inputs
  Substitution second;
  std::optional<ConjugacyList> list;
};

inline ConjugacyDecision decide_conjugate(const Substitution& alpha, const Substitution& beta,
                                          const ProcedureOptions& options = {}) {
  if (alpha.length() != beta.length()) {
    throw_unsupported("substitutions of different lengths; raise them to powers of a common length first");
  }
  detail::check_source(alpha);
  detail::check_source(beta);
  ConjugacyDecision d;
  d.first = catalog_key(alpha);
  d.second = catalog_key(beta);
  if (is_aperiodic(d.second) == Aperiodicity::periodic) throw_unsupported("substitution generates a periodic system");
  if (d.first.same_images(d.second)) {
    if (is_aperiodic(d.first) == Aperiodicity::periodic) {
      throw_unsupported("substitution generates a periodic system");
    }
    d.verdict = Verdict::conjugate;
    return d;
  }
  d.list = conjugacy_list(alpha, options);
  if (d.list->contains(d.second)) {
    d.verdict = Verdict::conjugate;
  } else if (d.list->undecided_contains(d.second) || !d.list->complete) {
    d.verdict = Verdict::undecided;
  } else {
    d.verdict = Verdict::not_conjugate;
  }
  return d;
}

}  // namespace subconj
