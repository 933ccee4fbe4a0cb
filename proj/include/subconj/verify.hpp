#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subconj/blocks.hpp"
#include "subconj/core.hpp"
#include "subconj/epimorph.hpp"
#include "subconj/graphs.hpp"

namespace subconj {

/// pi ∘ h^p = phi^p ∘ pi, where h is the block substitution with the given lag
/// (or the generator itself when the system has no block presentation).
struct Intertwining {
  std::size_t p = 1;
  std::size_t lag = 0;
  LetterMap projection;
  bool operator==(const Intertwining&) const = default;
};

enum class RefutationDirection {
  system_not_in_candidate,  // word of pi(X) missing from X_phi
  candidate_not_in_system,  // word of X_phi missing from pi(X)
};

inline std::string to_string(RefutationDirection d) {
  return d == RefutationDirection::system_not_in_candidate ? "system-not-in-candidate" : "candidate-not-in-system";
}

struct WordRefutation {
  Word word;
  std::size_t length = 0;
  RefutationDirection direction = RefutationDirection::system_not_in_candidate;
  bool operator==(const WordRefutation&) const = default;
};

struct Undecided {
  std::size_t checked_up_to = 0;
  bool operator==(const Undecided&) const = default;
};

using Certificate = std::variant<Intertwining, WordRefutation, Undecided>;

inline bool is_positive(const Certificate& c) { return std::holds_alternative<Intertwining>(c); }
inline bool is_refutation(const Certificate& c) { return std::holds_alternative<WordRefutation>(c); }
inline bool is_undecided(const Certificate& c) { return std::holds_alternative<Undecided>(c); }

inline std::string kind_of(const Certificate& c) {
  if (is_positive(c)) return "intertwining";
  if (is_refutation(c)) return "word-refutation";
  return "undecided";
}

/// True iff pi(source(a)) = candidate(pi(a)) for every letter a.
inline bool is_amalgamation_of(const Substitution& candidate, const Substitution& source, const LetterMap& pi) {
  if (pi.source_size() != source.size() || pi.target_size() != candidate.size()) return false;
  if (candidate.length() != source.length()) return false;
  for (std::size_t a = 0; a < source.size(); ++a) {
    if (pi.apply(source.image(static_cast<Letter>(a))) != candidate.image(pi(static_cast<Letter>(a)))) return false;
  }
  return true;
}

/// The substitutions tried by the positive check, with their lags.
struct LagFamily {
  std::vector<Substitution> members;
  std::vector<std::size_t> lags;

  static LagFamily of(const ProjectedSystem& sys) {
    LagFamily f;
    if (!sys.presentation) {
      f.members.push_back(sys.generator);
      f.lags.push_back(0);
      return f;
    }
    const auto& base = sys.presentation->base;
    const auto n = sys.presentation->block_length;
    const auto coding = block_coding(base, n);
    const auto top = std::min(2 * (base.length() - 1), max_lag(base.length(), n));
    for (std::size_t m = 0; m <= top; ++m) {
      f.members.push_back(hat_substitution(base, coding, m));
      f.lags.push_back(m);
    }
    return f;
  }

  const Substitution* find(std::size_t lag) const {
    for (std::size_t i = 0; i < lags.size(); ++i) {
      if (lags[i] == lag) return &members[i];
    }
    return nullptr;
  }
};

struct VerifyOptions {
  std::optional<std::size_t> kmax;  // default 2·L·c², c the candidate alphabet size
};

inline std::size_t default_kmax(const Substitution& phi) { return 2 * phi.length() * phi.size() * phi.size(); }

/// Checks candidates against one projected system. Holds references to the
/// generator language and lag family, which may be shared by the caller.
class FactorVerifier {
 public:
  FactorVerifier(const ProjectedSystem& sys, Language& generator_language, const LagFamily& family)
      : sys_(sys), lang_(generator_language), family_(family) {}

  /// The largest p tried for the positive certificate.
  std::size_t max_power() const { return sys_.generator.size(); }

  Certificate verify(const Substitution& phi, const VerifyOptions& options = {}) {
    if (phi.length() != sys_.generator.length()) throw_invalid("candidate length differs from the system");
    if (phi.size() != sys_.projection.target_size()) throw_invalid("candidate alphabet differs from the system");
    if (auto pos = intertwining(phi)) return *pos;
    return compare_languages(phi, options.kmax.value_or(default_kmax(phi)));
  }

  std::optional<Intertwining> intertwining(const Substitution& phi) const {
    const auto& pi = sys_.projection;
    const auto c = sys_.generator.size();
    const auto d = phi.size();
    for (std::size_t i = 0; i < family_.members.size(); ++i) {
      const auto& h = family_.members[i];
      // rel[x*d+b]: pi(h^p(x)) = phi^p(b)
      std::vector<char> rel(c * d, 0);
      for (std::size_t x = 0; x < c; ++x) rel[x * d + pi(static_cast<Letter>(x))] = 1;
      for (std::size_t p = 1; p <= max_power(); ++p) {
        std::vector<char> next(c * d, 0);
        for (std::size_t x = 0; x < c; ++x) {
          const auto& hx = h.image(static_cast<Letter>(x));
          for (std::size_t b = 0; b < d; ++b) {
            const auto& pb = phi.image(static_cast<Letter>(b));
            bool all = true;
            for (std::size_t k = 0; k < hx.size() && all; ++k) all = rel[hx[k] * d + pb[k]] != 0;
            next[x * d + b] = all;
          }
        }
        rel = std::move(next);
        bool holds = true;
        for (std::size_t x = 0; x < c && holds; ++x) holds = rel[x * d + pi(static_cast<Letter>(x))] != 0;
        if (holds) return Intertwining{p, family_.lags[i], pi};
      }
    }
    return std::nullopt;
  }

  /// Exact factor sets of pi(X) and X_phi for lengths up to kmax; doubling, then
  /// the shortest mismatch found through prefixes.
  Certificate compare_languages(const Substitution& phi, std::size_t kmax) {
    Language candidate(phi);
    std::size_t k = 2;
    while (true) {
      k = std::min(k, kmax);
      auto mine = projected_language(lang_, sys_.projection, k);
      const auto& theirs = candidate.of_length(k);
      if (mine != theirs) return shortest_mismatch(mine, theirs, k);
      if (k >= kmax) return Undecided{kmax};
      k *= 2;
    }
  }

 private:
  static Certificate shortest_mismatch(const WordSet& mine, const WordSet& theirs, std::size_t k) {
    for (std::size_t n = 1; n <= k; ++n) {
      auto a = prefixes(mine, n);
      auto b = prefixes(theirs, n);
      if (a == b) continue;
      WordSet only_a, only_b;
      std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
      std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
      if (!only_a.empty() && (only_b.empty() || only_a.front() < only_b.front())) {
        return WordRefutation{only_a.front(), n, RefutationDirection::system_not_in_candidate};
      }
      return WordRefutation{only_b.front(), n, RefutationDirection::candidate_not_in_system};
    }
    return Undecided{k};
  }

  static WordSet prefixes(const WordSet& words, std::size_t n) {
    WordSet out;
    for (const auto& w : words) out.emplace_back(w.begin(), w.begin() + n);
    normalize(out);
    return out;
  }

  const ProjectedSystem& sys_;
  Language& lang_;
  const LagFamily& family_;
};

inline Certificate verify_factor(const ProjectedSystem& sys, const Substitution& phi,
                                 const VerifyOptions& options = {}) {
  Language lang(sys.generator);
  auto family = LagFamily::of(sys);
  return FactorVerifier(sys, lang, family).verify(phi, options);
}

/// Re-checks an intertwining certificate with explicit powers.
inline bool replay_intertwining(const ProjectedSystem& sys, const Substitution& phi, const Intertwining& cert) {
  if (cert.projection.source_size() != sys.generator.size() || cert.projection.target_size() != phi.size()) {
    return false;
  }
  Substitution h;
  if (sys.presentation) {
    if (cert.lag > max_lag(sys.presentation->base.length(), sys.presentation->block_length)) return false;
    h = hat_substitution(sys.presentation->base, sys.presentation->block_length, cert.lag);
  } else {
    if (cert.lag != 0) return false;
    h = sys.generator;
  }
  auto hp = power(h, cert.p);
  auto fp = power(phi, cert.p);
  for (std::size_t x = 0; x < h.size(); ++x) {
    if (cert.projection.apply(hp.image(static_cast<Letter>(x))) != fp.image(cert.projection(static_cast<Letter>(x)))) {
      return false;
    }
  }
  return true;
}

/// Re-checks a word refutation against exact factor sets.
inline bool replay_refutation(const ProjectedSystem& sys, const Substitution& phi, const WordRefutation& cert) {
  if (cert.word.size() != cert.length || cert.length == 0) return false;
  auto mine = language(sys.generator, cert.length);
  for (auto& w : mine) w = sys.projection.apply(w);
  normalize(mine);
  auto theirs = language(phi, cert.length);
  bool in_mine = contains(mine, cert.word);
  bool in_theirs = contains(theirs, cert.word);
  return cert.direction == RefutationDirection::system_not_in_candidate ? in_mine && !in_theirs
                                                                        : in_theirs && !in_mine;
}

struct EvidenceRow {
  std::size_t n = 0;
  std::size_t residue = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t loops = 0;
  std::size_t epimorphisms = 0;
};

struct EvidenceReport {
  std::size_t letter_graph_loops = 0;
  std::vector<EvidenceRow> rows;

  bool no_epimorphisms() const {
    return std::all_of(rows.begin(), rows.end(), [](const EvidenceRow& r) { return r.epimorphisms == 0; });
  }
};

/// For n = 1..n_max and every residue M < L^n, the loops of G_{L^n,M} and the
/// number of epimorphisms G1 -> G_{L^n,M}.
inline EvidenceReport non_substitutive_evidence(const ProjectedSystem& sys, std::size_t n_max,
                                                const EpiOptions& options = {}) {
  Language lang(sys.generator);
  EvidenceReport report;
  auto g1 = letter_graph(lang, sys.projection);
  report.letter_graph_loops = loop_count(g1);
  std::size_t target = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    target *= sys.generator.length();
    for (std::size_t m = 0; m < target; ++m) {
      auto g = BlockWindows::build(lang, target, m).project(sys.projection);
      auto epis = enumerate_epis(g1, g, options);
      report.rows.push_back(EvidenceRow{n, m, g.vertex_count(), g.edge_count(), loop_count(g),
                                        epis.epimorphisms.size()});
    }
  }
  return report;
}

}  // namespace subconj
