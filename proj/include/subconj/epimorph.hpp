#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "subconj/graphs.hpp"
#include "subconj/substitution.hpp"

namespace subconj {

/// A graph map G1 -> G' that is surjective on vertices and edges. assignment[v]
/// is the target vertex of G1 vertex v; induced reads each target word as the
/// image of the corresponding letter.
struct EpiCandidate {
  std::vector<Vertex> assignment;
  Substitution induced;

  bool operator==(const EpiCandidate& o) const { return assignment == o.assignment; }
};

struct SearchStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t pruned_T1 = 0;
  std::uint64_t pruned_T2 = 0;
  std::uint64_t pruned_T3 = 0;
  std::uint64_t pruned_cycles = 0;
  std::uint64_t candidates_found = 0;

  SearchStats& operator+=(const SearchStats& o) {
    nodes_expanded += o.nodes_expanded;
    pruned_T1 += o.pruned_T1;
    pruned_T2 += o.pruned_T2;
    pruned_T3 += o.pruned_T3;
    pruned_cycles += o.pruned_cycles;
    candidates_found += o.candidates_found;
    return *this;
  }
};

struct EpiOptions {
  bool prechecks = true;          // T1-T3
  bool cycle_pruning = true;      // only used when the target is loop-free
  bool surjectivity_bound = true; // unassigned variables must cover missing targets
};

struct EpiResult {
  std::vector<EpiCandidate> epimorphisms;
  SearchStats stats;
};

/// Independent check of homomorphism plus vertex and edge surjectivity.
inline bool verify_epimorphism(const FactorGraph& g1, const FactorGraph& g, std::span<const Vertex> assignment) {
  if (assignment.size() != g1.vertex_count()) return false;
  std::vector<char> hit_v(g.vertex_count(), 0);
  for (Vertex x : assignment) {
    if (x >= g.vertex_count()) return false;
    hit_v[x] = 1;
  }
  if (std::find(hit_v.begin(), hit_v.end(), 0) != hit_v.end()) return false;
  std::vector<Edge> images;
  for (const auto& [u, v] : g1.edges()) {
    if (!g.has_edge(assignment[u], assignment[v])) return false;
    images.emplace_back(assignment[u], assignment[v]);
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  return images.size() == g.edge_count();
}

/// Reads assignment as a substitution over `alphabet` (canonical if omitted).
inline Substitution induced_substitution(const FactorGraph& g, std::span<const Vertex> assignment,
                                         std::optional<Alphabet> alphabet = {}) {
  std::vector<Word> images;
  for (Vertex x : assignment) images.push_back(g.vertex(x));
  auto names = alphabet.value_or(Alphabet::canonical(images.size()));
  return Substitution(std::move(names), std::move(images));
}

namespace detail {

class EpiSearch {
 public:
  EpiSearch(const FactorGraph& g1, const FactorGraph& g, const EpiOptions& opt) : g1_(g1), g_(g), opt_(opt) {}

  std::vector<std::vector<Vertex>> run(SearchStats& stats) {
    stats_ = &stats;
    const auto n1 = g1_.vertex_count();
    const auto n = g_.vertex_count();
    if (n1 == 0) {
      if (n == 0) found_.push_back({});
      return found_;
    }
    if (n == 0) return found_;

    if (opt_.prechecks) {
      if (n > n1 || g_.edge_count() > g1_.edge_count()) {
        ++stats.pruned_T1;
        return found_;
      }
      if (loop_count(g1_) > 0 && loop_count(g_) == 0) {
        ++stats.pruned_T2;
        return found_;
      }
      if (n == n1 && g1_.edge_count() != g_.edge_count()) {
        ++stats.pruned_T3;
        return found_;
      }
    }

    std::vector<std::vector<char>> domains(n1, std::vector<char>(n, 1));
    for (Vertex u = 0; u < n1; ++u) {
      if (g1_.has_edge(u, u)) {
        for (Vertex x = 0; x < n; ++x) domains[u][x] = g_.has_edge(x, x);
      }
    }
    if (opt_.cycle_pruning && loop_count(g_) == 0) restrict_by_cycles(domains);

    order_.resize(n1);
    for (Vertex u = 0; u < n1; ++u) order_[u] = u;
    std::stable_sort(order_.begin(), order_.end(), [&](Vertex a, Vertex b) { return degree(a) > degree(b); });

    assignment_.assign(n1, kUnassigned);
    hits_.assign(n, 0);
    covered_ = 0;
    dfs(0, domains);
    std::sort(found_.begin(), found_.end());
    return found_;
  }

 private:
  static constexpr Vertex kUnassigned = static_cast<Vertex>(-1);

  std::size_t degree(Vertex u) const { return g1_.successors(u).size() + g1_.predecessors(u).size(); }

  void restrict_by_cycles(std::vector<std::vector<char>>& domains) {
    for (std::size_t k : {2u, 3u}) {
      std::vector<char> on_target(g_.vertex_count(), 0);
      for (const auto& c : cycle_census(g_, k)) {
        for (Vertex x : c) on_target[x] = 1;
      }
      std::vector<char> on_source(g1_.vertex_count(), 0);
      for (const auto& c : cycle_census(g1_, k)) {
        for (Vertex u : c) on_source[u] = 1;
      }
      for (Vertex u = 0; u < g1_.vertex_count(); ++u) {
        if (!on_source[u]) continue;
        for (Vertex x = 0; x < g_.vertex_count(); ++x) {
          if (domains[u][x] && !on_target[x]) {
            domains[u][x] = 0;
            ++stats_->pruned_cycles;
          }
        }
      }
    }
  }

  void dfs(std::size_t depth, const std::vector<std::vector<char>>& domains) {
    const auto n = g_.vertex_count();
    if (depth == order_.size()) {
      if (covered_ == n && verify_edges()) found_.push_back(assignment_);
      return;
    }
    if (opt_.surjectivity_bound && covered_ + (order_.size() - depth) < n) return;

    const Vertex u = order_[depth];
    for (Vertex x = 0; x < n; ++x) {
      if (!domains[u][x]) continue;
      ++stats_->nodes_expanded;
      auto next = domains;
      bool ok = true;
      for (Vertex v : g1_.successors(u)) {
        if (assignment_[v] != kUnassigned || v == u) continue;
        ok = narrow(next[v], [&](Vertex y) { return g_.has_edge(x, y); });
        if (!ok) break;
      }
      if (ok) {
        for (Vertex v : g1_.predecessors(u)) {
          if (assignment_[v] != kUnassigned || v == u) continue;
          ok = narrow(next[v], [&](Vertex y) { return g_.has_edge(y, x); });
          if (!ok) break;
        }
      }
      if (!ok) continue;
      assignment_[u] = x;
      if (hits_[x]++ == 0) ++covered_;
      dfs(depth + 1, next);
      if (--hits_[x] == 0) --covered_;
      assignment_[u] = kUnassigned;
    }
  }

  template <class Keep>
  static bool narrow(std::vector<char>& domain, Keep keep) {
    bool any = false;
    for (Vertex y = 0; y < domain.size(); ++y) {
      if (domain[y] && !keep(y)) domain[y] = 0;
      any |= domain[y] != 0;
    }
    return any;
  }

  bool verify_edges() const {
    std::vector<Edge> images;
    images.reserve(g1_.edge_count());
    for (const auto& [u, v] : g1_.edges()) images.emplace_back(assignment_[u], assignment_[v]);
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    return images.size() == g_.edge_count();
  }

  const FactorGraph& g1_;
  const FactorGraph& g_;
  EpiOptions opt_;
  SearchStats* stats_ = nullptr;
  std::vector<Vertex> order_;
  std::vector<Vertex> assignment_;
  std::vector<std::size_t> hits_;
  std::size_t covered_ = 0;
  std::vector<std::vector<Vertex>> found_;
};

}  // namespace detail

/// All epimorphisms G1 -> G, sorted by assignment (in G1 vertex order).
inline EpiResult enumerate_epis(const FactorGraph& g1, const FactorGraph& g, const EpiOptions& options = {},
                                std::optional<Alphabet> alphabet = {}) {
  EpiResult result;
  auto maps = detail::EpiSearch(g1, g, options).run(result.stats);
  for (auto& m : maps) {
    auto induced = induced_substitution(g, m, alphabet);
    result.epimorphisms.push_back(EpiCandidate{std::move(m), std::move(induced)});
  }
  result.stats.candidates_found = result.epimorphisms.size();
  return result;
}

/// Tries every vertex map; reference semantics for enumerate_epis.
inline std::vector<EpiCandidate> brute_force_epis(const FactorGraph& g1, const FactorGraph& g,
                                                  std::uint64_t budget = 10'000'000,
                                                  std::optional<Alphabet> alphabet = {}) {
  const auto n1 = g1.vertex_count();
  const auto n = g.vertex_count();
  std::vector<EpiCandidate> out;
  if (n == 0) {
    if (n1 == 0) out.push_back(EpiCandidate{{}, Substitution{}});
    return out;
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n1; ++i) {
    if (total > budget / n) throw_unsupported("brute-force epimorphism search exceeds budget");
    total *= n;
  }
  std::vector<Vertex> a(n1, 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    if (verify_epimorphism(g1, g, a)) out.push_back(EpiCandidate{a, induced_substitution(g, a, alphabet)});
    for (std::size_t i = n1; i-- > 0;) {
      if (++a[i] < n) break;
      a[i] = 0;
    }
  }
  return out;
}

}  // namespace subconj
