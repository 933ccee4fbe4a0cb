#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "subconj/blocks.hpp"
#include "subconj/core.hpp"

namespace subconj {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple directed graph (loops allowed) on lexicographically sorted words.
class FactorGraph {
 public:
  FactorGraph() = default;

  /// Vertices are normalized; every edge endpoint must be a vertex.
  FactorGraph(WordSet vertices, std::vector<std::pair<Word, Word>> edges) : vertices_(std::move(vertices)) {
    normalize(vertices_);
    std::vector<Edge> idx;
    idx.reserve(edges.size());
    for (const auto& [u, v] : edges) idx.emplace_back(index_of(u), index_of(v));
    init(std::move(idx));
  }

  FactorGraph(WordSet sorted_vertices, std::vector<Edge> edges) : vertices_(std::move(sorted_vertices)) {
    if (!std::is_sorted(vertices_.begin(), vertices_.end()) ||
        std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
      throw_invalid("graph vertices must be sorted and distinct");
    }
    for (const auto& [u, v] : edges) {
      if (u >= vertices_.size() || v >= vertices_.size()) throw_invalid("edge endpoint is not a vertex");
    }
    init(std::move(edges));
  }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const WordSet& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Word& vertex(Vertex v) const { return vertices_.at(v); }

  bool has_edge(Vertex u, Vertex v) const { return adjacency_[u * vertices_.size() + v] != 0; }
  const std::vector<Vertex>& successors(Vertex u) const { return out_[u]; }
  const std::vector<Vertex>& predecessors(Vertex u) const { return in_[u]; }

  Vertex index_of(std::span<const Letter> w) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), w, [](const Word& a, std::span<const Letter> b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    if (it == vertices_.end() || !std::equal(it->begin(), it->end(), w.begin(), w.end())) {
      throw_invalid("edge endpoint is not a vertex");
    }
    return static_cast<Vertex>(it - vertices_.begin());
  }

  bool operator==(const FactorGraph& o) const { return vertices_ == o.vertices_ && edges_ == o.edges_; }

 private:
  void init(std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    const auto n = vertices_.size();
    adjacency_.assign(n * n, 0);
    out_.assign(n, {});
    in_.assign(n, {});
    for (const auto& [u, v] : edges_) {
      adjacency_[u * n + v] = 1;
      out_[u].push_back(v);
      in_[v].push_back(u);
    }
  }

  WordSet vertices_;
  std::vector<Edge> edges_;
  std::vector<char> adjacency_;
  std::vector<std::vector<Vertex>> out_, in_;
};

/// Unprojected windows of the aligned hierarchy of a generator: the L-words at
/// offset M of gen^r(ab) for 2-factors ab, and the 2L-words at offset M of
/// gen^r(abc) for 3-factors abc, where L = |gen|^r. Every aligned window of a
/// point of X_gen lies in such an image.
struct BlockWindows {
  std::size_t target_length = 0;
  std::size_t residue = 0;
  WordSet vertex_windows;
  WordSet edge_windows;

  static BlockWindows build(Language& generator_language, std::size_t target_length, std::size_t residue) {
    const auto& gen = generator_language.substitution();
    if (gen.length() < 2) throw_unsupported("block graphs need generator length >= 2");
    std::size_t r = 0;
    for (std::size_t p = 1; p < target_length; p *= gen.length()) ++r;
    std::size_t check = 1;
    for (std::size_t i = 0; i < r; ++i) check *= gen.length();
    if (target_length == 0 || check != target_length) {
      throw_unsupported("target length must be a power of the generator length");
    }
    if (residue >= target_length) throw_invalid("residue must be below the target length");
    auto gr = r == 0 ? gen : power(gen, r);
    if (r == 0) throw_unsupported("target length must be a power >= 1 of the generator length");

    BlockWindows w;
    w.target_length = target_length;
    w.residue = residue;
    for (const auto& ab : generator_language.of_length(2)) {
      auto v = substitute(gr, ab);
      w.vertex_windows.emplace_back(v.begin() + residue, v.begin() + residue + target_length);
    }
    for (const auto& abc : generator_language.of_length(3)) {
      auto v = substitute(gr, abc);
      w.edge_windows.emplace_back(v.begin() + residue, v.begin() + residue + 2 * target_length);
    }
    normalize(w.vertex_windows);
    normalize(w.edge_windows);
    return w;
  }

  FactorGraph project(const LetterMap& pi) const {
    WordSet vertices;
    for (const auto& v : vertex_windows) vertices.push_back(pi.apply(v));
    normalize(vertices);
    std::vector<std::pair<Word, Word>> edges;
    for (const auto& e : edge_windows) {
      auto pe = pi.apply(e);
      edges.emplace_back(Word(pe.begin(), pe.begin() + target_length), Word(pe.begin() + target_length, pe.end()));
    }
    return FactorGraph(std::move(vertices), std::move(edges));
  }
};

/// G_1 from the projected 2-factors of the generator.
inline FactorGraph letter_graph(Language& generator_language, const LetterMap& pi) {
  WordSet vertices;
  for (std::size_t k = 0; k < pi.target_size(); ++k) vertices.push_back(Word{static_cast<Letter>(k)});
  std::vector<Edge> edges;
  for (const auto& ab : generator_language.of_length(2)) edges.emplace_back(pi(ab[0]), pi(ab[1]));
  return FactorGraph(std::move(vertices), std::move(edges));
}

inline FactorGraph letter_graph(const ProjectedSystem& p) {
  Language lang(p.generator);
  return letter_graph(lang, p.projection);
}

/// G_{L,M} of pi(X_gen) with cutting points at multiples of the generator length.
inline FactorGraph block_graph(const ProjectedSystem& p, std::size_t target_length, std::size_t residue) {
  Language lang(p.generator);
  return BlockWindows::build(lang, target_length, residue).project(p.projection);
}

inline std::size_t loop_count(const FactorGraph& g) {
  std::size_t n = 0;
  for (const auto& [u, v] : g.edges()) n += u == v;
  return n;
}

/// Directed k-cycles (k = 2 or 3) on distinct vertices, each listed once
/// starting from its smallest vertex, in lexicographic order.
inline std::vector<std::vector<Vertex>> cycle_census(const FactorGraph& g, std::size_t k) {
  std::vector<std::vector<Vertex>> cycles;
  const auto n = static_cast<Vertex>(g.vertex_count());
  if (k == 2) {
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v : g.successors(u)) {
        if (v > u && g.has_edge(v, u)) cycles.push_back({u, v});
      }
    }
  } else if (k == 3) {
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v : g.successors(u)) {
        if (v <= u) continue;
        for (Vertex w : g.successors(v)) {
          if (w <= u || w == v) continue;
          if (g.has_edge(w, u)) cycles.push_back({u, v, w});
        }
      }
    }
  } else {
    throw_invalid("cycle census supports k = 2 or 3");
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

inline std::string to_dot(const FactorGraph& g, const Alphabet& alphabet, std::string_view name = "G") {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    out << "  v" << v << " [label=\"" << format_word(g.vertex(v), alphabet) << "\"];\n";
  }
  for (const auto& [u, v] : g.edges()) out << "  v" << u << " -> v" << v << ";\n";
  out << "}\n";
  return out.str();
}

inline nlohmann::ordered_json to_json(const FactorGraph& g, const Alphabet& alphabet) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : g.vertices()) j["vertices"].push_back(format_word(v, alphabet));
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [u, v] : g.edges()) j["edges"].push_back({u, v});
  return j;
}

}  // namespace subconj
