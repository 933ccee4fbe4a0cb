#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

using namespace subconj;

namespace {

WordSet words(std::initializer_list<const char*> texts, const Alphabet& a) {
  WordSet out;
  for (auto t : texts) out.push_back(parse_word(t, a));
  normalize(out);
  return out;
}

std::vector<std::pair<std::string, std::string>> edge_names(const FactorGraph& g, const Alphabet& a) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [u, v] : g.edges()) out.emplace_back(format_word(g.vertex(u), a), format_word(g.vertex(v), a));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(LetterGraph, Toeplitz) {
  auto tau = parse_substitution("0->01,1->00");
  auto g = letter_graph(ProjectedSystem(tau, LetterMap::identity(2)));
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(loop_count(g), 1u);
  EXPECT_TRUE(g.has_edge(0, 0));
  EXPECT_FALSE(g.has_edge(1, 1));
}

TEST(BlockGraph, ToeplitzLengthTwo) {
  auto tau = parse_substitution("0->01,1->00");
  const auto& a = tau.alphabet();
  ProjectedSystem sys(tau, LetterMap::identity(2));
  auto g0 = block_graph(sys, 2, 0);
  EXPECT_EQ(g0.vertices(), words({"00", "01"}, a));
  EXPECT_EQ(edge_names(g0, a), (std::vector<std::pair<std::string, std::string>>{
                                   {"00", "01"}, {"01", "00"}, {"01", "01"}}));
  auto g1 = block_graph(sys, 2, 1);
  EXPECT_EQ(g1.vertices(), words({"00", "10"}, a));
  EXPECT_EQ(edge_names(g1, a), (std::vector<std::pair<std::string, std::string>>{
                                   {"00", "10"}, {"10", "00"}, {"10", "10"}}));
}

TEST(BlockGraph, ThueMorseOddResidue) {
  auto theta = parse_substitution("1->12,2->21");
  auto g = block_graph(ProjectedSystem(theta, LetterMap::identity(2)), 2, 1);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.edge_count(), 6u);
  EXPECT_EQ(loop_count(g), 0u);
  EXPECT_EQ(g.vertices(), words({"11", "12", "21", "22"}, theta.alphabet()));
}

TEST(BlockGraph, ThueMorseThreeBlockGenerator) {
  auto theta = parse_substitution("0->01,1->10");
  auto gen = hat_substitution(theta, 3, 0);
  auto g = block_graph(ProjectedSystem(gen, LetterMap::identity(6)), 2, 0);
  const auto& a = gen.alphabet();
  EXPECT_EQ(g.vertices(), words({"25", "36", "41", "52"}, a));
  EXPECT_EQ(edge_names(g, a), (std::vector<std::pair<std::string, std::string>>{
                                  {"25", "36"}, {"36", "41"}, {"36", "52"}, {"41", "25"}, {"41", "36"}, {"52", "41"}}));
}

TEST(BlockGraph, MatchesPrefixWindows) {
  std::mt19937 rng(29);
  for (int i = 0; i < 60; ++i) {
    auto s = oracle::random_primitive(rng);
    ProjectedSystem sys(s, oracle::random_partition(rng, s.size()));
    std::size_t target = s.length();
    for (std::size_t r = 1; r <= 2; ++r, target *= s.length()) {
      for (std::size_t m = 0; m < target; ++m) {
        EXPECT_EQ(block_graph(sys, target, m), oracle::prefix_block_graph(sys, target, m, 80000))
            << to_string(s) << " L=" << target << " M=" << m;
      }
    }
  }
}

TEST(BlockGraph, EveryVertexIsBiExtendable) {
  std::mt19937 rng(31);
  for (int i = 0; i < 40; ++i) {
    auto s = oracle::random_primitive(rng);
    ProjectedSystem sys(s, oracle::random_partition(rng, s.size()));
    auto g = block_graph(sys, s.length(), 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      EXPECT_FALSE(g.successors(v).empty());
      EXPECT_FALSE(g.predecessors(v).empty());
    }
  }
}

TEST(BlockGraph, UnsupportedTargetLength) {
  auto s = parse_substitution("1->121,2->233,3->312");
  ProjectedSystem sys(s, LetterMap::identity(3));
  for (std::size_t bad : {1u, 2u, 4u, 6u}) {
    try {
      block_graph(sys, bad, 0);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::unsupported);
    }
  }
  EXPECT_THROW(block_graph(sys, 3, 3), Error);
  EXPECT_NO_THROW(block_graph(sys, 9, 8));
}

TEST(Cycles, Census) {
  WordSet v{{0}, {1}, {2}, {3}};
  FactorGraph g(v, std::vector<Edge>{{0, 1}, {1, 0}, {1, 2}, {2, 0}, {2, 3}, {3, 2}, {3, 3}});
  EXPECT_EQ(cycle_census(g, 2), (std::vector<std::vector<Vertex>>{{0, 1}, {2, 3}}));
  EXPECT_EQ(cycle_census(g, 3), (std::vector<std::vector<Vertex>>{{0, 1, 2}}));
  EXPECT_EQ(loop_count(g), 1u);
  EXPECT_THROW(cycle_census(g, 4), Error);
}

TEST(FactorGraph, Construction) {
  FactorGraph g(WordSet{{1, 0}, {0, 1}, {0, 1}}, std::vector<std::pair<Word, Word>>{{{0, 1}, {1, 0}}, {{0, 1}, {1, 0}}});
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.index_of(Word{1, 0}), 1u);
  EXPECT_THROW(g.index_of(Word{1, 1}), Error);
  EXPECT_THROW(FactorGraph(WordSet{{1}, {0}}, std::vector<Edge>{}), Error);
  EXPECT_THROW(FactorGraph(WordSet{{0}}, std::vector<Edge>{{0, 1}}), Error);
}

TEST(FactorGraph, DotAndJson) {
  auto tau = parse_substitution("0->01,1->00");
  auto g = block_graph(ProjectedSystem(tau, LetterMap::identity(2)), 2, 0);
  auto dot = to_dot(g, tau.alphabet(), "G20");
  EXPECT_NE(dot.find("digraph \"G20\""), std::string::npos);
  EXPECT_NE(dot.find("v0 [label=\"00\"]"), std::string::npos);
  EXPECT_NE(dot.find("v1 -> v1;"), std::string::npos);
  auto j = to_json(g, tau.alphabet());
  EXPECT_EQ(j["vertices"], nlohmann::ordered_json::parse(R"(["00","01"])"));
  EXPECT_EQ(j["edges"].size(), 3u);
  EXPECT_EQ(j["edges"][0], nlohmann::ordered_json::parse("[0,1]"));
}
