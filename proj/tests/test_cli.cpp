#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "support/schema.hpp"

using namespace subconj;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "subconj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string last_field(const std::string& line) { return line.substr(line.find_last_of(' ') + 1); }

/// Substitutions in the rows of a text catalog table, split into entries and
/// undecided ones.
std::pair<std::set<std::string>, std::set<std::string>> table_rows(const std::string& text) {
  std::set<std::string> entries, undecided;
  for (const auto& line : lines(text)) {
    if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '?')) continue;
    if (line.find("->") == std::string::npos) continue;
    (line[0] == '?' ? undecided : entries).insert(last_field(line));
  }
  return {entries, undecided};
}

}  // namespace

TEST(Cli, FactorsTable) {
  auto r = run({"factors", "1->12,2->21", "-q"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out)[1].substr(0, 3), "Nr.");
  EXPECT_EQ(lines(r.out).back(), "15 entries, 0 undecided");
  EXPECT_EQ(table_rows(r.out).first.size(), 15u);
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ProgressOnStandardError) {
  auto r = run({"factors", "1->12,2->21", "--jobs", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("factors: "), std::string::npos);
  EXPECT_NE(r.err.find("/234"), std::string::npos);
}

TEST(Cli, TextAndJsonAgree) {
  for (const char* cmd : {"factors", "conjugacy"}) {
    auto text = run({cmd, "1->12,2->21", "-q"});
    auto json = run({cmd, "1->12,2->21", "-q", "--format", "json"});
    ASSERT_EQ(json.code, 0);
    auto j = nlohmann::ordered_json::parse(json.out);
    std::set<std::string> from_json;
    for (const auto& e : j["entries"]) from_json.insert(e["standard_form"].get<std::string>());
    EXPECT_EQ(table_rows(text.out).first, from_json) << cmd;
  }
}

TEST(Cli, JsonValidatesAgainstSchema) {
  std::ifstream in(std::string(SUBCONJ_SOURCE_DIR) + "/docs/catalog.schema.json");
  schema::Validator validator(nlohmann::ordered_json::parse(in));
  for (auto args : std::vector<std::vector<std::string>>{
           {"factors", "1->12,2->21"},
           {"conjugacy", "1->12,2->11"},
           {"factors", "1->121,2->233,3->312", "--kmax", "1"},
           {"factors", "1->12,2->21", "--budget", "0"}}) {
    args.insert(args.end(), {"-q", "--format", "json"});
    auto r = run(args);
    EXPECT_EQ(validator.check(nlohmann::ordered_json::parse(r.out)), "") << args[1];
  }
}

TEST(Cli, EmittedSubstitutionsReparse) {
  for (const char* cmd : {"factors", "conjugacy"}) {
    auto r = run({cmd, "1->121,2->233,3->312", "-q"});
    for (const auto& s : table_rows(r.out).first) EXPECT_EQ(to_string(parse_substitution(s)), s);
  }
  auto nb = run({"nblock", "1->1233,2->2313,3->3123", "-N", "2", "-M", "1"});
  EXPECT_EQ(to_string(parse_substitution(lines(nb.out)[0])), lines(nb.out)[0]);
}

TEST(Cli, JobsDeterministic) {
  auto a = run({"factors", "1->121,2->233,3->312", "-q", "--format", "json", "--jobs", "1"});
  auto b = run({"factors", "1->121,2->233,3->312", "-q", "--format", "json", "--jobs", "8"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Conjugate) {
  auto r = run({"conjugate", "1->12,2->21", "1->21,2->12", "-q"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).back(), "conjugate");
  auto no = run({"conjugate", "1->12,2->21", "1->12,2->11", "-q"});
  EXPECT_EQ(no.code, 0);
  EXPECT_EQ(lines(no.out).back(), "not conjugate");
  auto budget = run({"conjugate", "1->12,2->21", "1->12,2->11", "-q", "--budget", "0"});
  EXPECT_EQ(budget.code, 4);
  EXPECT_EQ(lines(budget.out).back(), "undecided");
  EXPECT_EQ(run({"conjugate", "1->12,2->21", "1->121,2->212"}).code, 3);
}

TEST(Cli, Nblock) {
  auto r = run({"nblock", "0->01,1->00", "-N", "2", "-M", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"1->32,2->31,3->12", "  1 = 00", "  2 = 01", "  3 = 10"}));
  EXPECT_EQ(run({"nblock", "0->01,1->00", "-N", "2", "-M", "2"}).code, 2);
  auto golden = run({"nblock", "1->1233,2->2313,3->3123", "-N", "2", "-M", "1"});
  EXPECT_EQ(lines(golden.out)[0], "1->3653,2->3664,3->4264,4->1341,5->1353,6->1364");
}

TEST(Cli, AnalyzeStdInjectivize) {
  auto a = run({"analyze", "1->22,2->21"});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("standard form  1->12,2->11"), std::string::npos);
  auto s = run({"std", "1->22,2->12", "--format", "json"});
  auto j = nlohmann::ordered_json::parse(s.out);
  EXPECT_EQ(j["standard_form"], "1->21,2->11");
  auto i = run({"injectivize", "1->46,2->45,3->26,4->25,5->13,6->13"});
  EXPECT_EQ(lines(i.out)[0], "1->35,3->15,5->13");
  EXPECT_NE(i.out.find("rounds         2"), std::string::npos);
}

TEST(Cli, LanguageAndGraphs) {
  auto l = run({"language", "1->12,2->21", "-N", "3"});
  EXPECT_EQ(lines(l.out), (std::vector<std::string>{"112", "121", "122", "211", "212", "221"}));
  auto g = run({"graphs", "1->12,2->21", "-L", "2", "-M", "1"});
  EXPECT_NE(g.out.find("4 vertices, 6 edges, 0 loops"), std::string::npos);
  auto dot = run({"graphs", "1->12,2->21", "-L", "2", "--format", "dot"});
  EXPECT_NE(dot.out.find("digraph"), std::string::npos);
  auto json = run({"graphs", "0->01,1->00", "-L", "2", "--format", "json"});
  EXPECT_NO_THROW(std::ignore = nlohmann::ordered_json::parse(json.out));
}

TEST(Cli, EpisAndEvidence) {
  auto e = run({"epis", "0->01,1->00", "-N", "2", "-L", "2", "-M", "0"});
  EXPECT_EQ(lines(e.out)[0], "2 epimorphisms G_1 -> G_2_0");
  auto ev = run({"evidence", "0->01,1->00", "-N", "2", "--lag", "1", "--partition", "{1}{2,3}", "--format", "json"});
  EXPECT_EQ(ev.code, 0);
  auto j = nlohmann::ordered_json::parse(ev.out);
  EXPECT_EQ(j["letter_graph_loops"], 2);
  EXPECT_EQ(j["rows"].size(), 14u);
}

TEST(Cli, ExitCodes) {
  auto parse = run({"analyze", "1->12,\n2->2x"});
  EXPECT_EQ(parse.code, 2);
  EXPECT_NE(parse.err.find("line 2, column 5"), std::string::npos);
  EXPECT_NE(parse.err.find("'x'"), std::string::npos);
  EXPECT_EQ(run({"factors", "1->11,2->22"}).code, 3);
  EXPECT_EQ(run({"factors", "1->12,2->12"}).code, 3);
  EXPECT_EQ(run({"factors", "1->121,2->233,3->312", "-q", "--kmax", "1"}).code, 4);
  auto budget = run({"factors", "1->12,2->21", "-q", "--budget", "0"});
  EXPECT_EQ(budget.code, 4);
  EXPECT_NE(budget.out.find("INCOMPLETE"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"factors"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, FileInputAndCache) {
  auto dir = std::filesystem::temp_directory_path() / ("subconj-cli-" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  auto file = dir / "tm.txt";
  std::ofstream(file) << "1->12\n2->21\n";
  auto r = run({"factors", file.string(), "-q", "--cache", (dir / "cache").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).back(), "15 entries, 0 undecided");
  EXPECT_FALSE(std::filesystem::is_empty(dir / "cache"));
  auto again = run({"factors", file.string(), "-q", "--cache", (dir / "cache").string()});
  EXPECT_EQ(again.out, r.out);
  std::filesystem::remove_all(dir);
}
