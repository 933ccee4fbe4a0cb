#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "subconj/subconj.hpp"

namespace subconj::cli {

enum ExitCode { kOk = 0, kInvalid = 2, kUnsupported = 3, kUndecided = 4 };

struct Request {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<std::size_t> l;
  std::optional<std::size_t> kmax;
  std::size_t jobs = 0;
  std::string cache;
  bool no_symmetry = false;
  std::string format = "text";
  std::optional<double> budget;
  std::string partition;
  std::optional<std::size_t> lag;
  std::size_t depth = 3;
  bool quiet = false;
};

/// Reads a substitution from the argument itself, or from the file it names.
inline Substitution read_substitution(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream text;
    text << in.rdbuf();
    return parse_substitution(text.str());
  }
  return parse_substitution(arg);
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

class Runner {
 public:
  Runner(const Request& req, std::ostream& out, std::ostream& err) : req_(req), out_(out), err_(err) {}

  int run() {
    const auto& c = req_.command;
    if (req_.format != "text" && req_.format != "json" && req_.format != "dot") {
      throw_invalid("unknown format '" + req_.format + "'");
    }
    if (req_.format == "dot" && c != "graphs") throw_invalid("dot output is only available for graphs");
    if (c == "analyze") return analyze();
    if (c == "std") return standard();
    if (c == "injectivize") return injectivize_cmd();
    if (c == "nblock") return nblock();
    if (c == "language") return language_cmd();
    if (c == "graphs") return graphs();
    if (c == "epis") return epis();
    if (c == "factors") return catalog_cmd(false);
    if (c == "conjugacy") return catalog_cmd(true);
    if (c == "conjugate") return conjugate();
    if (c == "evidence") return evidence();
    throw_invalid("unknown command '" + c + "'");
  }

 private:
  bool json_out() const { return req_.format == "json"; }

  Substitution input(std::size_t i = 0) const { return read_substitution(req_.inputs.at(i)); }

  void emit(const nlohmann::ordered_json& j) { out_ << j.dump(2) << '\n'; }

  int analyze() {
    auto s = input();
    auto r = subconj::analyze(s);
    if (json_out()) {
      nlohmann::ordered_json j;
      j["substitution"] = to_string(s);
      j["length"] = s.length();
      j["alphabet_size"] = s.size();
      j["primitive"] = r.primitive;
      j["injective"] = r.injective;
      j["aperiodic"] = to_string(r.aperiodic);
      j["standard_form"] = to_string(r.standard_form);
      j["characteristic_word"] = format_word(r.characteristic_word, r.standard_form.alphabet());
      emit(j);
    } else {
      out_ << "substitution   " << to_string(s) << '\n'
           << "length         " << s.length() << '\n'
           << "alphabet size  " << s.size() << '\n'
           << "primitive      " << yes_no(r.primitive) << '\n'
           << "injective      " << yes_no(r.injective) << '\n'
           << "aperiodic      " << to_string(r.aperiodic) << '\n'
           << "standard form  " << to_string(r.standard_form) << '\n';
    }
    return kOk;
  }

  int standard() {
    auto s = input();
    auto sf = standard_form(s);
    if (json_out()) {
      nlohmann::ordered_json j;
      j["standard_form"] = to_string(sf.substitution);
      auto perm = nlohmann::ordered_json::object();
      for (std::size_t a = 0; a < s.size(); ++a) {
        perm[s.alphabet().name(static_cast<Letter>(a))] = sf.substitution.alphabet().name(sf.permutation[a]);
      }
      j["relabelling"] = perm;
      emit(j);
    } else {
      out_ << to_string(sf.substitution) << '\n';
    }
    return kOk;
  }

  int injectivize_cmd() {
    auto s = input();
    auto inj = injectivize(s);
    if (json_out()) {
      nlohmann::ordered_json j;
      j["injectivization"] = to_string(inj.substitution);
      j["rounds"] = inj.rounds;
      j["classes"] = format_partition(inj.map, s.alphabet());
      j["standard_form"] = to_string(standard_form(inj.substitution).substitution);
      emit(j);
    } else {
      out_ << to_string(inj.substitution) << '\n'
           << "rounds         " << inj.rounds << '\n'
           << "classes        " << format_partition(inj.map, s.alphabet()) << '\n'
           << "standard form  " << to_string(standard_form(inj.substitution).substitution) << '\n';
    }
    return kOk;
  }

  int nblock() {
    auto s = input();
    const auto n = req_.n.value_or(2);
    const auto m = req_.m.value_or(0);
    if (n == 0) throw_invalid("-N must be positive");
    if (m > max_lag(s.length(), n)) {
      throw_invalid("-M must lie in 0.." + std::to_string(max_lag(s.length(), n)) + " for N=" + std::to_string(n));
    }
    auto coding = block_coding(s, n);
    auto hat = hat_substitution(s, coding, m);
    if (json_out()) {
      nlohmann::ordered_json j;
      j["substitution"] = to_string(hat);
      j["block_length"] = n;
      j["lag"] = m;
      j["coding"] = to_json(coding);
      emit(j);
    } else {
      out_ << to_string(hat) << '\n';
      for (std::size_t i = 0; i < coding.size(); ++i) {
        out_ << "  " << coding.coded_alphabet().name(static_cast<Letter>(i)) << " = "
             << format_word(coding.word_of(static_cast<Letter>(i)), s.alphabet()) << '\n';
      }
    }
    return kOk;
  }

  int language_cmd() {
    auto s = input();
    const auto n = req_.n.value_or(2);
    auto words = language(s, n);
    if (json_out()) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& w : words) arr.push_back(format_word(w, s.alphabet()));
      emit(nlohmann::ordered_json{{"length", n}, {"count", words.size()}, {"words", arr}});
    } else {
      for (const auto& w : words) out_ << format_word(w, s.alphabet()) << '\n';
    }
    return kOk;
  }

  /// The system selected by -N (block presentation), --lag and --partition.
  ProjectedSystem system_of(const Substitution& s) const {
    const auto n = req_.n.value_or(1);
    const auto lag = req_.lag.value_or(0);
    if (n == 0) throw_invalid("-N must be positive");
    if (n == 1) {
      if (lag != 0) throw_invalid("--lag needs -N >= 2");
      auto pi = req_.partition.empty() ? LetterMap::identity(s.size()) : parse_partition(req_.partition, s.alphabet());
      return ProjectedSystem(s, pi);
    }
    if (lag > max_lag(s.length(), n)) throw_invalid("--lag out of range");
    auto gen = hat_substitution(s, n, lag);
    auto pi = req_.partition.empty() ? LetterMap::identity(gen.size()) : parse_partition(req_.partition, gen.alphabet());
    return ProjectedSystem(gen, pi, BlockPresentation{s, n});
  }

  int graphs() {
    auto sys = system_of(input());
    if (!is_primitive(sys.generator)) throw_unsupported("generator is not primitive");
    const auto target = req_.l.value_or(sys.generator.length());
    const auto m = req_.m.value_or(0);
    auto names = sys.target_alphabet();
    auto g1 = letter_graph(sys);
    auto g = block_graph(sys, target, m);
    const auto tag = "G_" + std::to_string(target) + "_" + std::to_string(m);
    if (req_.format == "dot") {
      out_ << to_dot(g1, names, "G_1") << to_dot(g, names, tag);
    } else if (json_out()) {
      auto a = to_json(g1, names);
      a["loops"] = loop_count(g1);
      auto b = to_json(g, names);
      b["loops"] = loop_count(g);
      b["length"] = target;
      b["residue"] = m;
      emit(nlohmann::ordered_json{{"letter_graph", a}, {"block_graph", b}});
    } else {
      print_graph("G_1", g1, names);
      print_graph(tag, g, names);
    }
    return kOk;
  }

  void print_graph(const std::string& title, const FactorGraph& g, const Alphabet& names) {
    out_ << title << ": " << g.vertex_count() << " vertices, " << g.edge_count() << " edges, " << loop_count(g)
         << " loops\n";
    for (const auto& [u, v] : g.edges()) {
      out_ << "  " << format_word(g.vertex(u), names) << " -> " << format_word(g.vertex(v), names) << '\n';
    }
  }

  int epis() {
    auto sys = system_of(input());
    if (!is_primitive(sys.generator)) throw_unsupported("generator is not primitive");
    const auto target = req_.l.value_or(sys.generator.length());
    const auto m = req_.m.value_or(0);
    auto names = sys.target_alphabet();
    auto g1 = letter_graph(sys);
    auto g = block_graph(sys, target, m);
    auto result = enumerate_epis(g1, g, {}, names);
    const auto& st = result.stats;
    if (json_out()) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& e : result.epimorphisms) arr.push_back(to_string(e.induced));
      emit(nlohmann::ordered_json{
          {"length", target},
          {"residue", m},
          {"epimorphisms", arr},
          {"stats",
           {{"nodes_expanded", st.nodes_expanded},
            {"pruned_T1", st.pruned_T1},
            {"pruned_T2", st.pruned_T2},
            {"pruned_T3", st.pruned_T3},
            {"pruned_cycles", st.pruned_cycles},
            {"candidates_found", st.candidates_found}}}});
    } else {
      out_ << result.epimorphisms.size() << " epimorphisms G_1 -> G_" << target << "_" << m << '\n';
      for (const auto& e : result.epimorphisms) out_ << "  " << to_string(e.induced) << '\n';
      out_ << "nodes " << st.nodes_expanded << ", pruned T1/T2/T3/cycles " << st.pruned_T1 << "/" << st.pruned_T2
           << "/" << st.pruned_T3 << "/" << st.pruned_cycles << '\n';
    }
    return kOk;
  }

  ProcedureOptions procedure_options() {
    ProcedureOptions o;
    o.jobs = req_.jobs ? req_.jobs : std::max(1u, std::thread::hardware_concurrency());
    o.symmetry = !req_.no_symmetry;
    o.kmax = req_.kmax;
    o.budget_seconds = req_.budget;
    if (!req_.cache.empty()) {
      cache_.emplace(req_.cache);
      o.cache = &*cache_;
    }
    if (!req_.quiet) {
      o.progress = [this](std::string_view stage, std::uint64_t done, std::uint64_t total) {
        const auto step = std::max<std::uint64_t>(1, total / 20);
        if (done % step == 0 || done == total) err_ << stage << ": " << done << "/" << total << '\n';
      };
    }
    return o;
  }

  void print_catalog(const Catalog& cat) {
    const auto block = Alphabet::canonical(cat.block_alphabet_size);
    out_ << (cat.kind == "conjugacy" ? "conjugacy list of " : "factor list of ") << to_string(cat.source)
         << "  (length " << cat.length << ", 3-block alphabet " << cat.block_alphabet_size << ")\n";
    std::size_t width = 9;
    for (const auto& e : cat.entries) width = std::max(width, format_partition(e.provenance.partition, block).size());
    for (const auto& e : cat.undecided) width = std::max(width, format_partition(e.provenance.partition, block).size());
    auto row = [&](const std::string& nr, const CatalogEntry& e) {
      out_ << std::left << std::setw(5) << nr << std::setw(static_cast<int>(width) + 2)
           << format_partition(e.provenance.partition, block) << std::setw(3) << e.provenance.residue
           << to_string(e.standard_form) << '\n';
    };
    out_ << std::left << std::setw(5) << "Nr." << std::setw(static_cast<int>(width) + 2) << "Partition"
         << std::setw(3) << "M"
         << "Substitution\n";
    for (std::size_t i = 0; i < cat.entries.size(); ++i) row(std::to_string(i + 1), cat.entries[i]);
    if (!cat.undecided.empty()) {
      out_ << "undecided:\n";
      for (std::size_t i = 0; i < cat.undecided.size(); ++i) row("?" + std::to_string(i + 1), cat.undecided[i]);
    }
    out_ << cat.entries.size() << " entries, " << cat.undecided.size() << " undecided"
         << (cat.complete ? "" : ", INCOMPLETE (budget exhausted)") << '\n';
  }

  int catalog_cmd(bool conjugacy) {
    auto s = input();
    auto opt = procedure_options();
    auto cat = conjugacy ? conjugacy_list(s, opt) : factor_list(s, opt);
    if (json_out()) {
      emit(to_json(cat));
    } else {
      print_catalog(cat);
    }
    return cat.undecided.empty() && cat.complete ? kOk : kUndecided;
  }

  int conjugate() {
    if (req_.inputs.size() != 2) throw_invalid("conjugate needs two substitutions");
    auto a = input(0);
    auto b = input(1);
    auto opt = procedure_options();
    auto d = decide_conjugate(a, b, opt);
    if (json_out()) {
      nlohmann::ordered_json j;
      j["first"] = to_string(d.first);
      j["second"] = to_string(d.second);
      j["verdict"] = to_string(d.verdict);
      if (d.list) {
        j["conjugacy_list_size"] = d.list->entries.size();
        j["conjugacy_list_undecided"] = d.list->undecided.size();
      }
      emit(j);
    } else {
      out_ << to_string(d.verdict) << '\n';
    }
    return d.verdict == Verdict::undecided ? kUndecided : kOk;
  }

  int evidence() {
    auto sys = system_of(input());
    if (!is_primitive(sys.generator)) throw_unsupported("generator is not primitive");
    auto report = non_substitutive_evidence(sys, req_.depth);
    if (json_out()) {
      auto rows = nlohmann::ordered_json::array();
      for (const auto& r : report.rows) {
        rows.push_back({{"n", r.n},
                        {"residue", r.residue},
                        {"vertices", r.vertices},
                        {"edges", r.edges},
                        {"loops", r.loops},
                        {"epimorphisms", r.epimorphisms}});
      }
      emit(nlohmann::ordered_json{{"letter_graph_loops", report.letter_graph_loops},
                                  {"rows", rows},
                                  {"no_epimorphisms", report.no_epimorphisms()}});
    } else {
      out_ << "G_1 loops " << report.letter_graph_loops << '\n';
      out_ << "n  M    vertices  edges  loops  epis\n";
      for (const auto& r : report.rows) {
        out_ << std::left << std::setw(3) << r.n << std::setw(5) << r.residue << std::setw(10) << r.vertices
             << std::setw(7) << r.edges << std::setw(7) << r.loops << r.epimorphisms << '\n';
      }
      out_ << (report.no_epimorphisms() ? "no epimorphism at any tested level\n"
                                        : "epimorphisms exist at some tested level\n");
    }
    return kOk;
  }

  const Request& req_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<FactorListCache> cache_;
};

inline int run(const Request& req, std::ostream& out, std::ostream& err) {
  try {
    return Runner(req, out, err).run();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::unsupported ? kUnsupported : kInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conjugacy and factor lists of constant-length substitutions", "subconj"};
  app.require_subcommand(1);
  Request req;

  struct Command {
    const char* name;
    const char* help;
    std::size_t inputs;
  };
  const Command commands[] = {
      {"analyze", "primitivity, injectivity, aperiodicity and standard form", 1},
      {"std", "standard form", 1},
      {"injectivize", "merge letters with equal images", 1},
      {"nblock", "N-block substitution with lag M", 1},
      {"language", "factors of length N", 1},
      {"graphs", "G_1 and G_{L,M} of a projected system", 1},
      {"epis", "epimorphisms G_1 -> G_{L,M}", 1},
      {"factors", "factor list", 1},
      {"conjugacy", "conjugacy list", 1},
      {"conjugate", "decide conjugacy of two substitutions", 2},
      {"evidence", "epimorphism census for G_{L^n,M}, n <= depth", 1},
  };
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("substitution", req.inputs, "rules such as 1->12,2->21, or a file holding them")
        ->required()
        ->expected(static_cast<int>(cmd.inputs));
    sub->add_option("-N", req.n, "block or factor length");
    sub->add_option("-M", req.m, "lag (nblock) or residue (graphs, epis)");
    sub->add_option("-L", req.l, "target block length for graphs");
    sub->add_option("--kmax", req.kmax, "longest factor length compared when refuting");
    sub->add_option("--jobs", req.jobs, "worker threads (default: all cores)");
    sub->add_option("--cache", req.cache, "directory of cached factor lists");
    sub->add_flag("--no-symmetry", req.no_symmetry, "do not quotient partitions by symmetries");
    sub->add_option("--format", req.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--budget", req.budget, "wall-clock limit in seconds");
    sub->add_option("--partition", req.partition, "letter-to-letter map such as {1}{2,3}");
    sub->add_option("--lag", req.lag, "lag of the block presentation (graphs, epis, evidence)");
    sub->add_option("--depth", req.depth, "largest n for evidence");
    sub->add_flag("-q,--quiet", req.quiet, "no progress on stderr");
    sub->callback([&req, name = std::string(cmd.name)] { req.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalid;
  }
  return run(req, out, err);
}

}  // namespace subconj::cli
