#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "json.hpp"

#include "subconj/catalog.hpp"

namespace subconj {

using json = nlohmann::ordered_json;

inline json word_to_json(const Word& w) {
  auto out = json::array();
  for (Letter a : w) out.push_back(a + 1);
  return out;
}

inline Word word_from_json(const json& j) {
  Word w;
  for (const auto& x : j) {
    auto v = x.get<long>();
    if (v < 1) throw_invalid("letters are numbered from 1");
    w.push_back(static_cast<Letter>(v - 1));
  }
  return w;
}

inline std::string aperiodicity_name(Aperiodicity a) { return to_string(a); }

inline Aperiodicity aperiodicity_from(const std::string& s) {
  if (s == to_string(Aperiodicity::aperiodic_up_to_bound)) return Aperiodicity::aperiodic_up_to_bound;
  if (s == to_string(Aperiodicity::periodic)) return Aperiodicity::periodic;
  return Aperiodicity::unknown;
}

inline json to_json(const Certificate& c, const Alphabet& block_alphabet) {
  json j;
  j["kind"] = kind_of(c);
  if (const auto* i = std::get_if<Intertwining>(&c)) {
    j["p"] = i->p;
    j["lag"] = i->lag;
    j["partition"] = format_partition(i->projection, block_alphabet);
  } else if (const auto* r = std::get_if<WordRefutation>(&c)) {
    j["word"] = word_to_json(r->word);
    j["length"] = r->length;
    j["direction"] = to_string(r->direction);
  } else {
    j["checked_up_to"] = std::get<Undecided>(c).checked_up_to;
  }
  return j;
}

inline Certificate certificate_from_json(const json& j, const Alphabet& block_alphabet) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "intertwining") {
    return Intertwining{j.at("p").get<std::size_t>(), j.at("lag").get<std::size_t>(),
                        parse_partition(j.at("partition").get<std::string>(), block_alphabet)};
  }
  if (kind == "word-refutation") {
    auto dir = j.at("direction").get<std::string>() == "candidate-not-in-system"
                   ? RefutationDirection::candidate_not_in_system
                   : RefutationDirection::system_not_in_candidate;
    return WordRefutation{word_from_json(j.at("word")), j.at("length").get<std::size_t>(), dir};
  }
  if (kind == "undecided") return Undecided{j.at("checked_up_to").get<std::size_t>()};
  throw_invalid("unknown certificate kind '" + kind + "'");
}

inline json to_json(const CatalogEntry& e, const Alphabet& block_alphabet) {
  json j;
  j["standard_form"] = to_string(e.standard_form);
  j["alphabet_size"] = e.alphabet_size;
  json prov;
  prov["partition"] = format_partition(e.provenance.partition, block_alphabet);
  prov["partition_index"] = e.provenance.partition_index;
  prov["residue"] = e.provenance.residue;
  json epi;
  epi["index"] = e.provenance.epimorphism_index;
  epi["assignment"] = e.provenance.epimorphism.assignment;
  epi["substitution"] = to_string(e.provenance.epimorphism.induced);
  prov["epimorphism"] = std::move(epi);
  j["provenance"] = std::move(prov);
  j["certificate"] = to_json(e.certificate, block_alphabet);
  j["flags"] = {{"injective", e.flags.injective},
                {"primitive", e.flags.primitive},
                {"aperiodic", aperiodicity_name(e.flags.aperiodic)}};
  if (e.conjugacy) j["conjugacy"] = {{"method", e.conjugacy->method}, {"detail", e.conjugacy->detail}};
  return j;
}

inline CatalogEntry entry_from_json(const json& j, const Alphabet& block_alphabet) {
  CatalogEntry e;
  e.standard_form = parse_substitution(j.at("standard_form").get<std::string>()).canonicalized();
  e.alphabet_size = j.at("alphabet_size").get<std::size_t>();
  const auto& prov = j.at("provenance");
  e.provenance.partition = parse_partition(prov.at("partition").get<std::string>(), block_alphabet);
  e.provenance.partition_index = prov.at("partition_index").get<std::uint64_t>();
  e.provenance.residue = prov.at("residue").get<std::size_t>();
  const auto& epi = prov.at("epimorphism");
  e.provenance.epimorphism_index = epi.at("index").get<std::size_t>();
  e.provenance.epimorphism.assignment = epi.at("assignment").get<std::vector<Vertex>>();
  e.provenance.epimorphism.induced = parse_substitution(epi.at("substitution").get<std::string>());
  e.certificate = certificate_from_json(j.at("certificate"), block_alphabet);
  const auto& f = j.at("flags");
  e.flags = EntryFlags{f.at("injective").get<bool>(), f.at("primitive").get<bool>(),
                       aperiodicity_from(f.at("aperiodic").get<std::string>())};
  if (j.contains("conjugacy")) {
    e.conjugacy = ConjugacyBasis{j["conjugacy"].at("method").get<std::string>(),
                                 j["conjugacy"].at("detail").get<std::string>()};
  }
  return e;
}

inline json to_json(const CatalogStats& s) {
  return json{{"partitions_total", s.partitions_total},
              {"partitions_explored", s.partitions_explored},
              {"symmetry_group_order", s.symmetry_group_order},
              {"cases_total", s.cases_total},
              {"cases_done", s.cases_done},
              {"epimorphisms", s.epimorphisms},
              {"discarded_nonprimitive", s.discarded_nonprimitive},
              {"refuted", s.refuted},
              {"certified", s.certified},
              {"undecided_candidates", s.undecided_candidates},
              {"discarded_periodic", s.discarded_periodic},
              {"search",
               {{"nodes_expanded", s.search.nodes_expanded},
                {"pruned_T1", s.search.pruned_T1},
                {"pruned_T2", s.search.pruned_T2},
                {"pruned_T3", s.search.pruned_T3},
                {"pruned_cycles", s.search.pruned_cycles},
                {"candidates_found", s.search.candidates_found}}},
              {"sublists_computed", s.sublists_computed},
              {"sublist_cache_hits", s.sublist_cache_hits},
              {"amalgamation_shortcuts", s.amalgamation_shortcuts},
              {"excluded", s.excluded}};
}

inline CatalogStats stats_from_json(const json& j) {
  CatalogStats s;
  s.partitions_total = j.at("partitions_total");
  s.partitions_explored = j.at("partitions_explored");
  s.symmetry_group_order = j.at("symmetry_group_order");
  s.cases_total = j.at("cases_total");
  s.cases_done = j.at("cases_done");
  s.epimorphisms = j.at("epimorphisms");
  s.discarded_nonprimitive = j.at("discarded_nonprimitive");
  s.refuted = j.at("refuted");
  s.certified = j.at("certified");
  s.undecided_candidates = j.at("undecided_candidates");
  s.discarded_periodic = j.at("discarded_periodic");
  const auto& q = j.at("search");
  s.search.nodes_expanded = q.at("nodes_expanded");
  s.search.pruned_T1 = q.at("pruned_T1");
  s.search.pruned_T2 = q.at("pruned_T2");
  s.search.pruned_T3 = q.at("pruned_T3");
  s.search.pruned_cycles = q.at("pruned_cycles");
  s.search.candidates_found = q.at("candidates_found");
  s.sublists_computed = j.at("sublists_computed");
  s.sublist_cache_hits = j.at("sublist_cache_hits");
  s.amalgamation_shortcuts = j.at("amalgamation_shortcuts");
  s.excluded = j.at("excluded");
  return s;
}

inline json to_json(const Catalog& c) {
  const auto block_alphabet = Alphabet::canonical(c.block_alphabet_size);
  json j;
  j["kind"] = c.kind;
  j["source"] = to_string(c.source);
  j["length"] = c.length;
  j["entries"] = json::array();
  for (const auto& e : c.entries) j["entries"].push_back(to_json(e, block_alphabet));
  j["undecided"] = json::array();
  for (const auto& e : c.undecided) j["undecided"].push_back(to_json(e, block_alphabet));
  j["tool_version"] = std::string(kToolVersion);
  json opt;
  opt["symmetry"] = c.options.symmetry;
  opt["kmax"] = c.options.kmax ? json(*c.options.kmax) : json(nullptr);
  opt["budget_seconds"] = c.options.budget_seconds ? json(*c.options.budget_seconds) : json(nullptr);
  j["options"] = std::move(opt);
  j["presentation_base"] = to_string(c.presentation_base);
  j["block_alphabet_size"] = c.block_alphabet_size;
  j["complete"] = c.complete;
  j["stats"] = to_json(c.stats);
  return j;
}

inline Catalog catalog_from_json(const json& j) {
  Catalog c;
  c.kind = j.at("kind").get<std::string>();
  c.source = parse_substitution(j.at("source").get<std::string>()).canonicalized();
  c.length = j.at("length").get<std::size_t>();
  c.presentation_base = parse_substitution(j.at("presentation_base").get<std::string>()).canonicalized();
  c.block_alphabet_size = j.at("block_alphabet_size").get<std::size_t>();
  const auto block_alphabet = Alphabet::canonical(c.block_alphabet_size);
  for (const auto& e : j.at("entries")) c.entries.push_back(entry_from_json(e, block_alphabet));
  for (const auto& e : j.at("undecided")) c.undecided.push_back(entry_from_json(e, block_alphabet));
  c.complete = j.at("complete").get<bool>();
  const auto& opt = j.at("options");
  c.options.symmetry = opt.at("symmetry").get<bool>();
  if (!opt.at("kmax").is_null()) c.options.kmax = opt["kmax"].get<std::size_t>();
  if (!opt.at("budget_seconds").is_null()) c.options.budget_seconds = opt["budget_seconds"].get<double>();
  c.stats = stats_from_json(j.at("stats"));
  return c;
}

/// Factor lists on disk, one JSON file per (standard form, length).
class FactorListCache {
 public:
  explicit FactorListCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& directory() const noexcept { return dir_; }

  std::filesystem::path path_for(const Substitution& key) const {
    return dir_ / ("factors-L" + std::to_string(key.length()) + "-" +
                   format_word(key.characteristic_word(), Alphabet::canonical(key.size())) + ".json");
  }

  /// A complete cached list for key computed with the same kmax, if any.
  std::optional<Catalog> load(const Substitution& key, const ProcedureOptions& opt) const {
    const auto path = path_for(key);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
      auto j = json::parse(in);
      if (j.at("tool_version").get<std::string>() != kToolVersion) return std::nullopt;
      auto c = catalog_from_json(j);
      if (c.kind != "factors" || !c.complete || !c.source.same_images(key)) return std::nullopt;
      if (c.options.kmax != opt.kmax) return std::nullopt;
      c.options.symmetry = opt.symmetry;
      c.options.budget_seconds = opt.budget_seconds;
      return c;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  /// Writes to a temporary file, then renames it into place.
  void store(const Catalog& c) const {
    std::filesystem::create_directories(dir_);
    const auto path = path_for(c.source);
    std::ostringstream tag;
    tag << std::this_thread::get_id() << '-' << std::random_device{}();
    auto tmp = path;
    tmp += ".tmp-" + tag.str();
    {
      std::ofstream out(tmp);
      if (!out) throw_invalid("cannot write cache file " + tmp.string());
      out << to_json(c).dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace subconj
