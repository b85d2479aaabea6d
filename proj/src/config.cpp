#include "emopt/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "emopt/csv.hpp"
#include "emopt/problem.hpp"

namespace emopt {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

// section -> key -> entry
using Sections = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

Sections parse_sections(const std::string& text) {
  Sections sections;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError(lineno, "empty section name");
      sections[section];
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected key = value");
    if (section.empty()) throw ConfigError(lineno, "key outside any [section]");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "empty key");
    auto [it, inserted] = sections[section].emplace(key, Entry{value, lineno, false});
    if (!inserted) throw ConfigError(lineno, "duplicate key '" + key + "'");
  }
  return sections;
}

class Reader {
 public:
  explicit Reader(Sections sections) : sections_(std::move(sections)) {}

  bool has(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
  }

  std::string get(const std::string& section, const std::string& key, bool* found = nullptr) {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key)) {
      if (found) *found = false;
      return "";
    }
    Entry& e = s->second[key];
    e.consumed = true;
    if (found) *found = true;
    return e.value;
  }

  template <typename T>
  void read(const std::string& section, const std::string& key, T& out) {
    bool found = false;
    const std::string v = get(section, key, &found);
    if (!found) return;
    std::istringstream ss(v);
    T parsed{};
    ss >> parsed;
    if (ss.fail() || !trim_rest_empty(ss))
      throw ConfigError(line_of(section, key), "cannot parse value '" + v + "' for " + key);
    out = parsed;
  }

  void read(const std::string& section, const std::string& key, std::string& out) {
    bool found = false;
    const std::string v = get(section, key, &found);
    if (found) out = v;
  }

  void read_seeds(const std::string& section, const std::string& key,
                  std::vector<std::uint64_t>& out) {
    bool found = false;
    const std::string v = get(section, key, &found);
    if (!found) return;
    out = parse_list<std::uint64_t>(section, key, v);
  }

  void read_values(const std::string& section, const std::string& key,
                   std::vector<long long>& out) {
    bool found = false;
    const std::string v = get(section, key, &found);
    if (!found) return;
    out = parse_list<long long>(section, key, v);
  }

  int line_of(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key)) return 0;
    return s->second[key].line;
  }

  void reject_unknown(const std::set<std::string>& known_sections) {
    for (const auto& [section, entries] : sections_) {
      if (!known_sections.count(section))
        throw ConfigError(first_line(entries), "unknown section [" + section + "]");
      for (const auto& [key, entry] : entries)
        if (!entry.consumed)
          throw ConfigError(entry.line, "unknown key '" + key + "' in [" + section + "]");
    }
  }

 private:
  static bool trim_rest_empty(std::istringstream& ss) {
    std::string rest;
    ss >> rest;
    return rest.empty();
  }

  static int first_line(const std::map<std::string, Entry>& entries) {
    int best = 0;
    for (const auto& [k, e] : entries)
      if (best == 0 || e.line < best) best = e.line;
    return best;
  }

  template <typename T>
  std::vector<T> parse_list(const std::string& section, const std::string& key,
                            const std::string& v) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::istringstream is(trim(item));
      T parsed{};
      is >> parsed;
      if (is.fail())
        throw ConfigError(line_of(section, key), "cannot parse list item '" + item + "'");
      out.push_back(parsed);
    }
    if (out.empty()) throw ConfigError(line_of(section, key), "empty list for " + key);
    return out;
  }

  Sections sections_;
};

void read_run_sections(Reader& reader, RunSpec& spec) {
  reader.read("run", "problem", spec.problem);
  reader.read("run", "mode", spec.mode);
  reader.read_seeds("run", "seeds", spec.seeds);
  reader.read("run", "ese_max", spec.config.ese_max);
  reader.read("run", "population", spec.config.population);
  reader.read("run", "offspring", spec.config.offspring);
  reader.read("run", "n_doe", spec.config.n_doe);
  reader.read("run", "n_infill", spec.config.n_infill);
  reader.read("run", "k", spec.config.k_surrogate_gens);

  reader.read("variation", "crossover_prob", spec.config.variation.crossover_prob);
  reader.read("variation", "eta_c", spec.config.variation.eta_c);
  reader.read("variation", "eta_m", spec.config.variation.eta_m);
  reader.read("variation", "mutation_prob", spec.config.variation.mutation_prob);

  reader.read("repair", "rho", spec.config.repair.max_precision_attempts);
  reader.read("repair", "simplex_max_iters", spec.config.repair.simplex_max_iters);
  reader.read("repair", "simplex_restarts", spec.config.repair.simplex_restarts);
  reader.read("repair", "interior_slack", spec.config.repair.interior_slack);
  reader.read("repair", "simplex_size_tol", spec.config.repair.simplex_size_tol);
  reader.read("repair", "initial_step_fraction", spec.config.repair.initial_step_fraction);
}

}  // namespace

void RunSpec::validate() const {
  if (mode != "plain" && mode != "wr" && mode != "wr-sa")
    throw ConfigError(0, "mode must be plain, wr, or wr-sa (got '" + mode + "')");
  if (seeds.empty()) throw ConfigError(0, "need at least one seed");
  const auto names = problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end()) {
    std::string all;
    for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
    throw ConfigError(0, "unknown benchmark '" + problem + "'; available: " + all);
  }
  config.validate();
}

void StudySpec::validate() const {
  base.validate();
  if (vary != "n_infill" && vary != "k" && vary != "n_doe")
    throw ConfigError(0, "vary must be n_infill, k, or n_doe (got '" + vary + "')");
  if (values.empty()) throw ConfigError(0, "study needs at least one value");
}

RunSpec parse_run_spec_text(const std::string& text) {
  Reader reader(parse_sections(text));
  RunSpec spec;
  read_run_sections(reader, spec);
  reader.reject_unknown({"run", "variation", "repair"});
  spec.validate();
  return spec;
}

RunSpec parse_run_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_spec_text(buffer.str());
}

std::string serialize_run_spec(const RunSpec& spec) {
  std::ostringstream out;
  out << "[run]\n";
  out << "problem = " << spec.problem << "\n";
  out << "mode = " << spec.mode << "\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) out << (i ? "," : "") << spec.seeds[i];
  out << "\n";
  out << "ese_max = " << spec.config.ese_max << "\n";
  out << "population = " << spec.config.population << "\n";
  out << "offspring = " << spec.config.offspring << "\n";
  out << "n_doe = " << spec.config.n_doe << "\n";
  out << "n_infill = " << spec.config.n_infill << "\n";
  out << "k = " << spec.config.k_surrogate_gens << "\n";
  out << "\n[variation]\n";
  out << "crossover_prob = " << format_double(spec.config.variation.crossover_prob) << "\n";
  out << "eta_c = " << format_double(spec.config.variation.eta_c) << "\n";
  out << "eta_m = " << format_double(spec.config.variation.eta_m) << "\n";
  out << "mutation_prob = " << format_double(spec.config.variation.mutation_prob) << "\n";
  out << "\n[repair]\n";
  out << "rho = " << spec.config.repair.max_precision_attempts << "\n";
  out << "simplex_max_iters = " << spec.config.repair.simplex_max_iters << "\n";
  out << "simplex_restarts = " << spec.config.repair.simplex_restarts << "\n";
  out << "interior_slack = " << format_double(spec.config.repair.interior_slack) << "\n";
  out << "simplex_size_tol = " << format_double(spec.config.repair.simplex_size_tol) << "\n";
  out << "initial_step_fraction = " << format_double(spec.config.repair.initial_step_fraction)
      << "\n";
  return out.str();
}

StudySpec parse_study_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open study file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();

  Reader reader(parse_sections(buffer.str()));
  StudySpec spec;
  read_run_sections(reader, spec.base);
  reader.read("study", "vary", spec.vary);
  reader.read_values("study", "values", spec.values);
  reader.reject_unknown({"run", "variation", "repair", "study"});
  spec.validate();
  return spec;
}

}  // namespace emopt
