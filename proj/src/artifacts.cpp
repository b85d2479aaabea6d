#include "emopt/artifacts.hpp"

#include <fstream>
#include <stdexcept>

#include "emopt/csv.hpp"
#include "emopt/ipm.hpp"

namespace emopt {

namespace {

std::vector<std::string> archive_columns(const Problem& p) {
  std::vector<std::string> cols = {"gen", "eval_index"};
  for (int i = 1; i <= p.dimension(); ++i) cols.push_back("x" + std::to_string(i));
  for (int m = 1; m <= p.n_obj(); ++m) cols.push_back("f" + std::to_string(m) + "_raw");
  for (int j = 1; j <= p.n_con(); ++j) cols.push_back("g" + std::to_string(j));
  cols.push_back("feasible");
  cols.push_back("rank");
  return cols;
}

void write_entry_fields(CsvWriter& w, const Problem& p, const ArchiveEntry& e) {
  w.field(e.gen);
  w.field(e.eval_index);
  for (double v : e.ind.x) w.field(v);
  const ObjectiveVector raw = to_raw_form(p, e.ind.f);
  for (double v : raw) w.field(v);
  for (double v : e.ind.con.g) w.field(v);
  w.field(static_cast<long long>(e.ind.feasible() ? 1 : 0));
  w.field(e.ind.rank);
}

ArchiveEntry parse_entry(const CsvTable& t, const Problem& p, std::size_t row, int offset) {
  ArchiveEntry e;
  int c = offset;
  e.gen = static_cast<int>(t.number(row, c++));
  e.eval_index = static_cast<long long>(t.number(row, c++));
  e.ind.x.resize(p.dimension());
  for (int i = 0; i < p.dimension(); ++i) e.ind.x[i] = t.number(row, c++);
  ObjectiveVector raw(p.n_obj());
  for (int m = 0; m < p.n_obj(); ++m) raw[m] = t.number(row, c++);
  e.ind.f = to_min_form(p, raw);
  std::vector<double> g(p.n_con());
  for (int j = 0; j < p.n_con(); ++j) g[j] = t.number(row, c++);
  const bool feasible_flag = t.number(row, c++) != 0.0;
  e.ind.con = ConstraintReport::from_values(std::move(g), false);
  e.ind.con.degenerate = !feasible_flag && e.ind.con.cv >= ipm::kDegenerateSentinel;
  e.ind.rank = static_cast<int>(t.number(row, c++));
  return e;
}

}  // namespace

void write_archive_csv(const std::string& path, const Problem& problem,
                       const std::vector<ArchiveEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  CsvWriter w(out);
  w.header(archive_columns(problem));
  for (const ArchiveEntry& e : entries) {
    write_entry_fields(w, problem, e);
    w.end_row();
  }
}

std::vector<ArchiveEntry> read_archive_csv(const std::string& path, const Problem& problem) {
  const CsvTable t = CsvTable::read_file(path);
  t.require_column("eval_index");
  std::vector<ArchiveEntry> entries;
  entries.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    entries.push_back(parse_entry(t, problem, r, 0));
  return entries;
}

std::vector<FrontRow> pareto_front(const std::vector<ArchiveEntry>& entries, int run_id) {
  std::vector<FrontRow> rows;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].ind.feasible()) continue;
    bool dominated = false;
    for (std::size_t j = 0; j < entries.size() && !dominated; ++j) {
      if (i == j || !entries[j].ind.feasible()) continue;
      if (dominates(entries[j].ind.f, entries[i].ind.f)) dominated = true;
      // exact duplicates: keep only the earliest evaluation
      if (j < i && entries[j].ind.f == entries[i].ind.f) dominated = true;
    }
    if (!dominated) rows.push_back({run_id, entries[i]});
  }
  return rows;
}

void write_front_csv(const std::string& path, const Problem& problem,
                     const std::vector<FrontRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  CsvWriter w(out);
  std::vector<std::string> cols = archive_columns(problem);
  cols.insert(cols.begin(), "run");
  w.header(cols);
  for (const FrontRow& r : rows) {
    w.field(r.run);
    write_entry_fields(w, problem, r.entry);
    w.end_row();
  }
}

std::vector<FrontRow> read_front_csv(const std::string& path, const Problem& problem) {
  const CsvTable t = CsvTable::read_file(path);
  const int run_col = t.require_column("run");
  std::vector<FrontRow> rows;
  rows.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    FrontRow fr;
    fr.run = static_cast<int>(t.number(r, run_col));
    fr.entry = parse_entry(t, problem, r, 1);
    rows.push_back(std::move(fr));
  }
  return rows;
}

void write_pcp_csv(const std::string& path, const Problem& problem,
                   const std::vector<FrontRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  CsvWriter w(out);
  std::vector<std::string> cols = {"run", "eval_index"};
  for (int i = 1; i <= problem.dimension(); ++i) cols.push_back("x" + std::to_string(i) + "_norm");
  w.header(cols);
  const BoundsSpec& b = problem.bounds();
  for (const FrontRow& r : rows) {
    w.field(r.run);
    w.field(r.entry.eval_index);
    for (int i = 0; i < problem.dimension(); ++i)
      w.field((r.entry.ind.x[i] - b.lower[i]) / b.range(i));
    w.end_row();
  }
}

void write_cycles_csv(const std::string& path, const std::vector<CycleLog>& cycles) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  CsvWriter w(out);
  w.header({"cycle", "archive_size_before", "model_f1", "model_f2", "infill_count", "mse_f1",
            "mse_f2", "fallback", "stalled"});
  for (const CycleLog& c : cycles) {
    w.field(c.cycle);
    w.field(c.archive_size_before);
    w.field(c.model_label[0]);
    w.field(c.model_label[1]);
    w.field(c.infill_count);
    w.field(c.infill_mse[0]);
    w.field(c.infill_mse[1]);
    w.field(static_cast<long long>(c.fallback ? 1 : 0));
    w.field(static_cast<long long>(c.stalled ? 1 : 0));
    w.end_row();
  }
}

void write_models_csv(const std::string& path, const std::vector<ModelSelectionRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  CsvWriter w(out);
  std::vector<std::string> cols = {"cycle", "objective", "winner"};
  if (!rows.empty())
    for (const SelectionEntry& e : rows[0].entries) cols.push_back("mse_" + e.spec.label());
  w.header(cols);
  for (const ModelSelectionRow& r : rows) {
    w.field(r.cycle);
    w.field(r.objective);
    w.field(r.winner);
    for (const SelectionEntry& e : r.entries)
      w.field(e.failed ? std::string("failed") : format_double(e.mse));
    w.end_row();
  }
}

RunSummary summarize(const std::string& label, const std::vector<ArchiveEntry>& entries,
                     const HvReference& ref) {
  RunSummary s;
  s.label = label;
  s.evaluations = static_cast<long long>(entries.size());
  std::vector<ObjectiveVector> front;
  for (const FrontRow& r : pareto_front(entries, 0)) front.push_back(r.entry.ind.f);
  for (const ArchiveEntry& e : entries)
    if (e.ind.feasible()) ++s.feasible;
  s.non_dominated = static_cast<long long>(front.size());
  s.hypervolume = hypervolume2d(front, ref);
  return s;
}

void write_summary(const std::string& path, const std::string& config_text,
                   const std::vector<RunSummary>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "run summary\n===========\n\n";
  out << "label | evals | feasible | non-dominated | normalized HV\n";
  for (const RunSummary& r : rows) {
    out << r.label << " | " << r.evaluations << " | " << r.feasible << " | " << r.non_dominated
        << " | " << format_double(r.hypervolume) << "\n";
  }
  out << "\nresolved configuration\n----------------------\n" << config_text;
}

}  // namespace emopt
