// Run artifact serialization: archive/front CSVs, summary, cycle logs, plot
// data. Schemas are fixed and fully deterministic so identical runs produce
// byte-identical files.

#pragma once

#include <string>
#include <vector>

#include "emopt/metrics.hpp"
#include "emopt/nsga2.hpp"
#include "emopt/problem.hpp"
#include "emopt/saloop.hpp"

namespace emopt {

// gen,eval_index,x1..xN,f1_raw,f2_raw,g1..gK,feasible,rank
void write_archive_csv(const std::string& path, const Problem& problem,
                       const std::vector<ArchiveEntry>& entries);

std::vector<ArchiveEntry> read_archive_csv(const std::string& path, const Problem& problem);

// Feasible non-dominated subset of the archive (same row schema as the
// archive, plus a leading `run` column identifying the source seed).
struct FrontRow {
  int run = 0;
  ArchiveEntry entry;
};
std::vector<FrontRow> pareto_front(const std::vector<ArchiveEntry>& entries, int run_id);
void write_front_csv(const std::string& path, const Problem& problem,
                     const std::vector<FrontRow>& rows);
std::vector<FrontRow> read_front_csv(const std::string& path, const Problem& problem);

// Parallel-coordinates data: variables of each front member normalized to
// [0, 1] by the problem bounds.
void write_pcp_csv(const std::string& path, const Problem& problem,
                   const std::vector<FrontRow>& rows);

void write_cycles_csv(const std::string& path, const std::vector<CycleLog>& cycles);
void write_models_csv(const std::string& path, const std::vector<ModelSelectionRow>& rows);

struct RunSummary {
  std::string label;
  long long evaluations = 0;
  long long feasible = 0;
  long long non_dominated = 0;
  double hypervolume = 0.0;
};

RunSummary summarize(const std::string& label, const std::vector<ArchiveEntry>& entries,
                     const HvReference& ref);

void write_summary(const std::string& path, const std::string& config_text,
                   const std::vector<RunSummary>& rows);

}  // namespace emopt
