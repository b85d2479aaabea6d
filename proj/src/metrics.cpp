#include "emopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <stdexcept>

#include "emopt/parallel.hpp"
#include "emopt/sampling.hpp"

namespace emopt {

void HvReference::validate() const {
  if (best.size() != worst.size() || best.empty())
    throw std::invalid_argument("hv reference: best/worst size mismatch");
  for (std::size_t m = 0; m < best.size(); ++m)
    if (!(best[m] < worst[m]))
      throw std::invalid_argument("hv reference: worst must be strictly dominated by best");
}

HvReference combined_reference(const std::vector<std::vector<ObjectiveVector>>& sets) {
  HvReference ref;
  bool first = true;
  for (const auto& set : sets) {
    for (const auto& f : set) {
      if (first) {
        ref.best = f;
        ref.worst = f;
        first = false;
        continue;
      }
      for (std::size_t m = 0; m < f.size(); ++m) {
        ref.best[m] = std::min(ref.best[m], f[m]);
        ref.worst[m] = std::max(ref.worst[m], f[m]);
      }
    }
  }
  if (first) throw std::invalid_argument("combined_reference: no points");
  // open the box a hair when an objective is constant so normalization is defined
  for (std::size_t m = 0; m < ref.best.size(); ++m)
    if (!(ref.best[m] < ref.worst[m])) ref.worst[m] = ref.best[m] + 1.0;
  return ref;
}

double hypervolume2d(const std::vector<ObjectiveVector>& front, const HvReference& ref,
                     bool warn_clipped) {
  ref.validate();
  if (ref.best.size() != 2) throw std::invalid_argument("hypervolume2d: needs 2 objectives");
  if (front.empty()) return 0.0;

  // normalize to the unit box; clip out anything outside it
  std::vector<std::pair<double, double>> pts;
  pts.reserve(front.size());
  int clipped = 0;
  for (const auto& f : front) {
    const double u0 = (f[0] - ref.best[0]) / (ref.worst[0] - ref.best[0]);
    const double u1 = (f[1] - ref.best[1]) / (ref.worst[1] - ref.best[1]);
    if (u0 < -1e-12 || u0 > 1.0 + 1e-12 || u1 < -1e-12 || u1 > 1.0 + 1e-12) {
      ++clipped;
      continue;
    }
    pts.emplace_back(std::clamp(u0, 0.0, 1.0), std::clamp(u1, 0.0, 1.0));
  }
  if (clipped > 0 && warn_clipped)
    std::cerr << "hypervolume2d: clipped " << clipped << " point(s) outside the reference box\n";
  if (pts.empty()) return 0.0;

  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // after sorting by u0 (then u1), the non-dominated subset is the strictly
  // decreasing staircase in u1
  std::vector<std::pair<double, double>> staircase;
  for (const auto& p : pts) {
    if (!staircase.empty() && p.second >= staircase.back().second) continue;
    if (!staircase.empty() && p.first == staircase.back().first)
      staircase.back() = p;  // same u0, better u1
    else
      staircase.push_back(p);
  }

  double area = 0.0;
  for (std::size_t i = 0; i < staircase.size(); ++i) {
    const double next_u0 = (i + 1 < staircase.size()) ? staircase[i + 1].first : 1.0;
    area += (next_u0 - staircase[i].first) * (1.0 - staircase[i].second);
  }
  return area;
}

std::vector<std::pair<long long, double>> rhve(const std::vector<ArchiveEntry>& archive,
                                               const HvReference& ref, long long stride) {
  if (stride < 1) throw std::invalid_argument("rhve: stride must be >= 1");
  std::vector<std::pair<long long, double>> trace;
  std::vector<ObjectiveVector> feasible;
  std::size_t consumed = 0;

  for (long long t = stride; consumed < archive.size(); t += stride) {
    const long long cut = std::min<long long>(t, static_cast<long long>(archive.size()));
    while (consumed < static_cast<std::size_t>(cut)) {
      if (archive[consumed].ind.feasible()) feasible.push_back(archive[consumed].ind.f);
      ++consumed;
    }
    // early prefixes legitimately hold points outside a final-front box
    trace.emplace_back(cut, hypervolume2d(feasible, ref, /*warn_clipped=*/false));
  }
  return trace;
}

std::vector<std::pair<long long, double>> median_trace(
    const std::vector<std::vector<std::pair<long long, double>>>& traces) {
  if (traces.empty()) return {};
  const std::size_t len = traces[0].size();
  for (const auto& t : traces)
    if (t.size() != len) throw std::invalid_argument("median_trace: length mismatch");

  std::vector<std::pair<long long, double>> out(len);
  std::vector<double> column(traces.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t r = 0; r < traces.size(); ++r) column[r] = traces[r][i].second;
    std::sort(column.begin(), column.end());
    const std::size_t m = column.size();
    out[i] = {traces[0][i].first,
              (m % 2 == 1) ? column[m / 2] : 0.5 * (column[m / 2 - 1] + column[m / 2])};
  }
  return out;
}

std::vector<TradeoffEntry> tradeoff(const std::vector<ObjectiveVector>& front) {
  const int n = static_cast<int>(front.size());
  if (n < 2) return {};
  const std::size_t n_obj = front[0].size();

  auto avg_change = [&](int i, int j) {
    // average loss of i relative to j: positive gaps of f(j) over f(i),
    // divided by how many objectives worsened
    double total = 0.0;
    int count = 0;
    for (std::size_t m = 0; m < n_obj; ++m) {
      const double diff = front[j][m] - front[i][m];
      if (diff > 0.0) {
        total += diff;
        ++count;
      }
    }
    return count > 0 ? total / count : 0.0;
  };

  std::vector<TradeoffEntry> result(n);
  for (int i = 0; i < n; ++i) {
    result[i].index = i;
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double gain = avg_change(j, i);  // what i saves over j
      if (gain <= 0.0) continue;             // zero-gain pairs are skipped
      const double loss = avg_change(i, j);  // what i pays versus j
      best = std::max(best, loss / gain);
    }
    result[i].value = best;
  }
  std::stable_sort(result.begin(), result.end(),
                   [](const TradeoffEntry& a, const TradeoffEntry& b) { return a.value > b.value; });
  return result;
}

FeasibilityStats feasibility_study(const Problem& problem, int batches, int batch_size,
                                   std::uint64_t seed, int threads) {
  if (batches < 1 || batch_size < 1)
    throw std::invalid_argument("feasibility_study: batches and batch_size must be >= 1");

  const int n_con = problem.n_con();
  std::vector<long long> violations(static_cast<std::size_t>(n_con), 0);
  std::vector<long long> feasible_per_batch(static_cast<std::size_t>(batches), 0);
  std::vector<std::vector<long long>> batch_violations(
      static_cast<std::size_t>(batches), std::vector<long long>(static_cast<std::size_t>(n_con)));

  parallel_for(
      static_cast<std::size_t>(batches),
      [&](std::size_t b) {
        const std::vector<DecisionVector> samples =
            lhs(batch_size, problem.bounds(),
                mix({seed, streams::kLhs, static_cast<std::uint64_t>(b)}), LhsSnap::None);
        for (const DecisionVector& x : samples) {
          const ConstraintReport r = problem.constraints(x);
          bool any = r.degenerate;
          for (int j = 0; j < n_con; ++j) {
            if (r.g[static_cast<std::size_t>(j)] > 0.0) {
              ++batch_violations[b][static_cast<std::size_t>(j)];
              any = true;
            }
          }
          if (!any) ++feasible_per_batch[b];
        }
      },
      threads);

  FeasibilityStats stats;
  stats.total = static_cast<long long>(batches) * batch_size;
  long long feasible = 0;
  for (int b = 0; b < batches; ++b) {
    feasible += feasible_per_batch[static_cast<std::size_t>(b)];
    for (int j = 0; j < n_con; ++j)
      violations[static_cast<std::size_t>(j)] += batch_violations[static_cast<std::size_t>(b)]
                                                                 [static_cast<std::size_t>(j)];
  }
  stats.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(stats.total);
  stats.violation_fraction.resize(static_cast<std::size_t>(n_con));
  for (int j = 0; j < n_con; ++j)
    stats.violation_fraction[static_cast<std::size_t>(j)] =
        static_cast<double>(violations[static_cast<std::size_t>(j)]) /
        static_cast<double>(stats.total);

  // dense rank on violation counts, 1 = worst; exact ties share a rank
  std::map<long long, int, std::greater<>> by_count;
  for (long long v : violations) by_count[v] = 0;
  int r = 0;
  for (auto& [count, rank] : by_count) rank = ++r;
  stats.rank.resize(static_cast<std::size_t>(n_con));
  for (int j = 0; j < n_con; ++j)
    stats.rank[static_cast<std::size_t>(j)] = by_count[violations[static_cast<std::size_t>(j)]];

  return stats;
}

}  // namespace emopt
