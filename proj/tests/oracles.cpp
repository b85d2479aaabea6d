#include "oracles.hpp"

#include <cmath>

#include "emopt/rng.hpp"

namespace oracle {

namespace {

// a beats b under the feasibility-first rule
bool beats(const emopt::ObjectiveVector& fa, double cva, bool feas_a,
           const emopt::ObjectiveVector& fb, double cvb, bool feas_b) {
  if (feas_a != feas_b) return feas_a;
  if (!feas_a) return cva < cvb;
  bool all_le = true, one_lt = false;
  for (std::size_t m = 0; m < fa.size(); ++m) {
    if (fa[m] > fb[m]) all_le = false;
    if (fa[m] < fb[m]) one_lt = true;
  }
  return all_le && one_lt;
}

}  // namespace

std::vector<std::vector<int>> brute_sort(const std::vector<emopt::ObjectiveVector>& objs,
                                         const std::vector<double>& cv,
                                         const std::vector<bool>& feasible) {
  const int n = static_cast<int>(objs.size());
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<int>> fronts;
  int remaining = n;
  while (remaining > 0) {
    std::vector<int> front;
    for (int i = 0; i < n; ++i) {
      if (assigned[i]) continue;
      bool dominated = false;
      for (int j = 0; j < n && !dominated; ++j) {
        if (j == i || assigned[j]) continue;
        if (beats(objs[j], cv[j], feasible[j], objs[i], cv[i], feasible[i])) dominated = true;
      }
      if (!dominated) front.push_back(i);
    }
    for (int i : front) assigned[i] = true;
    remaining -= static_cast<int>(front.size());
    fronts.push_back(std::move(front));
  }
  return fronts;
}

double mc_hypervolume(const std::vector<emopt::ObjectiveVector>& front,
                      const emopt::ObjectiveVector& best, const emopt::ObjectiveVector& worst,
                      long long samples, std::uint64_t seed) {
  // normalize the front to the unit box, dropping outsiders
  std::vector<std::pair<double, double>> pts;
  for (const auto& f : front) {
    const double u0 = (f[0] - best[0]) / (worst[0] - best[0]);
    const double u1 = (f[1] - best[1]) / (worst[1] - best[1]);
    if (u0 < 0.0 || u0 > 1.0 || u1 < 0.0 || u1 > 1.0) continue;
    pts.emplace_back(u0, u1);
  }
  if (pts.empty()) return 0.0;

  emopt::Rng rng(seed);
  long long hit = 0;
  for (long long s = 0; s < samples; ++s) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    for (const auto& [u0, u1] : pts) {
      if (u0 <= a && u1 <= b) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(samples);
}

std::optional<emopt::DecisionVector> corner_search(const emopt::DecisionVector& x,
                                                   const emopt::Problem& problem) {
  const int n = static_cast<int>(x.size());
  const auto& b = problem.bounds();
  std::vector<double> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = emopt::grid::floor_to(x[i]);
    hi[i] = emopt::grid::ceil_to(x[i]);
  }
  const std::uint64_t corners = 1ULL << n;
  for (std::uint64_t mask = 0; mask < corners; ++mask) {
    emopt::DecisionVector c(x.size());
    bool in_bounds = true;
    for (int i = 0; i < n; ++i) {
      c[i] = (mask >> i) & 1 ? hi[i] : lo[i];
      if (c[i] < b.lower[i] - 1e-12 || c[i] > b.upper[i] + 1e-12) in_bounds = false;
    }
    if (!in_bounds) continue;
    if (problem.constraints(c).feasible()) return c;
  }
  return std::nullopt;
}

std::vector<double> ipm_constraints_direct(const emopt::DecisionVector& x) {
  const long double pi = 3.14159265358979323846L;
  const long double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4];
  const long double x6 = x[5], x7 = x[6], x8 = x[7], x9 = x[8], x10 = x[9];

  // machine template constants
  const long double os_sn = 48, im_pn = 8, os_id = 161.9L, ag_l = 0.75L, im_id = 110;
  const long double zim_uv = 1, im_v1 = 0, im_w2 = 0.7L, os_ws1 = 3.34L, os_h1 = 0.27L,
                    zos_uv = 1;

  const long double im_od = os_id - 2 * ag_l;
  const long double zim_ve = 180 * zim_uv / im_pn;
  const long double zim_or = im_od / 2;
  const long double zos_y3 = os_ws1 / 2;
  const long double zos_ve = 180 * zos_uv / os_sn;
  const long double zim_x2 = zim_or - x1;
  const long double zos_v1a = x7 - x8 / 2 - x9 - os_h1;
  const long double zos_v1b = std::sqrt(
      static_cast<double>(zos_v1a * zos_v1a - ((x8 / 2) * (x8 / 2) - zos_y3 * zos_y3)));
  const long double half = (x4 / 2) * (pi / 180);
  const long double zim_x1 = zim_x2 - x2 / std::sin(static_cast<double>(half));
  const long double zim_y1 = 0;
  const long double zim_x8 =
      ((zim_or - x5) * (zim_or - x5) - (x3 + im_w2) * (x3 + im_w2) + zim_x2 * zim_x2) /
      (2 * zim_x2);
  const long double zim_y8 =
      std::sqrt(static_cast<double>((zim_or - x5) * (zim_or - x5) - zim_x8 * zim_x8));
  const long double zim_x4 = zim_x2 + x3 * std::cos(static_cast<double>(half));
  const long double zim_y4 = x3 * std::sin(static_cast<double>(half));
  const long double zim_x5 = zim_x4 - x2 * std::sin(static_cast<double>(half));
  const long double zim_y5 = zim_y4 + x2 * std::cos(static_cast<double>(half));
  const long double ve = zim_ve * (pi / 180);
  const long double pole = (x4 / 2 + im_v1) * (pi / 180);
  const long double zim_k1 = zim_y5 + x6 / (2 * std::cos(static_cast<double>(ve))) -
                             zim_x5 * std::tan(static_cast<double>(pole));
  const long double zim_k2 =
      std::tan(static_cast<double>(ve)) - std::tan(static_cast<double>(pole));
  const long double zim_x7 = zim_k1 / zim_k2;
  const long double zim_y7 =
      zim_x7 * std::tan(static_cast<double>(ve)) - x6 / (2 * std::cos(static_cast<double>(ve)));
  const long double zos_v1 =
      2 *
      std::atan2(static_cast<double>(zos_v1a - zos_v1b), static_cast<double>(x8 / 2 + zos_y3)) *
      (180 / pi);

  std::vector<double> g(10);
  g[0] = static_cast<double>(
      -(std::sqrt(static_cast<double>(zim_x1 * zim_x1 + zim_y1 * zim_y1)) - (im_id / 2 + 2)));
  g[1] = static_cast<double>(
      std::sqrt(static_cast<double>(zim_x4 * zim_x4 + zim_y4 * zim_y4)) - (im_od / 2 - 1));
  g[2] = static_cast<double>(-(zim_x7 - zim_x5));
  g[3] = static_cast<double>(-(zim_y7 - zim_y5));
  g[4] = static_cast<double>(
      std::sqrt(static_cast<double>(zim_x7 * zim_x7 + zim_y7 * zim_y7)) - (im_od / 2 - x5 - 1));
  g[5] = static_cast<double>(zim_x8 - zim_x4 - 3);
  g[6] = static_cast<double>(zim_y8 - zim_y4 - 1);
  g[7] = static_cast<double>(-(os_ws1 - x10));
  g[8] = static_cast<double>(std::abs(static_cast<double>(zos_v1 - zos_ve)) - zos_ve);
  g[9] = static_cast<double>(-((zim_y7 - zim_y5) / half - 0.1L));
  return g;
}

double tradeoff_direct(const std::vector<emopt::ObjectiveVector>& front, int i) {
  const int n = static_cast<int>(front.size());
  const int m_count = static_cast<int>(front[0].size());
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    double loss_sum = 0.0, gain_sum = 0.0;
    int loss_n = 0, gain_n = 0;
    for (int m = 0; m < m_count; ++m) {
      if (front[j][m] > front[i][m]) {
        loss_sum += front[j][m] - front[i][m];
        ++loss_n;
      }
      if (front[i][m] > front[j][m]) {
        gain_sum += front[i][m] - front[j][m];
        ++gain_n;
      }
    }
    if (gain_n == 0) continue;
    const double gain = gain_sum / gain_n;
    if (gain <= 0.0) continue;
    const double loss = loss_n > 0 ? loss_sum / loss_n : 0.0;
    best = std::max(best, loss / gain);
  }
  return best;
}

}  // namespace oracle
