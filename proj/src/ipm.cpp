#include "emopt/ipm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace emopt::ipm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

}  // namespace

Intermediates compute_intermediates(const DecisionVector& x) {
  using namespace constants;
  if (x.size() != 10) throw std::invalid_argument("compute_intermediates: need 10 variables");

  const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4];
  const double x6 = x[5], x7 = x[6], x8 = x[7], x9 = x[8];

  Intermediates t;
  t.im_od = kOsId - 2.0 * kAgL;
  t.zim_ve = 180.0 * kZimUv / kImPn;
  t.zim_or = t.im_od / 2.0;
  t.zos_y3 = kOsWs1 / 2.0;
  t.zos_ve = 180.0 * kZosUv / kOsSn;

  t.zim_x2 = t.zim_or - x1;
  t.zos_v1a = x7 - x8 / 2.0 - x9 - kOsH1;

  const double rad_v1b = t.zos_v1a * t.zos_v1a - ((x8 / 2.0) * (x8 / 2.0) - t.zos_y3 * t.zos_y3);
  if (rad_v1b >= 0.0) {
    t.zos_v1b = std::sqrt(rad_v1b);
  } else {
    t.v1b_defined = false;
    t.defect += -rad_v1b;
  }

  const double half4 = (x4 / 2.0) * kDegToRad;
  const double sin4 = std::sin(half4);
  const double cos4 = std::cos(half4);

  if (sin4 != 0.0) {
    t.zim_x1 = t.zim_x2 - x2 / sin4;
  } else {
    t.x1_defined = false;
    t.defect += 1.0;
  }
  t.zim_y1 = 0.0;

  if (t.zim_x2 != 0.0) {
    t.zim_x8 = ((t.zim_or - x5) * (t.zim_or - x5) - (x3 + kImW2) * (x3 + kImW2) +
                t.zim_x2 * t.zim_x2) /
               (2.0 * t.zim_x2);
    const double rad_y8 = (t.zim_or - x5) * (t.zim_or - x5) - t.zim_x8 * t.zim_x8;
    if (rad_y8 >= 0.0) {
      t.zim_y8 = std::sqrt(rad_y8);
    } else {
      t.y8_defined = false;
      t.defect += -rad_y8;
    }
  } else {
    t.x8_defined = false;
    t.y8_defined = false;
    t.defect += 1.0;
  }

  t.zim_x4 = t.zim_x2 + x3 * cos4;
  t.zim_y4 = x3 * sin4;
  t.zim_x5 = t.zim_x4 - x2 * sin4;
  t.zim_y5 = t.zim_y4 + x2 * cos4;

  const double ve = t.zim_ve * kDegToRad;
  const double pole = (x4 / 2.0 + kImV1) * kDegToRad;
  t.zim_k1 = t.zim_y5 + x6 / (2.0 * std::cos(ve)) - t.zim_x5 * std::tan(pole);
  t.zim_k2 = std::tan(ve) - std::tan(pole);
  if (t.zim_k2 != 0.0 && std::isfinite(t.zim_k1) && std::isfinite(t.zim_k2)) {
    t.zim_x7 = t.zim_k1 / t.zim_k2;
    t.zim_y7 = t.zim_x7 * std::tan(ve) - x6 / (2.0 * std::cos(ve));
  } else {
    t.x7_defined = false;
    t.defect += 1.0;
  }

  if (t.v1b_defined) {
    t.zos_v1 = 2.0 * std::atan2(t.zos_v1a - t.zos_v1b, x8 / 2.0 + t.zos_y3) * kRadToDeg;
  }

  return t;
}

ConstraintReport ipm_constraints(const DecisionVector& x) {
  using namespace constants;
  const Intermediates t = compute_intermediates(x);
  const double x4 = x[3], x5 = x[4], x10 = x[9];

  const double sentinel = kDegenerateSentinel + t.defect;
  std::vector<double> g(10, 0.0);

  // g1: magnet inner corner clears the shaft bore
  if (t.x1_defined)
    g[0] = -(std::sqrt(t.zim_x1 * t.zim_x1 + t.zim_y1 * t.zim_y1) - (kImId / 2.0 + 2.0));
  else
    g[0] = sentinel;

  // g2: magnet outer corner stays inside the rotor
  g[1] = std::sqrt(t.zim_x4 * t.zim_x4 + t.zim_y4 * t.zim_y4) - (t.im_od / 2.0 - 1.0);

  // g3/g4: the q-axis intersection lies outward of the magnet top corner
  if (t.x7_defined) {
    g[2] = -(t.zim_x7 - t.zim_x5);
    g[3] = -(t.zim_y7 - t.zim_y5);
  } else {
    g[2] = sentinel;
    g[3] = sentinel;
  }

  // g5: q-axis intersection under the bridge
  if (t.x7_defined)
    g[4] = std::sqrt(t.zim_x7 * t.zim_x7 + t.zim_y7 * t.zim_y7) - (t.im_od / 2.0 - x5 - 1.0);
  else
    g[4] = sentinel;

  // g6, g7: magnet pocket arc stays near the magnet corner
  if (t.x8_defined)
    g[5] = t.zim_x8 - t.zim_x4 - 3.0;
  else
    g[5] = sentinel;
  if (t.y8_defined)
    g[6] = t.zim_y8 - t.zim_y4 - 1.0;
  else
    g[6] = sentinel;

  // g8: slot opening narrower than the wedge width
  g[7] = -(kOsWs1 - x10);

  // g9: slot-opening angle within one slot pitch
  if (t.v1b_defined)
    g[8] = std::abs(t.zos_v1 - t.zos_ve) - t.zos_ve;
  else
    g[8] = sentinel;

  // g10: minimum clearance between magnet corner and q-axis intersection per
  // unit pole half-angle. The reference machine model computes the clearance
  // from the y-components (the printed x-component form disagrees with the
  // published violation statistics this benchmark is validated against).
  if (t.x7_defined)
    g[9] = -((t.zim_y7 - t.zim_y5) / ((x4 / 2.0) * kDegToRad) - 0.1);
  else
    g[9] = sentinel;

  const bool degenerate = !t.all_defined();
  return ConstraintReport::from_values(std::move(g), degenerate);
}

ObjectiveVector proxy_objectives(const DecisionVector& x) {
  if (x.size() != 10) throw std::invalid_argument("proxy_objectives: need 10 variables");
  const double x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4];
  const double x7 = x[6], x8 = x[7], x9 = x[8], x10 = x[9];

  const double s4 = std::sin(x4 * std::numbers::pi / 360.0);
  const double a_slot = x7 * x8;
  const double a_mag = x2 * x3;
  const double slot_excess = std::max(0.0, a_slot - 220.0);

  const double tau = 0.020 * a_mag * s4 * (1.0 - 0.08 * x5) + 0.15 * a_slot -
                     0.60 * slot_excess * slot_excess / 100.0;
  const double pulsation = 0.45 * slot_excess + 9.0 * std::abs(x9 * x10 - 2.30) +
                           320.0 / (x3 * s4 + 1.0) + 2.5 * x5;

  return {-tau, pulsation};
}

const BoundsSpec& ipm_bounds() {
  static const BoundsSpec b{
      {7.65, 5.73, 14.30, 116.28, 1.59, 11.12, 24.72, 5.35, 0.98, 1.50},
      {11.47, 8.59, 21.46, 174.42, 2.39, 16.68, 37.08, 8.03, 1.46, 2.26}};
  return b;
}

const DecisionVector& reference_design() {
  static const DecisionVector x{9.56, 7.16, 17.88, 145.35, 1.99, 13.9, 30.9, 6.69, 1.22, 1.88};
  return x;
}

}  // namespace emopt::ipm

namespace emopt {

ConstraintReport BnhProblem::constraints(const DecisionVector& x) const {
  if (x.size() != 2) throw std::invalid_argument("bnh: need 2 variables");
  const double x1 = x[0], x2 = x[1];
  std::vector<double> g(2);
  g[0] = (x1 - 5.0) * (x1 - 5.0) + x2 * x2 - 25.0;
  g[1] = 7.7 - ((x1 - 8.0) * (x1 - 8.0) + (x2 + 3.0) * (x2 + 3.0));
  return ConstraintReport::from_values(std::move(g));
}

ObjectiveVector BnhProblem::raw_objectives(const DecisionVector& x) const {
  if (x.size() != 2) throw std::invalid_argument("bnh: need 2 variables");
  const double x1 = x[0], x2 = x[1];
  return {4.0 * x1 * x1 + 4.0 * x2 * x2, (x1 - 5.0) * (x1 - 5.0) + (x2 - 5.0) * (x2 - 5.0)};
}

}  // namespace emopt
