// 48-slot/8-pole interior-permanent-magnet machine benchmark: template
// constants, intermediate geometric quantities, the ten geometric constraints,
// the reference design, and analytic proxy objectives.

#pragma once

#include "emopt/problem.hpp"
#include "emopt/types.hpp"

namespace emopt::ipm {

// Machine template constants (lengths in mm, counts dimensionless).
namespace constants {
inline constexpr double kOsSn = 48.0;    // stator slot count
inline constexpr double kImPn = 8.0;     // pole count
inline constexpr double kOsId = 161.9;   // stator inner diameter
inline constexpr double kAgL = 0.75;     // air-gap length
inline constexpr double kImId = 110.0;   // rotor inner diameter
inline constexpr double kZimUv = 1.0;
inline constexpr double kImV1 = 0.0;
inline constexpr double kImW2 = 0.7;
inline constexpr double kOsWs1 = 3.34;   // slot wedge width
inline constexpr double kOsH1 = 0.27;    // slot lip height
inline constexpr double kZosUv = 1.0;
}  // namespace constants

// Derived geometric quantities of one candidate design. Quantities whose
// defining formula involves a square root carry a defined flag; when a
// radicand is negative the value is meaningless and `defect` accumulates its
// magnitude for the infeasibility sentinel.
struct Intermediates {
  double im_od = 0, zim_ve = 0, zim_or = 0, zos_y3 = 0, zos_ve = 0;
  double zim_x2 = 0, zos_v1a = 0, zos_v1b = 0;
  double zim_x1 = 0, zim_y1 = 0;
  double zim_x8 = 0, zim_y8 = 0;
  double zim_x4 = 0, zim_y4 = 0, zim_x5 = 0, zim_y5 = 0;
  double zim_k1 = 0, zim_k2 = 0, zim_x7 = 0, zim_y7 = 0;
  double zos_v1 = 0;

  bool v1b_defined = true;   // ZOS_V1B and hence ZOS_V1
  bool y8_defined = true;    // ZIM_Y8
  bool x7_defined = true;    // ZIM_X7/ZIM_Y7 (degenerate line intersection)
  bool x1_defined = true;    // ZIM_X1 (sin(x4/2) = 0)
  bool x8_defined = true;    // ZIM_X8 (ZIM_X2 = 0)
  double defect = 0.0;

  bool all_defined() const {
    return v1b_defined && y8_defined && x7_defined && x1_defined && x8_defined;
  }
};

// Evaluates the full intermediate set. The input may sit anywhere (bounds are
// not required); undefined fields are flagged instead of throwing.
Intermediates compute_intermediates(const DecisionVector& x);

// The ten geometric constraints, feasible iff all g_j <= 0. Constraints whose
// inputs are undefined get a large sentinel value so that evolutionary
// operators can rank arbitrary in-bounds points.
ConstraintReport ipm_constraints(const DecisionVector& x);

// Sentinel base added to the magnitude of an offending radicand.
inline constexpr double kDegenerateSentinel = 1e6;

// Analytic stand-in for the expensive objective pair ("proxy-v1", frozen for
// regression tests). Returns minimization form (-pseudo_torque, pulsation).
ObjectiveVector proxy_objectives(const DecisionVector& x);

const BoundsSpec& ipm_bounds();
const DecisionVector& reference_design();

// Bi-objective machine-geometry benchmark with the proxy objectives.
// Raw orientation: (pseudo torque [maximize], pseudo pulsation [minimize]).
class IpmProxyProblem : public Problem {
 public:
  std::string name() const override { return "ipm-proxy-v1"; }
  const BoundsSpec& bounds() const override { return ipm_bounds(); }
  int n_obj() const override { return 2; }
  int n_con() const override { return 10; }
  const std::vector<bool>& maximize() const override {
    static const std::vector<bool> m{true, false};
    return m;
  }
  ConstraintReport constraints(const DecisionVector& x) const override {
    return ipm_constraints(x);
  }
  ObjectiveVector raw_objectives(const DecisionVector& x) const override {
    ObjectiveVector f = proxy_objectives(x);
    return {-f[0], f[1]};
  }
};

}  // namespace emopt::ipm

namespace emopt {

// Constrained bi-objective benchmark used to validate the EMO core
// independently of the machine geometry. Both objectives minimized.
class BnhProblem : public Problem {
 public:
  std::string name() const override { return "bnh"; }
  const BoundsSpec& bounds() const override {
    static const BoundsSpec b{{0.0, 0.0}, {5.0, 3.0}};
    return b;
  }
  int n_obj() const override { return 2; }
  int n_con() const override { return 2; }
  const std::vector<bool>& maximize() const override {
    static const std::vector<bool> m{false, false};
    return m;
  }
  ConstraintReport constraints(const DecisionVector& x) const override;
  ObjectiveVector raw_objectives(const DecisionVector& x) const override;
};

}  // namespace emopt
