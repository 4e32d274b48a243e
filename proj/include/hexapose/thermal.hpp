#pragma once

#include "hexapose/geometry.hpp"
#include "hexapose/kinematics.hpp"

namespace hexapose {

/// Signed leg-length changes between two thermal states, mm.
/// Positive means expansion (heating).
using LegDeflections = Vec6;

/// Handbook expansion coefficients used as configuration defaults.
constexpr double kDefaultAlphaAluminiumPerK = 23e-6;
constexpr double kDefaultAlphaSteelPerK = 12e-6;

/// Thermal deflections beyond this are treated as data errors, not physics.
constexpr double kDeflectionSanityBoundMm = 1.0;

/// Two-segment leg expansion model: an Aluminium part of fixed length and a
/// Steel part that makes up the rest of the leg, steel_length(q) = q - l_al.
/// One temperature per leg, shared by both segments. Parameters are per leg;
/// use uniform() when all legs are built alike.
struct LegThermalModel {
  Vec6 alpha_al;  // 1/K
  Vec6 alpha_st;  // 1/K
  Vec6 l_al;      // mm

  static LegThermalModel uniform(double alpha_al_per_k = kDefaultAlphaAluminiumPerK,
                                 double alpha_st_per_k = kDefaultAlphaSteelPerK,
                                 double l_al_mm = 200.0);

  Vec6 steel_length(const LegLengths& q) const { return q - l_al; }

  /// Leg elongation per kelvin at leg lengths q:
  ///   alpha_al*l_al + alpha_st*(q - l_al)   (mm/K, per leg).
  Vec6 sensitivity_mm_per_k(const LegLengths& q) const;

  /// Throws ConfigError on non-positive coefficients or segment lengths.
  void validate() const;
};

/// Deflection observed at the reference pose: dq_i = q_t2_i - q_t1_i.
/// Throws SanityBound when any |dq_i| >= 1 mm.
LegDeflections reference_deflection(const LegLengths& q_ref_t1,
                                    const LegLengths& q_ref_t2);

/// Rescale a reference-pose deflection to another set of leg lengths.
///
/// The Aluminium share of dq_ref is kept as is (that segment never changes
/// length); the Steel share is scaled by the ratio of Steel segment lengths:
///
///   dq_al = dq_ref * (a_al*l_al) / (a_al*l_al + a_st*Lst_ref)
///   dq_st = (dq_ref - dq_al) * Lst_meas / Lst_ref
///   result = dq_al + dq_st
///
/// which equals dq_ref * (a_al*l_al + a_st*Lst_meas) / (a_al*l_al + a_st*Lst_ref).
/// Throws NonPositiveSegment when a Steel segment vanishes at q_ref or q_meas.
LegDeflections scale_deflection(const LegThermalModel& model,
                                const LegDeflections& dq_ref,
                                const LegLengths& q_ref,
                                const LegLengths& q_meas);

/// Per-leg temperature rise that explains dq_ref at leg lengths q_ref (K).
/// Diagnostic inversion of the linear expansion model.
Vec6 implied_leg_temperature_rise(const LegThermalModel& model,
                                  const LegDeflections& dq_ref,
                                  const LegLengths& q_ref);

}  // namespace hexapose
