#include "hexapose/thermal.hpp"

#include <cmath>
#include <string>

namespace hexapose {

namespace {

void require_positive_steel(const LegThermalModel& model, const LegLengths& q,
                            const char* which) {
  const Vec6 lst = model.steel_length(q);
  for (int i = 0; i < 6; ++i) {
    if (!(lst[i] > 0.0)) {
      throw NonPositiveSegment("thermal model: Steel segment of leg " +
                               std::to_string(i + 1) + " is not positive at " +
                               which + " lengths");
    }
  }
}

}  // namespace

LegThermalModel LegThermalModel::uniform(double alpha_al_per_k,
                                         double alpha_st_per_k, double l_al_mm) {
  LegThermalModel m;
  m.alpha_al.setConstant(alpha_al_per_k);
  m.alpha_st.setConstant(alpha_st_per_k);
  m.l_al.setConstant(l_al_mm);
  m.validate();
  return m;
}

Vec6 LegThermalModel::sensitivity_mm_per_k(const LegLengths& q) const {
  return alpha_al.cwiseProduct(l_al) + alpha_st.cwiseProduct(steel_length(q));
}

void LegThermalModel::validate() const {
  for (int i = 0; i < 6; ++i) {
    if (!(alpha_al[i] > 0.0) || !(alpha_st[i] > 0.0)) {
      throw ConfigError("thermal model: expansion coefficients must be positive");
    }
    if (!(l_al[i] > 0.0)) {
      throw ConfigError("thermal model: Aluminium segment length must be positive");
    }
  }
}

LegDeflections reference_deflection(const LegLengths& q_ref_t1,
                                    const LegLengths& q_ref_t2) {
  const LegDeflections dq = q_ref_t2 - q_ref_t1;
  for (int i = 0; i < 6; ++i) {
    if (!(std::abs(dq[i]) < kDeflectionSanityBoundMm)) {
      throw SanityBound("reference_deflection: leg " + std::to_string(i + 1) +
                        " moved " + std::to_string(dq[i]) +
                        " mm between reference measurements; frames probably "
                        "belong to different poses");
    }
  }
  return dq;
}

LegDeflections scale_deflection(const LegThermalModel& model,
                                const LegDeflections& dq_ref,
                                const LegLengths& q_ref,
                                const LegLengths& q_meas) {
  require_positive_steel(model, q_ref, "reference");
  require_positive_steel(model, q_meas, "measurement");

  const Vec6 al_term = model.alpha_al.cwiseProduct(model.l_al);
  const Vec6 lst_ref = model.steel_length(q_ref);
  const Vec6 lst_meas = model.steel_length(q_meas);
  const Vec6 denom = al_term + model.alpha_st.cwiseProduct(lst_ref);

  LegDeflections out;
  for (int i = 0; i < 6; ++i) {
    const double dq_al = dq_ref[i] * al_term[i] / denom[i];
    const double dq_st = (dq_ref[i] - dq_al) * lst_meas[i] / lst_ref[i];
    out[i] = dq_al + dq_st;
  }
  return out;
}

Vec6 implied_leg_temperature_rise(const LegThermalModel& model,
                                  const LegDeflections& dq_ref,
                                  const LegLengths& q_ref) {
  require_positive_steel(model, q_ref, "reference");
  return dq_ref.cwiseQuotient(model.sensitivity_mm_per_k(q_ref));
}

}  // namespace hexapose
