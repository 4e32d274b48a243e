#include "hexapose/thermal.hpp"

#include "doctest.h"
#include "hexapose/simulator.hpp"
#include "test_helpers.hpp"

using namespace hexapose;

TEST_CASE("reference_deflection") {
  const Vec6 q = Vec6::Constant(500.0);

  CHECK(reference_deflection(q, q).cwiseAbs().maxCoeff() == 0.0);

  const Vec6 heated = q + Vec6::Constant(8.2e-3);
  const Vec6 dq = reference_deflection(q, heated);
  // (500 + 8.2e-3) - 500 carries ~ulp(500) of cancellation noise
  for (int i = 0; i < 6; ++i) CHECK(std::abs(dq[i] - 8.2e-3) < 1e-12);

  Vec6 absurd = q;
  absurd[3] += 1.0;  // a millimetre of "thermal" drift is a blunder
  CHECK_THROWS_AS(reference_deflection(q, absurd), SanityBound);
}

TEST_CASE("scale_deflection worked unit case, both algebraic forms") {
  // alpha_al*l_al = 4.6e-3 mm/K, alpha_st*Lst_ref = 3.6e-3 mm/K, so a uniform
  // 8.2 um deflection at Lst 300 mm is exactly 1 K, and at Lst 350 mm the same
  // kelvin gives 4.6e-3 + 12e-6*350 = 8.8e-3 mm.
  const LegThermalModel model = LegThermalModel::uniform(23e-6, 12e-6, 200.0);
  const Vec6 q_ref = Vec6::Constant(500.0);
  const Vec6 q_meas = Vec6::Constant(550.0);
  const Vec6 dq_ref = Vec6::Constant(8.2e-3);

  // Oracle: invert the expansion law for dT, then re-apply at the new length.
  const double dt = 8.2e-3 / (23e-6 * 200.0 + 12e-6 * 300.0);
  const double expected = (23e-6 * 200.0 + 12e-6 * 350.0) * dt;
  CHECK(dt == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expected == doctest::Approx(8.8e-3).epsilon(1e-14));

  const Vec6 scaled = scale_deflection(model, dq_ref, q_ref, q_meas);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(scaled[i] - expected) <= 1e-12 * expected);
    // compact form: dq * (a_al l_al + a_st Lst_meas) / (a_al l_al + a_st Lst_ref)
    const double compact = dq_ref[i] * (23e-6 * 200.0 + 12e-6 * 350.0) /
                           (23e-6 * 200.0 + 12e-6 * 300.0);
    CHECK(std::abs(scaled[i] - compact) <= 1e-15 * std::abs(compact));
  }

  CHECK(scale_deflection(model, Vec6::Zero(), q_ref, q_meas).cwiseAbs().maxCoeff() ==
        0.0);

  // identity scaling is exact, not just close
  const Vec6 same = scale_deflection(model, dq_ref, q_ref, q_ref);
  for (int i = 0; i < 6; ++i) CHECK(same[i] == dq_ref[i]);
}

TEST_CASE("scale_deflection guards the Steel segment") {
  const LegThermalModel model = LegThermalModel::uniform(23e-6, 12e-6, 200.0);
  const Vec6 ok = Vec6::Constant(500.0);
  const Vec6 short_legs = Vec6::Constant(150.0);  // shorter than l_al
  CHECK_THROWS_AS(scale_deflection(model, Vec6::Zero(), short_legs, ok),
                  NonPositiveSegment);
  CHECK_THROWS_AS(scale_deflection(model, Vec6::Zero(), ok, short_legs),
                  NonPositiveSegment);
}

TEST_CASE("scale_deflection linearity and monotonicity") {
  const LegThermalModel model = LegThermalModel::uniform();
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    Vec6 dq, q_ref, q_meas;
    for (int k = 0; k < 6; ++k) {
      dq[k] = (2 * rng.uniform() - 1) * 0.05;
      q_ref[k] = 400.0 + rng.uniform() * 200.0;
      q_meas[k] = 400.0 + rng.uniform() * 200.0;
    }
    const double c = 0.1 + rng.uniform() * 5.0;
    const Vec6 base = scale_deflection(model, dq, q_ref, q_meas);
    const Vec6 scaled = scale_deflection(model, Vec6(c * dq), q_ref, q_meas);
    for (int k = 0; k < 6; ++k) {
      CHECK(std::abs(scaled[k] - c * base[k]) <= 1e-15 * std::abs(c * base[k]) + 1e-300);
    }

    // longer Steel segment at the measurement pose -> larger positive result
    const Vec6 dq_pos = Vec6::Constant(0.01);
    const Vec6 longer = Vec6(q_meas.array() + 10.0);
    const Vec6 a = scale_deflection(model, dq_pos, q_ref, q_meas);
    const Vec6 b = scale_deflection(model, dq_pos, q_ref, longer);
    for (int k = 0; k < 6; ++k) CHECK(b[k] > a[k]);
  }
}

TEST_CASE("implied temperature rise") {
  const LegThermalModel model = LegThermalModel::uniform(23e-6, 12e-6, 200.0);
  const Vec6 q_ref = Vec6::Constant(500.0);

  CHECK(implied_leg_temperature_rise(model, Vec6::Zero(), q_ref).cwiseAbs().maxCoeff() ==
        0.0);

  const Vec6 dt = implied_leg_temperature_rise(model, Vec6::Constant(8.2e-3), q_ref);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(dt[i] - 1.0) < 1e-12);

  CHECK_THROWS_AS(implied_leg_temperature_rise(model, Vec6::Zero(), Vec6::Constant(100.0)),
                  NonPositiveSegment);
}

TEST_CASE("closed loop against simulator ground truth") {
  // The injected per-leg rises must be recoverable exactly from the truth
  // arrays: deflection at R inverted for dT, re-applied at the target lengths.
  Vec6 dt_injected;
  dt_injected << 0.7, 2.1, 3.3, 1.2, 4.8, 0.4;
  const ScenarioConfig cfg = make_single_trial_scenario(dt_injected);
  const SimulatedSession sim = simulate_session(cfg);

  const auto refs = sim.session.reference_indices();
  const auto targets = sim.session.target_indices();
  const TruthRecord& ref_t1 = sim.truth.records[refs.front()];
  const TruthRecord& ref_t2 = sim.truth.records[refs.back()];
  const TruthRecord& target = sim.truth.records[targets.front()];

  const Vec6 q_ref_nominal = igm(cfg.geometry, cfg.reference_pose);
  const Vec6 q_target_nominal = igm(cfg.geometry, cfg.target_pose);
  const Vec6 dq_ref(ref_t2.leg_lengths_mm - ref_t1.leg_lengths_mm);

  // Differencing ~500 mm lengths floors the recoverable rise at
  // ulp(500)/sensitivity, a few 1e-12 K.
  const Vec6 recovered_dt =
      implied_leg_temperature_rise(cfg.thermal, dq_ref, q_ref_nominal);
  CHECK(test::max_abs_diff(recovered_dt, dt_injected) < 1e-11);

  const Vec6 dq_target =
      scale_deflection(cfg.thermal, dq_ref, q_ref_nominal, q_target_nominal);
  const Vec6 true_target_expansion(target.leg_lengths_mm - q_target_nominal);
  CHECK(test::max_abs_diff(dq_target, true_target_expansion) < 1e-12);
}
