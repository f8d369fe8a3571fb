#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "ccl/claims.hpp"
#include "ccl/survival.hpp"
#include "oracles.hpp"

using ccl::ClaimDataset;
using ccl::ClaimRecord;

namespace {

ClaimDataset make(std::vector<ClaimRecord> recs) {
  ClaimDataset ds;
  ds.records = std::move(recs);
  return ds;
}

// Textbook unweighted Kaplan-Meier for left-truncated data: product over
// distinct event times s <= t of (1 - d(s)/n(s)) with n(s) the number at risk.
double classical_km(const std::vector<oracle::Rec>& recs, double t) {
  std::vector<double> stops;
  for (const auto& r : recs) stops.push_back(r.stop());
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  double surv = 1.0;
  for (double s : stops) {
    if (s > t) break;
    double d = 0.0, n = 0.0;
    for (const auto& r : recs) {
      if (r.stop() == s) d += 1.0;
      if (r.u < s && s <= r.stop()) n += 1.0;
    }
    surv *= (1.0 - d / n);
  }
  return surv;
}

}  // namespace

TEST_CASE("single claim: one self-normalizing jump") {
  ClaimDataset ds = make({{0.0, 0.6, 5.0}});  // T^R = 0.4
  ccl::CumHazardEstimate a = ccl::aalen_weighted(ds);
  REQUIRE(a.times.size() == 1);
  CHECK(a.times[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(a.increments[0] == 1.0);

  ccl::SurvivalEstimate s = ccl::km_weighted(ds);
  CHECK(s.value(0.2) == 1.0);
  CHECK(s.value(0.4) == 0.0);
  CHECK(s.value(0.9) == 0.0);
  CHECK(s.left_limit(0.4) == 1.0);
}

TEST_CASE("two claims: hand-computed risk sets") {
  // u = 0 for both, t in {0.7, 0.4} so T^R in {0.3, 0.6}, z = 1.
  ClaimDataset ds = make({{0.0, 0.7, 1.0}, {0.0, 0.4, 1.0}});
  ccl::CumHazardEstimate a = ccl::aalen_weighted(ds);
  REQUIRE(a.times.size() == 2);
  CHECK(a.increments[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a.increments[1] == 1.0);

  ccl::SurvivalEstimate s = ccl::km_weighted(ds);
  CHECK(s.value(0.2) == 1.0);
  CHECK(s.value(s.times[0]) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.value(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.value(s.times[1]) == 0.0);
  CHECK(s.value(0.9) == 0.0);
  CHECK(s.left_limit(s.times[0]) == 1.0);
  CHECK(s.left_limit(s.times[1]) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("hazard and survival match the brute-force oracle on random data") {
  std::mt19937_64 rng(20240812);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 80; ++rep) {
    std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
    ClaimDataset ds = oracle::to_dataset(recs);

    std::vector<oracle::Jump> ref = oracle::aalen(recs);
    ccl::CumHazardEstimate a = ccl::aalen_weighted(ds);
    REQUIRE(a.times.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) {
      CHECK(a.times[k] == doctest::Approx(ref[k].time).epsilon(1e-14));
      CHECK(a.increments[k] == doctest::Approx(ref[k].increment).epsilon(1e-10));
    }

    ccl::SurvivalEstimate s = ccl::km_weighted(ds);
    for (int q = 0; q < 20; ++q) {
      const double x = unif(rng);
      CHECK(s.value(x) == doctest::Approx(oracle::km_value(recs, x)).epsilon(1e-10));
      CHECK(s.left_limit(x) == doctest::Approx(oracle::km_left(recs, x)).epsilon(1e-10));
    }
    std::vector<double> lefts = ccl::survival_left_limits(ds, s);
    for (std::size_t i = 0; i < recs.size(); ++i)
      CHECK(lefts[i] == doctest::Approx(oracle::km_left(recs, recs[i].stop())).epsilon(1e-10));

    // Interior data: the last risk set is exactly the last tie group, so the
    // final increment is 1 and survival reaches 0.
    CHECK(a.increments.back() == 1.0);
    CHECK(s.values.back() == 0.0);
  }
}

TEST_CASE("product-limit identity holds exactly at every jump") {
  std::mt19937_64 rng(5150);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
    ccl::SurvivalEstimate s = ccl::km_weighted(oracle::to_dataset(recs));
    double prev = 1.0;
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      CHECK(s.values[k] == prev * (1.0 - s.increments[k]));
      CHECK(s.left_limit(s.times[k]) == prev);
      CHECK(s.value(s.times[k]) == s.values[k]);
      prev = s.values[k];
    }
  }
}

TEST_CASE("increments and survival respect range and monotonicity invariants") {
  std::mt19937_64 rng(1234);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
    ccl::SurvivalEstimate s = ccl::km_weighted(oracle::to_dataset(recs));
    double prev = 1.0;
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      CHECK(s.increments[k] >= 0.0);
      CHECK(s.increments[k] <= 1.0);
      CHECK(s.values[k] >= 0.0);
      CHECK(s.values[k] <= prev);
      prev = s.values[k];
    }
    CHECK(s.value(s.times.front() * 0.5) == 1.0);
  }
}

TEST_CASE("rescaling amounts by a power of two leaves estimates bitwise equal") {
  std::mt19937_64 rng(77);
  std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
  ClaimDataset ds = oracle::to_dataset(recs);
  ClaimDataset scaled = ds;
  for (auto& r : scaled.records) r.z *= 4.0;

  ccl::CumHazardEstimate a1 = ccl::aalen_weighted(ds);
  ccl::CumHazardEstimate a2 = ccl::aalen_weighted(scaled);
  REQUIRE(a1.increments.size() == a2.increments.size());
  for (std::size_t k = 0; k < a1.increments.size(); ++k)
    CHECK(a1.increments[k] == a2.increments[k]);

  ccl::SurvivalEstimate s1 = ccl::km_weighted(ds);
  ccl::SurvivalEstimate s2 = ccl::km_weighted(scaled);
  for (std::size_t k = 0; k < s1.values.size(); ++k) CHECK(s1.values[k] == s2.values[k]);
}

TEST_CASE("rescaling amounts by an arbitrary constant changes nothing beyond rounding") {
  std::mt19937_64 rng(78);
  std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
  ClaimDataset ds = oracle::to_dataset(recs);
  ClaimDataset scaled = ds;
  for (auto& r : scaled.records) r.z *= 3.7;
  ccl::SurvivalEstimate s1 = ccl::km_weighted(ds);
  ccl::SurvivalEstimate s2 = ccl::km_weighted(scaled);
  for (std::size_t k = 0; k < s1.values.size(); ++k)
    CHECK(s1.values[k] == doctest::Approx(s2.values[k]).epsilon(1e-12));
}

TEST_CASE("equal amounts reduce to the unweighted estimators") {
  std::mt19937_64 rng(90210);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
    for (auto& r : recs) r.z = 2.5;
    ClaimDataset ds = oracle::to_dataset(recs);

    ccl::CumHazardEstimate a = ccl::aalen_weighted(ds);
    for (std::size_t k = 0; k < a.times.size(); ++k) {
      double tied = 0.0;
      for (const auto& r : recs)
        if (r.stop() == a.times[k]) tied += 1.0;
      const double at_risk = oracle::exposure_count(recs, a.times[k]);
      CHECK(a.increments[k] == doctest::Approx(tied / at_risk).epsilon(1e-12));
    }

    ccl::SurvivalEstimate s = ccl::km_weighted(ds);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int q = 0; q < 10; ++q) {
      const double x = unif(rng);
      CHECK(s.value(x) == doctest::Approx(classical_km(recs, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate inputs are rejected") {
  // A payment at the horizon boundary is its own truncation time: u = T^R, so
  // the jumper is never at risk and the weighted exposure at the jump is 0.
  CHECK_THROWS_AS(ccl::aalen_weighted(make({{0.4, 0.6, 1.0}})), std::runtime_error);
  // No positive amounts at all.
  CHECK_THROWS_AS(ccl::aalen_weighted(make({{0.1, 0.2, 0.0}})), std::invalid_argument);
  // Not normalized.
  ClaimDataset raw = make({{10.0, 20.0, 1.0}});
  raw.horizon = 100.0;
  CHECK_THROWS_AS(ccl::aalen_weighted(raw), std::invalid_argument);
}

TEST_CASE("zero-amount records shift risk counts but not weighted hazards") {
  // The z = 0 record is retained: it contributes no weighted mass anywhere,
  // so weighted estimates ignore it entirely.
  ClaimDataset with = make({{0.0, 0.7, 1.0}, {0.0, 0.4, 1.0}, {0.05, 0.5, 0.0}});
  ClaimDataset without = make({{0.0, 0.7, 1.0}, {0.0, 0.4, 1.0}});
  ccl::SurvivalEstimate s1 = ccl::km_weighted(with);
  ccl::SurvivalEstimate s2 = ccl::km_weighted(without);
  std::vector<double> probes{0.1, 0.3, 0.45, 0.5, 0.55, 0.6, 0.9};
  for (double x : probes) CHECK(s1.value(x) == doctest::Approx(s2.value(x)).epsilon(1e-15));
}
