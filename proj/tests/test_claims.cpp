#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccl/claims.hpp"
#include "oracles.hpp"

using ccl::ClaimDataset;
using ccl::ClaimRecord;

namespace {

ClaimDataset make(std::vector<ClaimRecord> recs, double horizon = 1.0) {
  ClaimDataset ds;
  ds.records = std::move(recs);
  ds.horizon = horizon;
  return ds;
}

}  // namespace

TEST_CASE("normalize rescales times and records the unit scale") {
  ClaimDataset ds = make({{365.0, 365.0, 10.0}}, 3650.0);
  ClaimDataset out = ccl::normalize(ds);
  CHECK(out.horizon == 1.0);
  CHECK(out.unit_scale == 3650.0);
  CHECK(out.records[0].u == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(out.records[0].t == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(out.records[0].z == 10.0);
}

TEST_CASE("normalize is the identity on already-normalized data") {
  ClaimDataset ds = make({{0.0, 0.0, 0.0}}, 1.0);
  ClaimDataset out = ccl::normalize(ds);
  CHECK(out.records[0].u == 0.0);
  CHECK(out.records[0].t == 0.0);
  CHECK(out.records[0].z == 0.0);
  CHECK(out.horizon == 1.0);
  CHECK(out.unit_scale == 1.0);
}

TEST_CASE("normalize keeps u + t <= 1 even when division rounds up") {
  // Values chosen so u/T + t/T can exceed 1 by an ulp without the repair.
  const double T = 0.7;
  ClaimDataset ds = make({{0.35, 0.35, 1.0}}, T);
  ClaimDataset out = ccl::normalize(ds);
  CHECK(out.records[0].u + out.records[0].t <= 1.0);
}

TEST_CASE("validate rejects invariant violations naming the record") {
  auto msg_of = [](const ClaimDataset& ds) {
    try {
      ccl::validate(ds);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };

  ClaimDataset over = make({{0.1, 0.1, 1.0}, {0.9, 0.4, 1.0}});  // record 1: u+t = 1.3
  std::string m = msg_of(over);
  CHECK(m.find('1') != std::string::npos);
  CHECK(m.find("horizon") != std::string::npos);

  CHECK_THROWS_AS(ccl::validate(make({{-0.1, 0.2, 1.0}})), std::invalid_argument);
  CHECK_THROWS_AS(ccl::validate(make({{0.1, -0.2, 1.0}})), std::invalid_argument);
  CHECK_THROWS_AS(ccl::validate(make({{0.1, 0.2, -1.0}})), std::invalid_argument);
  CHECK_THROWS_AS(ccl::validate(make({{0.1, std::nan(""), 1.0}})), std::invalid_argument);
  CHECK_THROWS_AS(ccl::validate(make({{0.1, 0.2, 1.0}}, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(ccl::normalize(make({{0.6, 0.6, 1.0}})), std::invalid_argument);
}

TEST_CASE("reversed_delay definition, boundary, fixed point, involution") {
  CHECK(ccl::reversed_delay(0.3, 1.0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(ccl::reversed_delay(0.0, 1.0) == 1.0);
  CHECK(ccl::reversed_delay(0.5, 1.0) == 0.5);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = unif(rng);
    CHECK(ccl::reversed_delay(ccl::reversed_delay(t, 1.0), 1.0) == doctest::Approx(t).epsilon(1e-15));
  }
  CHECK_THROWS_AS(ccl::reversed_delay(1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ccl::reversed_delay(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("exposure_count window boundaries: strict left, closed right") {
  ClaimDataset ds = make({{0.2, 0.3, 1.0}});  // T^R = 0.7
  CHECK(ccl::exposure_count(ds, 0.5) == 1.0);
  CHECK(ccl::exposure_count(ds, 0.1) == 0.0);
  CHECK(ccl::exposure_count(ds, 0.8) == 0.0);
  CHECK(ccl::exposure_count(ds, 0.2) == 0.0);   // u < s is strict
  CHECK(ccl::exposure_count(ds, 0.7) == 1.0);   // s <= T^R is closed
  CHECK(ccl::exposure_count(ds, 0.70000001) == 0.0);
}

TEST_CASE("exposure_count counts all records at risk") {
  ClaimDataset ds = make({{0.0, 0.0, 1.0}, {0.0, 0.0, 2.0}, {0.0, 0.0, 3.0}});
  CHECK(ccl::exposure_count(ds, 0.5) == 3.0);
  CHECK(ccl::weighted_exposure(ds, 0.5) == 6.0);
  CHECK(ccl::exposure_count(make({}), 0.5) == 0.0);
}

TEST_CASE("weighted_exposure single record and empty window") {
  ClaimDataset ds = make({{0.2, 0.3, 5.0}});
  CHECK(ccl::weighted_exposure(ds, 0.5) == 5.0);
  CHECK(ccl::weighted_exposure(ds, 0.15) == 0.0);
}

TEST_CASE("exposure_integral closed forms") {
  // t = 0 => T^R = 1: constant weighted exposure 2 on (0, 1].
  CHECK(ccl::exposure_integral(make({{0.0, 0.0, 2.0}}), 0.0, 1.0, true) ==
        doctest::Approx(2.0).epsilon(1e-15));
  // u = 0.25, T^R = 0.75, z = 4: 4 * 0.5 = 2.
  CHECK(ccl::exposure_integral(make({{0.25, 0.25, 4.0}}), 0.0, 1.0, true) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ccl::exposure_integral(make({}), 0.0, 1.0, true) == 0.0);
  CHECK_THROWS_AS(ccl::exposure_integral(make({}), 0.5, 0.4, true), std::invalid_argument);
}

TEST_CASE("exposure process matches the brute-force oracle on random data") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
    ClaimDataset ds = oracle::to_dataset(recs);
    ccl::ExposureProcess ex(ds);
    for (int q = 0; q < 25; ++q) {
      const double s = unif(rng);
      CHECK(ex.count(s) == oracle::exposure_count(recs, s));
      CHECK(ex.weighted(s) ==
            doctest::Approx(oracle::weighted_exposure(recs, s)).epsilon(1e-12));
      CHECK(ccl::weighted_exposure(ds, s) ==
            doctest::Approx(oracle::weighted_exposure(recs, s)).epsilon(1e-12));
    }
    for (int q = 0; q < 10; ++q) {
      double a = unif(rng), b = unif(rng);
      if (a > b) std::swap(a, b);
      CHECK(ex.integral(a, b, true) ==
            doctest::Approx(oracle::exposure_integral(recs, a, b)).epsilon(1e-10));
    }
  }
}

TEST_CASE("exposure integral is additive over adjacent intervals") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
    ClaimDataset ds = oracle::to_dataset(recs);
    ccl::ExposureProcess ex(ds);
    double cuts[3] = {unif(rng), unif(rng), unif(rng)};
    std::sort(cuts, cuts + 3);
    const double whole = ex.integral(cuts[0], cuts[2], true);
    const double split = ex.integral(cuts[0], cuts[1], true) + ex.integral(cuts[1], cuts[2], true);
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
  }
}

TEST_CASE("exposure is piecewise constant between breakpoints") {
  ClaimDataset ds = make({{0.1, 0.2, 1.0}, {0.3, 0.1, 2.0}, {0.1, 0.6, 0.5}});
  ccl::ExposureProcess ex(ds);
  // Breakpoints are {0.1, 0.3} and reversed times {0.8, 0.9, 0.4}; probe
  // inside (0.4, 0.8), where only breakpoint-free variation is possible.
  const double w1 = ex.weighted(0.45);
  const double w2 = ex.weighted(0.62);
  const double w3 = ex.weighted(0.79);
  CHECK(w1 == w2);
  CHECK(w2 == w3);
}

TEST_CASE("unit amounts make weighted exposure equal the count") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<oracle::Rec> recs = oracle::random_dataset(rng);
  for (auto& r : recs) r.z = 1.0;
  ClaimDataset ds = oracle::to_dataset(recs);
  for (int q = 0; q < 50; ++q) {
    const double s = unif(rng);
    CHECK(ccl::weighted_exposure(ds, s) == ccl::exposure_count(ds, s));
  }
}
