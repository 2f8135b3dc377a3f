#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "galedim/complexity.hpp"
#include "galedim/cover.hpp"
#include "galedim/error.hpp"
#include "galedim/point.hpp"
#include "gen.hpp"

using namespace galedim;

TEST_CASE("deflate estimates match frozen reference values") {
  DeflateEstimator est;
  CHECK(est.id() == "deflate-raw-9");
  CHECK(est.thread_safe());

  // Values frozen from an independent raw-deflate run at the same settings.
  CHECK(est.estimate_bits("") == 16.0);
  CHECK(est.estimate_bits(std::string(255, '0')) == 48.0);
  CHECK(est.estimate_bits(std::string(4095, '0')) == 176.0);

  // Deterministic across calls.
  std::string mixed = "0120120210210012021";
  CHECK(est.estimate_bits(mixed) == est.estimate_bits(mixed));

  // Monotone enough to separate structure from noise: the repetitive string
  // compresses far below a pseudorandom one of equal length.
  Cover two = Cover::symbolic(2);
  PointRep noisy = PointRep::seeded_stream(42);
  std::string noise;
  for (size_t i = 0; i < 4095; ++i) noise += symbol_char(noisy.symbol_at(two, i));
  CHECK(est.estimate_bits(noise) == 5904.0);
  CHECK(est.estimate_bits(std::string(4095, '0')) < 0.15 * est.estimate_bits(noise));

  // The additive correction shifts every estimate uniformly.
  DeflateEstimator shifted(10.0);
  CHECK(shifted.estimate_bits("") == 26.0);
}

TEST_CASE("table oracle answers exactly and misses cost infinity") {
  TableOracle t({{"", 0.0}, {"01", 3.5}}, "demo");
  CHECK(t.id() == "demo");
  CHECK(TableOracle({{"", 1.0}}).id() == "oracle");
  CHECK(t.estimate_bits("") == 0.0);
  CHECK(t.estimate_bits("01") == 3.5);
  CHECK(t.estimate_bits("0") == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(TableOracle({{"0", -1.0}}), Error);
}

TEST_CASE("linear oracle is exact for dyadic slopes") {
  LinearOracle half(mpq_class(1, 2));
  CHECK(half.id() == "linear:1/2");
  CHECK(half.estimate_bits("0000") == 2.0);
  CHECK(half.estimate_bits("") == 0.0);
  CHECK(half.estimate_bits(std::string(1024, '1')) == 512.0);
  CHECK_THROWS_AS(LinearOracle(mpq_class(-1, 2)), Error);
}

TEST_CASE("precision windows contain exactly the right levels") {
  // Base 2: B^m in [2^{r-1}, 2^r) forces m = r-1, for every r.
  for (unsigned r = 1; r <= 40; ++r) {
    auto m = precision_window_level(2, r);
    REQUIRE(m.has_value());
    CHECK(m.value() == r - 1);
  }
  // Base 4: only odd r has 4^m in [2^{r-1}, 2^r).
  for (unsigned r = 1; r <= 16; ++r) {
    auto m = precision_window_level(4, r);
    CHECK(m.has_value() == (r % 2 == 1));
    if (m) CHECK(m.value() == (r - 1) / 2);
  }
  // Base 3: powers land at 1, 3, 9, 27, 81, 243, 729, so the windows at
  // r = 3 ([4,8)), r = 6 ([32,64)) and r = 9 ([256,512)) are empty.
  std::vector<unsigned> gaps;
  for (unsigned r = 1; r <= 10; ++r)
    if (!precision_window_level(3, r)) gaps.push_back(r);
  CHECK(gaps == std::vector<unsigned>{3, 6, 9});

  // Every claimed level really lands inside the window, across bases.
  for (unsigned b : {2, 3, 5, 6, 10}) {
    for (unsigned r = 1; r <= 64; ++r) {
      auto m = precision_window_level(b, r);
      if (!m) continue;
      mpz_class bm, lo, hi;
      mpz_ui_pow_ui(bm.get_mpz_t(), b, m.value());
      mpz_ui_pow_ui(lo.get_mpz_t(), 2, r - 1);
      mpz_ui_pow_ui(hi.get_mpz_t(), 2, r);
      CHECK(bm >= lo);
      CHECK(bm < hi);
    }
  }
}

TEST_CASE("precision profile reads the estimator at window addresses") {
  Cover two = Cover::symbolic(2);
  PointRep zeros = PointRep::periodic_word("0", "0");
  LinearOracle unit(mpq_class(1));

  PrecisionProfile prof = kr_profile(two, zeros, 1, 24, unit);
  CHECK(prof.estimator_id == "linear:1");
  CHECK(prof.point_id == "word:0:0");
  REQUIRE(prof.entries.size() == 24);
  for (const auto& e : prof.entries) {
    CHECK_FALSE(e.skipped);               // base 2: every window is hit
    CHECK(e.witness.size() == e.r - 1);   // level r-1
    CHECK(e.bits == double(e.r - 1));     // |w| bits at slope 1
  }

  // Base 4 skips even precisions and says so instead of inventing data.
  Cover four = Cover::symbolic(4);
  PrecisionProfile p4 = kr_profile(four, PointRep::periodic_word("0", "0"), 1, 8, unit);
  for (const auto& e : p4.entries) CHECK(e.skipped == (e.r % 2 == 0));

  CHECK_THROWS_AS(kr_profile(two, zeros, 5, 4, unit), Error);  // r_min > r_max
  CHECK_THROWS_AS(kr_profile(two, zeros, 0, 4, unit), Error);
}

TEST_CASE("parallel profile agrees with serial") {
  Cover two = Cover::symbolic(2);
  PointRep p = PointRep::seeded_stream(7);
  DeflateEstimator est;
  set_thread_count(4);
  PrecisionProfile serial = kr_profile(two, p, 1, 200, est, Exec::serial);
  PrecisionProfile parallel = kr_profile(two, p, 1, 200, est, Exec::parallel);
  set_thread_count(1);
  REQUIRE(serial.entries.size() == parallel.entries.size());
  for (size_t i = 0; i < serial.entries.size(); ++i) {
    CHECK(serial.entries[i].bits == parallel.entries[i].bits);
    CHECK(serial.entries[i].witness == parallel.entries[i].witness);
  }
}

TEST_CASE("point estimate takes the tail minimum of bits over precision") {
  PrecisionProfile prof;
  prof.entries.resize(12);
  // Ratios alternate 0.8, 0.3, 0.8, 0.3, ... so the liminf surrogate is 0.3.
  for (unsigned i = 0; i < 12; ++i) {
    auto& e = prof.entries[i];
    e.r = i + 1;
    e.bits = (i % 2 ? 0.3 : 0.8) * e.r;
  }
  CdimPointEstimate est = cdim_point_estimate(prof, mpq_class(1, 2));
  CHECK(est.value == doctest::Approx(0.3));
  CHECK(est.ratios.size() == 12);

  // A tail fraction of one spans everything; the early 0.8 entries still
  // lose to the alternating 0.3s.
  CHECK(cdim_point_estimate(prof, mpq_class(1)).value == doctest::Approx(0.3));

  // Skipped entries are excluded from both the ratio list and the tail.
  prof.entries[11].skipped = true;
  prof.entries[9].skipped = true;
  CdimPointEstimate sk = cdim_point_estimate(prof, mpq_class(1, 4));
  CHECK(sk.ratios.size() == 10);
  // The usable tail of size floor(10/4) = 2 is r = 9 and r = 11, both with
  // ratio 0.8 once the 0.3 entries at r = 10, 12 are gone.
  CHECK(sk.value == doctest::Approx(0.8));

  PrecisionProfile empty;
  CHECK_THROWS_AS(cdim_point_estimate(empty, mpq_class(1, 4)), Error);
  PrecisionProfile all_skipped;
  all_skipped.entries.resize(3);
  for (auto& e : all_skipped.entries) e.skipped = true;
  CHECK_THROWS_AS(cdim_point_estimate(all_skipped, mpq_class(1, 4)), Error);
  CHECK_THROWS_AS(cdim_point_estimate(prof, mpq_class(0)), Error);
  CHECK_THROWS_AS(cdim_point_estimate(prof, mpq_class(3, 2)), Error);
}

TEST_CASE("enumerated addresses induce a valid supergale with floor values") {
  Cover two = Cover::symbolic(2);

  // Single enumerated address "00" at s' = 1/2, s = 1:
  // d(U) = diam("00")^{1/2} / diam(U)^1 below the root.
  Enumeration e;
  e.pairs.emplace_back("00", 1.0);
  SupergaleTable g = enumeration_to_supergale(two, e, 1, mpq_class(1, 2));

  RootContextPtr ctx = two.field(2);
  CHECK(cmp(g.value(two, ""), RootValue(ctx, mpq_class(1, 2))) == 0);
  CHECK(cmp(g.value(two, "0"), RootValue(ctx, 1)) == 0);
  CHECK(cmp(g.value(two, "00"), RootValue(ctx, 2)) == 0);
  CHECK(g.value(two, "1").is_zero());
  CHECK(validate_supergale(two, g, g.support_depth() + 1).valid);

  // d(U) >= diam(U)^{s'-s} on enumerated U: 2 >= (1/4)^{-1/2} = 2. Equality
  // here; a second enumerated address strictly below pushes it above.
  Enumeration e2;
  e2.pairs.emplace_back("00", 1.0);
  e2.pairs.emplace_back("000", 1.5);
  SupergaleTable g2 = enumeration_to_supergale(two, e2, 1, mpq_class(1, 2));
  RootValue floor00 = RootValue::from_scale(ctx, ExactScale::power(2, 1));
  CHECK(cmp(g2.value(two, "00"), floor00) >= 0);
  CHECK(validate_supergale(two, g2, g2.support_depth() + 1).valid);

  // Duplicated addresses collapse to one contribution.
  Enumeration dup;
  dup.pairs.emplace_back("00", 1.0);
  dup.pairs.emplace_back("00", 2.0);
  SupergaleTable gd = enumeration_to_supergale(two, dup, 1, mpq_class(1, 2));
  CHECK(cmp(gd.value(two, ""), g.value(two, "")) == 0);

  CHECK_THROWS_AS(enumeration_to_supergale(two, e, mpq_class(1, 2), mpq_class(1, 2)), Error);
  CHECK_THROWS_AS(enumeration_to_supergale(two, e, mpq_class(1, 4), mpq_class(1, 2)), Error);
  CHECK_THROWS_AS(enumeration_to_supergale(two, e, 1, mpq_class(-1, 2)), Error);
}

TEST_CASE("random enumerations always validate") {
  Rng rng(606);
  Cover three = Cover::symbolic(3);
  for (int trial = 0; trial < 15; ++trial) {
    Enumeration e;
    size_t n = 1 + rng.below(30);
    for (size_t i = 0; i < n; ++i)
      e.pairs.emplace_back(testgen::random_address(rng, three, 8), 1.0);
    SupergaleTable g = enumeration_to_supergale(three, e, mpq_class(3, 4), mpq_class(1, 4));
    ValidationReport rep = validate_supergale(three, g, g.support_depth() + 1);
    CHECK(rep.valid);
    CHECK(rep.exact);
  }
}

TEST_CASE("summability check reports kraft-style weight") {
  Cover two = Cover::symbolic(2);
  // All 16 level-4 addresses at s' = 1: weight 16·2^-4 = 1, within slack 0.
  Enumeration full;
  std::vector<Address> frontier{Address{}};
  for (int i = 0; i < 4; ++i) {
    std::vector<Address> next;
    for (const Address& a : frontier)
      for (char c : {'0', '1'}) next.push_back(a + c);
    frontier = std::move(next);
  }
  for (const Address& a : frontier) full.pairs.emplace_back(a, 4.0);
  SummabilityCheck ok = check_enumeration_summability(two, full, 1, 0.01);
  CHECK(ok.within);
  CHECK(abs(ok.weight - BigFloat(1.0)) < BigFloat(1e-25));

  // At s' = 1/2 the same addresses weigh 16·2^-2 = 4 > 1 + slack.
  SummabilityCheck over = check_enumeration_summability(two, full, mpq_class(1, 2), 1.0);
  CHECK_FALSE(over.within);
  CHECK(abs(over.weight - BigFloat(4.0)) < BigFloat(1e-25));

  // Duplicates count once.
  Enumeration dup;
  dup.pairs.emplace_back("0", 1.0);
  dup.pairs.emplace_back("0", 1.0);
  SummabilityCheck d = check_enumeration_summability(two, dup, 1, 0.0);
  CHECK(abs(d.weight - BigFloat(0.5)) < BigFloat(1e-25));
}

TEST_CASE("counting bound holds on compiled and crafted gales") {
  Cover two = Cover::symbolic(2);

  // Doubling gale along 0^n at s = 1/2: at precision r the window level is
  // r-1 and d(0^{r-1}) = 2^{(r-1)/2} = capital·2^k exactly when k=(r-1)/2;
  // counts stay within 2^{rs-k}.
  RootContextPtr ctx = two.field(2);
  SupergaleTable::Entries entries;
  Address a;
  for (size_t n = 0; n <= 8; ++n) {
    entries.emplace(a, RootValue::from_scale(ctx, ExactScale::power(2, mpq_class(n, 2))));
    a += '0';
  }
  SupergaleTable g(Exponent::rational(mpq_class(1, 2)), Extension::zero, std::move(entries));

  CountingBound cb = supergale_to_counting_bound(two, g, 1, 4);
  REQUIRE(cb.window_level.has_value());
  CHECK(cb.window_level.value() == 3);
  // Level-3 nodes with d > 2·capital = 2: only 0^3 (d = 2^1.5).
  CHECK(cb.count == 1);
  REQUIRE(cb.bound_exact.has_value());
  CHECK(cb.bound_exact->log2().to_double() == doctest::Approx(1.0));  // 2^{4·(1/2) - 1}
  CHECK(cb.holds);

  // Over the crafted gale, exhaustively compare against a direct scan for
  // all small k and r.
  for (long k = 0; k <= 4; ++k) {
    for (unsigned r = 1; r <= 9; ++r) {
      CountingBound b = supergale_to_counting_bound(two, g, k, r);
      if (!b.window_level) {
        CHECK(b.count == 0);
        continue;
      }
      unsigned m = b.window_level.value();
      RootValue threshold =
          g.value(two, Address{}) * mpq_pow_si(mpq_class(2), k);
      mpz_class direct = 0;
      std::vector<Address> frontier{Address{}};
      for (unsigned level = 0; level < m; ++level) {
        std::vector<Address> next;
        for (const Address& q : frontier)
          for (unsigned v = 0; v < two.branching(); ++v) next.push_back(q + symbol_char(v));
        frontier = std::move(next);
      }
      for (const Address& q : frontier)
        if (cmp(g.value(two, q), threshold) >= 0) ++direct;
      CHECK(b.count == direct);
      CHECK(b.holds);
    }
  }

  // Invalid gales are rejected before any counting.
  std::map<Address, mpq_class> bad{{"", 1}, {"0", 2}, {"1", 1}};
  SupergaleTable gbad =
      SupergaleTable::from_rationals(Exponent::rational(1), Extension::zero, bad);
  CHECK_THROWS_AS(supergale_to_counting_bound(two, gbad, 0, 1), Error);
}

TEST_CASE("coherence slack grows slowly with the budget product") {
  CHECK(coherence_slack_bits(1, 1) == 16.0);
  CHECK(coherence_slack_bits(0, 5) == 16.0);
  CHECK(coherence_slack_bits(4, 8) == doctest::Approx(2 * std::log2(32.0) + 16));
  CHECK(coherence_slack_bits(16, 1024) >= coherence_slack_bits(4, 8));
}

TEST_CASE("grid orchestration finds the linear oracle's slope") {
  Cover two = Cover::symbolic(2);
  PointRep p = PointRep::seeded_stream(9);
  LinearOracle half(mpq_class(1, 2));

  // Depth must satisfy step·depth > 20 bits for the winning row to reach
  // the 2^20 success threshold: 512 levels at step 1/20 give 25.6 bits.
  std::vector<mpq_class> grid;
  for (int i = 1; i <= 20; ++i) grid.emplace_back(i, 20);
  CdimGaleReport rep = cdim_via_gales(two, p, grid, 512, half);

  REQUIRE(rep.rows.size() == 20);
  REQUIRE(rep.least_succeeding_s.has_value());
  // At s = 11/20 the budget s' = 1/2 admits every prefix and the strategy
  // grows by 2^{n/20}; at s = 1/2 the budget 9/20 admits only the root.
  CHECK(rep.least_succeeding_s.value() == mpq_class(11, 20));
  for (const auto& row : rep.rows) {
    CHECK(row.s_prime < row.s);
    CHECK(row.succeeded == (row.s >= mpq_class(11, 20)));
    if (row.s <= mpq_class(1, 2)) CHECK(row.enumerated == 1);  // the root
    if (row.s >= mpq_class(11, 20)) CHECK(row.enumerated == 513);
  }
  CHECK(rep.success_threshold_log2 == 20);
  CHECK(rep.lower_estimate == doctest::Approx(0.5).epsilon(0.05));
  CHECK_FALSE(rep.note.empty());

  CHECK_THROWS_AS(cdim_via_gales(two, p, {}, 256, half), Error);
  CHECK_THROWS_AS(cdim_via_gales(two, p, {mpq_class(0)}, 256, half), Error);
  CHECK_THROWS_AS(cdim_via_gales(two, p, grid, 0, half), Error);
}
