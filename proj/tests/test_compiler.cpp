#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "galedim/compiler.hpp"
#include "galedim/cover.hpp"
#include "galedim/error.hpp"
#include "galedim/point.hpp"
#include "galedim/rand.hpp"
#include "gen.hpp"

using namespace galedim;

namespace {

// Quadratic reference: keep every address with no proper prefix in the set.
std::vector<Address> brute_maximal(std::vector<Address> addrs) {
  std::sort(addrs.begin(), addrs.end());
  addrs.erase(std::unique(addrs.begin(), addrs.end()), addrs.end());
  std::vector<Address> out;
  for (const Address& a : addrs) {
    bool has_ancestor = false;
    for (const Address& b : addrs)
      if (b.size() < a.size() && a.compare(0, b.size(), b) == 0) {
        has_ancestor = true;
        break;
      }
    if (!has_ancestor) out.push_back(a);
  }
  return out;
}

std::vector<Address> all_addresses(const Cover& cover, size_t depth) {
  std::vector<Address> out{Address{}};
  size_t start = 0;
  for (size_t level = 0; level < depth; ++level) {
    size_t end = out.size();
    for (size_t i = start; i < end; ++i)
      for (unsigned v = 0; v < cover.branching(); ++v) out.push_back(out[i] + symbol_char(v));
    start = end;
  }
  return out;
}

}  // namespace

TEST_CASE("maximal antichain matches the quadratic reference") {
  Rng rng(501);
  Cover cover = Cover::symbolic(3);
  for (int trial = 0; trial < 40; ++trial) {
    size_t count = 1 + rng.below(500);
    std::vector<Address> addrs = testgen::random_address_set(rng, cover, count, 9);
    Antichain fast = maximal_antichain(addrs);
    std::vector<Address> slow = brute_maximal(addrs);
    CHECK(fast.elements() == slow);
  }
  CHECK(maximal_antichain({"01", "0", "010", "1"}).elements() ==
        std::vector<Address>{"0", "1"});
  CHECK(maximal_antichain({Address{}}).elements() == std::vector<Address>{Address{}});
}

TEST_CASE("antichain construction rejects nested elements") {
  CHECK_THROWS_AS(Antichain::from_elements({"0", "01"}), Error);
  CHECK_THROWS_AS(Antichain::from_elements({"", "1"}), Error);
  Antichain ok = Antichain::from_elements({"00", "01", "1"});
  CHECK(ok.size() == 3);
  CHECK(Antichain::from_elements({}).empty());
}

TEST_CASE("kraft sums are exact for rational and log-ratio exponents") {
  Cover cover = Cover::symbolic(2);
  Antichain a = Antichain::from_elements({"00", "01", "1"});

  KraftSum k1 = kraft_sum(cover, a, Exponent::rational(1));
  REQUIRE(k1.rational().has_value());
  CHECK(k1.rational().value() == 1);  // 1/4 + 1/4 + 1/2

  // At s = 1/2 the sum leaves the rationals: 2^-1 + 2^-1 + 2^-1/2.
  KraftSum kh = kraft_sum(cover, a, Exponent::rational(mpq_class(1, 2)));
  REQUIRE(kh.exact.has_value());
  RootContextPtr ctx = cover.field(2);
  RootValue expect = RootValue(ctx, 1) +
                     RootValue::from_scale(ctx, ExactScale::power(2, mpq_class(-1, 2)));
  CHECK(cmp(kh.exact.value(), expect) == 0);
  CHECK_FALSE(kh.rational().has_value());
  CHECK(abs(kh.value - expect.approx()) < BigFloat(1e-30));

  // Full level of symbolic:3 at s = log 2 / log 3: each element contributes
  // 3^(-n·s) = 2^-n, and there are 3^n of them, so the sum is (3/2)^n.
  Cover three = Cover::symbolic(3);
  Exponent s0 = Exponent::log_ratio(2, 3);
  for (size_t n : {1, 2, 5}) {
    std::vector<Address> full;
    for (const Address& addr : all_addresses(three, n))
      if (addr.size() == n) full.push_back(addr);
    KraftSum ks = kraft_sum(three, Antichain::from_elements(full), s0);
    // Each diam^s collapses to a rational, so the sum is exact despite the
    // irrational exponent.
    REQUIRE(ks.rational().has_value());
    CHECK(ks.rational().value() == mpq_pow_si(mpq_class(3, 2), static_cast<long>(n)));
  }

  KraftSum empty = kraft_sum(cover, Antichain{}, Exponent::rational(1));
  CHECK(empty.rational().value() == 0);
}

TEST_CASE("parallel kraft sum agrees with serial") {
  Rng rng(77);
  Cover cover = Cover::symbolic(2);
  Antichain a = testgen::random_antichain(rng, cover, 4000, 14);
  set_thread_count(4);
  KraftSum serial = kraft_sum(cover, a, Exponent::log_ratio(2, 3), Exec::serial);
  KraftSum parallel = kraft_sum(cover, a, Exponent::log_ratio(2, 3), Exec::parallel);
  set_thread_count(1);
  CHECK(abs(serial.value - parallel.value) <= BigFloat(1e-30) * serial.value);
}

TEST_CASE("compiled supergale: validity, unit target values, mass bound") {
  Rng rng(1234);
  std::vector<Cover> covers{Cover::symbolic(2), Cover::symbolic(3), Cover::cube(2, 2)};
  std::vector<mpq_class> exps{mpq_class(1), mpq_class(1, 2), mpq_class(2, 3)};
  for (int trial = 0; trial < 24; ++trial) {
    const Cover& cover = covers[trial % covers.size()];
    mpq_class s = exps[static_cast<size_t>(rng.below(exps.size()))];
    Antichain target = testgen::random_antichain(rng, cover, 1 + rng.below(40), 6);
    KraftSum kraft = kraft_sum(cover, target, Exponent::rational(s));

    for (Extension mode : {Extension::zero, Extension::uniform_split}) {
      SupergaleTable g = cover_to_supergale(cover, target, s, 0, mode);

      ValidationReport rep = validate_supergale(cover, g, g.support_depth());
      CHECK(rep.valid);
      CHECK(rep.exact);

      // Root capital is exactly the target's Kraft sum.
      CHECK(cmp(g.value(cover, Address{}), kraft.exact.value()) == 0);

      // Capital equals 1 on every target element.
      RootContextPtr ctx = cover.field(s.get_den().get_ui());
      for (const Address& w : target.elements())
        CHECK(cmp(g.value(cover, w), RootValue(ctx, 1)) == 0);

      // Mass bound: d(U)·diam(U)^s never exceeds the total target mass.
      for (const auto& [u, du] : g.entries()) {
        RootValue mass = du * RootValue::from_scale(ctx, cover.diam(u).pow(s));
        CHECK(cmp(mass, kraft.exact.value()) <= 0);
      }
    }
  }
}

TEST_CASE("compilation enforces the labeled capital bound") {
  Cover cover = Cover::symbolic(2);
  Antichain root_only = Antichain::from_elements({Address{}});
  // Kraft sum 1; the label k = 5 demands mass below 2^{1+1}·2^{-5} = 1/8.
  CHECK_THROWS_AS(cover_to_supergale(cover, root_only, 1, 5), Error);
  // k = 1 allows it: bound 2, kraft 1.
  SupergaleTable ok = cover_to_supergale(cover, root_only, 1, 1);
  CHECK(cmp(ok.value(cover, Address{}), RootValue(nullptr, 1)) == 0);
  CHECK_THROWS_AS(cover_to_supergale(cover, root_only, 0, 0), Error);   // s = 0
  CHECK_THROWS_AS(cover_to_supergale(cover, root_only, -1, 0), Error);  // s < 0
}

TEST_CASE("extraction returns the shallowest winning elements") {
  Cover cover = Cover::symbolic(2);
  Antichain target = Antichain::from_elements({"00", "01", "1"});
  SupergaleTable g = cover_to_supergale(cover, target, mpq_class(1, 2), 0);
  // Capital 1 + 2^-1/2; every target value is 1, so nothing exceeds
  // capital·2^0 and the k = 0 extraction is empty.
  ExtractionResult r0 = supergale_to_cover(cover, g, 0, g.support_depth() + 1);
  CHECK(r0.antichain.empty());
  CHECK(r0.saturated);

  // At k = -1 the threshold halves and the root itself qualifies.
  ExtractionResult rm1 = supergale_to_cover(cover, g, -1, g.support_depth() + 1);
  CHECK(rm1.antichain.elements() == std::vector<Address>{Address{}});
}

TEST_CASE("extraction kraft bound and brute-force agreement") {
  Rng rng(4242);
  std::vector<Cover> covers{Cover::symbolic(2), Cover::symbolic(3)};
  for (int trial = 0; trial < 25; ++trial) {
    const Cover& cover = covers[trial % covers.size()];
    mpq_class s = trial % 2 ? mpq_class(1, 2) : mpq_class(1);
    SupergaleTable g = testgen::random_supergale(rng, cover, s, 5);
    size_t depth = g.support_depth() + 1;
    long k = static_cast<long>(rng.below(4));

    ExtractionResult res = supergale_to_cover(cover, g, k, depth);

    // Kraft sum of the extracted antichain is at most 2^-k times the
    // (unit) root capital, exactly.
    KraftSum kraft = kraft_sum(cover, res.antichain, Exponent::rational(s));
    RootContextPtr ctx = cover.field(s.get_den().get_ui());
    CHECK(cmp(kraft.exact.value(), RootValue(ctx, mpq_pow_si(mpq_class(2), -k))) <= 0);

    // Reference: scan every address up to the depth, no pruning tricks.
    RootValue threshold = g.value(cover, Address{}) * mpq_pow_si(mpq_class(2), k);
    std::vector<Address> winners;
    for (const Address& a : all_addresses(cover, depth))
      if (g.value(cover, a) > threshold) winners.push_back(a);
    CHECK(res.antichain.elements() == brute_maximal(winners));
  }
}

TEST_CASE("extraction descends through inflating uniform splits") {
  // With s = 2 on symbolic:3 the split factor is 9/3 = 3 > 1, so unstored
  // descendants outgrow their ancestors and the walk must visit them.
  Cover cover = Cover::symbolic(3);
  Antichain target = Antichain::from_elements({"0"});
  SupergaleTable g = cover_to_supergale(cover, target, 2, 3, Extension::uniform_split);

  RootValue threshold = g.value(cover, Address{}) * mpq_class(8);  // capital·2^3
  CHECK(cmp(g.value(cover, "00"), threshold) > 0);  // an unstored winner exists

  ExtractionResult res = supergale_to_cover(cover, g, 3, g.support_depth() + 1);
  CHECK(res.antichain.elements() == std::vector<Address>{"0"});

  // Reference scan to one level past the support agrees.
  std::vector<Address> winners;
  for (const Address& a : all_addresses(cover, g.support_depth() + 1))
    if (g.value(cover, a) > threshold) winners.push_back(a);
  CHECK(res.antichain.elements() == brute_maximal(winners));
}

TEST_CASE("extraction validates its input") {
  Cover cover = Cover::symbolic(2);
  std::map<Address, mpq_class> bad{{"", 1}, {"0", 2}, {"1", 1}};
  SupergaleTable g =
      SupergaleTable::from_rationals(Exponent::rational(1), Extension::zero, bad);
  CHECK_THROWS_AS(supergale_to_cover(cover, g, 0, 1), Error);
}

TEST_CASE("ball refinement on the unit interval") {
  Cover cover = Cover::cube(1, 2);
  PointRep center = PointRep::coordinates({mpq_class(7, 16)});

  // Ball (7/16 - 1/16, 7/16 + 1/16) = (3/8, 1/2) sits inside one level-3
  // cell, the third one.
  WeightedCover w = refine_to_nice(cover, {{center, mpq_class(1, 16)}}, 1);
  CHECK(w.elements == std::vector<Address>{"011"});
  CHECK(w.target_level == 1);

  // A ball straddling 1/2 needs a cell on each side.
  PointRep mid = PointRep::coordinates({mpq_class(1, 2)});
  w = refine_to_nice(cover, {{mid, mpq_class(1, 32)}}, 2);
  CHECK(w.elements == std::vector<Address>{"0111", "1000"});

  // Element count never exceeds c = 2^dim per ball.
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    mpq_class c(static_cast<long>(rng.below(4096)), 4096);
    mpq_class radius(1, 64 + static_cast<long>(rng.below(4096)));
    if (c - radius < 0 || c + radius >= 1) continue;
    WeightedCover one = refine_to_nice(cover, {{PointRep::coordinates({c}), radius}}, 2);
    CHECK(one.elements.size() <= 2);
    for (const Address& a : one.elements) CHECK(a.size() > 2);
  }
}

TEST_CASE("ball refinement on symbolic covers picks one cylinder") {
  Cover cover = Cover::symbolic(2);
  PointRep p = PointRep::periodic_word("0110", "01");
  WeightedCover w = refine_to_nice(cover, {{p, mpq_class(1, 32)}}, 2);
  REQUIRE(w.elements.size() == 1);
  // diam 2^-4 = 1/16 >= 2·radius, diam 2^-5 < 2·radius: level 4.
  CHECK(w.elements[0] == "0110");
}

TEST_CASE("ball refinement rejects oversized radii") {
  Cover cover = Cover::cube(1, 2);
  PointRep p = PointRep::coordinates({mpq_class(1, 4)});
  // 2·radius = 1/4 >= zeta^3: too big for target level 2.
  CHECK_THROWS_AS(refine_to_nice(cover, {{p, mpq_class(1, 8)}}, 2), Error);
  CHECK_THROWS_AS(refine_to_nice(cover, {{p, mpq_class(0)}}, 2), Error);
}
