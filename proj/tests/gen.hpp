// Deterministic random structures shared by the property tests and the
// acceptance suite. Everything routes through galedim::Rng so runs are
// reproducible across platforms.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "galedim/compiler.hpp"
#include "galedim/cover.hpp"
#include "galedim/exact.hpp"
#include "galedim/gale.hpp"
#include "galedim/rand.hpp"

namespace testgen {

using namespace galedim;

inline Address random_address(Rng& rng, const Cover& cover, size_t maxlen) {
  size_t len = rng.below(maxlen + 1);
  Address a;
  for (size_t i = 0; i < len; ++i)
    a += symbol_char(static_cast<unsigned>(rng.below(cover.branching())));
  return a;
}

inline std::vector<Address> random_address_set(Rng& rng, const Cover& cover, size_t count,
                                               size_t maxlen) {
  std::vector<Address> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(random_address(rng, cover, maxlen));
  return out;
}

// Maximal antichain carved out of a random address set; never empty.
inline Antichain random_antichain(Rng& rng, const Cover& cover, size_t count, size_t maxlen) {
  std::vector<Address> addrs = random_address_set(rng, cover, count, maxlen);
  if (addrs.empty()) addrs.push_back(Address{});
  return maximal_antichain(addrs);
}

// Exact random supergale: start with capital 1 and split each node's mass
// among a random subset of children with a random slack factor < 1, so the
// defining inequality holds by construction (strictly below saturated rows).
inline SupergaleTable random_supergale(Rng& rng, const Cover& cover, const mpq_class& s,
                                       size_t depth) {
  RootContextPtr ctx = cover.field(s.get_den().get_ui());
  RootValue grow = RootValue::from_scale(ctx, ExactScale::power(cover.scale_base(), s));

  SupergaleTable::Entries entries;
  entries.emplace(Address{}, RootValue(ctx, mpq_class(1)));
  std::vector<Address> frontier{Address{}};
  for (size_t level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<Address> next;
    for (const Address& a : frontier) {
      const RootValue& v = entries.at(a);
      std::vector<unsigned> weights(cover.branching());
      unsigned total = 0;
      for (unsigned c = 0; c < cover.branching(); ++c) {
        weights[c] = static_cast<unsigned>(rng.below(5));
        total += weights[c];
      }
      if (total == 0) continue;  // leaf: children stay at zero
      mpq_class slack(1 + static_cast<long>(rng.below(8)), 8);  // in (0, 1]
      for (unsigned c = 0; c < cover.branching(); ++c) {
        if (weights[c] == 0) continue;
        mpq_class share(static_cast<long>(weights[c]), static_cast<long>(total));
        RootValue child = (v * grow) * (share * slack);
        Address ca = a + symbol_char(c);
        next.push_back(ca);
        entries.emplace(std::move(ca), std::move(child));
      }
    }
    frontier = std::move(next);
  }
  return SupergaleTable(Exponent::rational(s), Extension::zero, std::move(entries));
}

}  // namespace testgen
