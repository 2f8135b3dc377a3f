#include "galedim/compiler.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "galedim/error.hpp"
#include "galedim/point.hpp"

namespace galedim {

namespace {

bool is_proper_prefix(const Address& a, const Address& b) {
  return a.size() < b.size() && b.compare(0, a.size(), a) == 0;
}

// Exact limit coordinates of an eventually periodic word on a cube cover.
std::vector<mpq_class> word_coords(const Cover& cover, const PointRep& p) {
  unsigned dim = cover.cube_dim();
  unsigned base = static_cast<unsigned>(cover.scale_base().get_ui());
  auto axis_digit = [&](char ch, unsigned axis) -> unsigned {
    int v = symbol_value(ch);
    if (v < 0 || v >= static_cast<int>(cover.branching()))
      throw Error::bad_input(std::string("symbol '") + ch + "' outside the cover alphabet");
    unsigned u = static_cast<unsigned>(v);
    for (unsigned j = 0; j < axis; ++j) u /= base;
    return u % base;
  };
  const std::string& pre = p.prefix();
  const std::string& cyc = p.cycle();
  mpz_class bl, bm;
  mpz_pow_ui(bl.get_mpz_t(), cover.scale_base().get_mpz_t(), pre.size());
  mpz_pow_ui(bm.get_mpz_t(), cover.scale_base().get_mpz_t(), cyc.size());
  std::vector<mpq_class> xs(dim);
  for (unsigned j = 0; j < dim; ++j) {
    mpz_class pv = 0, cv = 0;
    for (char ch : pre) pv = pv * base + axis_digit(ch, j);
    for (char ch : cyc) cv = cv * base + axis_digit(ch, j);
    mpq_class x = mpq_class(pv) / mpq_class(bl) +
                  mpq_class(cv) / (mpq_class(bm) - 1) / mpq_class(bl);
    x.canonicalize();
    xs[j] = x;
  }
  return xs;
}

}  // namespace

Antichain Antichain::from_elements(std::vector<Address> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  // In sorted order every extension of an address directly follows it, so
  // adjacent pairs witness any prefix relation.
  for (size_t i = 0; i + 1 < elements.size(); ++i) {
    if (is_proper_prefix(elements[i], elements[i + 1]))
      throw Error::bad_input("not an antichain: '" + elements[i] + "' contains '" +
                             elements[i + 1] + "'; apply maximal_antichain first");
  }
  Antichain a;
  a.elements_ = std::move(elements);
  return a;
}

Antichain maximal_antichain(const std::vector<Address>& addresses) {
  std::unordered_set<std::string> members(addresses.begin(), addresses.end());
  std::vector<Address> kept;
  for (const Address& a : members) {
    bool shadowed = false;
    for (size_t len = 0; len < a.size() && !shadowed; ++len)
      shadowed = members.count(a.substr(0, len)) != 0;
    if (!shadowed) kept.push_back(a);
  }
  return Antichain::from_elements(std::move(kept));
}

KraftSum kraft_sum(const Cover& cover, const Antichain& antichain, const Exponent& s,
                   Exec exec) {
  const auto& el = antichain.elements();
  KraftSum out;
  if (el.empty()) {
    out.exact = RootValue();
    return out;
  }

  // Fixed chunking keeps the serial and parallel paths summing in the same
  // order, so inexact results agree bitwise as well.
  size_t chunks = std::min<size_t>(64, el.size());
  size_t chunk_len = (el.size() + chunks - 1) / chunks;

  if (s.is_rational()) {
    RootContextPtr ctx = cover.field(s.rat().get_den().get_ui());
    std::vector<RootValue> partial(chunks);
    parallel_for(exec, chunks, [&](size_t c) {
      RootValue acc(ctx);
      for (size_t i = c * chunk_len; i < std::min(el.size(), (c + 1) * chunk_len); ++i)
        acc += RootValue::from_scale(ctx, cover.diam(el[i]).pow(s.rat()));
      partial[c] = std::move(acc);
    });
    RootValue total(ctx);
    for (auto& p : partial) total += p;
    out.value = total.approx();
    out.exact = std::move(total);
    return out;
  }

  // Irrational s is still exact when every diam^s collapses to a rational
  // (log-ratio denominator base matching the cover base).
  {
    bool all_exact = true;
    mpq_class rational_total(0);
    for (const Address& a : el) {
      std::optional<mpq_class> r;
      if (auto p = cover.diam(a).pow(s)) r = p->to_rational();
      if (!r) {
        all_exact = false;
        break;
      }
      rational_total += *r;
    }
    if (all_exact) {
      out.exact = RootValue(nullptr, rational_total);
      out.value = BigFloat(rational_total);
      return out;
    }
  }

  BigFloat s_lg = s.approx() * ExactScale::power(cover.scale_base(), 1).log2();
  std::vector<BigFloat> partial(chunks);
  parallel_for(exec, chunks, [&](size_t c) {
    BigFloat acc;
    for (size_t i = c * chunk_len; i < std::min(el.size(), (c + 1) * chunk_len); ++i)
      acc += exp2(-BigFloat(static_cast<long>(el[i].size())) * s_lg);
    partial[c] = std::move(acc);
  });
  for (auto& p : partial) out.value += p;
  return out;
}

WeightedCover refine_to_nice(const Cover& cover,
                             const std::vector<std::pair<PointRep, mpq_class>>& balls,
                             unsigned r) {
  mpq_class eps = mpq_pow_si(cover.zeta(), static_cast<long>(r) + 1);
  WeightedCover out;
  out.target_level = r;
  std::set<Address> dedup;

  for (const auto& [center, radius] : balls) {
    if (radius <= 0) throw Error::bad_input("refine_to_nice: radius must be positive");
    mpq_class d = 2 * radius;
    if (d >= eps) {
      // Levels only shrink, so a larger ball needs a shallower target.
      if (d >= cover.zeta())
        throw Error::bad_input(
            "refine_to_nice: ball diameter reaches level-1 element size; no target level fits");
      unsigned fit = 0;
      mpq_class e = cover.zeta() * cover.zeta();
      while (d < e) {
        ++fit;
        e *= cover.zeta();
      }
      throw Error::bad_input("refine_to_nice: radius too large for target level " +
                             std::to_string(r) + "; largest admissible level is " +
                             std::to_string(fit));
    }

    // Deepest level whose elements still have diameter >= the ball's; the
    // radius bound above forces m > r.
    unsigned m = 0;
    for (mpq_class next = cover.zeta(); next >= d; next *= cover.zeta()) ++m;

    if (cover.kind() == CoverKind::symbolic) {
      // Ultrametric: the level-m cylinder around the center contains the
      // whole ball.
      dedup.insert(representation(cover, center, m).back());
      continue;
    }

    unsigned dim = cover.cube_dim();
    unsigned base = static_cast<unsigned>(cover.scale_base().get_ui());
    std::vector<mpq_class> c;
    switch (center.kind()) {
      case PointRep::Kind::coords:
        c = center.coords();
        break;
      case PointRep::Kind::word:
        c = word_coords(cover, center);
        break;
      case PointRep::Kind::stream:
        throw Error::unsupported(
            "refine_to_nice: stream points have no exact coordinates on cube covers");
    }
    if (c.size() != dim) throw Error::bad_input("refine_to_nice: coordinate arity mismatch");

    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), cover.scale_base().get_mpz_t(), m);
    std::vector<std::vector<mpz_class>> axis_indices(dim);
    for (unsigned j = 0; j < dim; ++j) {
      // Indices of the level-m grid columns meeting the open interval
      // (c - radius, c + radius); an exact-integer upper endpoint belongs to
      // the next column, which the interval no longer reaches.
      mpq_class lo_q = (c[j] - radius) * mpq_class(pw);
      mpq_class hi_q = (c[j] + radius) * mpq_class(pw);
      mpz_class lo, hi;
      mpz_fdiv_q(lo.get_mpz_t(), lo_q.get_num().get_mpz_t(), lo_q.get_den().get_mpz_t());
      mpz_fdiv_q(hi.get_mpz_t(), hi_q.get_num().get_mpz_t(), hi_q.get_den().get_mpz_t());
      if (hi_q.get_den() == 1) hi -= 1;
      if (lo < 0) lo = 0;
      if (hi > pw - 1) hi = pw - 1;
      for (mpz_class idx = lo; idx <= hi; ++idx) axis_indices[j].push_back(idx);
    }
    std::vector<std::vector<mpz_class>> combos{{}};
    for (unsigned j = 0; j < dim; ++j) {
      std::vector<std::vector<mpz_class>> next;
      for (const auto& pref : combos)
        for (const auto& idx : axis_indices[j]) {
          auto ext = pref;
          ext.push_back(idx);
          next.push_back(std::move(ext));
        }
      combos = std::move(next);
    }
    // Re-encode each index tuple as one symbol per level, most significant
    // digits first.
    for (const auto& combo : combos) {
      Address a;
      for (unsigned t = 1; t <= m; ++t) {
        mpz_class shift;
        mpz_pow_ui(shift.get_mpz_t(), cover.scale_base().get_mpz_t(), m - t);
        unsigned sym = 0, place = 1;
        for (unsigned j = 0; j < dim; ++j) {
          mpz_class digit = (combo[j] / shift) % static_cast<long>(base);
          sym += static_cast<unsigned>(digit.get_ui()) * place;
          place *= base;
        }
        a.push_back(symbol_char(sym));
      }
      dedup.insert(a);
    }
  }
  out.elements.assign(dedup.begin(), dedup.end());
  return out;
}

SupergaleTable cover_to_supergale(const Cover& cover, const Antichain& target, const mpq_class& s,
                                  long k, Extension mode) {
  if (s <= 0)
    throw Error::bad_input(
        "cover_to_supergale: s must be positive (the construction divides by diam^s, which "
        "degenerates at s = 0)");
  RootContextPtr ctx = cover.field(s.get_den().get_ui());

  // Capital label check: the target's diam^s mass must sit below
  // c^{1+s} * 2^{-k}. Comparing a field element against a fractional power
  // of two is exact after raising both sides to the exponent denominator.
  KraftSum kraft = kraft_sum(cover, target, Exponent::rational(s));
  ExactScale cap_bound = cover.c_constant().pow(s + 1) * ExactScale::power(2, mpq_class(-k));
  bool below;
  if (auto bq = cap_bound.to_rational()) {
    below = *kraft.exact < RootValue(ctx, *bq);
  } else {
    unsigned long kpow = cap_bound.exponent().get_den().get_ui();
    mpq_class raised = *cap_bound.pow(mpq_class(kpow)).to_rational();
    RootValue kp(ctx, 1);
    for (unsigned long i = 0; i < kpow; ++i) kp = kp * *kraft.exact;
    below = kp < RootValue(ctx, raised);
  }
  if (!below)
    throw Error::bad_input("cover_to_supergale: Kraft sum " + kraft.exact->str() +
                           " is not below c^{1+s} * 2^{-k}; choose a smaller k");

  SupergaleTable::Entries out;
  for (const Address& w : target.elements()) {
    RootValue mass = RootValue::from_scale(ctx, cover.diam(w).pow(s));
    for (size_t len = 0; len <= w.size(); ++len) {
      Address u = w.substr(0, len);
      auto [it, fresh] = out.emplace(u, mass);
      if (!fresh) it->second += mass;
    }
  }
  if (mode == Extension::uniform_split) {
    // Off-target children of ancestors carry explicit zeros; without them
    // the uniform-split extension would invent mass on subtrees that hold
    // no target.
    std::set<Address> support;
    for (const auto& kv : out) support.insert(kv.first);
    std::set<Address> targets(target.elements().begin(), target.elements().end());
    for (const Address& u : support) {
      if (targets.count(u)) continue;
      for (unsigned v = 0; v < cover.branching(); ++v) {
        Address child = u + symbol_char(v);
        if (!support.count(child)) out.emplace(child, RootValue(ctx));
      }
    }
  }
  for (auto& kv : out)
    kv.second = kv.second * RootValue::from_scale(ctx, cover.diam(kv.first).pow(-s));
  return SupergaleTable(Exponent::rational(s), mode, std::move(out));
}

ExtractionResult supergale_to_cover(const Cover& cover, const SupergaleTable& gale, long k,
                                    size_t depth) {
  if (depth > gale.support_depth() + 1)
    throw Error::bad_input("supergale_to_cover: depth exceeds support depth + 1");
  ValidationReport rep =
      validate_supergale(cover, gale, std::min(depth, gale.support_depth()));
  if (!rep.valid)
    throw Error::bad_input("supergale_to_cover: not a supergale (first violation at '" +
                           (rep.violations.empty() ? Address{} : rep.violations[0].node) + "')");

  RootValue capital = gale.value(cover, Address{});
  RootValue threshold = capital * mpq_pow_si(mpq_class(2), k);

  std::set<Address> candidates;
  candidates.insert(Address{});
  for (const auto& kv : gale.entries())
    for (size_t len = 0; len <= kv.first.size() && len <= depth; ++len)
      candidates.insert(kv.first.substr(0, len));

  // A zero extension adds nothing outside the prefix closure. A uniform
  // split scales by branch^{-1} * zeta^{-s} per level below the support:
  // when that factor is <= 1 an unstored descendant never beats its stored
  // ancestor, so the closure again suffices; when it is > 1 the walk must
  // descend.
  if (gale.extension() == Extension::uniform_split && gale.s().is_rational()) {
    ExactScale dilution = ExactScale::power(cover.scale_base(), gale.s().rat()) /
                          ExactScale::power(cover.branching(), mpq_class(1));
    if (cmp(dilution, mpq_class(1)) > 0) {
      constexpr size_t kWalkCap = size_t(1) << 22;
      size_t visited = 0;
      std::deque<Address> frontier;
      for (const Address& a : candidates)
        if (a.size() < depth)
          for (unsigned v = 0; v < cover.branching(); ++v) {
            Address child = a + symbol_char(v);
            if (!candidates.count(child)) frontier.push_back(std::move(child));
          }
      std::set<Address> walked;
      while (!frontier.empty()) {
        Address a = std::move(frontier.front());
        frontier.pop_front();
        if (!walked.insert(a).second) continue;
        if (++visited > kWalkCap)
          throw Error::unsupported("supergale_to_cover: extension walk too large");
        if (a.size() < depth)
          for (unsigned v = 0; v < cover.branching(); ++v) frontier.push_back(a + symbol_char(v));
      }
      candidates.insert(walked.begin(), walked.end());
    }
  }

  std::vector<Address> qualifying;
  for (const Address& a : candidates)
    if (gale.value(cover, a) > threshold) qualifying.push_back(a);

  ExtractionResult res;
  res.antichain = maximal_antichain(qualifying);
  res.depth_scanned = depth;
  res.saturated = depth >= gale.support_depth() + 1;
  return res;
}

}  // namespace galedim
