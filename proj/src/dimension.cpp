#include "galedim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "galedim/error.hpp"
#include "galedim/point.hpp"
#include "galedim/rand.hpp"

namespace galedim {

namespace {

Automaton full_automaton(unsigned alphabet) {
  Automaton a;
  a.alphabet = alphabet;
  a.next.assign(1, std::vector<unsigned>(alphabet, 0));
  a.dead.assign(1, 0);
  return a;
}

Automaton allowed_automaton(const std::vector<unsigned>& allowed, unsigned alphabet) {
  std::set<unsigned> ok(allowed.begin(), allowed.end());
  for (unsigned v : ok)
    if (v >= alphabet)
      throw Error::bad_input("allowed symbol " + std::to_string(v) +
                             " outside alphabet of size " + std::to_string(alphabet));
  Automaton a;
  a.alphabet = alphabet;
  a.next.assign(2, std::vector<unsigned>(alphabet, 1));
  for (unsigned v : ok) a.next[0][v] = 0;
  a.dead = {0, 1};
  return a;
}

// Aho-Corasick factor automaton with an absorbing reject sink: a state is
// fatal as soon as any forbidden pattern occurs as a suffix of the input
// read so far.
Automaton forbidden_automaton(const std::vector<std::string>& patterns, unsigned alphabet) {
  struct Node {
    std::map<unsigned, unsigned> kids;
    unsigned fail = 0;
    bool term = false;
  };
  std::vector<Node> trie(1);
  bool root_term = false;
  for (const std::string& p : patterns) {
    if (p.empty()) {
      root_term = true;
      continue;
    }
    unsigned cur = 0;
    for (char ch : p) {
      int v = symbol_value(ch);
      if (v < 0 || static_cast<unsigned>(v) >= alphabet)
        throw Error::bad_input(std::string("forbidden pattern symbol '") + ch +
                               "' outside alphabet of size " + std::to_string(alphabet));
      auto it = trie[cur].kids.find(static_cast<unsigned>(v));
      if (it == trie[cur].kids.end()) {
        trie.push_back({});
        trie[cur].kids[static_cast<unsigned>(v)] = static_cast<unsigned>(trie.size() - 1);
        cur = static_cast<unsigned>(trie.size() - 1);
      } else {
        cur = it->second;
      }
    }
    trie[cur].term = true;
  }

  size_t n = trie.size();
  std::vector<std::vector<unsigned>> go(n, std::vector<unsigned>(alphabet, 0));
  std::deque<unsigned> bfs;
  for (unsigned a = 0; a < alphabet; ++a) {
    auto it = trie[0].kids.find(a);
    if (it != trie[0].kids.end()) {
      go[0][a] = it->second;
      trie[it->second].fail = 0;
      bfs.push_back(it->second);
    }
  }
  while (!bfs.empty()) {
    unsigned u = bfs.front();
    bfs.pop_front();
    trie[u].term = trie[u].term || trie[trie[u].fail].term;
    for (unsigned a = 0; a < alphabet; ++a) {
      auto it = trie[u].kids.find(a);
      if (it != trie[u].kids.end()) {
        trie[it->second].fail = go[trie[u].fail][a];
        go[u][a] = it->second;
        bfs.push_back(it->second);
      } else {
        go[u][a] = go[trie[u].fail][a];
      }
    }
  }

  unsigned sink = static_cast<unsigned>(n);
  Automaton dfa;
  dfa.alphabet = alphabet;
  dfa.start = 0;
  dfa.next.assign(n + 1, std::vector<unsigned>(alphabet, sink));
  dfa.dead.assign(n + 1, 0);
  dfa.dead[sink] = 1;
  for (unsigned u = 0; u < n; ++u)
    for (unsigned a = 0; a < alphabet; ++a)
      dfa.next[u][a] = trie[go[u][a]].term ? sink : go[u][a];
  if (root_term) dfa.dead[0] = 1;
  return dfa;
}

Automaton product_automaton(const std::vector<Automaton>& parts) {
  unsigned alphabet = parts.front().alphabet;
  for (const Automaton& p : parts)
    if (p.alphabet != alphabet) throw Error::internal("union components disagree on alphabet");

  std::map<std::vector<unsigned>, unsigned> index;
  std::vector<std::vector<unsigned>> tuples;
  auto intern = [&](const std::vector<unsigned>& t) {
    auto [it, fresh] = index.emplace(t, static_cast<unsigned>(tuples.size()));
    if (fresh) tuples.push_back(t);
    return it->second;
  };
  std::vector<unsigned> start(parts.size());
  for (size_t i = 0; i < parts.size(); ++i) start[i] = parts[i].start;
  intern(start);

  Automaton dfa;
  dfa.alphabet = alphabet;
  dfa.start = 0;
  for (size_t u = 0; u < tuples.size(); ++u) {
    if (tuples.size() > (size_t(1) << 20)) throw Error::unsupported("union automaton too large");
    const std::vector<unsigned> tu = tuples[u];  // copy: tuples reallocates below
    bool all_dead = true;
    for (size_t i = 0; i < parts.size(); ++i) all_dead = all_dead && parts[i].dead[tu[i]];
    dfa.dead.push_back(all_dead ? 1 : 0);
    dfa.next.emplace_back(alphabet, 0);
    for (unsigned a = 0; a < alphabet; ++a) {
      std::vector<unsigned> tv(parts.size());
      for (size_t i = 0; i < parts.size(); ++i) tv[i] = parts[i].next[tu[i]][a];
      dfa.next[u][a] = intern(tv);
    }
  }
  return dfa;
}

void check_automaton(const Automaton& a) {
  if (a.alphabet == 0) throw Error::bad_input("automaton alphabet must be nonempty");
  if (a.next.empty()) throw Error::bad_input("automaton needs at least one state");
  if (a.dead.size() != a.next.size())
    throw Error::bad_input("automaton dead-flag list does not match the state count");
  if (a.start >= a.next.size()) throw Error::bad_input("automaton start state out of range");
  for (const auto& row : a.next) {
    if (row.size() != a.alphabet)
      throw Error::bad_input("automaton transition row does not cover the alphabet");
    for (unsigned t : row)
      if (t >= a.next.size()) throw Error::bad_input("automaton transition target out of range");
  }
}

// One DP step: push counts along alive -> alive transitions.
void transfer_step(const Automaton& dfa, std::vector<mpz_class>& cnt,
                   std::vector<mpz_class>& scratch) {
  for (auto& v : scratch) v = 0;
  for (size_t st = 0; st < cnt.size(); ++st) {
    if (dfa.dead[st] || cnt[st] == 0) continue;
    for (unsigned a = 0; a < dfa.alphabet; ++a) {
      unsigned t = dfa.next[st][a];
      if (!dfa.dead[t]) scratch[t] += cnt[st];
    }
  }
  cnt.swap(scratch);
}

mpz_class alive_total(const Automaton& dfa, const std::vector<mpz_class>& cnt) {
  mpz_class total = 0;
  for (size_t st = 0; st < cnt.size(); ++st)
    if (!dfa.dead[st]) total += cnt[st];
  return total;
}

double level_estimate(const mpz_class& count, unsigned n, const mpz_class& base) {
  if (n == 0 || count <= 0) return 0.0;
  BigFloat num = BigFloat::log2_of(count);
  BigFloat den = BigFloat(static_cast<long>(n)) * BigFloat::log2_of(base);
  return (num / den).to_double();
}

}  // namespace

// ---------------------------------------------------------------------------
// SetDescription
// ---------------------------------------------------------------------------

SetDescription SetDescription::full() {
  SetDescription d;
  d.mode_ = Mode::full;
  return d;
}

SetDescription SetDescription::allowed_symbols(std::vector<unsigned> symbols) {
  if (symbols.empty()) throw Error::bad_input("allowed-symbols set needs at least one symbol");
  SetDescription d;
  d.mode_ = Mode::allowed;
  d.allowed_ = std::move(symbols);
  std::sort(d.allowed_.begin(), d.allowed_.end());
  d.allowed_.erase(std::unique(d.allowed_.begin(), d.allowed_.end()), d.allowed_.end());
  return d;
}

SetDescription SetDescription::forbidden_patterns(std::vector<std::string> patterns) {
  SetDescription d;
  d.mode_ = Mode::forbidden;
  for (const std::string& p : patterns)
    for (char ch : p)
      if (symbol_value(ch) < 0)
        throw Error::bad_input(std::string("forbidden pattern has non-alphabet character '") +
                               ch + "'");
  d.patterns_ = std::move(patterns);
  std::sort(d.patterns_.begin(), d.patterns_.end());
  d.patterns_.erase(std::unique(d.patterns_.begin(), d.patterns_.end()), d.patterns_.end());
  return d;
}

SetDescription SetDescription::from_automaton(Automaton dfa) {
  check_automaton(dfa);
  SetDescription d;
  d.mode_ = Mode::automaton;
  d.dfa_ = std::move(dfa);
  return d;
}

SetDescription SetDescription::union_of(std::vector<SetDescription> parts) {
  if (parts.size() < 2) throw Error::bad_input("union_of needs at least two sets");
  SetDescription d;
  d.mode_ = Mode::unions;
  d.parts_ = std::move(parts);
  return d;
}

Automaton SetDescription::compile(const Cover& cover) const {
  unsigned alphabet = cover.branching();
  switch (mode_) {
    case Mode::full:
      return full_automaton(alphabet);
    case Mode::allowed:
      return allowed_automaton(allowed_, alphabet);
    case Mode::forbidden:
      return forbidden_automaton(patterns_, alphabet);
    case Mode::automaton: {
      if (dfa_->alphabet != alphabet)
        throw Error::bad_input("automaton alphabet " + std::to_string(dfa_->alphabet) +
                               " does not match cover branching " + std::to_string(alphabet));
      return *dfa_;
    }
    case Mode::unions: {
      std::vector<Automaton> comp;
      comp.reserve(parts_.size());
      for (const SetDescription& p : parts_) comp.push_back(p.compile(cover));
      return product_automaton(comp);
    }
  }
  throw Error::internal("unreachable set mode");
}

std::string SetDescription::describe() const {
  switch (mode_) {
    case Mode::full:
      return "full";
    case Mode::allowed: {
      std::string s = "allowed{";
      for (size_t i = 0; i < allowed_.size(); ++i)
        s += (i ? "," : "") + std::string(1, symbol_char(allowed_[i]));
      return s + "}";
    }
    case Mode::forbidden: {
      std::string s = "forbid{";
      for (size_t i = 0; i < patterns_.size(); ++i) s += (i ? "," : "") + patterns_[i];
      return s + "}";
    }
    case Mode::automaton:
      return "dfa(" + std::to_string(dfa_->state_count()) + " states)";
    case Mode::unions: {
      std::string s = "union(";
      for (size_t i = 0; i < parts_.size(); ++i) s += (i ? ", " : "") + parts_[i].describe();
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Counting and Hausdorff sums
// ---------------------------------------------------------------------------

mpz_class count_elements(const Cover& cover, const SetDescription& set, unsigned n) {
  Automaton dfa = set.compile(cover);
  std::vector<mpz_class> cnt(dfa.state_count(), 0), scratch(dfa.state_count(), 0);
  if (!dfa.dead[dfa.start]) cnt[dfa.start] = 1;
  for (unsigned step = 0; step < n; ++step) transfer_step(dfa, cnt, scratch);
  return alive_total(dfa, cnt);
}

std::vector<Address> surviving_addresses(const Cover& cover, const SetDescription& set,
                                         unsigned n, size_t cap) {
  if (count_elements(cover, set, n) > mpz_class(static_cast<unsigned long>(cap)))
    throw Error::unsupported("surviving_addresses: enumeration larger than the cap");
  Automaton dfa = set.compile(cover);
  std::vector<Address> out;
  if (dfa.dead[dfa.start]) return out;
  struct Frame {
    unsigned state;
    Address addr;
  };
  std::vector<Frame> stack{{dfa.start, Address{}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.addr.size() == n) {
      out.push_back(std::move(f.addr));
      continue;
    }
    for (unsigned a = dfa.alphabet; a-- > 0;) {
      unsigned t = dfa.next[f.state][a];
      if (!dfa.dead[t]) stack.push_back({t, f.addr + symbol_char(a)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

KraftSum hausdorff_sum(const Cover& cover, const SetDescription& set, const Exponent& s,
                       unsigned n) {
  mpz_class count = count_elements(cover, set, n);
  ExactScale diam = cover.diam_at_level(n);
  KraftSum out;
  if (count == 0) {
    out.exact = RootValue();
    return out;
  }
  // The root field carries one coefficient per unit of order, so exactness
  // is only worth it for tame denominators; rationalized doubles (den ~2^50)
  // go through the log-domain path instead.
  if (s.is_rational() && s.rat().get_den() <= 4096) {
    RootContextPtr ctx = cover.field(s.rat().get_den().get_ui());
    RootValue term = RootValue::from_scale(ctx, diam.pow(s.rat()));
    out.exact = term * mpq_class(count);
    out.value = out.exact->approx();
    return out;
  }
  if (auto p = diam.pow(s)) {
    if (auto q = p->to_rational()) {
      mpq_class total = *q * count;
      out.exact = RootValue(nullptr, total);
      out.value = BigFloat(total);
      return out;
    }
  }
  out.value = exp2(BigFloat::log2_of(count) - BigFloat(static_cast<long>(n)) * s.approx() *
                                                  BigFloat::log2_of(cover.scale_base()));
  return out;
}

// ---------------------------------------------------------------------------
// Dimension search
// ---------------------------------------------------------------------------

DimEstimate dim_search(const Cover& cover, const SetDescription& set, unsigned n_max) {
  if (n_max < 4) throw Error::bad_input("dim_search: n_max must be at least 4");
  Automaton dfa = set.compile(cover);

  DimEstimate est;
  est.note = "box-dimension estimate; equals Hausdorff dimension for these self-similar sets";

  std::vector<mpz_class> cnt(dfa.state_count(), 0), scratch(dfa.state_count(), 0);
  if (!dfa.dead[dfa.start]) cnt[dfa.start] = 1;
  est.counts.emplace_back(0, alive_total(dfa, cnt));
  for (unsigned n = 1; n <= n_max; ++n) {
    transfer_step(dfa, cnt, scratch);
    est.counts.emplace_back(n, alive_total(dfa, cnt));
  }

  const mpz_class& n_full = est.counts[n_max].second;
  if (n_full == 0) {
    est.empty_set = true;
    return est;
  }

  unsigned n_half = n_max / 2;
  const mpz_class& half = est.counts[n_half].second;
  est.raw = level_estimate(n_full, n_max, cover.scale_base());
  double est_half = level_estimate(half, n_half, cover.scale_base());

  // Growth rate between the two levels: for N_n = C * lambda^n this equals
  // log lambda / log B with C cancelled, where the raw quotient keeps a
  // log(C)/n error term.
  BigFloat growth_num = BigFloat::log2_of(n_full) - BigFloat::log2_of(half);
  BigFloat growth_den =
      BigFloat(static_cast<long>(n_max - n_half)) * BigFloat::log2_of(cover.scale_base());
  est.estimate = (growth_num / growth_den).to_double();

  double gap = std::abs(est.raw - est_half);
  est.lower = std::max(0.0, std::min(est.raw, est.estimate) - gap);
  est.upper = std::max(est.raw, est.estimate) + gap;

  // Bisection on s for the level-n_max sum crossing 1; independent road to
  // the same critical exponent through the hausdorff_sum path.
  auto sum_at = [&](double s) {
    return hausdorff_sum(cover, set, Exponent::rational(mpq_class(s)), n_max).value;
  };
  BigFloat one(1.0);
  if (!(sum_at(0.0) > one)) {
    est.bisection = 0.0;
    est.s_grid.emplace_back(0.0, sum_at(0.0).to_double());
  } else {
    double lo = 0.0;
    double hi = level_estimate(mpz_class(cover.branching()), 1, cover.scale_base()) + 1.0;
    for (int iter = 0; iter < 64 && hi - lo > 1e-12; ++iter) {
      double mid = 0.5 * (lo + hi);
      BigFloat v = sum_at(mid);
      if (est.s_grid.size() < 64) est.s_grid.emplace_back(mid, v.to_double());
      (v > one ? lo : hi) = mid;
    }
    est.bisection = 0.5 * (lo + hi);
    std::sort(est.s_grid.begin(), est.s_grid.end());
  }
  if (std::abs(est.bisection - est.raw) > 2.0 / n_max)
    throw Error::internal("dim_search: bisection and log-count estimates disagree");
  return est;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

std::vector<PointRep> sample_set_points(const Cover& cover, const SetDescription& set,
                                        size_t count, size_t depth, std::uint64_t seed) {
  Automaton dfa = set.compile(cover);
  // alive[m][st]: some length-m continuation from st avoids dead states.
  std::vector<std::vector<char>> alive(depth + 1, std::vector<char>(dfa.state_count(), 0));
  for (size_t st = 0; st < dfa.state_count(); ++st) alive[0][st] = dfa.dead[st] ? 0 : 1;
  for (size_t m = 1; m <= depth; ++m)
    for (size_t st = 0; st < dfa.state_count(); ++st) {
      if (dfa.dead[st]) continue;
      for (unsigned a = 0; a < dfa.alphabet && !alive[m][st]; ++a)
        alive[m][st] = alive[m - 1][dfa.next[st][a]];
    }
  if (!alive[depth][dfa.start])
    throw Error::bad_input("sample_set_points: the set has no level-" + std::to_string(depth) +
                           " survivors");

  Rng rng(seed);
  std::vector<PointRep> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    Address w;
    unsigned st = dfa.start;
    for (size_t step = 0; step < depth; ++step) {
      std::vector<unsigned> options;
      for (unsigned a = 0; a < dfa.alphabet; ++a)
        if (alive[depth - step - 1][dfa.next[st][a]]) options.push_back(a);
      unsigned pick = options[static_cast<size_t>(rng.below(options.size()))];
      w.push_back(symbol_char(pick));
      st = dfa.next[st][pick];
    }
    // The cycle only matters past `depth`; reuse a surviving symbol when one
    // exists so the point stays in the set a while longer.
    std::string cycle(1, '0');
    for (unsigned a = 0; a < dfa.alphabet; ++a)
      if (!dfa.dead[dfa.next[st][a]]) {
        cycle[0] = symbol_char(a);
        break;
      }
    out.push_back(PointRep::periodic_word(w, cycle));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SftCompiledGale
// ---------------------------------------------------------------------------

SftCompiledGale::SftCompiledGale(const Cover& cover, const SetDescription& set, const Exponent& s,
                                 size_t target_level)
    : dfa_(set.compile(cover)), s_(s), level_(target_level), base_(cover.scale_base()) {
  if (s_.sign() < 0) throw Error::bad_input("gale exponent must be nonnegative");
  survivors_.assign(level_ + 1, std::vector<mpz_class>(dfa_.state_count(), 0));
  for (size_t st = 0; st < dfa_.state_count(); ++st)
    survivors_[0][st] = dfa_.dead[st] ? 0 : 1;
  for (size_t m = 1; m <= level_; ++m)
    for (size_t st = 0; st < dfa_.state_count(); ++st) {
      if (dfa_.dead[st]) continue;
      mpz_class total = 0;
      for (unsigned a = 0; a < dfa_.alphabet; ++a) total += survivors_[m - 1][dfa_.next[st][a]];
      survivors_[m][st] = total;
    }
}

const mpz_class& SftCompiledGale::count_at(const Address& addr) const {
  if (addr.size() > level_) return zero_;
  unsigned st = dfa_.start;
  for (char ch : addr) {
    int v = symbol_value(ch);
    if (v < 0 || static_cast<unsigned>(v) >= dfa_.alphabet)
      throw Error::bad_input(std::string("address symbol '") + ch + "' outside the alphabet");
    st = dfa_.next[st][static_cast<unsigned>(v)];
    if (dfa_.dead[st]) return zero_;
  }
  return survivors_[level_ - addr.size()][st];
}

mpz_class SftCompiledGale::survivors_below(const Address& addr) const { return count_at(addr); }

BigFloat SftCompiledGale::value_approx(const Cover& cover, const Address& addr) const {
  (void)cover;
  const mpz_class& count = count_at(addr);
  if (count == 0) return BigFloat();
  long m = static_cast<long>(level_ - addr.size());
  return exp2(BigFloat::log2_of(count) - BigFloat(m) * s_.approx() * BigFloat::log2_of(base_));
}

RootValue SftCompiledGale::value_exact(const Cover& cover, const Address& addr) const {
  if (!s_.is_rational())
    throw Error::unsupported("exact evaluation needs a rational exponent");
  RootContextPtr ctx = cover.field(s_.rat().get_den().get_ui());
  const mpz_class& count = count_at(addr);
  if (count == 0) return RootValue(ctx);
  long m = static_cast<long>(level_ - addr.size());
  ExactScale scale = ExactScale::power(base_, -mpq_class(m) * s_.rat());
  return RootValue::from_scale(ctx, scale) * mpq_class(count);
}

BigFloat SftCompiledGale::root_capital() const {
  const mpz_class& count = survivors_[level_][dfa_.start];
  if (dfa_.dead[dfa_.start] || count == 0) return BigFloat();
  return exp2(BigFloat::log2_of(count) -
              BigFloat(static_cast<long>(level_)) * s_.approx() * BigFloat::log2_of(base_));
}

// ---------------------------------------------------------------------------
// Empirical certification and stability
// ---------------------------------------------------------------------------

CertificationReport gale_upper_bound(const Cover& cover, const GaleEvaluator& gale,
                                     const SetDescription& set, size_t sample_count, size_t depth,
                                     std::uint64_t seed, Exec exec) {
  CertificationReport rep;
  rep.label = "empirical threshold evidence relative to the chosen samples; not a proof";
  rep.root_capital = gale.value_approx(cover, Address{});
  if (!rep.root_capital.is_finite() || !(rep.root_capital.sign() > 0)) {
    rep.certifiable = false;
    return rep;
  }
  rep.k_cert = static_cast<long>(std::floor(-log2(rep.root_capital).to_double()));
  rep.certifiable = rep.k_cert >= 1;

  std::vector<PointRep> points = sample_set_points(cover, set, sample_count, depth, seed);
  std::vector<BigFloat> maxima(points.size());
  parallel_for(exec, points.size(), [&](size_t i) {
    maxima[i] = evaluate_success(cover, gale, points[i], depth).max_value();
  });
  rep.samples = points.size();

  long j_hi = std::max<long>(rep.k_cert, 8);
  for (long j = 0; j <= j_hi; ++j) {
    BigFloat threshold = BigFloat::pow2(j) * rep.root_capital;
    size_t hits = 0;
    for (const BigFloat& m : maxima)
      if (m > threshold) ++hits;
    double frac = points.empty() ? 0.0 : static_cast<double>(hits) / points.size();
    rep.threshold_fractions.emplace_back(j, frac);
    if (j == rep.k_cert) rep.certified_fraction = frac;
  }
  rep.all_certified = rep.certifiable && rep.samples > 0 && rep.certified_fraction == 1.0;
  return rep;
}

StabilityReport stability_check(const Cover& cover, const std::vector<SetDescription>& sets,
                                unsigned n_max) {
  if (sets.size() < 2) throw Error::bad_input("stability_check needs at least two sets");
  StabilityReport rep;
  for (const SetDescription& s : sets) {
    DimEstimate e = dim_search(cover, s, n_max);
    rep.component_estimates.push_back(e.empty_set ? 0.0 : e.estimate);
  }
  rep.max_component =
      *std::max_element(rep.component_estimates.begin(), rep.component_estimates.end());
  DimEstimate u = dim_search(cover, SetDescription::union_of(sets), n_max);
  rep.union_estimate = u.empty_set ? 0.0 : u.estimate;
  rep.difference = rep.union_estimate - rep.max_component;
  return rep;
}

}  // namespace galedim
