#include "galedim/complexity.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "galedim/error.hpp"
#include "galedim/point.hpp"

namespace galedim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

DeflateEstimator::DeflateEstimator(double correction_bits) : correction_(correction_bits) {
  if (!(correction_bits >= 0) && !(correction_bits < 0))
    throw Error::bad_input("deflate correction must be a number");
}

double DeflateEstimator::estimate_bits(std::string_view data) const {
  z_stream strm{};
  if (deflateInit2(&strm, 9, Z_DEFLATED, /*windowBits=*/-15, /*memLevel=*/9,
                   Z_DEFAULT_STRATEGY) != Z_OK)
    throw Error::internal("deflate initialization failed");
  uLong cap = deflateBound(&strm, static_cast<uLong>(data.size()));
  std::vector<unsigned char> out(cap);
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  strm.avail_in = static_cast<uInt>(data.size());
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&strm, Z_FINISH);
  uLong produced = strm.total_out;
  deflateEnd(&strm);
  if (rc != Z_STREAM_END) throw Error::internal("deflate did not finish in one pass");
  return 8.0 * static_cast<double>(produced) + correction_;
}

std::string DeflateEstimator::id() const { return "deflate-raw-9"; }

TableOracle::TableOracle(std::map<std::string, double> table, std::string name)
    : table_(std::move(table)), name_(std::move(name)) {
  for (const auto& [w, bits] : table_)
    if (bits < 0) throw Error::bad_input("oracle bits for '" + w + "' must be nonnegative");
}

double TableOracle::estimate_bits(std::string_view data) const {
  auto it = table_.find(std::string(data));
  return it == table_.end() ? kInf : it->second;
}

std::string TableOracle::id() const { return name_; }

LinearOracle::LinearOracle(const mpq_class& alpha) : alpha_(alpha) {
  if (alpha < 0) throw Error::bad_input("linear oracle slope must be nonnegative");
}

double LinearOracle::estimate_bits(std::string_view data) const {
  mpq_class bits = alpha_ * static_cast<long>(data.size());
  return bits.get_d();
}

std::string LinearOracle::id() const { return "linear:" + rational_str(alpha_); }

// ---------------------------------------------------------------------------
// Precision profiles
// ---------------------------------------------------------------------------

std::optional<unsigned> precision_window_level(const mpz_class& base, unsigned r) {
  if (r < 1) throw Error::bad_input("precision must be at least 1");
  if (base < 2) throw Error::bad_input("scale base must be at least 2");
  double lg = BigFloat::log2_of(base).to_double();
  long m0 = static_cast<long>(std::floor((r - 1) / lg));
  mpz_class lo, hi;
  mpz_ui_pow_ui(lo.get_mpz_t(), 2, r - 1);
  mpz_ui_pow_ui(hi.get_mpz_t(), 2, r);
  for (long m = std::max<long>(0, m0 - 2); m <= m0 + 2; ++m) {
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m));
    if (pw >= lo && pw < hi) return static_cast<unsigned>(m);
  }
  return std::nullopt;
}

PrecisionProfile kr_profile(const Cover& cover, const PointRep& point, unsigned r_min,
                            unsigned r_max, const ComplexityEstimator& est, Exec exec) {
  if (r_min < 1 || r_min > r_max)
    throw Error::bad_input("kr_profile: need 1 <= r_min <= r_max");

  size_t n = r_max - r_min + 1;
  std::vector<std::optional<unsigned>> levels(n);
  unsigned max_level = 0;
  for (size_t i = 0; i < n; ++i) {
    levels[i] = precision_window_level(cover.scale_base(), r_min + static_cast<unsigned>(i));
    if (levels[i]) max_level = std::max(max_level, *levels[i]);
  }
  std::vector<Address> reps = representation(cover, point, max_level);

  PrecisionProfile profile;
  profile.estimator_id = est.id();
  profile.point_id = point.id();
  profile.entries.resize(n);
  Exec use = est.thread_safe() ? exec : Exec::serial;
  parallel_for(use, n, [&](size_t i) {
    PrecisionProfile::Entry e;
    e.r = r_min + static_cast<unsigned>(i);
    if (!levels[i]) {
      e.skipped = true;
    } else {
      e.witness = reps[*levels[i]];
      e.bits = est.estimate_bits(e.witness);
    }
    profile.entries[i] = std::move(e);
  });
  return profile;
}

CdimPointEstimate cdim_point_estimate(const PrecisionProfile& profile,
                                      const mpq_class& tail_fraction) {
  if (profile.entries.empty()) throw Error::bad_input("cdim_point_estimate: empty profile");
  if (tail_fraction <= 0 || tail_fraction > 1)
    throw Error::bad_input("cdim_point_estimate: tail fraction must be in (0, 1]");
  CdimPointEstimate out;
  for (const auto& e : profile.entries)
    if (!e.skipped) out.ratios.emplace_back(e.r, e.bits / e.r);
  if (out.ratios.empty())
    throw Error::bad_input("cdim_point_estimate: every entry was skipped (no usable precision)");

  mpq_class scaled = tail_fraction * static_cast<long>(out.ratios.size());
  mpz_class floor_q;
  mpz_fdiv_q(floor_q.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  size_t tail = std::max<size_t>(1, floor_q.get_ui());
  tail = std::min(tail, out.ratios.size());

  double best = kInf;
  for (size_t i = out.ratios.size() - tail; i < out.ratios.size(); ++i)
    best = std::min(best, out.ratios[i].second);
  out.value = best;
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration <-> supergale
// ---------------------------------------------------------------------------

SummabilityCheck check_enumeration_summability(const Cover& cover, const Enumeration& e,
                                               const mpq_class& s_prime, double slack) {
  std::set<Address> uniq;
  for (const auto& [a, budget] : e.pairs) {
    (void)budget;
    uniq.insert(a);
  }
  BigFloat lgB = BigFloat::log2_of(cover.scale_base());
  SummabilityCheck res;
  res.slack = slack;
  for (const Address& a : uniq)
    res.weight += exp2(-BigFloat(static_cast<long>(a.size())) * BigFloat(s_prime) * lgB);
  res.within = !(res.weight > BigFloat(1.0 + slack));
  return res;
}

SupergaleTable enumeration_to_supergale(const Cover& cover, const Enumeration& e,
                                        const mpq_class& s, const mpq_class& s_prime) {
  if (s_prime < 0) throw Error::bad_input("enumeration_to_supergale: s' must be nonnegative");
  if (!(s > s_prime))
    throw Error::bad_input("enumeration_to_supergale: need s > s' (got s = " + rational_str(s) +
                           ", s' = " + rational_str(s_prime) + ")");
  mpz_class order;
  mpz_lcm(order.get_mpz_t(), s.get_den().get_mpz_t(), s_prime.get_den().get_mpz_t());
  RootContextPtr ctx = cover.field(order.get_ui());

  std::set<Address> uniq;
  for (const auto& [a, budget] : e.pairs) {
    (void)budget;
    if (!cover.valid_address(a))
      throw Error::bad_input("enumeration address '" + a + "' is not on this cover");
    uniq.insert(a);
  }

  SupergaleTable::Entries out;
  for (const Address& v : uniq) {
    RootValue mass = RootValue::from_scale(ctx, cover.diam(v).pow(s_prime));
    for (size_t len = 0; len <= v.size(); ++len) {
      Address u = v.substr(0, len);
      auto [it, fresh] = out.emplace(u, mass);
      if (!fresh) it->second += mass;
    }
  }
  for (auto& kv : out)
    kv.second = kv.second * RootValue::from_scale(ctx, cover.diam(kv.first).pow(-s));
  return SupergaleTable(Exponent::rational(s), Extension::zero, std::move(out));
}

CountingBound supergale_to_counting_bound(const Cover& cover, const SupergaleTable& gale, long k,
                                          unsigned r) {
  ValidationReport vr = validate_supergale(cover, gale, gale.support_depth());
  if (!vr.valid)
    throw Error::bad_input("supergale_to_counting_bound: the table is not a supergale");

  CountingBound res;
  res.window_level = precision_window_level(cover.scale_base(), r);
  if (gale.s().is_rational()) {
    mpq_class ex = mpq_class(static_cast<long>(r)) * gale.s().rat() - k;
    res.bound_exact = ExactScale::power(2, ex);
    res.bound = res.bound_exact->approx();
  } else {
    res.bound = exp2(BigFloat(static_cast<long>(r)) * gale.s().approx() - BigFloat(k));
  }
  if (!res.window_level) {
    res.holds = true;  // empty window, count 0
    return res;
  }
  size_t m = *res.window_level;

  RootValue capital = gale.value(cover, Address{});
  if (capital.is_zero()) {
    // A zero-capital supergale is identically zero; the relative threshold
    // is meaningless, and no address grows anything.
    res.holds = true;
    return res;
  }
  RootValue threshold = capital * mpq_pow_si(mpq_class(2), k);

  // DFS with the supergale growth cap: below a node of value v, no level-m
  // descendant exceeds v * B^{s*(m - level)}. The cap is compared with a
  // one-sided margin so rounding can only keep a subtree, never drop one.
  BigFloat s_lg = gale.s().approx() * BigFloat::log2_of(cover.scale_base());
  BigFloat thr_lo = threshold.approx() * (BigFloat(1.0) - BigFloat::pow2(-96));
  constexpr size_t kWalkCap = size_t(1) << 22;
  size_t visited = 0;
  std::vector<Address> stack{Address{}};
  while (!stack.empty()) {
    Address a = std::move(stack.back());
    stack.pop_back();
    RootValue v = gale.value(cover, a);
    if (v.is_zero()) continue;
    if (a.size() == m) {
      if (v >= threshold) ++res.count;
      continue;
    }
    BigFloat reach =
        v.approx() * exp2(BigFloat(static_cast<long>(m - a.size())) * s_lg);
    if (reach < thr_lo) continue;
    if (++visited > kWalkCap)
      throw Error::unsupported("supergale_to_counting_bound: window walk too large");
    for (unsigned c = 0; c < cover.branching(); ++c) stack.push_back(a + symbol_char(c));
  }

  if (res.bound_exact) {
    res.holds = cmp(*res.bound_exact, mpq_class(res.count)) >= 0;
  } else {
    res.holds = !(BigFloat(res.count) > res.bound * (BigFloat(1.0) + BigFloat::pow2(-30)));
  }
  return res;
}

double coherence_slack_bits(double k, double r) {
  double prod = k * r;
  if (!(prod > 1)) return 16.0;
  return 2.0 * std::log2(prod) + 16.0;
}

// ---------------------------------------------------------------------------
// Grid orchestration
// ---------------------------------------------------------------------------

CdimGaleReport cdim_via_gales(const Cover& cover, const PointRep& point,
                              const std::vector<mpq_class>& s_grid, size_t depth,
                              const ComplexityEstimator& est, const mpq_class& tail_fraction) {
  if (s_grid.empty()) throw Error::bad_input("cdim_via_gales: empty exponent grid");
  if (depth < 1) throw Error::bad_input("cdim_via_gales: depth must be at least 1");
  std::vector<mpq_class> grid = s_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (const mpq_class& s : grid)
    if (s <= 0) throw Error::bad_input("cdim_via_gales: grid exponents must be positive");

  std::vector<Address> reps = representation(cover, point, depth);
  std::vector<double> bits(depth + 1);
  for (size_t nn = 0; nn <= depth; ++nn) bits[nn] = est.estimate_bits(reps[nn]);

  BigFloat lgB = BigFloat::log2_of(cover.scale_base());
  double lgB_d = lgB.to_double();

  CdimGaleReport rep;
  rep.success_threshold_log2 = 20;
  rep.note =
      "estimator-relative; the enumeration stage is restricted to the point's own "
      "representation prefixes";

  for (size_t i = 0; i < grid.size(); ++i) {
    mpq_class step;
    if (grid.size() > 1)
      step = (i > 0) ? grid[i] - grid[i - 1] : grid[1] - grid[0];
    else
      step = grid[0] / 2;
    mpq_class sp = grid[i] - step;
    if (sp < 0) sp = 0;

    CdimGaleRow row;
    row.s = grid[i];
    row.s_prime = sp;
    std::vector<char> in(depth + 1, 0);
    for (size_t n = 0; n <= depth; ++n) {
      double budget = mpq_class(sp * static_cast<long>(n)).get_d() * lgB_d;
      if (bits[n] <= budget + 1e-9) {
        in[n] = 1;
        ++row.enumerated;
      }
    }

    BigFloat sp_lg = BigFloat(sp) * lgB;
    BigFloat s_lg = BigFloat(grid[i]) * lgB;
    BigFloat tail_sum;
    double max_lg = -kInf;
    for (size_t n = depth + 1; n-- > 0;) {
      if (in[n]) tail_sum += exp2(-BigFloat(static_cast<long>(n)) * sp_lg);
      if (tail_sum.is_zero()) continue;
      BigFloat d_n = tail_sum * exp2(BigFloat(static_cast<long>(n)) * s_lg);
      max_lg = std::max(max_lg, log2(d_n).to_double());
    }
    row.max_log2 = max_lg;
    row.succeeded = max_lg >= static_cast<double>(rep.success_threshold_log2);
    if (row.succeeded && !rep.least_succeeding_s) rep.least_succeeding_s = row.s;
    rep.rows.push_back(std::move(row));
  }

  unsigned r_max = std::max(1u, static_cast<unsigned>(std::floor(depth * lgB_d)));
  try {
    PrecisionProfile profile = kr_profile(cover, point, 1, r_max, est);
    CdimPointEstimate lower = cdim_point_estimate(profile, tail_fraction);
    rep.lower_estimate = lower.value;
    rep.lower_ratios = std::move(lower.ratios);
  } catch (const Error&) {
    rep.lower_estimate = std::numeric_limits<double>::quiet_NaN();
    rep.note += "; no usable precision window for the lower estimate";
  }
  return rep;
}

}  // namespace galedim
