#include "galedim/gale.hpp"

#include <set>

#include "galedim/error.hpp"
#include "galedim/point.hpp"

namespace galedim {

namespace {

constexpr double kDefaultTol = 5.421010862427522e-20;  // 2^{-64}

mpq_class branch_q(const Cover& cover) { return mpq_class(static_cast<long>(cover.branching())); }

}  // namespace

SupergaleTable::SupergaleTable(Exponent s, Extension ext, Entries entries)
    : s_(std::move(s)), ext_(ext), entries_(std::move(entries)) {
  if (s_.sign() < 0) throw Error::bad_input("supergale exponent s must be nonnegative");
  for (const auto& [a, v] : entries_) {
    (void)v;
    support_depth_ = std::max(support_depth_, a.size());
  }
}

SupergaleTable SupergaleTable::from_rationals(const Exponent& s, Extension ext,
                                              const std::map<Address, mpq_class>& entries) {
  Entries e;
  for (const auto& [a, q] : entries) e.emplace(a, RootValue(nullptr, q));
  return SupergaleTable(s, ext, std::move(e));
}

RootValue SupergaleTable::value(const Cover& cover, const Address& addr) const {
  if (auto it = entries_.find(addr); it != entries_.end()) return it->second;
  if (ext_ == Extension::zero) return RootValue();
  // uniform split: nearest stored ancestor diluted by (zeta^{-s}/branching)
  // per level
  for (size_t len = addr.size(); len-- > 0;) {
    auto it = entries_.find(addr.substr(0, len));
    if (it == entries_.end()) continue;
    if (!s_.is_rational())
      throw Error::unsupported("uniform-split extension needs rational s for exact values");
    long delta = static_cast<long>(addr.size() - len);
    RootContextPtr ctx = cover.field(s_.rat().get_den().get_ui());
    RootValue grow =
        RootValue::from_scale(ctx, ExactScale::power(cover.scale_base(), s_.rat() * delta));
    return it->second * grow * mpq_pow_si(branch_q(cover), -delta);
  }
  return RootValue();
}

BigFloat SupergaleTable::value_approx(const Cover& cover, const Address& addr) const {
  if (auto it = entries_.find(addr); it != entries_.end()) return it->second.approx();
  if (ext_ == Extension::zero) return BigFloat();
  if (s_.is_rational()) return value(cover, addr).approx();
  for (size_t len = addr.size(); len-- > 0;) {
    auto it = entries_.find(addr.substr(0, len));
    if (it == entries_.end()) continue;
    long delta = static_cast<long>(addr.size() - len);
    BigFloat lg = s_.approx() * ExactScale::power(cover.scale_base(), 1).log2() -
                  log2(BigFloat(static_cast<long>(cover.branching())));
    return it->second.approx() * exp2(lg * BigFloat(delta));
  }
  return BigFloat();
}

namespace {

struct NodeCheck {
  bool violated = false;
  std::string lhs, rhs;
};

// Shared traversal for validate_supergale and the equality check.
ValidationReport run_checks(const Cover& cover, const SupergaleTable& gale, size_t depth,
                            double tol, bool equality, Exec exec) {
  if (depth > gale.support_depth() + 1)
    throw Error::bad_input("check depth exceeds support depth + 1");
  if (tol <= 0) tol = kDefaultTol;

  for (const auto& [a, v] : gale.entries()) {
    if (!cover.valid_address(a)) throw Error::bad_input("malformed gale: bad address '" + a + "'");
    if (v.sign() < 0) throw Error::bad_input("malformed gale: negative value at '" + a + "'");
  }

  std::set<Address> closure;
  closure.insert(Address{});
  for (const auto& [a, v] : gale.entries()) {
    (void)v;
    for (size_t len = 0; len <= a.size(); ++len) closure.insert(a.substr(0, len));
  }
  std::vector<Address> nodes;
  for (const auto& a : closure)
    if (a.size() <= depth) nodes.push_back(a);

  ValidationReport rep;
  rep.exact = gale.s().is_rational();
  rep.equality_mode = equality;
  rep.nodes_checked = nodes.size();

  const unsigned branching = cover.branching();
  std::vector<NodeCheck> results(nodes.size());

  if (rep.exact) {
    const mpq_class& s = gale.s().rat();
    RootContextPtr ctx = cover.field(s.get_den().get_ui());
    parallel_for(exec, nodes.size(), [&](size_t i) {
      const Address& u = nodes[i];
      RootValue du = gale.value(cover, u);
      RootValue lhs = du * RootValue::from_scale(ctx, cover.diam(u).pow(s));
      RootValue child_diam_s =
          RootValue::from_scale(ctx, cover.diam_at_level(u.size() + 1).pow(s));
      RootValue rhs;
      unsigned stored = 0;
      for (unsigned v = 0; v < branching; ++v) {
        Address child = u + symbol_char(v);
        if (gale.stored(child)) {
          rhs += gale.entries().at(child) * child_diam_s;
          ++stored;
        }
      }
      if (gale.extension() == Extension::uniform_split && stored < branching)
        rhs += lhs * mpq_class(static_cast<long>(branching - stored),
                               static_cast<long>(branching));
      int c = cmp(lhs, rhs);
      bool bad = equality ? (c != 0) : (c < 0);
      if (bad) results[i] = {true, lhs.str(), rhs.str()};
    });
  } else {
    BigFloat log2B = ExactScale::power(cover.scale_base(), 1).log2();
    BigFloat s_lg = gale.s().approx() * log2B;  // diam(level n)^s = 2^{-n·s_lg}
    parallel_for(exec, nodes.size(), [&](size_t i) {
      const Address& u = nodes[i];
      long n = static_cast<long>(u.size());
      BigFloat lhs = gale.value_approx(cover, u) * exp2(-BigFloat(n) * s_lg);
      BigFloat child_scale = exp2(-BigFloat(n + 1) * s_lg);
      BigFloat rhs;
      unsigned stored = 0;
      for (unsigned v = 0; v < branching; ++v) {
        Address child = u + symbol_char(v);
        if (gale.stored(child)) {
          rhs += gale.value_approx(cover, child) * child_scale;
          ++stored;
        }
      }
      if (gale.extension() == Extension::uniform_split && stored < branching)
        rhs += lhs * BigFloat(mpq_class(static_cast<long>(branching - stored),
                                        static_cast<long>(branching)));
      BigFloat slack = max(lhs, rhs) * BigFloat(tol);
      bool bad = equality ? (abs(lhs - rhs) > slack) : (rhs - lhs > slack);
      if (bad) results[i] = {true, lhs.str(12), rhs.str(12)};
    });
  }

  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!results[i].violated) continue;
    ++rep.violation_count;
    rep.valid = false;
    if (rep.violations.size() < ValidationReport::kMaxWitnesses)
      rep.violations.push_back({nodes[i], results[i].lhs, results[i].rhs});
  }

  if (rep.exact) {
    rep.root_capital = gale.value(cover, Address{}).str();
  } else {
    rep.root_capital = gale.value_approx(cover, Address{}).str(12);
  }
  return rep;
}

}  // namespace

ValidationReport validate_supergale(const Cover& cover, const SupergaleTable& gale, size_t depth,
                                    double tol, Exec exec) {
  return run_checks(cover, gale, depth, tol, false, exec);
}

ValidationReport check_gale_equality(const Cover& cover, const SupergaleTable& gale, size_t depth,
                                     double tol, Exec exec) {
  return run_checks(cover, gale, depth, tol, true, exec);
}

bool is_gale(const Cover& cover, const SupergaleTable& gale, size_t depth, double tol, Exec exec) {
  return check_gale_equality(cover, gale, depth, tol, exec).valid;
}

BigFloat SuccessTrace::tail_max(size_t window) const {
  if (values.empty()) return BigFloat();
  size_t start = values.size() > window ? values.size() - window : 0;
  BigFloat m = values[start];
  for (size_t i = start + 1; i < values.size(); ++i) m = max(m, values[i]);
  return m;
}

SuccessTrace evaluate_success(const Cover& cover, const GaleEvaluator& gale, const PointRep& point,
                              size_t depth) {
  SuccessTrace t;
  auto addrs = representation(cover, point, depth);
  t.values.reserve(addrs.size());
  t.running_max.reserve(addrs.size());
  long j = 0;
  bool threshold_open = true;
  for (size_t n = 0; n < addrs.size(); ++n) {
    BigFloat v = gale.value_approx(cover, addrs[n]);
    t.values.push_back(v);
    BigFloat rm = n == 0 ? v : max(t.running_max.back(), v);
    t.running_max.push_back(rm);
    while (threshold_open && rm > BigFloat::pow2(j)) {
      t.first_level_above[j] = n;
      if (j >= (1L << 20)) threshold_open = false;
      ++j;
    }
  }
  return t;
}

SupergaleTable combine(const Cover& cover,
                       const std::vector<std::pair<mpq_class, const SupergaleTable*>>& parts) {
  if (parts.empty()) throw Error::bad_input("combine: need at least one gale");
  const Exponent& s = parts.front().second->s();
  Extension ext = parts.front().second->extension();
  for (const auto& [w, g] : parts) {
    if (w < 0) throw Error::bad_input("combine: negative weight");
    if (!(g->s() == s)) throw Error::bad_input("combine: incompatible exponents");
    if (g->extension() != ext)
      throw Error::unsupported("combine: mixed extension policies have no table form");
  }
  std::set<Address> keys;
  for (const auto& [w, g] : parts) {
    (void)w;
    for (const auto& [a, v] : g->entries()) {
      (void)v;
      keys.insert(a);
    }
  }
  SupergaleTable::Entries out;
  for (const Address& a : keys) {
    RootValue sum;
    for (const auto& [w, g] : parts) {
      if (w == 0) continue;
      sum += g->value(cover, a) * w;
    }
    out.emplace(a, std::move(sum));
  }
  return SupergaleTable(s, ext, std::move(out));
}

}  // namespace galedim
