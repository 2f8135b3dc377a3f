// Times each batch kernel in serial mode against its OpenMP variant and
// checks that both return the same answer. On a single-core build (or with
// GALEDIM_OPENMP off) the two columns should match to noise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "galedim/compiler.hpp"
#include "galedim/complexity.hpp"
#include "galedim/cover.hpp"
#include "galedim/dimension.hpp"
#include "galedim/gale.hpp"
#include "galedim/parallel.hpp"
#include "galedim/point.hpp"
#include "galedim/rand.hpp"

using namespace galedim;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  auto dt = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration<double, std::milli>(dt).count();
}

struct Row {
  std::string name;
  double serial_ms;
  double parallel_ms;
  bool agree;
};

void print(const std::vector<Row>& rows) {
  std::printf("%-28s %12s %12s %9s %s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "agree");
  for (const auto& r : rows)
    std::printf("%-28s %12.2f %12.2f %8.2fx %s\n", r.name.c_str(), r.serial_ms, r.parallel_ms,
                r.serial_ms / (r.parallel_ms > 0 ? r.parallel_ms : 1e-9),
                r.agree ? "yes" : "NO");
}

Antichain wide_antichain(const Cover& cover, unsigned depth, size_t count, Rng& rng) {
  std::vector<Address> addrs;
  for (size_t i = 0; i < count; ++i) {
    Address a;
    for (unsigned d = 0; d < depth; ++d) a += symbol_char(static_cast<unsigned>(rng.below(cover.branching())));
    addrs.push_back(a);
  }
  (void)cover;
  return maximal_antichain(addrs);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", hardware_threads());
  std::vector<Row> rows;
  Rng rng(7);

  {
    Cover cover = Cover::symbolic(2);
    Antichain chain = wide_antichain(cover, 18, 60000, rng);
    Exponent s = Exponent::rational(mpq_class(1, 2));
    auto t0 = std::chrono::steady_clock::now();
    KraftSum a = kraft_sum(cover, chain, s, Exec::serial);
    double ser = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    KraftSum b = kraft_sum(cover, chain, s, Exec::parallel);
    double par = ms_since(t0);
    bool agree = a.exact && b.exact ? cmp(*a.exact, *b.exact) == 0 : a.value == b.value;
    rows.push_back({"kraft_sum (60k nodes)", ser, par, agree});
  }

  {
    Cover cover = Cover::symbolic(3);
    Antichain chain = wide_antichain(cover, 9, 8000, rng);
    // The label k must leave the Kraft sum below c^{1+s} * 2^{-k}.
    KraftSum kr = kraft_sum(cover, chain, Exponent::rational(mpq_class(2, 3)));
    long k = static_cast<long>(std::floor(std::log2(2.0 / kr.value.to_double()))) - 1;
    SupergaleTable gale = cover_to_supergale(cover, chain, mpq_class(2, 3), k);
    auto t0 = std::chrono::steady_clock::now();
    ValidationReport a = validate_supergale(cover, gale, gale.support_depth(), 0.0, Exec::serial);
    double ser = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    ValidationReport b =
        validate_supergale(cover, gale, gale.support_depth(), 0.0, Exec::parallel);
    double par = ms_since(t0);
    rows.push_back({"validate_supergale", ser, par,
                    a.valid == b.valid && a.nodes_checked == b.nodes_checked});
  }

  {
    Cover cover = Cover::symbolic(2);
    PointRep point = PointRep::seeded_stream(99);
    DeflateEstimator est;
    auto t0 = std::chrono::steady_clock::now();
    PrecisionProfile a = kr_profile(cover, point, 1, 1024, est, Exec::serial);
    double ser = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    PrecisionProfile b = kr_profile(cover, point, 1, 1024, est, Exec::parallel);
    double par = ms_since(t0);
    bool agree = a.entries.size() == b.entries.size();
    for (size_t i = 0; agree && i < a.entries.size(); ++i)
      agree = a.entries[i].bits == b.entries[i].bits;
    rows.push_back({"kr_profile (r <= 1024)", ser, par, agree});
  }

  {
    Cover cover = Cover::symbolic(3);
    SetDescription sft = SetDescription::forbidden_patterns({"1"});
    SftCompiledGale gale(cover, sft, Exponent::log_ratio(2, 3), 28);
    auto t0 = std::chrono::steady_clock::now();
    CertificationReport a = gale_upper_bound(cover, gale, sft, 48, 28, 1, Exec::serial);
    double ser = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    CertificationReport b = gale_upper_bound(cover, gale, sft, 48, 28, 1, Exec::parallel);
    double par = ms_since(t0);
    rows.push_back({"gale_upper_bound (48 pts)", ser, par,
                    a.certified_fraction == b.certified_fraction && a.k_cert == b.k_cert});
  }

  print(rows);
  return 0;
}
