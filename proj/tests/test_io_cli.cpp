#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "galedim/error.hpp"
#include "galedim/io.hpp"
#include "gen.hpp"

using namespace galedim;

namespace {

std::string tmp_path(const std::string& leaf) {
  return std::string("/tmp/galedim_test_") + leaf;
}

// Runs the CLI with stdout/stderr captured to files; returns the exit code.
int run_cli(const std::string& args, const std::string& out_file) {
  std::string cmd = std::string(GALEDIM_CLI_PATH) + " " + args + " >" + out_file + " 2>" +
                    out_file + ".err";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cover serialization round-trips") {
  for (const Cover& c : {Cover::symbolic(2), Cover::symbolic(7), Cover::cube(2, 3),
                         Cover::symbolic(2).with_zeta(mpq_class(1, 3))}) {
    Cover back = io::load_cover(io::save_cover(c));
    CHECK(back == c);
  }
  // A non-default contraction ratio must survive the trip.
  CHECK(io::load_cover(io::save_cover(Cover::cube(2, 3).with_zeta(mpq_class(1, 4)))).zeta() ==
        mpq_class(1, 4));
  CHECK_THROWS_AS(io::load_cover("{\"kind\":\"pyramid\"}"), Error);
  CHECK_THROWS_AS(io::load_cover("not json"), Error);
  CHECK_THROWS_AS(io::load_cover("{\"kind\":\"symbolic\"}"), Error);
}

TEST_CASE("supergale serialization round-trips rational tables bit-exact") {
  Cover cover = Cover::symbolic(2);
  std::map<Address, mpq_class> entries{
      {"", mpq_class(7, 3)}, {"0", mpq_class(14, 3)}, {"1", 0}, {"00", mpq_class(28, 3)}};
  SupergaleTable g = SupergaleTable::from_rationals(Exponent::rational(mpq_class(1)),
                                                    Extension::uniform_split, entries);
  std::string text = io::save_supergale(cover, g);
  SupergaleTable back = io::load_supergale(cover, text);
  CHECK(back.extension() == Extension::uniform_split);
  CHECK(back.s() == g.s());
  REQUIRE(back.entries().size() == g.entries().size());
  for (const auto& [a, v] : g.entries()) CHECK(cmp(back.entries().at(a), v) == 0);
  // Deterministic bytes: saving the reloaded table reproduces the file.
  CHECK(io::save_supergale(cover, back) == text);
}

TEST_CASE("supergale serialization carries root-field coefficients") {
  Cover cover = Cover::symbolic(2);
  RootContextPtr ctx = cover.field(2);
  SupergaleTable::Entries entries;
  Address a;
  for (size_t n = 0; n <= 5; ++n) {
    entries.emplace(a, RootValue::from_scale(ctx, ExactScale::power(2, mpq_class(n, 2))));
    a += '0';
  }
  SupergaleTable g(Exponent::rational(mpq_class(1, 2)), Extension::zero, std::move(entries));

  std::string text = io::save_supergale(cover, g);
  CHECK(text.find("field_order") != std::string::npos);
  SupergaleTable back = io::load_supergale(cover, text);
  for (const auto& [addr, v] : g.entries()) CHECK(cmp(back.entries().at(addr), v) == 0);
  CHECK(validate_supergale(cover, back, back.support_depth()).valid);
}

TEST_CASE("supergale serialization keeps log-ratio exponents") {
  Cover cover = Cover::symbolic(3);
  std::map<Address, mpq_class> entries{{"", 1}};
  SupergaleTable g = SupergaleTable::from_rationals(Exponent::log_ratio(2, 3),
                                                    Extension::zero, entries);
  SupergaleTable back = io::load_supergale(cover, io::save_supergale(cover, g));
  CHECK(back.s() == g.s());
  CHECK_FALSE(back.s().is_rational());
}

TEST_CASE("supergale loader rejects malformed tables") {
  Cover cover = Cover::symbolic(2);
  CHECK_THROWS_AS(io::load_supergale(cover, "{}"), Error);
  // Duplicate addresses.
  CHECK_THROWS_AS(
      io::load_supergale(
          cover, R"({"s":"1","extension":"zero","entries":[["0","1"],["0","2"]]})"),
      Error);
  // Address off the cover.
  CHECK_THROWS_AS(
      io::load_supergale(cover, R"({"s":"1","extension":"zero","entries":[["2","1"]]})"),
      Error);
  // Unknown extension policy.
  CHECK_THROWS_AS(
      io::load_supergale(cover, R"({"s":"1","extension":"mirror","entries":[["0","1"]]})"),
      Error);
}

TEST_CASE("antichain serialization accepts both formats") {
  Cover cover = Cover::symbolic(2);
  Antichain chain = Antichain::from_elements({"00", "01", "1"});
  std::string text = io::save_antichain(chain);
  CHECK(io::load_antichain(cover, text).elements() == chain.elements());

  CHECK(io::load_antichain(cover, "00\n01\n1\n").elements() == chain.elements());
  CHECK(io::load_antichain(cover, ".\n").elements() == std::vector<Address>{Address{}});
  CHECK(io::load_antichain(cover, "[\"0\", \"1\"]").elements() ==
        std::vector<Address>{"0", "1"});

  CHECK_THROWS_AS(io::load_antichain(cover, "0\n01\n"), Error);  // nested
  CHECK_THROWS_AS(io::load_antichain(cover, "7\n"), Error);      // off-alphabet
}

TEST_CASE("set descriptions round-trip including unions and automata") {
  Automaton dfa;
  dfa.alphabet = 2;
  dfa.start = 0;
  dfa.next = {{0, 1}, {1, 1}};
  dfa.dead = {0, 1};

  std::vector<SetDescription> sets{
      SetDescription::full(),
      SetDescription::allowed_symbols({0, 2}),
      SetDescription::forbidden_patterns({"11", "00"}),
      SetDescription::from_automaton(dfa),
      SetDescription::union_of({SetDescription::allowed_symbols({1}),
                                SetDescription::forbidden_patterns({"0"})}),
  };
  for (const SetDescription& s : sets) {
    SetDescription back = io::load_set(io::save_set(s));
    CHECK(back.mode() == s.mode());
    CHECK(back.describe() == s.describe());
    if (s.mode() == SetDescription::Mode::allowed) CHECK(back.allowed() == s.allowed());
    if (s.mode() == SetDescription::Mode::forbidden) CHECK(back.patterns() == s.patterns());
  }

  // Counting through a reloaded union matches the original.
  Cover three = Cover::symbolic(3);
  SetDescription u = sets.back();
  SetDescription u2 = io::load_set(io::save_set(u));
  CHECK(count_elements(three, u, 7) == count_elements(three, u2, 7));

  CHECK_THROWS_AS(io::load_set("{\"mode\":\"sideways\"}"), Error);
  CHECK_THROWS_AS(io::load_set("{}"), Error);
}

TEST_CASE("point descriptions parse and reject") {
  PointRep w = io::parse_point("word:01:10");
  CHECK(w.kind() == PointRep::Kind::word);
  CHECK(w.prefix() == "01");
  CHECK(w.cycle() == "10");

  PointRep z = io::parse_point("zeros");
  CHECK(z.kind() == PointRep::Kind::word);
  CHECK(representation(Cover::symbolic(2), z, 3).back() == "000");

  PointRep c = io::parse_point("coords:1/3,2/5");
  REQUIRE(c.coords().size() == 2);
  CHECK(c.coords()[0] == mpq_class(1, 3));
  CHECK(c.coords()[1] == mpq_class(2, 5));

  PointRep s = io::parse_point("stream:99");
  CHECK(s.seed() == 99);

  CHECK_THROWS_AS(io::parse_point("word::"), Error);
  CHECK_THROWS_AS(io::parse_point("coords:7/3"), Error);
  CHECK_THROWS_AS(io::parse_point("stream:banana"), Error);
  CHECK_THROWS_AS(io::parse_point("telepathy:1"), Error);
}

TEST_CASE("oracle tables parse lines with comments and fail loudly") {
  TableOracle t = io::load_oracle("# header\n. 0\n0 1.5\n01 3 \n\n# trailing\n");
  CHECK(t.estimate_bits("") == 0.0);
  CHECK(t.estimate_bits("0") == 1.5);
  CHECK(t.estimate_bits("01") == 3.0);

  CHECK_THROWS_AS(io::load_oracle("0 1.5\n0 2.0\n"), Error);  // duplicate
  CHECK_THROWS_AS(io::load_oracle("0 -1\n"), Error);          // negative bits
  CHECK_THROWS_AS(io::load_oracle("0 ten\n"), Error);         // non-numeric
  CHECK_THROWS_AS(io::load_oracle("0 1 extra\n"), Error);     // trailing junk
  CHECK_THROWS_AS(io::load_oracle("0\n"), Error);             // missing bits
}

TEST_CASE("cli validates, compiles, and reports deterministically") {
  std::string cover_file = tmp_path("cover.json");
  io::write_file(cover_file, io::save_cover(Cover::symbolic(2)));
  std::string chain_file = tmp_path("chain.txt");
  io::write_file(chain_file, "00\n01\n1\n");
  std::string gale_file = tmp_path("gale.json");
  std::string out = tmp_path("out.txt");

  // validate-cover on a healthy cover.
  CHECK(run_cli("validate-cover --cover symbolic:2 --depth 4", out) == 0);
  CHECK(slurp(out).find("all axioms hold") != std::string::npos);

  // Corrupted contraction ratio: validation failure is exit 1.
  CHECK(run_cli("validate-cover --cover " + cover_file + " --depth 4 --zeta 1/3", out) == 1);

  // compile writes a gale the validator then accepts end to end.
  CHECK(run_cli("compile --cover " + cover_file + " --antichain " + chain_file +
                    " --s 1/2 --k 0 --out " + gale_file,
                out) == 0);
  CHECK(run_cli("validate-gale --cover " + cover_file + " --gale " + gale_file + " --depth 2",
                out) == 0);
  std::string first = slurp(out);
  CHECK(first.find("valid") != std::string::npos);

  // Byte-identical reruns.
  CHECK(run_cli("validate-gale --cover " + cover_file + " --gale " + gale_file + " --depth 2",
                out) == 0);
  CHECK(slurp(out) == first);

  // kraft agrees with the library value.
  CHECK(run_cli("kraft --cover " + cover_file + " --antichain " + chain_file + " --s 1/2",
                out) == 0);
  CHECK(slurp(out).find("1.70710678") != std::string::npos);

  // Usage errors are exit 2.
  CHECK(run_cli("validate-gale --cover " + cover_file + " --gale /nonexistent.json", out) == 2);
  CHECK(run_cli("no-such-command", out) == 2);

  // dim on an inline full set.
  CHECK(run_cli("dim --cover symbolic:2 --set full --n 20", out) == 0);
  CHECK(slurp(out).find("1.000000") != std::string::npos);

  std::remove(cover_file.c_str());
  std::remove(chain_file.c_str());
  std::remove(gale_file.c_str());
}

TEST_CASE("cli cdim pipeline emits a report") {
  std::string out = tmp_path("cdim_out.txt");
  CHECK(run_cli("cdim --cover symbolic:2 --point stream:9 --s 1/4,1/2,3/4,1 --depth 256 "
                "--estimator linear:1/2",
                out) == 0);
  std::string text = slurp(out);
  CHECK(text.find("least succeeding s") != std::string::npos);
  CHECK(text.find("3/4") != std::string::npos);
  CHECK(run_cli("kr-profile --cover symbolic:2 --point zeros --r-min 1 --r-max 12 "
                "--estimator linear:1/2",
                out) == 0);
  CHECK(run_cli("success --cover symbolic:2 --point zeros --depth 8 --gale /nonexistent", out) ==
        2);
}
