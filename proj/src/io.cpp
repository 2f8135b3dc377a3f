#include "galedim/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "galedim/error.hpp"
#include "json.hpp"

namespace galedim::io {

namespace {

using nlohmann::json;

std::string trimmed(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& ex) {
    throw Error::bad_input(std::string("malformed JSON: ") + ex.what());
  }
}

json exponent_to_json(const Exponent& s) {
  if (s.is_rational()) return json(rational_str(s.rat()));
  return json{{"scale", rational_str(s.scale())},
              {"log_num", s.log_num_base().get_str()},
              {"log_den", s.log_den_base().get_str()}};
}

Exponent exponent_from_json(const json& j) {
  if (j.is_string()) return Exponent::rational(parse_rational(j.get<std::string>()));
  if (j.is_object()) {
    try {
      mpz_class a(j.at("log_num").get<std::string>());
      mpz_class b(j.at("log_den").get<std::string>());
      Exponent e = Exponent::log_ratio(a, b);
      if (j.contains("scale")) e = e * parse_rational(j.at("scale").get<std::string>());
      return e;
    } catch (const std::invalid_argument&) {
      throw Error::bad_input("malformed exponent record");
    } catch (const json::exception& ex) {
      throw Error::bad_input(std::string("malformed exponent record: ") + ex.what());
    }
  }
  throw Error::bad_input("exponent must be a rational string or a log-ratio record");
}

unsigned get_unsigned(const json& j, const char* what) {
  if (!j.is_number_unsigned()) throw Error::bad_input(std::string(what) + " must be a nonnegative integer");
  return j.get<unsigned>();
}

SetDescription set_from_json(const json& j);

std::vector<unsigned> symbols_from_json(const json& arr, std::optional<unsigned> base) {
  std::vector<unsigned> out;
  for (const auto& item : arr) {
    unsigned v;
    if (item.is_string()) {
      std::string t = item.get<std::string>();
      if (t.size() != 1 || symbol_value(t[0]) < 0)
        throw Error::bad_input("bad symbol '" + t + "' in set description");
      v = static_cast<unsigned>(symbol_value(t[0]));
    } else if (item.is_number_unsigned()) {
      v = item.get<unsigned>();
    } else {
      throw Error::bad_input("symbols must be digit strings or integers");
    }
    if (base && v >= *base)
      throw Error::bad_input("symbol value " + std::to_string(v) + " outside base " +
                             std::to_string(*base));
    out.push_back(v);
  }
  return out;
}

SetDescription set_from_json(const json& j) {
  if (!j.is_object()) throw Error::bad_input("set description must be a JSON object");
  std::string mode;
  try {
    mode = j.at("mode").get<std::string>();
  } catch (const json::exception&) {
    throw Error::bad_input("set description needs a \"mode\" field");
  }
  std::optional<unsigned> base;
  if (j.contains("base")) base = get_unsigned(j.at("base"), "base");

  if (mode == "full") return SetDescription::full();
  if (mode == "allowed") {
    if (!j.contains("allowed") || !j.at("allowed").is_array())
      throw Error::bad_input("allowed mode needs an \"allowed\" array");
    return SetDescription::allowed_symbols(symbols_from_json(j.at("allowed"), base));
  }
  if (mode == "forbidden") {
    if (!j.contains("patterns") || !j.at("patterns").is_array())
      throw Error::bad_input("forbidden mode needs a \"patterns\" array");
    std::vector<std::string> pats;
    for (const auto& p : j.at("patterns")) {
      if (!p.is_string()) throw Error::bad_input("patterns must be strings");
      pats.push_back(p.get<std::string>());
    }
    return SetDescription::forbidden_patterns(std::move(pats));
  }
  if (mode == "automaton") {
    Automaton a;
    a.alphabet = get_unsigned(j.at("alphabet"), "alphabet");
    a.start = get_unsigned(j.at("start"), "start");
    if (!j.contains("next") || !j.at("next").is_array())
      throw Error::bad_input("automaton mode needs a \"next\" transition table");
    for (const auto& row : j.at("next")) {
      std::vector<unsigned> r;
      for (const auto& cell : row) r.push_back(get_unsigned(cell, "transition"));
      a.next.push_back(std::move(r));
    }
    if (j.contains("dead"))
      for (const auto& d : j.at("dead"))
        a.dead.push_back(d.is_boolean() ? (d.get<bool>() ? 1 : 0)
                                        : (get_unsigned(d, "dead flag") ? 1 : 0));
    else
      a.dead.assign(a.next.size(), 0);
    return SetDescription::from_automaton(std::move(a));
  }
  if (mode == "union") {
    if (!j.contains("parts") || !j.at("parts").is_array())
      throw Error::bad_input("union mode needs a \"parts\" array");
    std::vector<SetDescription> parts;
    for (const auto& p : j.at("parts")) parts.push_back(set_from_json(p));
    return SetDescription::union_of(std::move(parts));
  }
  throw Error::bad_input("unknown set mode '" + mode + "'");
}

json set_to_json(const SetDescription& set) {
  json j;
  switch (set.mode()) {
    case SetDescription::Mode::full:
      j["mode"] = "full";
      break;
    case SetDescription::Mode::allowed: {
      j["mode"] = "allowed";
      json arr = json::array();
      for (unsigned v : set.allowed()) arr.push_back(std::string(1, symbol_char(v)));
      j["allowed"] = arr;
      break;
    }
    case SetDescription::Mode::forbidden:
      j["mode"] = "forbidden";
      j["patterns"] = set.patterns();
      break;
    case SetDescription::Mode::automaton: {
      const Automaton& a = *set.dfa();
      j["mode"] = "automaton";
      j["alphabet"] = a.alphabet;
      j["start"] = a.start;
      j["next"] = a.next;
      json dead = json::array();
      for (char d : a.dead) dead.push_back(d ? 1 : 0);
      j["dead"] = dead;
      break;
    }
    case SetDescription::Mode::unions: {
      j["mode"] = "union";
      json parts = json::array();
      for (const auto& p : set.parts()) parts.push_back(set_to_json(p));
      j["parts"] = parts;
      break;
    }
  }
  return j;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error::bad_input("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::bad_input("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error::bad_input("write to '" + path + "' failed");
}

Cover load_cover(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object() || !j.contains("kind"))
    throw Error::bad_input("cover record needs a \"kind\" field");
  try {
    std::string kind = j.at("kind").get<std::string>();
    Cover cover = [&] {
      if (kind == "symbolic") return Cover::symbolic(get_unsigned(j.at("k"), "k"));
      if (kind == "cube")
        return Cover::cube(get_unsigned(j.at("n"), "n"), get_unsigned(j.at("base"), "base"));
      throw Error::bad_input("unknown cover kind '" + kind + "'");
    }();
    if (j.contains("zeta")) cover = cover.with_zeta(parse_rational(j.at("zeta").get<std::string>()));
    return cover;
  } catch (const json::exception& ex) {
    throw Error::bad_input(std::string("malformed cover record: ") + ex.what());
  }
}

std::string save_cover(const Cover& cover) {
  json j;
  if (cover.kind() == CoverKind::symbolic) {
    j["kind"] = "symbolic";
    j["k"] = cover.branching();
  } else {
    j["kind"] = "cube";
    j["n"] = cover.cube_dim();
    j["base"] = static_cast<unsigned>(cover.scale_base().get_ui());
  }
  Cover plain = cover.kind() == CoverKind::symbolic
                    ? Cover::symbolic(cover.branching())
                    : Cover::cube(cover.cube_dim(),
                                  static_cast<unsigned>(cover.scale_base().get_ui()));
  if (cover.zeta() != plain.zeta()) j["zeta"] = rational_str(cover.zeta());
  return j.dump(2) + "\n";
}

static SupergaleTable load_supergale_fields(const Cover& cover, const json& j);

SupergaleTable load_supergale(const Cover& cover, const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) throw Error::bad_input("gale record must be a JSON object");
  try {
    return load_supergale_fields(cover, j);
  } catch (const json::exception& ex) {
    throw Error::bad_input(std::string("malformed gale record: ") + ex.what());
  }
}

static SupergaleTable load_supergale_fields(const Cover& cover, const json& j) {
  Exponent s = exponent_from_json(j.at("s"));
  std::string ext_name = j.value("extension", std::string("zero"));
  Extension ext;
  if (ext_name == "zero")
    ext = Extension::zero;
  else if (ext_name == "uniform-split")
    ext = Extension::uniform_split;
  else
    throw Error::bad_input("extension must be \"zero\" or \"uniform-split\"");

  unsigned long order = 0;
  if (j.contains("field_order")) order = j.at("field_order").get<unsigned long>();
  RootContextPtr ctx = order ? cover.field(order) : nullptr;

  if (!j.contains("entries") || !j.at("entries").is_array())
    throw Error::bad_input("gale record needs an \"entries\" array");
  SupergaleTable::Entries entries;
  for (const auto& cell : j.at("entries")) {
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_string())
      throw Error::bad_input("each entry must be [\"address\", value]");
    Address addr = cell[0].get<std::string>();
    if (!cover.valid_address(addr))
      throw Error::bad_input("entry address '" + addr + "' is not on this cover");
    RootValue v;
    if (cell[1].is_string()) {
      v = RootValue(nullptr, parse_rational(cell[1].get<std::string>()));
    } else if (cell[1].is_number_integer()) {
      v = RootValue(nullptr, mpq_class(cell[1].get<long>()));
    } else if (cell[1].is_array()) {
      if (!ctx)
        throw Error::bad_input("coefficient-array values need a top-level \"field_order\"");
      if (cell[1].size() > ctx->order())
        throw Error::bad_input("coefficient array longer than the field order");
      v = RootValue(ctx);
      for (size_t t = 0; t < cell[1].size(); ++t) {
        if (!cell[1][t].is_string()) throw Error::bad_input("coefficients must be strings");
        mpq_class c = parse_rational(cell[1][t].get<std::string>());
        if (c == 0) continue;
        mpq_class e(-static_cast<long>(t), static_cast<long>(ctx->order()));
        e.canonicalize();
        v += RootValue::from_scale(ctx, ExactScale::power(ctx->base(), e)) * c;
      }
    } else {
      throw Error::bad_input("gale values must be strings or coefficient arrays");
    }
    auto [it, fresh] = entries.emplace(std::move(addr), std::move(v));
    if (!fresh) throw Error::bad_input("duplicate entry for address '" + it->first + "'");
  }
  return SupergaleTable(s, ext, std::move(entries));
}

std::string save_supergale(const Cover& cover, const SupergaleTable& gale) {
  (void)cover;
  json j;
  j["s"] = exponent_to_json(gale.s());
  j["extension"] = gale.extension() == Extension::zero ? "zero" : "uniform-split";
  unsigned long order = 0;
  json entries = json::array();
  for (const auto& [addr, val] : gale.entries()) {
    json cell = json::array();
    cell.push_back(addr);
    if (auto r = val.to_rational()) {
      cell.push_back(rational_str(*r));
    } else {
      const RootContextPtr& ctx = val.context();
      if (order == 0)
        order = ctx->order();
      else if (order != ctx->order())
        throw Error::unsupported("cannot serialize a table mixing field orders");
      json coeffs = json::array();
      for (const auto& c : val.coefficients()) coeffs.push_back(rational_str(c));
      cell.push_back(coeffs);
    }
    entries.push_back(cell);
  }
  j["entries"] = entries;
  if (order) j["field_order"] = order;
  return j.dump(2) + "\n";
}

Antichain load_antichain(const Cover& cover, const std::string& text) {
  std::vector<Address> addrs;
  std::string t = trimmed(text);
  if (!t.empty() && t[0] == '[') {
    json j = parse_json(text);
    for (const auto& item : j) {
      if (!item.is_string()) throw Error::bad_input("antichain entries must be strings");
      addrs.push_back(item.get<std::string>());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trimmed(line);
      if (line.empty()) continue;
      addrs.push_back(line == "." ? Address{} : line);
    }
  }
  for (const Address& a : addrs)
    if (!cover.valid_address(a))
      throw Error::bad_input("address '" + a + "' is not on this cover");
  return Antichain::from_elements(std::move(addrs));
}

std::string save_antichain(const Antichain& chain) {
  json j = json::array();
  for (const Address& a : chain.elements()) j.push_back(a);
  return j.dump(2) + "\n";
}

SetDescription load_set(const std::string& text) {
  try {
    return set_from_json(parse_json(text));
  } catch (const json::exception& ex) {
    throw Error::bad_input(std::string("malformed set description: ") + ex.what());
  }
}

std::string save_set(const SetDescription& set) { return set_to_json(set).dump(2) + "\n"; }

PointRep parse_point(const std::string& text) {
  std::string t = trimmed(text);
  if (t == "zeros") return PointRep::periodic_word("", "0");
  size_t c1 = t.find(':');
  if (c1 == std::string::npos)
    throw Error::bad_input("point must be word:PREFIX:CYCLE, coords:..., stream:SEED, or zeros");
  std::string head = t.substr(0, c1);
  std::string rest = t.substr(c1 + 1);
  if (head == "word") {
    size_t c2 = rest.find(':');
    if (c2 == std::string::npos)
      throw Error::bad_input("word points need both parts: word:PREFIX:CYCLE");
    return PointRep::periodic_word(rest.substr(0, c2), rest.substr(c2 + 1));
  }
  if (head == "coords") {
    std::vector<mpq_class> xs;
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t comma = rest.find(',', pos);
      std::string tok =
          comma == std::string::npos ? rest.substr(pos) : rest.substr(pos, comma - pos);
      xs.push_back(parse_rational(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return PointRep::coordinates(xs);
  }
  if (head == "stream") {
    std::string tok = trimmed(rest);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw Error::bad_input("stream seed must be a decimal integer");
    return PointRep::seeded_stream(std::stoull(tok));
  }
  throw Error::bad_input("unknown point form '" + head + "'");
}

TableOracle load_oracle(const std::string& text, const std::string& name) {
  std::map<std::string, double> table;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string addr, bits_tok;
    if (!(ls >> addr >> bits_tok))
      throw Error::bad_input("oracle line " + std::to_string(lineno) +
                             ": expected 'ADDRESS BITS'");
    std::string extra;
    if (ls >> extra)
      throw Error::bad_input("oracle line " + std::to_string(lineno) + ": trailing content");
    if (addr == ".") addr.clear();
    size_t used = 0;
    double bits;
    try {
      bits = std::stod(bits_tok, &used);
    } catch (const std::exception&) {
      throw Error::bad_input("oracle line " + std::to_string(lineno) + ": bad bit count");
    }
    if (used != bits_tok.size())
      throw Error::bad_input("oracle line " + std::to_string(lineno) + ": bad bit count");
    if (!table.emplace(addr, bits).second)
      throw Error::bad_input("oracle line " + std::to_string(lineno) + ": duplicate address");
  }
  return TableOracle(std::move(table), name);
}

}  // namespace galedim::io
