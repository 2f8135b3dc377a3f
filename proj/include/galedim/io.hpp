// On-disk formats the CLI exchanges: JSON records for covers, supergale
// tables, antichains, and set descriptions, plus line formats for points and
// oracle tables. Loading validates against the cover where addresses appear.
// Saving is deterministic: entries come out in address order and rationals
// print canonically, so equal inputs produce byte-identical files.

#pragma once

#include <string>

#include "galedim/compiler.hpp"
#include "galedim/complexity.hpp"
#include "galedim/cover.hpp"
#include "galedim/dimension.hpp"
#include "galedim/gale.hpp"
#include "galedim/point.hpp"

namespace galedim::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// {"kind":"symbolic","k":2} or {"kind":"cube","n":2,"base":3}
Cover load_cover(const std::string& text);
std::string save_cover(const Cover& cover);

// {"s":"1/2","extension":"zero","entries":[["01","1.5"],...]}. Values are
// rational strings "p/q", decimal strings, or (for values living in a proper
// root field) arrays of rational coefficient strings, with the field order
// in a top-level "field_order". Rational values round-trip bit-exact.
SupergaleTable load_supergale(const Cover& cover, const std::string& text);
std::string save_supergale(const Cover& cover, const SupergaleTable& gale);

// JSON array of address strings, or plain text one address per line with "."
// standing for the root.
Antichain load_antichain(const Cover& cover, const std::string& text);
std::string save_antichain(const Antichain& chain);

// {"mode":"full"} | {"mode":"allowed","allowed":["0","2"]} |
// {"mode":"forbidden","patterns":["11"]} |
// {"mode":"automaton","alphabet":2,"start":0,"next":[[0,1],[1,1]],"dead":[0,1]} |
// {"mode":"union","parts":[...]}. An optional "base" field is cross-checked
// against the symbols when present.
SetDescription load_set(const std::string& text);
std::string save_set(const SetDescription& set);

// "word:PREFIX:CYCLE", "coords:1/3,2/5", "stream:SEED", or the sugar
// "zeros" for word::0.
PointRep parse_point(const std::string& text);

// Lines "ADDRESS BITS"; "." names the root; '#' starts a comment.
TableOracle load_oracle(const std::string& text, const std::string& name = "oracle");

}  // namespace galedim::io
