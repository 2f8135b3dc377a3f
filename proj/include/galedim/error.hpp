#pragma once

#include <stdexcept>
#include <string>

namespace galedim {

// Library-level failure. `kind` separates caller mistakes (bad_input),
// malformed or unreadable files (io), and requests the library recognises
// but does not handle (unsupported). Validation *results* (a cover failing
// an axiom, a table failing the supergale inequality) are not errors; they
// come back as structured reports.
class Error : public std::runtime_error {
 public:
  enum class Kind { bad_input, io, unsupported, internal };

  Error(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

  static Error bad_input(const std::string& msg) { return Error(Kind::bad_input, msg); }
  static Error io(const std::string& msg) { return Error(Kind::io, msg); }
  static Error unsupported(const std::string& msg) { return Error(Kind::unsupported, msg); }
  static Error internal(const std::string& msg) { return Error(Kind::internal, msg); }

 private:
  Kind kind_;
};

}  // namespace galedim
