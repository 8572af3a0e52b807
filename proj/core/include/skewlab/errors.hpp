#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

// Raised when an exact computation would exceed a configured resource cap,
// most commonly the dyadic digit budget. These are expected, recoverable
// outcomes (the ladder of tower heights grows so fast that asking for one
// step too many jumps from 38 bits to ~4*10^11 bits), so they carry a
// message naming the offending quantity.
class resource_error : public std::runtime_error {
public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised on violated preconditions: arguments out of range, malformed
// angle literals, unsupported parameter combinations.
class domain_error : public std::invalid_argument {
public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when an independent verification pass contradicts a claimed
// result (a certificate that does not land where it says, a tower witness
// whose lift has the wrong parity). The command line maps this to a
// distinct exit code so scripted callers can tell "wrong" from "unusable".
class verify_error : public std::runtime_error {
public:
  explicit verify_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skewlab
