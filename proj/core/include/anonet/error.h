#pragma once

#include <stdexcept>
#include <string>

namespace anonet {

// Malformed user input: graph specs, protocol strings, input specs, DSL text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A transition rule was asked to do something its invariants forbid
// (e.g. a bit-counting token climbing past the configured level range).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The ground-truth function is undefined for the given counts (plurality ties).
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace anonet
