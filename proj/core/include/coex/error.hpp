#pragma once

#include <stdexcept>
#include <string>

namespace coex {

/// A parameter is outside its domain (negative distance, non-ergodic source, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A positive rate was requested over a zero-width sub-band.
class InfeasibleBand : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The link budget cannot support any positive rate.
class InfeasibleLink : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UndefinedRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The Markov chain has no unique stationary distribution.
class NoUniqueStationary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An expectation diverges (e.g. expected frames with zero success probability).
class Divergence : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace coex
