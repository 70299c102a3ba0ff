#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phi3 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class CutoffExceedsLattice : public Error {
 public:
  using Error::Error;
};

class AliasingError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

class CutoffMismatch : public Error {
 public:
  using Error::Error;
};

class BracketNotFound : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Raised by the Hamiltonian descent when the energy runs off below -1e10.
class Divergence : public Error {
 public:
  using Error::Error;
};

class TooManyDofs : public Error {
 public:
  using Error::Error;
};

/// The integral E[exp(-V)] is infinite (cubic term without quartic taming).
class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

/// Collects every violated constraint of a configuration in one exception.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace phi3
