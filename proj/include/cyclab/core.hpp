#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclab {

using Complex = std::complex<double>;

// Error hierarchy. Every operation reports contract violations by throwing
// one of these; callers that need a status (CLI, pipeline) translate them.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sampled function was used with a measure it is not bound to.
class BindingError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (e.g. |w| >= 1 for the inverse
// bounded transform).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Reweighting by a function that vanishes at an atom.
class ZeroWeightError : public Error {
 public:
  using Error::Error;
};

// Malformed measures, files, or experiment configurations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Preconditions of a diagnostic that make the result meaningless.
class ContractError : public Error {
 public:
  using Error::Error;
};

// The alpha decomposition could not meet its mass budget.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// splitmix64-seeded xoshiro256** generator. Kept in-house so that seeded
// runs produce identical streams on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [0, n).
  std::size_t below(std::size_t n);
  // Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t s_[4];
};

}  // namespace cyclab
