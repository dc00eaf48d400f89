#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace zeroscope {

inline constexpr double kPi = 3.14159265358979323846;

// Arguments or inputs that violate a documented precondition.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An estimator was handed fewer points than it can work with.
struct InsufficientPoints : ValidationError {
  using ValidationError::ValidationError;
};

// A requested combination of options is deliberately not provided.
struct Unsupported : ValidationError {
  using ValidationError::ValidationError;
};

// Query outside the region where truncated series are trustworthy.
struct OutOfSafeRegion : ValidationError {
  using ValidationError::ValidationError;
};

// Numerical failure at run time (as opposed to bad arguments).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root refinement and the winding count disagree even after refinement.
struct ZeroFindingIncomplete : NumericError {
  ZeroFindingIncomplete(std::size_t found, long long expected, const std::string& what)
      : NumericError(what), n_found(found), n_expected(expected) {}
  std::size_t n_found;
  long long n_expected;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic generator: xoshiro256++ seeded through splitmix64, with an
// explicit Box-Muller normal so streams do not depend on the standard
// library's distribution internals.  Substream i of a run with seed s is
// Rng(s + i).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // standard normal

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Worker count: explicit request wins, then ZEROSCOPE_THREADS, then the
// hardware count.  Always at least 1.
unsigned resolve_threads(int requested = 0);

// Runs fn(begin, end) on contiguous chunks of [0, n), one chunk per worker.
// Output written by index is identical for every worker count.
void parallel_chunks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace zeroscope
