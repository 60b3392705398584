#pragma once

#include <stdexcept>
#include <string>

namespace recache {

// Error types named after the contract they enforce. All carry a plain
// human-readable message; ValidationError messages name the violated
// invariant verbatim (e.g. "cache_budget <= F").

struct NoRecommendation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidAlpha : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSinr : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace recache
