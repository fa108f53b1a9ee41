#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace coarse {

using Vertex = std::int32_t;
using Dist = std::int64_t;
using Rational = boost::rational<std::int64_t>;

inline constexpr Vertex kNoVertex = -1;

// Distance between vertices in different components. Strictly larger than any
// finite distance a desk-scale net can realize, and safe to add twice.
inline constexpr Dist kInfDist = std::numeric_limits<Dist>::max() / 4;

inline bool is_finite(Dist d) { return d < kInfDist; }

enum class ErrorCode {
  kParse,
  kUnknownVertex,
  kDuplicatePoint,
  kDiscretenessViolation,
  kDomainMismatch,
  kEmptyCandidateSet,
  kNotInjective,
  kScaleTooSmall,
  kNotPositive,
  kMarginTooLarge,
  kGenerationFailed,
  kInvalidArgument,
  kOverflow,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using VertexSet = std::vector<Vertex>;  // sorted, duplicate-free

}  // namespace coarse
