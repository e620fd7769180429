#pragma once

#include <stdexcept>

namespace mpcsim {

struct DuplicateAbscissa : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DecodingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidThreshold : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientShares : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ReconstructionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// An action the ideal model forbids (bad abort identity, abort against a
// corruption-free committee, malformed adversary message).
struct ProtocolViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ScaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SearchExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mpcsim
