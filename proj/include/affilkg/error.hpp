#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace affilkg {

enum class ErrorCode {
  EmptyInput,
  MalformedTuple,
  MalformedInput,
  UnknownFormat,
  NodeNotFound,
  EmptyAfterNormalization,
  EmptyGroundTruth,
  EmptyPartition,
  EmptyGraph,
  DegenerateComponent,
  DegenerateGraph,
  BudgetUnderflow,
  SaturatedGraph,
  SamplingStalled,
  NoData,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

// Single exception type for every library failure. `detail()` carries the
// numeric payload some errors report (tuple index, line number, attempts).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::int64_t> detail = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::int64_t> detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::int64_t> detail_;
};

}  // namespace affilkg
