#include "affilkg/error.hpp"

namespace affilkg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedTuple: return "MalformedTuple";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::NodeNotFound: return "NodeNotFound";
    case ErrorCode::EmptyAfterNormalization: return "EmptyAfterNormalization";
    case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::EmptyPartition: return "EmptyPartition";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::DegenerateComponent: return "DegenerateComponent";
    case ErrorCode::DegenerateGraph: return "DegenerateGraph";
    case ErrorCode::BudgetUnderflow: return "BudgetUnderflow";
    case ErrorCode::SaturatedGraph: return "SaturatedGraph";
    case ErrorCode::SamplingStalled: return "SamplingStalled";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace affilkg
