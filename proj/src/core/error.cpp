#include "error.hpp"

namespace slicemean {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ProjectionNotOnto: return "ProjectionNotOnto";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::BelowMinN: return "BelowMinN";
    case ErrorCode::SliceEmpty: return "SliceEmpty";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace slicemean
