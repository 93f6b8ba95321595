#pragma once

#include <stdexcept>
#include <string>

namespace mobkit {

enum class errc {
  malformed_header,
  empty_trace,
  all_bins_absent,
  insufficient_coverage,
  degenerate_variance,
  insufficient_days,
  zero_denominator,
  too_few_points,
  single_day,
  home_undefined,
  no_class_variation,
  all_skipped,
  invalid_spec,
  config_invalid,
  missing_artifact,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_header: return "MalformedHeader";
    case errc::empty_trace: return "EmptyTrace";
    case errc::all_bins_absent: return "AllBinsAbsent";
    case errc::insufficient_coverage: return "InsufficientCoverage";
    case errc::degenerate_variance: return "DegenerateVariance";
    case errc::insufficient_days: return "InsufficientDays";
    case errc::zero_denominator: return "ZeroDenominator";
    case errc::too_few_points: return "TooFewPoints";
    case errc::single_day: return "SingleDay";
    case errc::home_undefined: return "HomeUndefined";
    case errc::no_class_variation: return "NoClassVariation";
    case errc::all_skipped: return "AllSkipped";
    case errc::invalid_spec: return "InvalidSpec";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::missing_artifact: return "MissingUpstreamArtifact";
    case errc::io_error: return "IoError";
  }
  return "Error";
}

}  // namespace mobkit
