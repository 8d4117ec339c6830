#pragma once

#include <string>

#include "lavrentiev/experiments.hpp"

namespace lavrentiev {

/// CSV serialisation of study reports. Numbers use 17 significant digits, so
/// every double round-trips.
std::string rate_csv(const RateReport& report);
std::string comparison_csv(const ComparisonReport& report);
std::string profile_csv(const DistanceProfile& profile);
std::string prediction_csv(const DistanceStudyReport& report);

/// Writes `content` to `path`, replacing the file. Throws Error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

/// "out/foo.csv" -> "out/foo_prediction.csv" for the second table of a
/// distance study.
std::string sibling_path(const std::string& path, const std::string& suffix);

}  // namespace lavrentiev
