#include "lavrentiev/csv.hpp"

#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "lavrentiev/error.hpp"

namespace lavrentiev {

namespace {

constexpr const char* kRateHeader = "delta,seed,alpha,error,discrepancy,newton_iters";

void append_row(std::string& out, const RateRow& r) {
  out += fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{}\n", r.delta, r.seed, r.alpha, r.error,
                     r.discrepancy, r.newton_iters);
}

}  // namespace

std::string rate_csv(const RateReport& report) {
  std::string out = kRateHeader;
  out += '\n';
  for (const RateRow& r : report.rows) append_row(out, r);
  return out;
}

std::string comparison_csv(const ComparisonReport& report) {
  std::string out = fmt::format("rule,{}\n", kRateHeader);
  for (const RateReport& rule : report.rules) {
    const std::string name = to_string(rule.rule);
    for (const RateRow& r : rule.rows) {
      out += name;
      out += ',';
      append_row(out, r);
    }
  }
  return out;
}

std::string profile_csv(const DistanceProfile& profile) {
  std::string out = "R,d,lambda\n";
  for (std::size_t i = 0; i < profile.R.size(); ++i) {
    out += fmt::format("{:.17g},{:.17g},{:.17g}\n", profile.R[i], profile.d[i], profile.lambda[i]);
  }
  return out;
}

std::string prediction_csv(const DistanceStudyReport& report) {
  std::string out = "delta,alpha_pred,err_pred,err_obs\n";
  for (const DistanceStudyRow& r : report.rows) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", r.delta, r.alpha_pred, r.err_pred,
                       r.err_obs);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream file(p, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(fmt::format("cannot open '{}' for writing", path));
  file << content;
  file.flush();
  if (!file) throw Error(fmt::format("failed writing '{}'", path));
}

std::string sibling_path(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + suffix + p.extension().string());
  return out.string();
}

}  // namespace lavrentiev
