#pragma once

// Schema-versioned run reports. Everything except the "timing" object is a
// deterministic function of the resolved configuration.

#include <string>
#include <vector>

#include <json.hpp>

#include "cmsym/poisson.hpp"

namespace cmsym {

inline constexpr const char* kReportSchema = "cmsym-report/1";
inline constexpr const char* kVersion = "0.1.0";

class Report {
 public:
  Report(std::string command, nlohmann::ordered_json config);

  /// Adds a named group of verdicts; names are kept in insertion order.
  void add_checks(const std::string& group, const std::vector<Verdict>& verdicts);
  /// A scalar check with a threshold, e.g. a drift bound.
  void add_metric(const std::string& name, double value, double bound, bool pass);
  void add_error(const std::string& name, const std::string& diagnostic);
  void set_result(const std::string& key, nlohmann::ordered_json value);
  void set_timing(double seconds);

  int refuted() const { return refuted_; }
  int errors() const { return errors_; }
  /// 0 all hold, 1 any refutation, 3 any error (errors win).
  int exit_code() const;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;

 private:
  std::string command_;
  nlohmann::ordered_json config_;
  nlohmann::ordered_json checks_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json results_ = nlohmann::ordered_json::object();
  double seconds_ = 0.0;
  int holds_ = 0;
  int refuted_ = 0;
  int errors_ = 0;
};

nlohmann::ordered_json verdict_to_json(const Verdict& v);

}  // namespace cmsym
