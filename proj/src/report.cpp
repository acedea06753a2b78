#include "cmsym/report.hpp"

#include <iomanip>
#include <sstream>

#include "cmsym/observables.hpp"

namespace cmsym {

using nlohmann::ordered_json;

ordered_json verdict_to_json(const Verdict& v) {
  ordered_json j;
  j["name"] = v.name;
  j["verdict"] = to_string(v.kind);
  j["samples"] = v.samples;
  j["rejected"] = v.rejected;
  j["max_residual"] = v.max_residual;
  if (v.witness) {
    ordered_json w;
    w["sample"] = v.witness->sample;
    w["x"] = v.witness->x;
    w["p"] = v.witness->p;
    w["residual"] = v.witness->residual;
    j["witness"] = w;
  }
  if (!v.diagnostic.empty()) j["diagnostic"] = v.diagnostic;
  return j;
}

Report::Report(std::string command, ordered_json config) : command_(std::move(command)), config_(std::move(config)) {}

void Report::add_checks(const std::string& group, const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts) {
    ordered_json j = verdict_to_json(v);
    j["group"] = group;
    checks_.push_back(std::move(j));
    switch (v.kind) {
      case VerdictKind::holds:
        ++holds_;
        break;
      case VerdictKind::refuted:
        ++refuted_;
        break;
      case VerdictKind::error:
        ++errors_;
    }
  }
}

void Report::add_metric(const std::string& name, double value, double bound, bool pass) {
  ordered_json j;
  j["name"] = name;
  j["verdict"] = pass ? "holds" : "refuted";
  j["value"] = value;
  j["bound"] = bound;
  j["group"] = "metric";
  checks_.push_back(std::move(j));
  (pass ? holds_ : refuted_)++;
}

void Report::add_error(const std::string& name, const std::string& diagnostic) {
  ordered_json j;
  j["name"] = name;
  j["verdict"] = "error";
  j["diagnostic"] = diagnostic;
  j["group"] = "error";
  checks_.push_back(std::move(j));
  ++errors_;
}

void Report::set_result(const std::string& key, ordered_json value) { results_[key] = std::move(value); }

void Report::set_timing(double seconds) { seconds_ = seconds; }

int Report::exit_code() const {
  if (errors_ > 0) return 3;
  if (refuted_ > 0) return 1;
  return 0;
}

ordered_json Report::to_json() const {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["version"] = kVersion;
  j["naming"] = kNamingConvention;
  j["command"] = command_;
  j["config"] = config_;
  j["summary"] = {{"holds", holds_}, {"refuted", refuted_}, {"errors", errors_}, {"exit_code", exit_code()}};
  j["checks"] = checks_;
  j["results"] = results_;
  j["timing"] = {{"seconds", seconds_}};
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << command_ << ": " << holds_ << " holds, " << refuted_ << " refuted, " << errors_ << " errors\n";
  for (const auto& c : checks_) {
    if (c["verdict"] == "holds" && c["group"] != "metric") continue;
    os << "  [" << c["verdict"].get<std::string>() << "] " << c["name"].get<std::string>();
    if (c.contains("value")) os << " = " << std::setprecision(6) << c["value"].get<double>() << " (bound " << c["bound"].get<double>() << ")";
    if (c.contains("witness")) os << " at sample " << c["witness"]["sample"].get<int>() << ", residual " << c["witness"]["residual"].get<std::string>();
    if (c.contains("diagnostic")) os << ": " << c["diagnostic"].get<std::string>();
    os << "\n";
  }
  os << "time: " << std::fixed << std::setprecision(3) << seconds_ << " s\n";
  return os.str();
}

}  // namespace cmsym
