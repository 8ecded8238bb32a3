#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cur/cur.hpp"

namespace cur {

struct InputDescriptor {
  std::string path;
  Index rows = 0;
  Index cols = 0;
  Index nnz = 0;
  bool sparse = false;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double ratio = 0.0;
  double seconds = 0.0;
};

struct RunReport {
  InputDescriptor input;
  CurConfig config;
  int trials = 1;
  int best_trial = 0;
  std::uint64_t best_seed = 0;
  Evaluation evaluation;
  CurDiagnostics diagnostics;
  std::vector<TrialRecord> trial_log;
  double total_seconds = 0.0;
};

void to_json(nlohmann::json& j, const InputDescriptor& d);
void from_json(const nlohmann::json& j, InputDescriptor& d);
void to_json(nlohmann::json& j, const CurConfig& c);
void from_json(const nlohmann::json& j, CurConfig& c);
void to_json(nlohmann::json& j, const CurParameters& p);
void from_json(const nlohmann::json& j, CurParameters& p);
void to_json(nlohmann::json& j, const Evaluation& e);
void from_json(const nlohmann::json& j, Evaluation& e);
void to_json(nlohmann::json& j, const CurDiagnostics& d);
void from_json(const nlohmann::json& j, CurDiagnostics& d);
void to_json(nlohmann::json& j, const TrialRecord& t);
void from_json(const nlohmann::json& j, TrialRecord& t);
void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

std::string serialize(const RunReport& r);
RunReport parse_report(const std::string& text);

}  // namespace cur
