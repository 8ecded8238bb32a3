#include "cur/report.hpp"

#include "cur/error.hpp"

namespace cur {

using nlohmann::json;

namespace {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) v.reset();
  else v = it->get<T>();
}

}  // namespace

void to_json(json& j, const InputDescriptor& d) {
  j = json{{"path", d.path}, {"rows", d.rows}, {"cols", d.cols}, {"nnz", d.nnz}, {"sparse", d.sparse}};
}

void from_json(const json& j, InputDescriptor& d) {
  j.at("path").get_to(d.path);
  j.at("rows").get_to(d.rows);
  j.at("cols").get_to(d.cols);
  j.at("nnz").get_to(d.nnz);
  j.at("sparse").get_to(d.sparse);
}

void to_json(json& j, const CurConfig& c) {
  j = json{{"k", c.k},
           {"eps", c.eps},
           {"variant", to_string(c.variant)},
           {"fidelity", to_string(c.fidelity)},
           {"seed", c.seed},
           {"retry_budget", c.retry_budget}};
  json o = json::object();
  put_optional(o, "c1", c.c1);
  put_optional(o, "c2", c.c2);
  put_optional(o, "r1", c.r1);
  put_optional(o, "r2", c.r2);
  put_optional(o, "h1", c.h1);
  put_optional(o, "h2", c.h2);
  put_optional(o, "xi_u", c.xi_u);
  j["overrides"] = o;
}

void from_json(const json& j, CurConfig& c) {
  j.at("k").get_to(c.k);
  j.at("eps").get_to(c.eps);
  c.variant = parse_variant(j.at("variant").get<std::string>());
  c.fidelity = parse_fidelity(j.at("fidelity").get<std::string>());
  j.at("seed").get_to(c.seed);
  j.at("retry_budget").get_to(c.retry_budget);
  const json& o = j.at("overrides");
  get_optional(o, "c1", c.c1);
  get_optional(o, "c2", c.c2);
  get_optional(o, "r1", c.r1);
  get_optional(o, "r2", c.r2);
  get_optional(o, "h1", c.h1);
  get_optional(o, "h2", c.h2);
  get_optional(o, "xi_u", c.xi_u);
}

void to_json(json& j, const CurParameters& p) {
  j = json{{"c1", p.c1}, {"c2", p.c2}, {"r1", p.r1}, {"r2", p.r2}, {"h1", p.h1}, {"h2", p.h2}, {"xi_u", p.xi_u}};
}

void from_json(const json& j, CurParameters& p) {
  j.at("c1").get_to(p.c1);
  j.at("c2").get_to(p.c2);
  j.at("r1").get_to(p.r1);
  j.at("r2").get_to(p.r2);
  j.at("h1").get_to(p.h1);
  j.at("h2").get_to(p.h2);
  j.at("xi_u").get_to(p.xi_u);
}

void to_json(json& j, const Evaluation& e) {
  j = json{{"err2", e.err2}, {"opt2", e.opt2}, {"ratio", e.ratio}, {"relative_error", e.relative_error},
           {"c", e.c},       {"r", e.r},       {"rank_u", e.rank_u}, {"exact", e.exact}};
}

void from_json(const json& j, Evaluation& e) {
  j.at("err2").get_to(e.err2);
  j.at("opt2").get_to(e.opt2);
  j.at("ratio").get_to(e.ratio);
  j.at("relative_error").get_to(e.relative_error);
  j.at("c").get_to(e.c);
  j.at("r").get_to(e.r);
  j.at("rank_u").get_to(e.rank_u);
  j.at("exact").get_to(e.exact);
}

void to_json(json& j, const CurDiagnostics& d) {
  j = json{{"params", d.params},
           {"column_retries", d.column_retries},
           {"row_retries", d.row_retries},
           {"exact_svd", d.exact_svd},
           {"stage_seconds", d.stage_seconds}};
  put_optional(j, "c1_residual", d.c1_residual);
  put_optional(j, "span_residual", d.span_residual);
}

void from_json(const json& j, CurDiagnostics& d) {
  j.at("params").get_to(d.params);
  j.at("column_retries").get_to(d.column_retries);
  j.at("row_retries").get_to(d.row_retries);
  j.at("exact_svd").get_to(d.exact_svd);
  j.at("stage_seconds").get_to(d.stage_seconds);
  get_optional(j, "c1_residual", d.c1_residual);
  get_optional(j, "span_residual", d.span_residual);
}

void to_json(json& j, const TrialRecord& t) {
  j = json{{"seed", t.seed}, {"ratio", t.ratio}, {"seconds", t.seconds}};
}

void from_json(const json& j, TrialRecord& t) {
  j.at("seed").get_to(t.seed);
  j.at("ratio").get_to(t.ratio);
  j.at("seconds").get_to(t.seconds);
}

void to_json(json& j, const RunReport& r) {
  j = json{{"input", r.input},
           {"config", r.config},
           {"fidelity", to_string(r.config.fidelity)},
           {"seed", r.config.seed},
           {"trials", r.trials},
           {"best_trial", r.best_trial},
           {"best_seed", r.best_seed},
           {"evaluation", r.evaluation},
           {"diagnostics", r.diagnostics},
           {"trial_log", r.trial_log},
           {"total_seconds", r.total_seconds}};
}

void from_json(const json& j, RunReport& r) {
  j.at("input").get_to(r.input);
  j.at("config").get_to(r.config);
  j.at("trials").get_to(r.trials);
  j.at("best_trial").get_to(r.best_trial);
  j.at("best_seed").get_to(r.best_seed);
  j.at("evaluation").get_to(r.evaluation);
  j.at("diagnostics").get_to(r.diagnostics);
  j.at("trial_log").get_to(r.trial_log);
  j.at("total_seconds").get_to(r.total_seconds);
}

std::string serialize(const RunReport& r) { return json(r).dump(2) + "\n"; }

RunReport parse_report(const std::string& text) {
  try {
    return json::parse(text).get<RunReport>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what(), 1);
  }
}

}  // namespace cur
