#include "bouligand/record_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bouligand/error.hpp"

namespace bouligand {

using nlohmann::json;

namespace {

json config_to_json(const LandweberConfig& c) {
  json j{{"mu", c.mu},
         {"tau", c.tau},
         {"rho", c.rho},
         {"lbar", c.lbar},
         {"step_mode", c.step_mode == StepMode::Constant ? "constant" : "schedule"},
         {"lambda", c.lower_step()},
         {"Lambda", c.upper_step()},
         {"max_iterations", c.max_iterations},
         {"delta", c.delta},
         {"warm_start", c.warm_start}};
  if (c.step_mode == StepMode::Schedule) j["schedule"] = c.schedule;
  else j["step"] = c.constant_step();
  return j;
}

LandweberConfig config_from_json(const json& j) {
  LandweberConfig c;
  c.mu = j.at("mu").get<double>();
  c.tau = j.at("tau").get<double>();
  c.rho = j.at("rho").get<double>();
  c.lbar = j.at("lbar").get<double>();
  c.max_iterations = j.at("max_iterations").get<int>();
  c.delta = j.at("delta").get<double>();
  c.warm_start = j.value("warm_start", false);
  if (j.value("step_mode", "constant") == "schedule") {
    c.step_mode = StepMode::Schedule;
    c.schedule = j.at("schedule").get<std::vector<double>>();
  }
  c.lambda = j.at("lambda").get<double>();
  c.Lambda = j.at("Lambda").get<double>();
  return c;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(ErrorCode::Io, "malformed number '" + s + "'");
  return v;
}

}  // namespace

void write_history_csv(std::ostream& out, const RunRecord& rec) {
  out << "n,residual_M,rel_error,ssn_iters\n" << std::setprecision(17);
  for (std::size_t n = 0; n < rec.residual.size(); ++n) {
    out << n << ',' << rec.residual[n] << ',';
    if (n < rec.rel_error.size()) out << rec.rel_error[n];
    else out << "nan";
    out << ',' << rec.ssn_iterations[n] << '\n';
  }
}

void write_summary_json(std::ostream& out, const RunRecord& rec) {
  json j{{"config", config_to_json(rec.config)},
         {"delta", rec.delta},
         {"tau", rec.tau},
         {"threshold", rec.tau * rec.delta},
         {"stopping_index", rec.stopping_index},
         {"reason", to_string(rec.reason)},
         {"total_ssn", rec.total_ssn()},
         {"mean_ssn_per_step", rec.mean_ssn_per_step()},
         {"parameter_check",
          {{"choice", rec.parameters.choice},
           {"choice_aux", rec.parameters.choice_aux},
           {"choice_satisfied", rec.parameters.choice_satisfied},
           {"choice_aux_satisfied", rec.parameters.choice_aux_satisfied}}}};
  if (!rec.failure_message.empty()) j["failure_message"] = rec.failure_message;
  if (!rec.rel_error.empty()) j["final_rel_error"] = rec.rel_error.back();
  out << j.dump(2) << '\n';
}

std::string sidecar_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return csv_path + ".json";
  return csv_path.substr(0, dot) + ".json";
}

void write_run_record(const RunRecord& rec, const std::string& csv_path,
                      const std::string& json_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw Error(ErrorCode::Io, "cannot open '" + csv_path + "' for writing");
  write_history_csv(csv, rec);
  std::ofstream js(json_path);
  if (!js) throw Error(ErrorCode::Io, "cannot open '" + json_path + "' for writing");
  write_summary_json(js, rec);
  if (!csv || !js) throw Error(ErrorCode::Io, "failed writing run record");
}

RunRecord read_run_record(std::istream& csv, std::istream& js) {
  RunRecord rec;
  std::string line;
  if (!std::getline(csv, line) || line.rfind("n,residual_M,rel_error,ssn_iters", 0) != 0)
    throw Error(ErrorCode::Io, "run history CSV lacks its header");
  bool any_error = false;
  std::vector<double> errors;
  while (std::getline(csv, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string n, res, err, ssn;
    if (!std::getline(ls, n, ',') || !std::getline(ls, res, ',') || !std::getline(ls, err, ',') ||
        !std::getline(ls, ssn))
      throw Error(ErrorCode::Io, "malformed history row '" + line + "'");
    if (std::stoul(n) != rec.residual.size())
      throw Error(ErrorCode::Io, "history rows are out of order at '" + line + "'");
    rec.residual.push_back(parse_double(res));
    const double e = parse_double(err);
    any_error = any_error || !std::isnan(e);
    errors.push_back(e);
    rec.ssn_iterations.push_back(std::stoi(ssn));
  }
  if (any_error) rec.rel_error = std::move(errors);

  json j;
  try {
    j = json::parse(js);
    rec.config = config_from_json(j.at("config"));
    rec.delta = j.at("delta").get<double>();
    rec.tau = j.at("tau").get<double>();
    rec.stopping_index = j.at("stopping_index").get<int>();
    rec.reason = termination_from_string(j.at("reason").get<std::string>());
    rec.failure_message = j.value("failure_message", "");
    const auto& pc = j.at("parameter_check");
    rec.parameters.choice = pc.at("choice").get<double>();
    rec.parameters.choice_aux = pc.at("choice_aux").get<double>();
    rec.parameters.choice_satisfied = pc.at("choice_satisfied").get<bool>();
    rec.parameters.choice_aux_satisfied = pc.at("choice_aux_satisfied").get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed run summary: ") + e.what());
  }
  return rec;
}

RunRecord read_run_record(const std::string& csv_path, const std::string& json_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw Error(ErrorCode::Io, "cannot open '" + csv_path + "'");
  std::ifstream js(json_path);
  if (!js) throw Error(ErrorCode::Io, "cannot open '" + json_path + "'");
  return read_run_record(csv, js);
}

}  // namespace bouligand
