#pragma once

#include <iosfwd>
#include <string>

#include "bouligand/landweber.hpp"

namespace bouligand {

// History CSV: `n,residual_M,rel_error,ssn_iters`, 17 significant digits;
// rel_error is `nan` when no exact source was supplied.
void write_history_csv(std::ostream& out, const RunRecord& rec);
// JSON sidecar: configuration, delta, stopping index, reason, SSN totals.
void write_summary_json(std::ostream& out, const RunRecord& rec);
void write_run_record(const RunRecord& rec, const std::string& csv_path,
                      const std::string& json_path);

// Rebuilds the histories and summary fields (no iterates).
RunRecord read_run_record(std::istream& csv, std::istream& json);
RunRecord read_run_record(const std::string& csv_path, const std::string& json_path);

// `<stem>.json` next to `<stem>.csv`.
std::string sidecar_path(const std::string& csv_path);

}  // namespace bouligand
