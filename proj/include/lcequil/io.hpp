#pragma once

#include <string>

#include "json.hpp"

#include "lcequil/driver.hpp"

namespace lc {

using Json = nlohmann::ordered_json;

/// Delimited text, header `x,y,n1,n2,n3,phi,lambda_cell`, one row per Q2 node
/// in lexicographic (x, y) order, 17 significant digits. The phi column is
/// empty when the state has no potential; lambda is the value of the cell
/// containing the node (ties resolved toward the higher cell index).
void export_solution(const State& state, const std::string& path);

/// Rebuild a state from an exported file; the mesh level is inferred from the
/// row count.
State import_solution(const std::string& path, const Problem& problem);

Json report_to_json(const RunReport& report, const ExperimentPreset& preset,
                    const RunOptions& opts);
void write_report(const RunReport& report, const ExperimentPreset& preset,
                  const RunOptions& opts, const std::string& path);

} // namespace lc
