#ifndef ATOMCOV_IO_HPP
#define ATOMCOV_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "atomcov/atom.hpp"
#include "atomcov/crb.hpp"
#include "atomcov/dykproj.hpp"
#include "atomcov/hermmat.hpp"
#include "atomcov/simkit.hpp"
#include "atomcov/structsets.hpp"

namespace atomcov {

// Matrix CSV: header "m,<dim>", then one line per matrix row with re,im
// pairs left to right.
std::string matrix_to_csv(const CMat& a);
CMat matrix_from_csv(const std::string& text);

// Snapshot CSV: header "m,<dim>,n,<count>,seed,<seed or external>", then
// interleaved re/im rows (2m lines), one snapshot per column.
std::string snapshots_to_csv(const SnapshotSet& s);
SnapshotSet snapshots_from_csv(const std::string& text);

nlohmann::json spec_to_json(const StructureSpec& spec);
StructureSpec spec_from_json(const nlohmann::json& j);

nlohmann::json fit_report_to_json(const FitReport& rep);

nlohmann::json bench_to_json(const BenchResult& b);
std::string bench_to_csv(const BenchResult& b);

nlohmann::json sinr_to_json(const SinrResult& s);
std::string sinr_to_csv(const SinrResult& s);

std::string proj_trace_to_csv(const std::vector<ProjTraceRow>& rows);

// Filesystem helpers; writes go through a temp file + rename.
std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace atomcov

#endif
