#include "atomcov/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "atomcov/errors.hpp"

namespace atomcov {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": bad numeric field '" + s + "'");
  }
}

long parse_long(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": bad integer field '" + s + "'");
  }
}

std::vector<std::string> nonempty_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string matrix_to_csv(const CMat& a) {
  std::string out = "m," + std::to_string(a.rows()) + "\n";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (k > 0) out += ',';
      out += fmt_double(a(i, k).real());
      out += ',';
      out += fmt_double(a(i, k).imag());
    }
    out += '\n';
  }
  return out;
}

CMat matrix_from_csv(const std::string& text) {
  const auto lines = nonempty_lines(text);
  if (lines.empty()) throw ConfigError("matrix csv: empty file");
  const auto head = split(lines[0], ',');
  if (head.size() != 2 || head[0] != "m") throw ConfigError("matrix csv: malformed header");
  const long m = parse_long(head[1], "matrix csv");
  if (m < 1 || static_cast<long>(lines.size()) != m + 1)
    throw ConfigError("matrix csv: row count does not match header");
  CMat a(m, m);
  for (long i = 0; i < m; ++i) {
    const auto cells = split(lines[i + 1], ',');
    if (static_cast<long>(cells.size()) != 2 * m)
      throw ConfigError("matrix csv: wrong number of fields in row");
    for (long k = 0; k < m; ++k)
      a(i, k) = Complex(parse_double(cells[2 * k], "matrix csv"),
                        parse_double(cells[2 * k + 1], "matrix csv"));
  }
  return a;
}

std::string snapshots_to_csv(const SnapshotSet& s) {
  std::string out = "m," + std::to_string(s.dim()) + ",n," + std::to_string(s.count()) + ",seed,";
  out += s.seed.has_value() ? std::to_string(*s.seed) : std::string("external");
  out += '\n';
  for (Eigen::Index q = 0; q < s.dim(); ++q) {
    for (int part = 0; part < 2; ++part) {
      for (Eigen::Index k = 0; k < s.count(); ++k) {
        if (k > 0) out += ',';
        out += fmt_double(part == 0 ? s.data(q, k).real() : s.data(q, k).imag());
      }
      out += '\n';
    }
  }
  return out;
}

SnapshotSet snapshots_from_csv(const std::string& text) {
  const auto lines = nonempty_lines(text);
  if (lines.empty()) throw ConfigError("snapshot csv: empty file");
  const auto head = split(lines[0], ',');
  if (head.size() != 6 || head[0] != "m" || head[2] != "n" || head[4] != "seed")
    throw ConfigError("snapshot csv: malformed header");
  const long m = parse_long(head[1], "snapshot csv");
  const long n = parse_long(head[3], "snapshot csv");
  if (m < 1 || n < 1) throw ConfigError("snapshot csv: bad dimensions");
  if (static_cast<long>(lines.size()) != 2 * m + 1)
    throw ConfigError("snapshot csv: row count does not match header");
  SnapshotSet s;
  if (head[5] == "external")
    s.seed = std::nullopt;
  else
    s.seed = static_cast<std::uint64_t>(parse_long(head[5], "snapshot csv"));
  s.data.resize(m, n);
  for (long q = 0; q < m; ++q) {
    const auto re = split(lines[1 + 2 * q], ',');
    const auto im = split(lines[2 + 2 * q], ',');
    if (static_cast<long>(re.size()) != n || static_cast<long>(im.size()) != n)
      throw ConfigError("snapshot csv: wrong number of columns");
    for (long k = 0; k < n; ++k)
      s.data(q, k) = Complex(parse_double(re[k], "snapshot csv"),
                             parse_double(im[k], "snapshot csv"));
  }
  s.validate();
  return s;
}

nlohmann::json spec_to_json(const StructureSpec& spec) {
  nlohmann::json j;
  j["kind"] = spec.kind_name();
  j["m"] = spec.m;
  if (spec.kind == StructKind::kBandedToeplitz) j["b"] = spec.b;
  if (spec.kind == StructKind::kBlockToeplitz || spec.kind == StructKind::kTbt) {
    j["p"] = spec.p;
    j["l"] = spec.l;
  }
  return j;
}

StructureSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("spec: missing kind");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "kind" && key != "m" && key != "b" && key != "p" && key != "l")
      throw ConfigError("spec: unknown key '" + key + "'");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "toeplitz") return StructureSpec::toeplitz(j.at("m").get<int>());
  if (kind == "banded") return StructureSpec::banded(j.at("m").get<int>(), j.at("b").get<int>());
  if (kind == "bt" || kind == "tbt") {
    const int p = j.at("p").get<int>();
    const int l = j.at("l").get<int>();
    StructureSpec spec = kind == "bt" ? StructureSpec::block_toeplitz(p, l)
                                      : StructureSpec::tbt(p, l);
    if (j.contains("m") && j["m"].get<int>() != spec.m)
      throw ConfigError("spec: m does not equal p*l");
    return spec;
  }
  throw ConfigError("spec: unknown kind '" + kind + "'");
}

nlohmann::json fit_report_to_json(const FitReport& rep) {
  nlohmann::json j;
  j["method"] = rep.method;
  j["spec"] = spec_to_json(rep.spec);
  j["converged"] = rep.converged;
  j["exit_reason"] = rep.exit_reason;
  j["objective_trace"] = rep.objective_trace;
  j["neg_ll_trace"] = rep.neg_ll_trace;
  j["inner_iters"] = rep.inner_iters;
  if (!rep.gamma_trace.empty()) {
    j["gamma_trace"] = rep.gamma_trace;
    j["gamma_log"] = rep.gamma_log;
  }
  j["stationarity_residual"] = rep.stationarity_residual;
  j["pd_repairs"] = rep.pd_repairs;
  j["wall_time_s"] = rep.wall_time_s;
  j["warnings"] = rep.warnings;
  if (!rep.neg_ll_trace.empty()) j["final_neg_ll"] = rep.neg_ll_trace.back();
  return j;
}

nlohmann::json bench_to_json(const BenchResult& b) {
  nlohmann::json j;
  j["methods"] = b.methods;
  j["n_grid"] = b.n_grid;
  j["mse"] = b.mse;
  j["avg_time_s"] = b.avg_time;
  j["failures"] = b.failures;
  j["crb"] = b.crb;
  j["trials"] = b.trials;
  j["seed"] = b.seed;
  return j;
}

std::string bench_to_csv(const BenchResult& b) {
  std::string out = "n,crb";
  for (const auto& mth : b.methods) out += ",mse_" + mth + ",time_" + mth + ",failures_" + mth;
  out += '\n';
  for (size_t ni = 0; ni < b.n_grid.size(); ++ni) {
    out += std::to_string(b.n_grid[ni]) + ',' + fmt_double(b.crb[ni]);
    for (size_t mi = 0; mi < b.methods.size(); ++mi) {
      out += ',' + fmt_double(b.mse[mi][ni]);
      out += ',' + fmt_double(b.avg_time[mi][ni]);
      out += ',' + std::to_string(b.failures[mi][ni]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json sinr_to_json(const SinrResult& s) {
  nlohmann::json j;
  j["theta_deg"] = s.theta_deg;
  j["methods"] = s.methods;
  j["sinr"] = s.sinr;
  j["sinr_opt"] = s.sinr_opt;
  j["warnings"] = s.warnings;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  return j;
}

std::string sinr_to_csv(const SinrResult& s) {
  std::string out = "theta_deg,sinr_opt";
  for (const auto& mth : s.methods) out += ",sinr_" + mth;
  out += '\n';
  for (size_t i = 0; i < s.theta_deg.size(); ++i) {
    out += fmt_double(s.theta_deg[i]) + ',' + fmt_double(s.sinr_opt[i]);
    for (size_t mi = 0; mi < s.methods.size(); ++mi) out += ',' + fmt_double(s.sinr[mi][i]);
    out += '\n';
  }
  return out;
}

std::string proj_trace_to_csv(const std::vector<ProjTraceRow>& rows) {
  std::string out = "k,delta,lambda_min\n";
  for (const auto& row : rows)
    out += std::to_string(row.k) + ',' + fmt_double(row.delta) + ',' +
           fmt_double(row.lambda_min) + '\n';
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open file for writing: " + tmp);
    out << content;
    if (!out.good()) throw ConfigError("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace atomcov
