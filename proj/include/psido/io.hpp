#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "psido/calculus.hpp"
#include "psido/config.hpp"
#include "psido/grid.hpp"
#include "psido/multipliers.hpp"
#include "psido/quantize.hpp"
#include "psido/sobolev.hpp"
#include "psido/spectral.hpp"

namespace psido {

using ordered_json = nlohmann::ordered_json;

// 17 significant decimal digits: enough to reproduce any double exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

inline void write_json_file(const ordered_json& j, const std::string& path) {
  write_text(path, j.dump(2) + "\n");
}

inline ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return ordered_json::parse(in);
}

// ---------------------------------------------------------------------------
// Sampled functions: CSV plus JSON sidecar.
//
// <stem>.csv columns: t0..t{n-1}, x0..x{n-1}, re0, im0, ... (one pair per
// component); <stem>.json sidecar {T, M, n, nu, kind}. Spectra use xi columns.

inline void write_gfunction_csv(const GFunction& f, const std::string& stem) {
  const TGrid& g = *f.grid;
  std::string csv;
  for (int a = 0; a < g.n; ++a) csv += "t" + std::to_string(a) + ",";
  for (int a = 0; a < g.n; ++a) csv += "x" + std::to_string(a) + ",";
  for (int c = 0; c < f.nu(); ++c)
    csv += "re" + std::to_string(c) + ",im" + std::to_string(c) + (c + 1 < f.nu() ? "," : "");
  csv += "\n";
  for (long j = 0; j < g.total(); ++j) {
    Eigen::VectorXd t = g.t_node(j), x = g.x_node(j);
    for (int a = 0; a < g.n; ++a) csv += fmt17(t[a]) + ",";
    for (int a = 0; a < g.n; ++a) csv += fmt17(x[a]) + ",";
    for (int c = 0; c < f.nu(); ++c) {
      csv += fmt17(f.values(j, c).real()) + "," + fmt17(f.values(j, c).imag());
      if (c + 1 < f.nu()) csv += ",";
    }
    csv += "\n";
  }
  write_text(stem + ".csv", csv);
  ordered_json side;
  side["T"] = g.T;
  side["M"] = g.M;
  side["n"] = g.n;
  side["nu"] = f.nu();
  side["kind"] = "gfunction";
  side["ledger"] = kLedgerVersion;
  write_json_file(side, stem + ".json");
}

inline void write_spectrum_csv(const Spectrum& s, const std::string& stem) {
  const TGrid& g = *s.grid;
  std::string csv;
  for (int a = 0; a < g.n; ++a) csv += "xi" + std::to_string(a) + ",";
  for (int c = 0; c < s.nu(); ++c)
    csv += "re" + std::to_string(c) + ",im" + std::to_string(c) + (c + 1 < s.nu() ? "," : "");
  csv += "\n";
  for (long k = 0; k < g.total(); ++k) {
    Eigen::VectorXd xi = g.xi_node(k);
    for (int a = 0; a < g.n; ++a) csv += fmt17(xi[a]) + ",";
    for (int c = 0; c < s.nu(); ++c) {
      csv += fmt17(s.values(k, c).real()) + "," + fmt17(s.values(k, c).imag());
      if (c + 1 < s.nu()) csv += ",";
    }
    csv += "\n";
  }
  write_text(stem + ".csv", csv);
  ordered_json side;
  side["T"] = g.T;
  side["M"] = g.M;
  side["n"] = g.n;
  side["nu"] = s.nu();
  side["kind"] = "spectrum";
  side["ledger"] = kLedgerVersion;
  write_json_file(side, stem + ".json");
}

// Reads values back through the sidecar; the grid is rebuilt, the sampled
// columns are reparsed (decimal round trip, not bit-for-bit by contract).
inline GFunction read_gfunction_csv(const std::string& stem) {
  ordered_json side = read_json_file(stem + ".json");
  if (side.at("kind").get<std::string>() != "gfunction")
    throw std::runtime_error("read_gfunction_csv: sidecar kind mismatch");
  GridPtr g = make_grid(side.at("T").get<double>(), side.at("M").get<int>(),
                        side.at("n").get<int>());
  int nu = side.at("nu").get<int>();
  GFunction f{g, Eigen::MatrixXcd::Zero(g->total(), nu)};
  std::ifstream in(stem + ".csv");
  if (!in) throw std::runtime_error("cannot open for reading: " + stem + ".csv");
  std::string line;
  std::getline(in, line);  // header
  for (long j = 0; j < g->total(); ++j) {
    if (!std::getline(in, line)) throw std::runtime_error("read_gfunction_csv: short file");
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    if (static_cast<int>(cells.size()) != 2 * g->n + 2 * nu)
      throw std::runtime_error("read_gfunction_csv: column count mismatch");
    for (int c = 0; c < nu; ++c)
      f.values(j, c) = cd(cells[2 * g->n + 2 * c], cells[2 * g->n + 2 * c + 1]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Operator matrices: raw column-major complex128 plus JSON sidecar.

inline void write_operator_bin(const OperatorMatrix& op, const std::string& stem,
                               const std::string& symbol_name) {
  std::ofstream out(stem + ".bin", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + stem + ".bin");
  static_assert(sizeof(cd) == 16);
  out.write(reinterpret_cast<const char*>(op.A.data()),
            static_cast<std::streamsize>(sizeof(cd) * op.A.size()));
  ordered_json side;
  side["M"] = op.grid->M;
  side["n"] = op.grid->n;
  side["nu"] = op.nu;
  side["T"] = op.grid->T;
  side["symbol"] = symbol_name;
  side["ledger"] = kLedgerVersion;
  write_json_file(side, stem + ".json");
}

inline OperatorMatrix read_operator_bin(const std::string& stem) {
  ordered_json side = read_json_file(stem + ".json");
  GridPtr g = make_grid(side.at("T").get<double>(), side.at("M").get<int>(),
                        side.at("n").get<int>());
  int nu = side.at("nu").get<int>();
  long dim = g->total() * nu;
  OperatorMatrix op{g, nu, Eigen::MatrixXcd::Zero(dim, dim)};
  std::ifstream in(stem + ".bin", std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + stem + ".bin");
  in.read(reinterpret_cast<char*>(op.A.data()),
          static_cast<std::streamsize>(sizeof(cd) * op.A.size()));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(cd) * op.A.size()))
    throw std::runtime_error("read_operator_bin: short file");
  return op;
}

// ---------------------------------------------------------------------------
// Plot curves: one CSV, first column the abscissa, one column per curve.

inline void write_curves_csv(const std::string& path, const std::string& x_name,
                             const std::vector<double>& x,
                             const std::vector<std::pair<std::string, std::vector<double>>>& curves) {
  std::string csv = x_name;
  for (const auto& c : curves) csv += "," + c.first;
  csv += "\n";
  for (size_t i = 0; i < x.size(); ++i) {
    csv += fmt17(x[i]);
    for (const auto& c : curves)
      csv += "," + (i < c.second.size() ? fmt17(c.second[i]) : std::string());
    csv += "\n";
  }
  write_text(path, csv);
}

// ---------------------------------------------------------------------------
// Report serialization. Every numeric report carries the convention-ledger
// version string.

inline ordered_json probe_report_to_json(const ProbeReport& r) {
  ordered_json j;
  j["ledger"] = kLedgerVersion;
  j["probe"] = r.probe;
  ordered_json sched = ordered_json::array();
  for (const GridSched& s : r.schedule) sched.push_back({{"T", s.T}, {"M", s.M}});
  j["schedule"] = sched;
  ordered_json meas;
  for (const auto& kv : r.measured) meas[kv.first] = kv.second;
  j["measured"] = meas;
  j["verdict"] = r.verdict;
  j["tolerance"] = r.tolerance;
  j["note"] = r.note;
  return j;
}

inline ordered_json index_report_to_json(const IndexReport& r) {
  ordered_json j;
  j["ledger"] = kLedgerVersion;
  j["winding"] = r.winding;
  j["index"] = r.index;
  j["residual"] = r.residual;
  j["contour"] = {{"t0", r.contour.t0}, {"xi0", r.contour.xi0}, {"radius", r.contour.radius}};
  j["samples"] = r.samples;
  j["min_det"] = r.min_det;
  return j;
}

inline ordered_json kernel_report_to_json(const KernelReport& r) {
  ordered_json j;
  j["ledger"] = kLedgerVersion;
  j["k_plus"] = r.k_plus;
  j["k_minus"] = r.k_minus;
  j["conclusive"] = r.conclusive;
  j["gap"] = std::isfinite(r.gap) ? ordered_json(r.gap) : ordered_json("inf");
  j["sigma_max"] = r.sigma_max;
  j["tiny"] = r.tiny;
  j["spurious"] = r.spurious;
  return j;
}

inline ordered_json residual_fit_to_json(const ResidualFit& r) {
  ordered_json j;
  j["ledger"] = kLedgerVersion;
  j["xi0"] = r.xi0;
  j["norms"] = r.norms;
  j["slope"] = r.sentinel ? ordered_json("-inf") : ordered_json(r.slope);
  j["sentinel"] = r.sentinel;
  j["bound"] = r.bound;
  j["within_contract"] = r.within_contract;
  return j;
}

inline ordered_json fredholm_to_json(const FredholmVerdict& v) {
  ordered_json j;
  j["ledger"] = kLedgerVersion;
  j["elliptic"] = v.elliptic;
  j["inf_modulus"] = v.inf_modulus;
  if (v.inverse) j["inverse"] = pc_to_json(*v.inverse);
  j["note"] = v.note;
  return j;
}

inline ordered_json condb_report_to_json(const CondBReport& r) {
  ordered_json j;
  j["ledger"] = kLedgerVersion;
  j["finite"] = r.finite;
  j["total"] = r.total;
  ordered_json terms = ordered_json::array();
  for (const CondBTerm& t : r.terms) {
    ordered_json tj;
    tj["kappa"] = t.kappa;
    tj["gamma"] = t.gamma;
    tj["k"] = t.k;
    tj["value"] = t.value;
    tj["finite"] = t.finite;
    tj["windows"] = t.window_values;
    terms.push_back(tj);
  }
  j["terms"] = terms;
  j["note"] = r.note;
  return j;
}

inline ordered_json norm_equiv_to_json(const NormEquivReport& r) {
  ordered_json j;
  j["ledger"] = kLedgerVersion;
  j["m"] = r.m;
  j["ratio_min"] = r.ratio_min;
  j["ratio_max"] = r.ratio_max;
  j["used"] = r.used;
  j["skipped"] = r.skipped;
  j["bracket_ok"] = r.bracket_ok;
  j["stable"] = r.stable;
  j["pass"] = r.pass;
  j["note"] = r.note;
  return j;
}

}  // namespace psido
