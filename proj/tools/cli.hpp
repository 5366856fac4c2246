#pragma once

#include <algorithm>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qes/qes.hpp"

namespace qes::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kEmpty = 3 };

inline void report_error(std::ostream& err, std::string_view code, const std::string& message) {
  nlohmann::ordered_json j;
  j["code"] = code;
  j["message"] = message;
  err << j.dump() << '\n';
}

// Decimal or simple rational ("1/4").
inline double parse_real(const std::string& text, const char* flag) {
  try {
    if (text.find('/') != std::string::npos) return Rational::parse(text).value();
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, std::string("bad number for ") + flag + ": '" + text + "'");
}

struct CommonArgs {
  std::string model;
  std::string sector;
  std::string omega = "1";

  ModelSpec spec(double g) const {
    ModelSpec s;
    s.kind = parse_model_kind(model);
    if (!sector.empty()) s.sector = Rational::parse(sector);
    s.omega = parse_real(omega, "--omega");
    s.g = g;
    return s;
  }
};

inline void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--model", a.model, "rabi | two-photon | two-mode")
      ->required()
      ->check(CLI::IsMember({"rabi", "two-photon", "two-mode"}));
  cmd->add_option("--sector", a.sector, "Bargmann index q or kappa, e.g. 1/4");
  cmd->add_option("--omega", a.omega, "field frequency (default 1)");
}

struct OutputArgs {
  std::string format = "csv";
  bool include_rejected = false;
  bool include_degenerate = false;
  bool verify = false;
  int n_max = 0;
  std::string tol = "1e-8";
};

inline void add_output(CLI::App* cmd, OutputArgs& o) {
  cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--include-rejected", o.include_rejected, "also emit candidates that failed a check");
  cmd->add_flag("--include-degenerate", o.include_degenerate, "also emit Delta = 0 solutions");
  cmd->add_flag("--verify", o.verify, "match each energy against the truncated Fock oracle");
  cmd->add_option("--nmax", o.n_max, "oracle truncation (default 64 rabi, 256 otherwise)");
  cmd->add_option("--tol", o.tol, "oracle match tolerance");
}

inline std::string rows_csv(const std::vector<SweepRow>& rows) {
  std::string s(kSweepCsvHeader);
  s += '\n';
  for (const SweepRow& r : rows) s += csv_row(r.record, r.oracle) + '\n';
  return s;
}

inline nlohmann::ordered_json rows_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRow& r : rows) {
    nlohmann::ordered_json j = to_json(r.record);
    if (r.oracle) j["oracle"] = to_json(*r.oracle);
    arr.push_back(std::move(j));
  }
  return arr;
}

inline bool any_nontrivial(const std::vector<SweepRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), is_nontrivial);
}

/// Runs one CLI invocation; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-exact (Juddian) spectrum of the Rabi, 2-photon and two-mode Rabi models", "qes-rabi"};
  app.require_subcommand(1);

  CommonArgs common;
  OutputArgs output;
  int degree = 0;
  std::string g_text;
  std::string g_range;
  std::string delta_text;
  int levels = 10;
  int branch = -1;
  std::string z_range = "-3:3:61";

  CLI::App* solve = app.add_subcommand("solve", "quasi-exact solutions at one coupling");
  add_common(solve, common);
  add_output(solve, output);
  solve->add_option("--degree", degree, "polynomial degree")->required();
  solve->add_option("--g", g_text, "coupling")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "trace Juddian points over a coupling grid");
  add_common(sweep, common);
  add_output(sweep, output);
  sweep->add_option("--degree", degree, "polynomial degree")->required();
  sweep->add_option("--g-range", g_range, "a:b:steps")->required();

  CLI::App* spec_cmd = app.add_subcommand("spectrum", "lowest truncated-Fock eigenvalues over a coupling grid");
  add_common(spec_cmd, common);
  spec_cmd->add_option("--delta", delta_text, "half level splitting")->required();
  spec_cmd->add_option("--g-range", g_range, "a:b:steps")->required();
  spec_cmd->add_option("--nmax", output.n_max, "truncation (default 64 rabi, 256 otherwise)");
  spec_cmd->add_option("--levels", levels, "number of levels per coupling");

  CLI::App* wave = app.add_subcommand("wavefunction", "sample psi_+ and psi_- on the real axis");
  add_common(wave, common);
  wave->add_option("--degree", degree, "polynomial degree")->required();
  wave->add_option("--g", g_text, "coupling")->required();
  wave->add_option("--branch", branch, "index into the solutions sorted by Delta^2 (default: first nontrivial)");
  wave->add_option("--z-range", z_range, "a:b:steps sample grid");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "InvalidArgument", e.what());
    return kInputError;
  }

  try {
    const RecordFilter filter{output.include_rejected, output.include_degenerate};
    const VerifyOptions verify{output.verify, output.n_max, parse_real(output.tol, "--tol")};
    if (degree < 1 && !spec_cmd->parsed()) throw Error(ErrorCode::InvalidArgument, "--degree must be >= 1");

    if (solve->parsed()) {
      const ModelSpec spec = common.spec(parse_real(g_text, "--g"));
      validate(spec);
      const std::vector<SweepRow> rows = point_rows(spec, degree, filter, verify);
      if (output.format == "json") {
        nlohmann::ordered_json j;
        j["command"] = "solve";
        j["model"] = common.model;
        j["sector"] = spec.sector_string();
        j["degree"] = degree;
        j["omega"] = spec.omega;
        j["g"] = spec.g;
        j["records"] = rows_json(rows);
        out << j.dump(2) << '\n';
      } else {
        out << rows_csv(rows);
      }
      return any_nontrivial(rows) ? kOk : kEmpty;
    }

    if (sweep->parsed()) {
      const GridSpec grid = GridSpec::parse(g_range);
      const ModelSpec base = common.spec(grid.min);
      const SweepResult res = run_sweep(base, degree, grid, filter, verify);
      if (output.format == "json") {
        nlohmann::ordered_json j;
        j["command"] = "sweep";
        j["model"] = common.model;
        j["sector"] = base.sector_string();
        j["degree"] = degree;
        j["omega"] = base.omega;
        j["grid"] = {{"g_min", grid.min}, {"g_max", grid.max}, {"steps", grid.steps}};
        j["verify"] = output.verify;
        j["records"] = rows_json(res.rows);
        out << j.dump(2) << '\n';
      } else {
        out << rows_csv(res.rows);
      }
      return any_nontrivial(res.rows) ? kOk : kEmpty;
    }

    if (spec_cmd->parsed()) {
      const GridSpec grid = GridSpec::parse(g_range);
      ModelSpec base = common.spec(grid.min);
      base.delta = parse_real(delta_text, "--delta");
      const int n_max = output.n_max > 0 ? output.n_max : default_nmax(base.kind);
      if (levels < 1) throw Error(ErrorCode::InvalidArgument, "--levels must be >= 1");
      const std::vector<double> gs = grid.points();
      for (double g : gs) {
        ModelSpec s = base;
        s.g = g;
        validate(s, CouplingPolicy::AllowZero);
      }
      const int dim = 2 * (n_max + 1);
      if (levels > dim) {
        err << "warning: --levels " << levels << " exceeds dimension " << dim << "; clamped\n";
        levels = dim;
      }
      std::vector<std::vector<double>> spectra(gs.size());
      parallel_for(gs.size(), worker_count(), [&](std::size_t i) {
        ModelSpec s = base;
        s.g = gs[i];
        spectra[i] = parity_spectrum(s, n_max);
      });
      std::string text(kSpectrumCsvHeader);
      text += '\n';
      for (std::size_t i = 0; i < gs.size(); ++i)
        for (int l = 0; l < levels; ++l)
          text += format_number(gs[i]) + ',' + std::to_string(l) + ',' + format_number(spectra[i][l]) + '\n';
      out << text;
      return kOk;
    }

    if (wave->parsed()) {
      const ModelSpec spec = common.spec(parse_real(g_text, "--g"));
      const GridSpec grid = GridSpec::parse(z_range);
      std::vector<QesSolution> sols;
      try {
        sols = solve_qes(spec, degree);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoPhysicalSolution && e.code() != ErrorCode::IllConditioned) throw;
        report_error(err, to_string(e.code()), e.what());
        return kEmpty;
      }
      if (branch < 0) {
        const auto it = std::find_if(sols.begin(), sols.end(),
                                     [](const QesSolution& s) { return s.branch == Branch::Nontrivial; });
        if (it == sols.end()) {
          report_error(err, "NoPhysicalSolution", "no nontrivial branch at this coupling and degree");
          return kEmpty;
        }
        branch = static_cast<int>(it - sols.begin());
      }
      if (branch >= static_cast<int>(sols.size())) {
        report_error(err, "BranchOutOfRange",
                     "branch " + std::to_string(branch) + " requested, " + std::to_string(sols.size()) + " available");
        return kEmpty;
      }
      const QesSolution& s = sols[branch];
      const bool has_minus = s.branch == Branch::Nontrivial;
      if (!has_minus) err << "warning: degenerate-atom branch; psi_minus is undefined and omitted\n";
      const BargmannWavefunction wf = has_minus ? second_component(s) : plus_component(s);
      const std::vector<double> zs = grid.points();
      const Eigen::MatrixXcd psi = wavefunction_eval(wf, zs);
      std::string text(has_minus ? kWavefunctionCsvHeader : kWavefunctionPlusCsvHeader);
      text += '\n';
      for (std::size_t i = 0; i < zs.size(); ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        text += format_number(zs[i]) + ',' + format_number(psi(0, c).real()) + ',' + format_number(psi(0, c).imag());
        if (has_minus) text += ',' + format_number(psi(1, c).real()) + ',' + format_number(psi(1, c).imag());
        text += '\n';
      }
      out << text;
      return kOk;
    }
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what());
    return kInputError;
  }
  return kInputError;
}

}  // namespace qes::cli
