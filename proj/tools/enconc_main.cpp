// Command-line front end: single runs, parameter sweeps, displacement
// optimization and a built-in self-check suite.  Exit codes: 0 ok,
// 1 validation failure, 2 parameter guard, 3 I/O.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "enconc/measures.hpp"
#include "enconc/optimize.hpp"
#include "enconc/protocols.hpp"

using nlohmann::ordered_json;
using namespace enconc;

namespace {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  double lambda = 0.1;
  double reflectance = 0.1;
  double eta = 1.0;
  double nu = 0.0;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> squeezing;
  int cutoff = 10;
  std::vector<std::string> grid;
  bool optimize_alpha = false;
  std::string output;
  std::string format;  // per-subcommand default filled in later
  std::string config;
  std::string command_line;  // reconstructed argv, for the metadata sidecar
};

// shortest round-trip decimal form, locale independent
std::string num_str(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open output file: " + path);
  f << text;
  f.flush();
  if (!f) throw io_error("write failed: " + path);
}

/// Emit one payload: stdout without --output, else the file plus a metadata
/// sidecar (<output>.meta.json).  Data files carry no timestamps or host
/// details, so identical configurations produce identical bytes.
void emit(const Opts& o, const std::string& text, const std::vector<std::string>& columns,
          std::size_t rows) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  write_file(o.output, text);
  ordered_json meta;
  meta["command"] = o.command_line;
  meta["format"] = o.format;
  meta["columns"] = columns;
  meta["rows"] = rows;
  write_file(o.output + ".meta.json", meta.dump(2) + "\n");
}

LocalOp make_local_op(const Opts& o) {
  const bool displaced = o.alpha.has_value() || o.beta.has_value();
  if (displaced && o.squeezing.has_value())
    throw guard_error("choose either displacement (--alpha/--beta) or squeezing (--squeezing)");
  if (o.squeezing.has_value()) return LocalOp::squeezed(*o.squeezing);
  if (displaced) {
    // a lone --alpha implies the antisymmetric choice beta = -alpha (and vice
    // versa), which is the interesting regime throughout
    const double a = o.alpha ? *o.alpha : -*o.beta;
    const double b = o.beta ? *o.beta : -*o.alpha;
    return LocalOp::displaced(cplx(a, 0.0), cplx(b, 0.0));
  }
  return LocalOp::off();
}

ProtocolParams to_params(const Opts& o) {
  ProtocolParams p;
  p.lambda = o.lambda;
  p.reflectance = o.reflectance;
  p.eta = o.eta;
  p.nu = o.nu;
  p.cutoff = o.cutoff;
  p.local_op = make_local_op(o);
  return p;
}

ordered_json local_op_json(const LocalOp& op) {
  ordered_json j;
  switch (op.kind) {
    case LocalOp::Kind::none:
      j["kind"] = "none";
      break;
    case LocalOp::Kind::displacement:
      j["kind"] = "displacement";
      j["alpha"] = op.alpha.real();
      j["beta"] = op.beta.real();
      break;
    case LocalOp::Kind::squeezing:
      j["kind"] = "squeezing";
      j["squeezing"] = op.s;
      break;
  }
  return j;
}

std::string to_csv(const std::vector<std::string>& columns,
                   const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(columns[i]);
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  }
  return out;
}

// --- subcommands ------------------------------------------------------------

int cmd_run(Opts& o) {
  if (o.format.empty()) o.format = "json";
  const ProtocolParams p = to_params(o);
  const ConcentrationOutcome out = run_realistic(p);
  const EntanglementReport rep = log_negativity(out.rho_normalized);
  const double min_rho_ev = hermitian_eigenvalues(out.rho_normalized.m)(0);
  const double deficit = tmsv_pure(p.lambda, p.cutoff).norm_deficit;

  ordered_json j;
  j["lambda"] = p.lambda;
  j["reflectance"] = p.reflectance;
  j["eta"] = p.eta;
  j["nu"] = p.nu;
  j["local_op"] = local_op_json(p.local_op);
  j["cutoff"] = p.cutoff;
  j["e_n"] = rep.log_negativity;
  j["p_succ"] = out.success_probability;
  j["trace_norm_pt"] = rep.trace_norm_pt;
  j["min_pt_eigenvalue"] = rep.min_pt_eigenvalue;
  j["min_rho_eigenvalue"] = min_rho_ev;
  j["norm_deficit"] = deficit;

  std::vector<std::string> columns;
  std::string text;
  if (o.format == "json") {
    for (auto& [k, v] : j.items()) columns.push_back(k);
    text = j.dump(2) + "\n";
  } else {
    std::vector<std::string> row;
    for (auto& [k, v] : j.items()) {
      if (k == "local_op") {
        columns.insert(columns.end(), {"kind", "alpha", "beta", "squeezing"});
        row.push_back(v["kind"].get<std::string>());
        row.push_back(v.contains("alpha") ? num_str(v["alpha"].get<double>()) : "");
        row.push_back(v.contains("beta") ? num_str(v["beta"].get<double>()) : "");
        row.push_back(v.contains("squeezing") ? num_str(v["squeezing"].get<double>()) : "");
      } else {
        columns.push_back(k);
        row.push_back(v.is_number_integer() ? std::to_string(v.get<int>())
                                            : num_str(v.get<double>()));
      }
    }
    text = to_csv(columns, {row});
  }
  emit(o, text, columns, 1);
  return 0;
}

SweepGrid parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4 || parts[0].empty())
    throw guard_error("--grid expects name:start:stop:step, got '" + spec + "'");
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw guard_error("--grid: '" + s + "' is not a number in '" + spec + "'");
    }
  };
  return {parts[0], to_double(parts[1]), to_double(parts[2]), to_double(parts[3])};
}

int cmd_sweep(Opts& o) {
  if (o.format.empty()) o.format = "csv";
  if (o.grid.empty()) throw guard_error("sweep requires at least one --grid");
  std::vector<SweepGrid> grids;
  grids.reserve(o.grid.size());
  for (const auto& spec : o.grid) grids.push_back(parse_grid(spec));

  const SweepTable table = sweep(to_params(o), grids, o.optimize_alpha);

  std::vector<std::string> columns = table.columns;
  columns.push_back("error");
  std::string text;
  if (o.format == "json") {
    ordered_json j;
    j["columns"] = columns;
    j["rows"] = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json r;
      for (std::size_t i = 0; i < table.columns.size(); ++i)
        r[table.columns[i]] = row.values[i];  // NaN serializes as null
      r["error"] = row.error;
      j["rows"].push_back(std::move(r));
    }
    text = j.dump(2) + "\n";
  } else {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(table.rows.size());
    for (const auto& row : table.rows) {
      std::vector<std::string> r;
      for (double v : row.values) r.push_back(num_str(v));
      r.push_back(row.error);
      rows.push_back(std::move(r));
    }
    text = to_csv(columns, rows);
  }
  emit(o, text, columns, table.rows.size());
  return 0;
}

int cmd_optimize(Opts& o) {
  if (o.format.empty()) o.format = "json";
  if (o.alpha || o.beta || o.squeezing)
    throw guard_error("optimize chooses the displacement itself; drop --alpha/--beta/--squeezing");
  const ProtocolParams p = to_params(o);
  const OptimizeResult r = optimize_displacement(p);

  ordered_json j;
  j["lambda"] = p.lambda;
  j["reflectance"] = p.reflectance;
  j["eta"] = p.eta;
  j["nu"] = p.nu;
  j["cutoff"] = p.cutoff;
  j["alpha_opt"] = r.alpha_opt;
  j["e_n"] = r.e_n;
  j["p_succ"] = r.p_succ;
  j["iterations"] = r.iterations;
  j["bracket_lo"] = r.bracket_lo;
  j["bracket_hi"] = r.bracket_hi;

  std::vector<std::string> columns;
  for (auto& [k, v] : j.items()) columns.push_back(k);
  std::string text;
  if (o.format == "json") {
    text = j.dump(2) + "\n";
  } else {
    std::vector<std::string> row;
    for (auto& [k, v] : j.items())
      row.push_back(v.is_number_integer() ? std::to_string(v.get<int>())
                                          : num_str(v.get<double>()));
    text = to_csv(columns, {row});
  }
  emit(o, text, columns, 1);
  return 0;
}

int cmd_validate(Opts& o) {
  if (o.format.empty()) o.format = "text";
  struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
  };
  std::vector<Check> checks;
  auto record = [&](const std::string& name, auto&& fn) {
    try {
      auto [ok, detail] = fn();
      checks.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      checks.push_back({name, false, e.what()});
    }
  };

  record("closed_form_en", [&] {
    const double en =
        log_negativity(density_from_pure(tmsv_pure(o.lambda, o.cutoff).state)).log_negativity;
    const double expect = std::log2((1.0 + o.lambda) / (1.0 - o.lambda));
    const double diff = std::abs(en - expect);
    return std::pair{diff < 1e-6, "|E_N - log2((1+l)/(1-l))| = " + num_str(diff)};
  });

  record("schmidt_vs_pt", [&] {
    const StateVector psi = tmsv_pure(o.lambda, o.cutoff).state;
    const double diff = std::abs(log_negativity(density_from_pure(psi)).log_negativity -
                                 schmidt_log_negativity(psi));
    return std::pair{diff < 1e-9, "route difference = " + num_str(diff)};
  });

  record("vacuum_cancellation", [&] {
    const double lam = (o.lambda > 0.0) ? o.lambda : 0.1;
    const double a = std::sqrt(lam);
    const StateVector out =
        ideal_displaced_filter(tmsv_pure(lam, o.cutoff).state, cplx(a, 0.0), cplx(-a, 0.0));
    const double amp = std::abs(out.amp(0));
    return std::pair{amp < 1e-12, "|<00|psi>| = " + num_str(amp)};
  });

  record("one_ebit_displacement", [&] {
    const StateVector out =
        ideal_displaced_filter(tmsv_pure(0.01, o.cutoff).state, cplx(0.1, 0.0), cplx(-0.1, 0.0));
    Vec target = Vec::Zero(fock_dim(2, o.cutoff));
    target(1 * (o.cutoff + 1) + 0) = std::sqrt(0.5);
    target(0 * (o.cutoff + 1) + 1) = -std::sqrt(0.5);
    const double f = overlap_pure(out, StateVector{target, 2, o.cutoff});
    return std::pair{f >= 0.99, "singlet overlap = " + num_str(f)};
  });

  record("inclusion_exclusion_vs_bruteforce", [&] {
    ProtocolParams p;
    p.lambda = (o.lambda > 0.0) ? o.lambda : 0.15;
    p.reflectance = 0.1;
    p.eta = 0.8;
    p.local_op = LocalOp::displaced(cplx(0.3, 0.0), cplx(-0.3, 0.0));
    p.cutoff = o.cutoff;
    const auto fast = run_realistic(p);
    const auto slow = run_bruteforce_oracle(p);
    const double diff = (fast.rho_out.m - slow.rho_out.m).cwiseAbs().maxCoeff();
    return std::pair{diff < 1e-9, "max entry difference = " + num_str(diff)};
  });

  record("succ_scaling", [&] {
    std::vector<std::pair<double, double>> pts;
    for (double lam : {0.02, 0.03, 0.04, 0.05, 0.06}) {
      ProtocolParams p;
      p.lambda = lam;
      p.reflectance = 0.1;
      p.cutoff = o.cutoff;
      pts.emplace_back(lam, run_realistic(p).success_probability);
    }
    const double slope = scaling_exponent(pts);
    return std::pair{std::abs(slope - 2.0) < 0.2, "P_succ ~ lambda^" + num_str(slope)};
  });

  bool all_ok = true;
  for (const auto& c : checks) all_ok = all_ok && c.ok;

  std::vector<std::string> columns{"check", "ok", "detail"};
  std::string text;
  if (o.format == "json") {
    ordered_json j;
    j["checks"] = ordered_json::array();
    for (const auto& c : checks)
      j["checks"].push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    j["all_ok"] = all_ok;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream s;
    for (const auto& c : checks)
      s << (c.ok ? "[ ok ] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    s << (all_ok ? "all checks passed\n" : "some checks FAILED\n");
    text = s.str();
  }
  emit(o, text, columns, checks.size());
  return all_ok ? 0 : 1;
}

// --- config file ------------------------------------------------------------

void apply_config(Opts& o) {
  if (o.config.empty()) return;
  std::ifstream f(o.config);
  if (!f) throw io_error("cannot read config file: " + o.config);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("config is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw guard_error("config must be a flat JSON object");

  auto number = [&](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw guard_error("config: '" + key + "' must be a number");
    return v.get<double>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "lambda") {
      o.lambda = number(v, key);
    } else if (key == "reflectance") {
      o.reflectance = number(v, key);
    } else if (key == "eta") {
      o.eta = number(v, key);
    } else if (key == "nu") {
      o.nu = number(v, key);
    } else if (key == "alpha") {
      o.alpha = number(v, key);
    } else if (key == "beta") {
      o.beta = number(v, key);
    } else if (key == "squeezing") {
      o.squeezing = number(v, key);
    } else if (key == "cutoff") {
      o.cutoff = static_cast<int>(number(v, key));
    } else if (key == "optimize_alpha") {
      if (!v.is_boolean()) throw guard_error("config: 'optimize_alpha' must be a boolean");
      o.optimize_alpha = v.get<bool>();
    } else if (key == "grid") {
      if (!v.is_array()) throw guard_error("config: 'grid' must be an array of strings");
      o.grid.clear();
      for (const auto& g : v) {
        if (!g.is_string()) throw guard_error("config: 'grid' must be an array of strings");
        o.grid.push_back(g.get<std::string>());
      }
    } else if (key == "output") {
      if (!v.is_string()) throw guard_error("config: 'output' must be a string");
      o.output = v.get<std::string>();
    } else if (key == "format") {
      if (!v.is_string()) throw guard_error("config: 'format' must be a string");
      o.format = v.get<std::string>();
    } else {
      throw guard_error("config: unknown key '" + key + "'");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  Opts o;
  {
    std::string joined;
    for (int i = 0; i < argc; ++i) {
      if (i) joined += ' ';
      joined += argv[i];
    }
    o.command_line = joined;
  }

  CLI::App app{"photon-subtraction entanglement concentration on a truncated Fock space"};
  app.require_subcommand(1);

  // The config file must be applied before flag values land in `o`, so flags
  // win; peek at argv for it instead of waiting for the real parse.
  for (int i = 1; i < argc; ++i) {
    const std::string t = argv[i];
    if (t == "--config" && i + 1 < argc) {
      o.config = argv[i + 1];
    } else if (t.rfind("--config=", 0) == 0) {
      o.config = t.substr(9);
    }
  }
  try {
    apply_config(o);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const guard_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  auto add_common = [&](CLI::App* sub, bool with_local_op) {
    sub->add_option("--lambda", o.lambda, "TMSV parameter, in [0, 1)");
    sub->add_option("--reflectance", o.reflectance, "tap beam-splitter reflectance R, in [0, 1)");
    sub->add_option("--eta", o.eta, "on-off detector efficiency, in (0, 1]");
    sub->add_option("--nu", o.nu, "channel loss per mode, in [0, 1]");
    sub->add_option("--cutoff", o.cutoff, "Fock-space cutoff n_max");
    sub->add_option("--output", o.output, "write the result here instead of stdout");
    sub->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", o.config, "flat JSON config file; flags override it");
    if (with_local_op) {
      sub->add_option("--alpha", o.alpha, "tap displacement on mode A (beta defaults to -alpha)");
      sub->add_option("--beta", o.beta, "tap displacement on mode B");
      sub->add_option("--squeezing", o.squeezing, "local squeezing s instead of displacement");
    }
  };

  CLI::App* c_run = app.add_subcommand("run", "one protocol run, full diagnostics");
  add_common(c_run, true);
  CLI::App* c_sweep = app.add_subcommand("sweep", "grid sweep over protocol parameters");
  add_common(c_sweep, true);
  c_sweep->add_option("--grid", o.grid, "name:start:stop:step (repeatable)");
  c_sweep->add_flag("--optimize-alpha", o.optimize_alpha,
                    "per grid point, also report the optimized-displacement run");
  CLI::App* c_opt = app.add_subcommand("optimize", "maximize E_N over the tap displacement");
  add_common(c_opt, true);
  CLI::App* c_val = app.add_subcommand("validate", "run the built-in self-check suite");
  add_common(c_val, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_run->parsed()) return cmd_run(o);
    if (c_sweep->parsed()) return cmd_sweep(o);
    if (c_opt->parsed()) return cmd_optimize(o);
    return cmd_validate(o);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const guard_error& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return 2;
  } catch (const zero_success_error& e) {
    std::cerr << "guard: " << e.what() << " (P = " << e.success_probability << ")\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric: " << e.what() << "\n";
    return 2;
  }
}
