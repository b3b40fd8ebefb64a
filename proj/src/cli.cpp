#include "pei/cli.hpp"

#include "pei/channel_pei.hpp"
#include "pei/discrimination.hpp"
#include "pei/source_pei.hpp"
#include "pei/unitary_pei.hpp"
#include "pei/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace pei::cli {

namespace {

using json = nlohmann::ordered_json;

// All report numbers are pinned to 12 significant digits so csv and json
// carry identical values.
std::string fmt12(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double round12(double x) { return std::strtod(fmt12(x).c_str(), nullptr); }

// Integer-valued entries (counts, ranks, flags) serialize without a decimal
// point so json and csv carry the same token.
json number(double x) {
  const double r = round12(x);
  if (r == std::floor(r) && std::abs(r) < 1e15) {
    return json(static_cast<std::int64_t>(r));
  }
  return json(r);
}

struct Row {
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, std::string>> notes;
};

struct RunConfig {
  int n = 2;
  double phi = 0.0;
  double gamma = 0.0;
  std::vector<double> pauli_p;
  std::string method = "closed";
  bool use_ancilla = false;
  std::string sweep;
  std::uint64_t seed = 12345;
  std::optional<double> tol;
  int max_iter = 10000;
  int restarts = 8;
  std::string format = "table";
  std::string out_file;
  std::string only = "all";
};

struct SweepSpec {
  std::string var;
  std::vector<double> points;
};

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("sweep must look like VAR=start:stop:count");
  }
  SweepSpec spec;
  spec.var = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  double start = 0, stop = 0;
  int count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(rest);
  in >> start >> c1 >> stop >> c2 >> count;
  if (in.fail() || c1 != ':' || c2 != ':' || count < 1) {
    throw std::invalid_argument("sweep must look like VAR=start:stop:count");
  }
  spec.points.reserve(count);
  for (int i = 0; i < count; ++i) {
    spec.points.push_back(count == 1 ? start
                                     : start + (stop - start) * i / (count - 1));
  }
  return spec;
}

// Runs `fn(i)` for every grid index on a small worker pool; rows land in
// grid order no matter which worker finishes first.
template <typename Fn>
std::vector<Row> pooled_rows(int points, Fn&& fn) {
  std::vector<Row> rows(points);
  const int workers =
      std::max(1, std::min<int>(std::thread::hardware_concurrency(), points));
  if (workers == 1) {
    for (int i = 0; i < points; ++i) rows[i] = fn(i);
    return rows;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < points; i = next.fetch_add(1)) {
        try {
          rows[i] = fn(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

json rows_to_json(const std::string& subcommand, const json& problem,
                  const std::vector<Row>& rows) {
  json doc;
  doc["schema"] = 1;
  doc["problem"] = problem;
  doc["problem"]["subcommand"] = subcommand;
  doc["rows"] = json::array();
  for (const auto& row : rows) {
    json r;
    r["params"] = json::object();
    for (const auto& [k, v] : row.params) r["params"][k] = number(v);
    r["values"] = json::object();
    for (const auto& [k, v] : row.values) r["values"][k] = number(v);
    for (const auto& [k, v] : row.notes) r["values"][k] = v;
    doc["rows"].push_back(std::move(r));
  }
  return doc;
}

std::vector<std::string> column_order(const std::vector<Row>& rows) {
  std::vector<std::string> names;
  auto add = [&](const std::string& name) {
    for (const auto& n : names) {
      if (n == name) return;
    }
    names.push_back(name);
  };
  for (const auto& row : rows) {
    for (const auto& [k, v] : row.params) add(k);
    for (const auto& [k, v] : row.values) add(k);
    for (const auto& [k, v] : row.notes) add(k);
  }
  return names;
}

std::string cell(const Row& row, const std::string& name) {
  for (const auto& [k, v] : row.params) {
    if (k == name) return fmt12(v);
  }
  for (const auto& [k, v] : row.values) {
    if (k == name) return fmt12(v);
  }
  for (const auto& [k, v] : row.notes) {
    if (k == name) return v;
  }
  return "";
}

void emit_csv(const std::vector<Row>& rows, std::ostream& out) {
  const auto names = column_order(rows);
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i ? "," : "") << names[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::string v = cell(row, names[i]);
      if (v.find(',') != std::string::npos) v = "\"" + v + "\"";
      out << (i ? "," : "") << v;
    }
    out << "\n";
  }
}

void emit_table(const std::vector<Row>& rows, std::ostream& out) {
  const auto names = column_order(rows);
  std::vector<std::size_t> widths;
  for (const auto& n : names) {
    std::size_t w = n.size();
    for (const auto& row : rows) w = std::max(w, cell(row, n).size());
    widths.push_back(w);
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i ? "  " : "") << names[i]
        << std::string(widths[i] - names[i].size(), ' ');
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string v = cell(row, names[i]);
      out << (i ? "  " : "") << v << std::string(widths[i] - v.size(), ' ');
    }
    out << "\n";
  }
}

int emit(const RunConfig& cfg, const std::string& subcommand, const json& problem,
         const std::vector<Row>& rows, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  if (cfg.format == "json") {
    buffer << rows_to_json(subcommand, problem, rows).dump(2) << "\n";
  } else if (cfg.format == "csv") {
    emit_csv(rows, buffer);
  } else if (cfg.format == "table") {
    emit_table(rows, buffer);
  } else {
    throw std::invalid_argument("unknown format: " + cfg.format);
  }
  if (cfg.out_file.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.out_file, std::ios::binary);
    if (!file) {
      err << "cannot open output file: " << cfg.out_file << "\n";
      return kExitInvalidArguments;
    }
    file << buffer.str();
  }
  return kExitOk;
}

bool method_is(const RunConfig& cfg, const char* name) {
  return cfg.method == name || cfg.method == "all";
}

void check_method(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (cfg.method == a) return;
  }
  throw std::invalid_argument("unsupported method for this subcommand: " +
                              cfg.method);
}

// ---------------------------------------------------------------------------
// subcommand row builders

Row source_row(const RunConfig& cfg, int n, double phi) {
  Row row;
  row.params = {{"n", double(n)}, {"phi", phi}};
  source::SourceProblem problem(n, phi);
  row.values.emplace_back("closed", source::ps_star(problem));

  const bool want_srm = method_is(cfg, "srm");
  const bool want_fp = method_is(cfg, "fixed-point");
  if (want_srm || want_fp) {
    try {
      disc::Ensemble ensemble = source_states(problem);
      if (want_srm) {
        row.values.emplace_back(
            "srm", disc::srm_success_probability(disc::gram_of(ensemble)));
      }
      if (want_fp) {
        disc::FixedPointOptions opts{cfg.max_iter, cfg.tol.value_or(1e-11)};
        auto fp = disc::fixed_point_optimal_povm(ensemble, opts);
        row.values.emplace_back("fixed_point", fp.povm.success_probability);
        row.values.emplace_back("certificate_slack", fp.certificate.slack);
      }
    } catch (const ResourceCapError&) {
      // `all` keeps the closed-form columns; oracle-only requests have no
      // fallback and the cap is a hard error.
      if (cfg.method != "all") throw;
      row.notes.emplace_back("warning", "oracle skipped: register over cap");
    }
  }
  return row;
}

Row unitary_row(const RunConfig& cfg, int n, double phi) {
  Row row;
  row.params = {{"n", double(n)}, {"phi", phi}};
  unitary::UnitaryProblem problem(n, phi);
  const int h = (n + 1) / 2;

  row.values.emplace_back("phi_min", unitary::phi_min(n));
  const double closed = unitary::ps_unitary(problem);
  row.values.emplace_back("closed", closed);
  const double star = source::ps_star(n, phi);
  row.values.emplace_back("ps_star", star);
  row.values.emplace_back("advantage", closed - star);

  RealVec coeff = RealVec::Zero(n + 1);
  if (problem.folded_phi() > 0.0) {
    coeff = unitary::optimal_input(problem).coefficients;
  } else {
    coeff(h) = 1.0;  // phi -> 0 limit of the sub-threshold input
  }
  row.values.emplace_back("c0", coeff(0));
  row.values.emplace_back("c_half", coeff(h));

  if (method_is(cfg, "srm") && problem.folded_phi() > 0.0) {
    try {
      unitary::SymmetricInput input{coeff};
      auto oracle = unitary::unitary_oracle(problem, input);
      row.values.emplace_back("srm", oracle.srm_value);
      if (oracle.fixed_point_value) {
        row.values.emplace_back("fixed_point", *oracle.fixed_point_value);
        row.values.emplace_back("certificate_slack", *oracle.certificate_slack);
      }
    } catch (const ResourceCapError&) {
      if (cfg.method != "all") throw;
      row.notes.emplace_back("warning", "oracle skipped: register over cap");
    }
  }
  return row;
}

Row pauli_row(const RunConfig& cfg, int n, const channel::PauliChannel& ch,
              std::uint64_t seed) {
  Row row;
  row.params = {{"n", double(n)},
                {"p0", ch.p0},
                {"p1", ch.p1},
                {"p2", ch.p2},
                {"p3", ch.p3}};
  const int rank = channel::pauli_rank(ch);
  row.values.emplace_back("rank", double(rank));
  if (rank <= 2) {
    row.values.emplace_back(
        "closed", channel::pauli_rank12_value(ch, n).success_probability);
  } else {
    auto [lower, upper] = channel::pauli_rank3_bounds(ch, n);
    row.values.emplace_back("lower", lower.success_probability);
    row.values.emplace_back("upper", upper.success_probability);
  }
  if (method_is(cfg, "seesaw")) {
    disc::SeesawOptions opts;
    opts.restarts = cfg.restarts;
    opts.seed = seed;
    opts.tol = cfg.tol.value_or(1e-9);
    opts.inner.max_iter = cfg.max_iter;
    auto result = disc::seesaw_optimize(ch.kraus(), n, cfg.use_ancilla, opts);
    row.values.emplace_back("seesaw", result.value);
    row.values.emplace_back("seesaw_best_restart", double(result.best_restart));
    if (!result.all_converged) {
      row.notes.emplace_back("warning", "seesaw restart hit the iteration limit");
    }
  }
  return row;
}

Row ampdamp_row(const RunConfig& cfg, int n, double gamma) {
  Row row;
  row.params = {{"n", double(n)}, {"gamma", gamma}};
  channel::AmplitudeDampingChannel ch(gamma);

  row.values.emplace_back(
      "lower", channel::ad_product_lower_bound(ch, n).success_probability);
  const bool want_oracle = method_is(cfg, "srm");
  auto report = channel::ad_ancilla_strategy(ch, n, want_oracle ? kDefaultQubitCap : 0);
  row.values.emplace_back("exact", report.report.success_probability);
  row.values.emplace_back("p_coefficient", report.p_coefficient);
  const double asym = channel::ad_asymptotic_value(ch, n);
  row.values.emplace_back("asymptotic", asym);
  row.values.emplace_back("gap_lower", report.report.success_probability -
                                           row.values[0].second);
  row.values.emplace_back(
      "asym_error", std::abs(report.report.success_probability - asym));
  if (want_oracle) {
    row.values.emplace_back("oracle_verified", report.oracle_verified ? 1.0 : 0.0);
    if (report.oracle_verified) {
      row.values.emplace_back("oracle", report.oracle_value);
    } else {
      row.notes.emplace_back("warning", "explicit oracle skipped: register over cap");
    }
  }
  return row;
}

// ---------------------------------------------------------------------------
// subcommand drivers

int run_source(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_method(cfg, {"closed", "srm", "fixed-point", "all"});
  json problem{{"n", cfg.n}, {"method", cfg.method}, {"seed", cfg.seed}};
  std::vector<Row> rows;
  if (cfg.sweep.empty()) {
    rows.push_back(source_row(cfg, cfg.n, cfg.phi));
  } else {
    SweepSpec spec = parse_sweep(cfg.sweep);
    problem["sweep"] = cfg.sweep;
    if (spec.var == "phi") {
      rows = pooled_rows(static_cast<int>(spec.points.size()), [&](int i) {
        return source_row(cfg, cfg.n, spec.points[i]);
      });
    } else if (spec.var == "n") {
      rows = pooled_rows(static_cast<int>(spec.points.size()), [&](int i) {
        return source_row(cfg, int(std::lround(spec.points[i])), cfg.phi);
      });
    } else {
      throw std::invalid_argument("source sweeps support phi or n");
    }
  }
  return emit(cfg, "source", problem, rows, out, err);
}

int run_unitary(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_method(cfg, {"closed", "srm", "all"});
  json problem{{"n", cfg.n}, {"method", cfg.method}, {"seed", cfg.seed}};
  std::vector<Row> rows;
  if (cfg.sweep.empty()) {
    rows.push_back(unitary_row(cfg, cfg.n, cfg.phi));
  } else {
    SweepSpec spec = parse_sweep(cfg.sweep);
    problem["sweep"] = cfg.sweep;
    if (spec.var == "phi") {
      rows = pooled_rows(static_cast<int>(spec.points.size()), [&](int i) {
        return unitary_row(cfg, cfg.n, spec.points[i]);
      });
    } else if (spec.var == "n") {
      rows = pooled_rows(static_cast<int>(spec.points.size()), [&](int i) {
        return unitary_row(cfg, int(std::lround(spec.points[i])), cfg.phi);
      });
    } else {
      throw std::invalid_argument("unitary sweeps support phi or n");
    }
  }
  return emit(cfg, "unitary", problem, rows, out, err);
}

int run_pauli(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_method(cfg, {"closed", "seesaw", "all"});
  if (cfg.pauli_p.size() != 4) {
    throw std::invalid_argument("--p requires four comma-separated weights");
  }
  channel::PauliChannel base(cfg.pauli_p[0], cfg.pauli_p[1], cfg.pauli_p[2],
                             cfg.pauli_p[3]);
  json problem{{"n", cfg.n},
               {"method", cfg.method},
               {"ancilla", cfg.use_ancilla},
               {"seed", cfg.seed}};
  std::vector<Row> rows;
  if (cfg.sweep.empty()) {
    rows.push_back(pauli_row(cfg, cfg.n, base, cfg.seed));
  } else {
    SweepSpec spec = parse_sweep(cfg.sweep);
    problem["sweep"] = cfg.sweep;
    if (spec.var == "p0") {
      // Sweep the identity weight; the noise weights keep their proportions.
      const double rest = base.p1 + base.p2 + base.p3;
      rows = pooled_rows(static_cast<int>(spec.points.size()), [&](int i) {
        const double p0 = spec.points[i];
        const double scale = rest > 0.0 ? (1.0 - p0) / rest : 0.0;
        channel::PauliChannel ch(p0, base.p1 * scale, base.p2 * scale,
                                 base.p3 * scale);
        return pauli_row(cfg, cfg.n, ch, cfg.seed + i);
      });
    } else if (spec.var == "n") {
      rows = pooled_rows(static_cast<int>(spec.points.size()), [&](int i) {
        return pauli_row(cfg, int(std::lround(spec.points[i])), base, cfg.seed + i);
      });
    } else {
      throw std::invalid_argument("pauli sweeps support p0 or n");
    }
  }
  return emit(cfg, "pauli", problem, rows, out, err);
}

int run_ampdamp(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_method(cfg, {"closed", "srm", "all"});
  json problem{{"n", cfg.n}, {"method", cfg.method}, {"seed", cfg.seed}};
  std::vector<Row> rows;
  if (cfg.sweep.empty()) {
    rows.push_back(ampdamp_row(cfg, cfg.n, cfg.gamma));
  } else {
    SweepSpec spec = parse_sweep(cfg.sweep);
    problem["sweep"] = cfg.sweep;
    if (spec.var == "gamma") {
      rows = pooled_rows(static_cast<int>(spec.points.size()), [&](int i) {
        return ampdamp_row(cfg, cfg.n, spec.points[i]);
      });
    } else if (spec.var == "n") {
      rows = pooled_rows(static_cast<int>(spec.points.size()), [&](int i) {
        return ampdamp_row(cfg, int(std::lround(spec.points[i])), cfg.gamma);
      });
    } else {
      throw std::invalid_argument("ampdamp sweeps support gamma or n");
    }
  }
  return emit(cfg, "ampdamp", problem, rows, out, err);
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  verify::VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.tol_override = cfg.tol;
  std::stringstream topics(cfg.only);
  std::string topic;
  while (std::getline(topics, topic, ',')) {
    for (int id : verify::checks_for_topic(topic)) opts.only.push_back(id);
  }

  const auto results = verify::run_acceptance_checks(opts);

  json problem{{"only", cfg.only}, {"seed", cfg.seed}};
  if (cfg.tol) problem["tol"] = round12(*cfg.tol);
  std::vector<Row> rows;
  bool all_passed = true;
  for (const auto& r : results) {
    Row row;
    row.params = {{"check", double(r.id)}};
    row.values = {{"passed", r.passed ? 1.0 : 0.0}, {"margin", r.margin}};
    row.notes = {{"name", r.name}, {"detail", r.detail}};
    rows.push_back(std::move(row));
    all_passed = all_passed && r.passed;
  }
  const int code = emit(cfg, "verify", problem, rows, out, err);
  if (code != kExitOk) return code;
  if (!all_passed) {
    for (const auto& r : results) {
      if (!r.passed) {
        err << "check " << r.id << " failed: " << r.name << " (" << r.detail
            << ")\n";
      }
    }
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Optimal strategies for locating a faulty device among N "
               "identical quantum devices"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub, bool needs_seed) {
    sub->add_option("--method", cfg.method, "computation selector");
    sub->add_option("--sweep", cfg.sweep, "VAR=start:stop:count grid");
    sub->add_option("--tol", cfg.tol, "tolerance override");
    sub->add_option("--max-iter", cfg.max_iter, "iteration cap for solvers");
    sub->add_option("--format", cfg.format, "json | csv | table");
    sub->add_option("--out", cfg.out_file, "write the report to this file");
    if (needs_seed) sub->add_option("--seed", cfg.seed, "deterministic seed");
  };

  CLI::App* source = app.add_subcommand("source", "faulty-source identification");
  source->add_option("--n", cfg.n, "number of devices")->required();
  source->add_option("--phi", cfg.phi, "fault angle in radians");
  add_common(source, true);

  CLI::App* unitary = app.add_subcommand("unitary", "faulty-gate identification");
  unitary->add_option("--n", cfg.n, "number of devices")->required();
  unitary->add_option("--phi", cfg.phi, "rotation angle in radians");
  add_common(unitary, true);

  CLI::App* pauli = app.add_subcommand("pauli", "faulty Pauli-channel identification");
  pauli->add_option("--n", cfg.n, "number of devices")->required();
  pauli->add_option("--p", cfg.pauli_p, "p0,p1,p2,p3 weights")
      ->required()
      ->delimiter(',');
  pauli->add_flag("--ancilla,!--no-ancilla", cfg.use_ancilla,
                  "entangle each probe with a flag ancilla");
  pauli->add_option("--restarts", cfg.restarts, "seesaw restarts");
  add_common(pauli, true);

  CLI::App* ampdamp =
      app.add_subcommand("ampdamp", "faulty amplitude-damping identification");
  ampdamp->add_option("--n", cfg.n, "number of devices")->required();
  ampdamp->add_option("--gamma", cfg.gamma, "damping parameter in [0, 1]");
  add_common(ampdamp, true);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the verification suite");
  verify_cmd->add_option("--only", cfg.only,
                         "comma list of source|unitary|pauli|ampdamp");
  add_common(verify_cmd, true);

  std::vector<const char*> argv;
  argv.push_back("pei");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidArguments;
  }

  try {
    if (source->parsed()) return run_source(cfg, out, err);
    if (unitary->parsed()) return run_unitary(cfg, out, err);
    if (pauli->parsed()) return run_pauli(cfg, out, err);
    if (ampdamp->parsed()) return run_ampdamp(cfg, out, err);
    if (verify_cmd->parsed()) return run_verify(cfg, out, err);
    err << "no subcommand given\n";
    return kExitInvalidArguments;
  } catch (const ResourceCapError& e) {
    err << "resource cap exceeded: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const std::invalid_argument& e) {
    err << "invalid arguments: " << e.what() << "\n";
    return kExitInvalidArguments;
  } catch (const std::out_of_range& e) {
    err << "invalid arguments: " << e.what() << "\n";
    return kExitInvalidArguments;
  }
}

}  // namespace pei::cli
