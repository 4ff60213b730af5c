#include "sbpsat/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace sbpsat::cli {

using nlohmann::json;
using nlohmann::ordered_json;
using operators::Variant;
using penalties::Flavor;
using penalties::OmegaMode;

namespace {

template <class T, class F>
std::vector<T> one_or_many(const json& j, const std::string& field, F convert) {
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) throw ConfigError(field, "must not be empty");
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(convert(j[i], field + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(convert(j, field));
  }
  return out;
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw ConfigError(field, "expected a positive integer");
  return j.get<std::size_t>();
}

// Library errors raised while reading a field become config errors for that field.
template <class F>
auto field_guard(const std::string& field, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  }
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(where.empty() ? k : where + "." + k, "unknown key");
  }
}

bool spectrum_known(double v) { return !std::isnan(v); }

std::string verdict_flag(const assembly::DualityCertificate& c) {
  return c.dual_consistent && c.stable ? "pass" : "fail";
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string certificate_json(const assembly::DualityCertificate& c, const RunConfig& cfg, int order, Variant v,
                             const std::string& omega, Flavor f, std::size_t N) {
  ordered_json conf;
  conf["preset"] = cfg.preset;
  conf["N"] = N;
  conf["interior_order"] = order;
  conf["variant"] = operators::to_string(v);
  conf["omega_mode"] = omega;
  conf["penalty_flavor"] = penalties::to_string(f);
  return c.to_json(conf.dump());
}

experiments::CaseConfig case_for(const RunConfig& cfg, int order, Variant v, const OmegaMode& m, Flavor f) {
  experiments::CaseConfig c;
  c.preset = cfg.preset;
  c.options = cfg.params;
  c.interior_order = order;
  c.variant = v;
  c.omega = m;
  c.flavor = f;
  c.time = cfg.time;
  c.spectrum = cfg.spectrum;
  return c;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ConfigError("output", "cannot write '" + path + "'");
  f << text;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "expected a JSON object");
  check_keys(j, "", {"preset", "params", "operator", "omega_mode", "penalty_flavor", "N", "time", "steady", "omegas",
                     "output", "threads", "spectrum"});
  RunConfig c;
  if (!j.contains("preset")) throw ConfigError("preset", "missing");
  c.preset = as_string(j["preset"], "preset");
  const auto& names = experiments::preset_names();
  if (std::find(names.begin(), names.end(), c.preset) == names.end()) {
    std::string allowed;
    for (const auto& n : names) allowed += (allowed.empty() ? "" : ", ") + n;
    throw ConfigError("preset", "unknown preset '" + c.preset + "' (allowed: " + allowed + ")");
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    if (!p.is_object()) throw ConfigError("params", "expected an object");
    check_keys(p, "params", {"eps", "a"});
    if (p.contains("eps")) c.params.eps = as_number(p["eps"], "params.eps");
    if (p.contains("a")) c.params.a = as_number(p["a"], "params.a");
    if (c.params.eps && !(*c.params.eps > 0)) throw ConfigError("params.eps", "must be positive");
  }
  if (j.contains("operator")) {
    const auto& o = j["operator"];
    if (!o.is_object()) throw ConfigError("operator", "expected an object");
    check_keys(o, "operator", {"interior_order", "variant"});
    if (o.contains("interior_order"))
      c.orders = one_or_many<int>(o["interior_order"], "operator.interior_order", [](const json& v, const std::string& f) {
        if (!v.is_number_integer()) throw ConfigError(f, "expected an integer");
        const int k = v.get<int>();
        if (k != 2 && k != 4 && k != 6 && k != 8) throw ConfigError(f, "allowed: 2, 4, 6, 8");
        return k;
      });
    if (o.contains("variant"))
      c.variants = one_or_many<Variant>(o["variant"], "operator.variant", [](const json& v, const std::string& f) {
        return field_guard(f, [&] { return operators::parse_variant(as_string(v, f)); });
      });
  }
  if (j.contains("omega_mode"))
    c.omega_modes = one_or_many<OmegaMode>(j["omega_mode"], "omega_mode", [](const json& v, const std::string& f) {
      return field_guard(f, [&] { return penalties::parse_omega_mode(as_string(v, f)); });
    });
  if (j.contains("penalty_flavor"))
    c.flavors = one_or_many<Flavor>(j["penalty_flavor"], "penalty_flavor", [](const json& v, const std::string& f) {
      const Flavor fl = field_guard(f, [&] { return penalties::parse_flavor(as_string(v, f)); });
      if (fl == Flavor::custom) throw ConfigError(f, "'custom' is not available from configs");
      return fl;
    });
  if (j.contains("N")) {
    c.N = one_or_many<std::size_t>(j["N"], "N", as_count);
    for (std::size_t i = 1; i < c.N.size(); ++i)
      if (c.N[i] <= c.N[i - 1]) throw ConfigError("N", "values must be strictly ascending");
  }
  const auto prob = experiments::make_problem(c.preset, c.params);
  if (j.contains("steady")) {
    if (!j["steady"].is_boolean()) throw ConfigError("steady", "expected true or false");
    if (j["steady"].get<bool>() != prob.steady)
      throw ConfigError("steady", "preset '" + c.preset + "' is " + (prob.steady ? "steady" : "time dependent"));
  }
  if (j.contains("time")) {
    const auto& t = j["time"];
    if (!t.is_object()) throw ConfigError("time", "expected an object");
    if (prob.steady) throw ConfigError("time", "preset '" + c.preset + "' is steady");
    check_keys(t, "time", {"scheme", "dt", "t_end"});
    solver::TimeIntegratorConfig tc = prob.time;
    if (t.contains("scheme"))
      tc.scheme = field_guard("time.scheme", [&] { return solver::parse_scheme(as_string(t["scheme"], "time.scheme")); });
    if (t.contains("dt")) tc.dt = as_number(t["dt"], "time.dt");
    if (t.contains("t_end")) tc.t_end = as_number(t["t_end"], "time.t_end");
    field_guard("time", [&] {
      tc.validate();
      return 0;
    });
    c.time = tc;
  }
  if (j.contains("omegas")) {
    c.omegas = one_or_many<double>(j["omegas"], "omegas", [](const json& v, const std::string& f) {
      const double w = as_number(v, f);
      if (!(w > 0)) throw ConfigError(f, "omega must be positive");
      return w;
    });
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    check_keys(o, "output", {"csv", "certificates"});
    if (o.contains("csv")) c.csv_path = as_string(o["csv"], "output.csv");
    if (o.contains("certificates")) c.certificate_path = as_string(o["certificates"], "output.certificates");
  }
  if (j.contains("threads")) c.threads = as_count(j["threads"], "threads");
  if (j.contains("spectrum")) {
    if (!j["spectrum"].is_boolean()) throw ConfigError("spectrum", "expected true or false");
    c.spectrum = j["spectrum"].get<bool>();
  }
  for (std::size_t i = 0; i < c.orders.size(); ++i)
    for (const auto v : c.variants)
      if (c.N.front() < operators::min_grid(c.orders[i], v))
        throw ConfigError("N", "N = " + std::to_string(c.N.front()) + " is below the minimum " +
                                   std::to_string(operators::min_grid(c.orders[i], v)) + " for order " +
                                   std::to_string(c.orders[i]) + " " + operators::to_string(v));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("<file>", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::size_t resolve_threads(const RunConfig& cfg) {
  if (std::getenv("SBPSAT_THREADS")) return experiments::default_threads();
  return cfg.threads ? cfg.threads : experiments::default_threads();
}

std::string csv_header() {
  return "preset,N,h,order,variant,omega_mode,penalty_flavor,sol_error,sol_order,func_index,func_error,func_order,rho,"
         "eta,duality_verdict\n";
}

std::string run_campaign(const RunConfig& cfg, std::vector<std::string>& certs, std::ostream& warn) {
  if (cfg.N.size() < 2) warn << "warning: a single N gives no convergence orders\n";
  std::ostringstream os;
  os << csv_header();
  const std::size_t threads = resolve_threads(cfg);
  for (const int order : cfg.orders)
    for (const auto v : cfg.variants)
      for (const auto& m : cfg.omega_modes)
        for (const auto f : cfg.flavors) {
          const auto rows = experiments::convergence_study(case_for(cfg, order, v, m, f), cfg.N, threads);
          const std::string mode = penalties::to_string(m);
          for (const auto& r : rows) {
            const auto& e = r.report;
            certs.push_back(certificate_json(e.certificate, cfg, order, v, mode, f, e.N));
            for (std::size_t k = 0; k < e.func_errors.size(); ++k) {
              os << cfg.preset << ',' << e.N << ',' << format_double(e.h) << ',' << order << ','
                 << operators::to_string(v) << ',' << mode << ',' << penalties::to_string(f) << ','
                 << format_double(e.sol_error) << ',' << opt(r.sol_order) << ',' << k << ','
                 << format_double(e.func_errors[k]) << ',' << opt(r.func_orders[k]) << ','
                 << (spectrum_known(e.rho) ? format_double(e.rho) : "") << ','
                 << (spectrum_known(e.eta) ? format_double(e.eta) : "") << ',' << verdict_flag(e.certificate)
                 << '\n';
            }
          }
        }
  return os.str();
}

std::string sweep_campaign(const RunConfig& cfg, std::ostream& warn) {
  if (cfg.omegas.empty()) throw ConfigError("omegas", "sweep needs a list of omega values");
  if (cfg.N.size() > 1) warn << "warning: sweep uses only the first N\n";
  std::ostringstream os;
  os << "preset,N,h,order,variant,omega,penalty_flavor,rho,eta,sol_error,func_index,func_error,duality_verdict\n";
  const std::size_t threads = resolve_threads(cfg);
  for (const int order : cfg.orders)
    for (const auto v : cfg.variants)
      for (const auto f : cfg.flavors) {
        const auto rows = experiments::omega_sweep(case_for(cfg, order, v, OmegaMode{}, f), cfg.omegas, cfg.N.front(),
                                                   threads);
        for (const auto& r : rows) {
          const auto& e = r.report;
          for (std::size_t k = 0; k < e.func_errors.size(); ++k)
            os << cfg.preset << ',' << e.N << ',' << format_double(e.h) << ',' << order << ','
               << operators::to_string(v) << ',' << format_double(r.omega) << ',' << penalties::to_string(f) << ','
               << (spectrum_known(e.rho) ? format_double(e.rho) : "") << ','
               << (spectrum_known(e.eta) ? format_double(e.eta) : "") << ',' << format_double(e.sol_error) << ','
               << k << ',' << format_double(e.func_errors[k]) << ',' << verdict_flag(e.certificate) << '\n';
        }
      }
  return os.str();
}

void save_operator_set(const operators::SbpOperatorSet& ops, const std::string& dir) {
  std::filesystem::create_directories(dir);
  ordered_json meta;
  meta["interior_order"] = ops.order.interior_order;
  meta["variant"] = operators::to_string(ops.variant);
  meta["N"] = ops.N;
  meta["h"] = ops.h;
  write_file(dir + "/meta.json", meta.dump(2) + "\n");
  write_file(dir + "/H.txt", operators::dump_matrix(linalg::Matrix::row(ops.H)));
  write_file(dir + "/Q.txt", operators::dump_matrix(ops.Q));
  write_file(dir + "/D1.txt", operators::dump_matrix(ops.D1));
  if (!ops.D2.empty()) {
    write_file(dir + "/D2.txt", operators::dump_matrix(ops.D2));
    write_file(dir + "/S.txt", operators::dump_matrix(ops.S));
    write_file(dir + "/A_S.txt", operators::dump_matrix(ops.A_S));
  }
}

namespace {

linalg::Matrix read_matrix(const std::string& path, std::size_t rows, std::size_t cols) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, "cannot read");
  linalg::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!(f >> m(i, j))) throw ConfigError(path, "expected " + std::to_string(rows) + "x" + std::to_string(cols));
  return m;
}

}  // namespace

operators::SbpOperatorSet load_operator_set(const std::string& dir) {
  std::ifstream mf(dir + "/meta.json");
  if (!mf) throw ConfigError(dir + "/meta.json", "cannot read");
  json meta;
  try {
    meta = json::parse(mf);
  } catch (const json::exception& e) {
    throw ConfigError(dir + "/meta.json", e.what());
  }
  operators::SbpOperatorSet ops;
  try {
    ops.order.interior_order = meta.at("interior_order").get<int>();
    ops.variant = operators::parse_variant(meta.at("variant").get<std::string>());
    ops.N = meta.at("N").get<std::size_t>();
    ops.h = meta.at("h").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(dir + "/meta.json", e.what());
  }
  const std::size_t n = ops.size();
  ops.H = read_matrix(dir + "/H.txt", 1, n).get_row(0);
  ops.Q = read_matrix(dir + "/Q.txt", n, n);
  ops.D1 = read_matrix(dir + "/D1.txt", n, n);
  if (std::filesystem::exists(dir + "/D2.txt")) {
    ops.D2 = read_matrix(dir + "/D2.txt", n, n);
    ops.S = read_matrix(dir + "/S.txt", n, n);
    ops.A_S = read_matrix(dir + "/A_S.txt", n, n);
  }
  return ops;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::SingularMatrix:
    case ErrorKind::NoConvergence:
    case ErrorKind::SingularPerturbedMatrix:
    case ErrorKind::SingularP:
    case ErrorKind::SingularPenaltyDenominator:
    case ErrorKind::BlowUp: return kNumerical;
    case ErrorKind::DualityViolated: return kCheckFailed;
    default: return kUsage;
  }
}

namespace {

int cmd_verify(int order, const std::string& variant, std::size_t N, const std::string& load, const std::string& dump,
               std::ostream& out, std::ostream& err) {
  operators::SbpOperatorSet ops;
  if (!load.empty()) {
    ops = load_operator_set(load);
  } else {
    const Variant v = operators::parse_variant(variant);
    ops = operators::build_second_derivative(order, v, N, 1.0 / static_cast<double>(N));
  }
  if (!dump.empty()) save_operator_set(ops, dump);
  const auto rep = operators::verify_sbp(ops);
  ordered_json j;
  j["interior_order"] = ops.order.interior_order;
  j["variant"] = operators::to_string(ops.variant);
  j["N"] = ops.N;
  j["passed"] = rep.passed();
  auto& checks = j["checks"];
  checks = ordered_json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  out << j.dump(2) << '\n';
  if (!rep.passed()) {
    for (const auto& c : rep.checks)
      if (!c.passed) err << "failed check: " << c.name << '\n';
    return kCheckFailed;
  }
  return kOk;
}

int cmd_qtable(bool corner, std::ostream& out) {
  bool ok = true;
  if (corner) {
    out << "N,q0h_computed,q0h_reference,qch_computed,qch_reference,qh_computed,qh_reference,match\n";
    for (const auto& r : operators::corner_q_reference()) {
      const auto ops = operators::build_second_derivative(4, Variant::narrow, r.N, 1.0 / static_cast<double>(r.N));
      const auto q = operators::compute_q(ops);
      const double h = ops.h;
      const bool m = std::abs(q.q0 * h - r.q0h) <= 1e-12 && std::abs(std::abs(q.qc) * h - r.qch) <= 1e-12 &&
                     std::abs(q.q * h - r.qh) <= 1e-12;
      ok = ok && m;
      out << r.N << ',' << format_double(q.q0 * h) << ',' << format_double(r.q0h) << ','
          << format_double(std::abs(q.qc) * h) << ',' << format_double(r.qch) << ',' << format_double(q.q * h) << ','
          << format_double(r.qh) << ',' << (m ? "match" : "mismatch") << '\n';
    }
    return ok ? kOk : kCheckFailed;
  }
  out << "label,order,variant,N,qh_computed,qh_reference,abs_diff,match,informational\n";
  for (const auto& r : operators::q_reference()) {
    const auto ops = operators::build_second_derivative(r.interior_order, r.variant, r.N, 1.0 / static_cast<double>(r.N));
    const double qh = ops.q * ops.h, d = std::abs(qh - r.reference);
    const double tol = (r.interior_order == 6 && r.variant == Variant::narrow ? 1e-10 : 1e-12) * std::abs(r.reference);
    const bool m = d <= tol;
    if (!r.informational) ok = ok && m;
    out << '"' << r.label << "\"," << r.interior_order << ',' << operators::to_string(r.variant) << ',' << r.N << ','
        << format_double(qh) << ',' << format_double(r.reference) << ',' << format_double(d) << ','
        << (m ? "match" : "mismatch") << ',' << (r.informational ? "yes" : "no") << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_file(path, text);
}

std::string json_array(const std::vector<std::string>& items) {
  std::string s = "[\n";
  for (std::size_t i = 0; i < items.size(); ++i) s += items[i] + (i + 1 < items.size() ? ",\n" : "\n");
  return s + "]\n";
}

int cmd_run(const std::string& path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(path);
  std::vector<std::string> certs;
  const std::string csv = run_campaign(cfg, certs, err);
  emit(cfg.csv_path, csv, out);
  std::string cert_path = cfg.certificate_path;
  if (cert_path.empty() && !cfg.csv_path.empty()) cert_path = cfg.csv_path + ".certificates.json";
  if (!cert_path.empty()) write_file(cert_path, json_array(certs));
  return kOk;
}

int cmd_certify(const std::string& path, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(path);
  std::vector<std::string> certs;
  bool ok = true;
  for (const int order : cfg.orders)
    for (const auto v : cfg.variants)
      for (const auto& m : cfg.omega_modes)
        for (const auto f : cfg.flavors)
          for (const std::size_t N : cfg.N) {
            const auto c = case_for(cfg, order, v, m, f);
            const auto prob = experiments::make_problem(c.preset, c.options);
            const auto ops = experiments::build_operators(prob, c, N);
            double omega = 0.0;
            const auto pens = experiments::build_penalties(prob, c, ops, omega);
            const auto cert = assembly::certify(prob.spec, ops, pens, cfg.spectrum);
            certs.push_back(certificate_json(cert, cfg, order, v, penalties::to_string(m), f, N));
            const bool good = cert.stable && (f != Flavor::theorem2 || cert.dual_consistent);
            if (!good)
              err << "certificate failed: order " << order << ' ' << operators::to_string(v) << ' '
                  << penalties::to_string(f) << " N=" << N << " verdict " << cert.verdict << '\n';
            ok = ok && good;
          }
  emit(cfg.certificate_path, json_array(certs), out);
  return ok ? kOk : kCheckFailed;
}

int cmd_sweep(const std::string& path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(path);
  emit(cfg.csv_path, sweep_campaign(cfg, err), out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SBP-SAT discretizations with dual-consistent boundary penalties"};
  app.require_subcommand(1);
  auto* ops = app.add_subcommand("ops", "operator checks and tables");
  ops->require_subcommand(1);
  int order = 4;
  std::string variant = "narrow", load, dump;
  std::size_t N = 32;
  auto* verify = ops->add_subcommand("verify", "check SBP identities and accuracy of one operator set");
  verify->add_option("--order", order, "interior order (2, 4, 6, 8)");
  verify->add_option("--variant", variant, "wide, narrow or narrow_20");
  verify->add_option("--n", N, "number of intervals");
  verify->add_option("--load", load, "verify matrices dumped to this directory instead");
  verify->add_option("--dump", dump, "write the matrices to this directory");
  bool corner = false;
  auto* qtable = ops->add_subcommand("qtable", "computed q*h beside the reference table");
  qtable->add_flag("--corner", corner, "narrow (4,2) corner values over N = 8..12");
  std::string config;
  auto* run_cmd = app.add_subcommand("run", "convergence study from a JSON config");
  run_cmd->add_option("config", config, "config file")->required();
  auto* certify = app.add_subcommand("certify", "duality and stability certificates from a JSON config");
  certify->add_option("config", config, "config file")->required();
  auto* sweep = app.add_subcommand("sweep", "omega sweep from a JSON config");
  sweep->add_option("config", config, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (verify->parsed()) return cmd_verify(order, variant, N, load, dump, out, err);
    if (qtable->parsed()) return cmd_qtable(corner, out);
    if (run_cmd->parsed()) return cmd_run(config, out, err);
    if (certify->parsed()) return cmd_certify(config, out, err);
    if (sweep->parsed()) return cmd_sweep(config, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace sbpsat::cli
