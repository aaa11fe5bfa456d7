// carnot-lab: command-line front end over the carnot C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/carnot.h"

namespace {

using Json = nlohmann::ordered_json;

struct Failure {
  std::string message;
};

void check(carnot_status s) {
  if (s != CARNOT_OK) throw Failure{std::string(carnot_status_name(s)) + ": " + carnot_last_error()};
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{"not a number: \"" + item + "\""};
    }
  }
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Failure{"cannot open \"" + path + "\" for writing"};
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct Group {
  carnot_group* ptr = nullptr;
  explicit Group(const std::string& name) { check(carnot_group_create(name.c_str(), &ptr)); }
  ~Group() { carnot_group_free(ptr); }
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;
};

struct Kernel {
  carnot_kernel* ptr = nullptr;
  explicit Kernel(const Group& g) { check(carnot_kernel_create(g.ptr, &ptr)); }
  ~Kernel() { carnot_kernel_free(ptr); }
  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;
};

// Options that map one-to-one onto config keys; unset flags are left out so
// the library fills its own defaults and echoes them.
struct Flags {
  Json config = Json::object();
  std::vector<std::function<void()>> apply;

  template <class T>
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    apply.push_back([this, value, opt, key] {
      if (opt->count()) config[key] = *value;
    });
  }

  void add_list(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto value = std::make_shared<std::string>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    apply.push_back([this, value, opt, key] {
      if (opt->count()) {
        const auto v = parse_list(*value);
        config[key] = v.size() == 1 ? Json(v[0]) : Json(v);
      }
    });
  }

  // Number, or one of the words auto / computed / bound.
  void add_lambda(CLI::App* app) {
    auto value = std::make_shared<std::string>();
    CLI::Option* opt = app->add_option("--lambda", *value, "Lambda: auto, computed, bound (Q/2) or a number");
    apply.push_back([this, value, opt] {
      if (!opt->count()) return;
      if (*value == "auto" || *value == "computed" || *value == "bound")
        config["lambda"] = *value;
      else
        config["lambda"] = parse_list(*value).at(0);
    });
  }

  void add_mc(CLI::App* app) {
    add<std::uint64_t>(app, "--seed", "seed", "RNG seed");
    add<std::uint64_t>(app, "--samples", "samples", "Monte Carlo sample count");
    add<int>(app, "--substeps", "substeps", "substeps per unit time");
    add<std::string>(app, "--scheme", "scheme", "exact-step2 or stratonovich-heun");
    add<int>(app, "--threads", "threads", "worker threads (default: CARNOT_THREADS or 1)");
  }

  Json resolve() {
    for (auto& f : apply) f();
    return config;
  }
};

struct RunOutput {
  Json report;
  carnot_verdict verdict;
};

RunOutput run(const std::string& command, const Json& config) {
  char* text = nullptr;
  carnot_verdict verdict = CARNOT_VERDICT_FAIL;
  check(carnot_run(command.c_str(), config.dump().c_str(), &text, &verdict));
  RunOutput out{Json::parse(text), verdict};
  carnot_free_string(text);
  return out;
}

int exit_code(carnot_verdict v) {
  return v == CARNOT_VERDICT_PASS ? 0 : (v == CARNOT_VERDICT_WARN ? 2 : 1);
}

void write_certificates(const RunOutput& r, const std::string& out_path, const std::string& summary_path) {
  Output out(out_path);
  out.get() << Json{{"config", r.report["config"]}}.dump() << "\n";
  if (r.report.contains("lambda_computation"))
    out.get() << Json{{"lambda_computation", r.report["lambda_computation"]}}.dump() << "\n";
  for (const auto& c : r.report["certificates"]) out.get() << c.dump() << "\n";
  out.get() << Json{{"summary", r.report["summary"]}}.dump() << "\n";
  if (summary_path.empty()) return;
  Output summary(summary_path);
  summary.get() << "case,kind,input,t,lhs,rhs,slack,pass\n";
  std::size_t id = 0;
  for (const auto& c : r.report["certificates"]) {
    summary.get() << id++ << ',' << c["kind"].get<std::string>() << ',' << csv_field(c["input"].get<std::string>())
                  << ',' << (c["t"].is_null() ? std::string() : fmt(c["t"].get<double>())) << ','
                  << fmt(c["lhs"].get<double>()) << ',' << fmt(c["rhs"].get<double>()) << ','
                  << fmt(c["slack"].get<double>()) << ',' << (c["pass"].get<bool>() ? "true" : "false") << "\n";
  }
}

void write_lambda_csv(const Json& r, std::ostream& os) {
  const int d = r["d"].get<int>();
  os << "group,Q,d,lambda,lambda_error,trace,trace_target,lower,upper,pass";
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) os << ",M" << i + 1 << j + 1;
  for (int i = 0; i < d; ++i) os << ",a" << i + 1;
  os << "\n" << csv_field(r["group"].get<std::string>()) << ',' << r["Q"].get<int>() << ',' << d << ','
     << fmt(r["lambda"].get<double>()) << ',' << fmt(r["errors"]["lambda"].get<double>()) << ','
     << fmt(r["trace"].get<double>()) << ',' << fmt(r["trace_target"].get<double>()) << ','
     << fmt(r["bounds"]["lower"].get<double>()) << ',' << fmt(r["bounds"]["upper"].get<double>()) << ','
     << (r["bounds"]["pass"].get<bool>() ? "true" : "false");
  for (const auto& row : r["M"])
    for (const auto& v : row) os << ',' << fmt(v.get<double>());
  for (const auto& v : r["top_vector"]) os << ',' << fmt(v.get<double>());
  os << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carnot-lab: heat kernels, sharp constants and functional inequalities on Carnot groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(carnot_version()));

  std::string group = "heisenberg-1";
  std::string out_path, summary_path, emit = "json";
  auto add_common = [&](CLI::App* sub, Flags& flags) {
    sub->add_option("--group", group, "preset name or path to a JSON group spec");
    sub->add_option("--out", out_path, "output file (default stdout)");
    (void)flags;
  };

  // lambda
  Flags lambda_flags;
  CLI::App* lambda = app.add_subcommand("lambda", "matrix M and the sharp constant Lambda");
  add_common(lambda, lambda_flags);
  lambda_flags.add<std::string>(lambda, "--method", "method", "mc or quad");
  lambda_flags.add_mc(lambda);
  lambda_flags.add<int>(lambda, "--level", "level", "quadrature refinement level");
  bool no_probe = false;
  lambda->add_flag("--no-probe", no_probe, "skip the sharpness probe");
  lambda->add_option("--emit", emit, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // trace-check
  Flags trace_flags;
  CLI::App* trace = app.add_subcommand("trace-check", "E[Gamma(ln p_t)] against Q / 2t");
  add_common(trace, trace_flags);
  trace_flags.add<double>(trace, "--t", "t", "time");
  trace_flags.add<std::string>(trace, "--method", "method", "mc or quad");
  trace_flags.add_mc(trace);
  trace_flags.add<int>(trace, "--level", "level", "quadrature refinement level");

  // kernel eval
  CLI::App* kernel = app.add_subcommand("kernel", "heat kernel evaluation");
  kernel->require_subcommand(1);
  CLI::App* keval = kernel->add_subcommand("eval", "CSV of p_t, right log-gradient and PDE residual");
  keval->add_option("--group", group, "preset name or path to a JSON group spec");
  keval->add_option("--out", out_path, "output file (default stdout)");
  std::string kt = "1";
  std::vector<std::string> kpoints;
  std::string kgrid;
  keval->add_option("--t", kt, "time or comma-separated times");
  keval->add_option("--point", kpoints, "comma-separated coordinates (repeatable)");
  keval->add_option("--grid", kgrid, "lo,hi,count: tensor grid in every coordinate");

  // simulate
  Flags sim_flags;
  CLI::App* sim = app.add_subcommand("simulate", "endpoints of the diffusion as CSV");
  add_common(sim, sim_flags);
  double sim_t = 1.0;
  sim->add_option("--t", sim_t, "time");
  std::uint64_t sim_seed = 1, sim_samples = 1000;
  int sim_substeps = 200, sim_threads = 0;
  std::string sim_scheme = "stratonovich-heun";
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--samples", sim_samples, "number of endpoints");
  sim->add_option("--substeps", sim_substeps, "substeps per unit time");
  sim->add_option("--scheme", sim_scheme, "exact-step2 or stratonovich-heun")
      ->check(CLI::IsMember({"exact-step2", "stratonovich-heun"}));
  sim->add_option("--threads", sim_threads, "worker threads");

  // rp-check
  Flags rp_flags;
  CLI::App* rp = app.add_subcommand("rp-check", "reverse Poincare certificates");
  add_common(rp, rp_flags);
  rp->add_option("--summary", summary_path, "summary CSV path");
  rp_flags.add<std::string>(rp, "--route", "route", "exact or mc");
  rp_flags.add_list(rp, "--t", "t", "comma-separated times");
  rp_flags.add_lambda(rp);
  rp_flags.add<std::size_t>(rp, "--corpus", "corpus", "number of random polynomials");
  rp_flags.add<int>(rp, "--max-degree", "max_degree", "largest homogeneous degree");
  rp_flags.add<std::size_t>(rp, "--points", "points", "number of sample points g");
  rp_flags.add<double>(rp, "--radius", "radius", "coordinate range of the points");
  rp_flags.add<std::uint64_t>(rp, "--corpus-seed", "corpus_seed", "seed of the polynomial corpus");
  rp_flags.add_mc(rp);

  // pp-check
  Flags pp_flags;
  CLI::App* pp = app.add_subcommand("pp-check", "L1 pseudo-Poincare certificate for the bump");
  add_common(pp, pp_flags);
  pp->add_option("--summary", summary_path, "summary CSV path");
  pp_flags.add_list(pp, "--t", "t", "comma-separated times");
  pp_flags.add_lambda(pp);
  pp_flags.add_list(pp, "--radius", "radius", "bump half-widths, one per coordinate");
  pp_flags.add<int>(pp, "--panels", "panels", "quadrature panels per axis");
  pp_flags.add<int>(pp, "--nodes", "nodes", "Gauss-Legendre nodes per panel");
  pp_flags.add<double>(pp, "--padding", "padding", "relative padding of the support box");
  pp_flags.add_mc(pp);

  // iso-check
  Flags iso_flags;
  CLI::App* iso = app.add_subcommand("iso-check", "isoperimetric certificates on boxes");
  add_common(iso, iso_flags);
  iso->add_option("--summary", summary_path, "summary CSV path");
  iso_flags.add_list(iso, "--cubes", "cubes", "comma-separated cube half-widths");
  std::vector<std::string> iso_boxes;
  iso->add_option("--box", iso_boxes, "comma-separated half-widths (repeatable)");
  iso_flags.add<double>(iso, "--dilation", "dilation", "dilation factor for the invariance check");
  iso_flags.add<double>(iso, "--rel-tol", "rel_tol", "perimeter cubature tolerance");
  iso_flags.add_lambda(iso);

  // identities
  Flags id_flags;
  CLI::App* ids = app.add_subcommand("identities", "polynomial lemma suite and kernel PDE residuals");
  add_common(ids, id_flags);
  id_flags.add<std::size_t>(ids, "--corpus", "corpus", "number of random polynomials");
  id_flags.add<int>(ids, "--max-degree", "max_degree", "largest homogeneous degree");
  id_flags.add<std::uint64_t>(ids, "--corpus-seed", "corpus_seed", "seed of the polynomial corpus");
  id_flags.add_list(ids, "--t", "t", "comma-separated times");
  id_flags.add_list(ids, "--scales", "scales", "dilation scales c");
  id_flags.add<std::size_t>(ids, "--ad-points", "ad_points", "points for the Ad lemma");
  id_flags.add<double>(ids, "--tolerance", "tolerance", "residual tolerance");

  // bias
  Flags bias_flags;
  CLI::App* bias = app.add_subcommand("bias", "Richardson bias diagnostic of the simulation scheme");
  add_common(bias, bias_flags);
  bias_flags.add<double>(bias, "--t", "t", "time");
  bias_flags.add_mc(bias);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    auto with_group = [&](Flags& f) {
      Json cfg = f.resolve();
      Json out = Json::object();
      out["group"] = group;
      for (auto& [k, v] : cfg.items()) out[k] = v;
      return out;
    };

    if (lambda->parsed()) {
      Json cfg = with_group(lambda_flags);
      if (no_probe) cfg["probe"] = false;
      const RunOutput r = run("lambda", cfg);
      Output out(out_path);
      if (emit == "csv")
        write_lambda_csv(r.report, out.get());
      else
        out.get() << r.report.dump(2) << "\n";
      return exit_code(r.verdict);
    }
    if (trace->parsed()) {
      const RunOutput r = run("trace-check", with_group(trace_flags));
      Output(out_path).get() << r.report.dump(2) << "\n";
      return exit_code(r.verdict);
    }
    if (ids->parsed()) {
      const RunOutput r = run("identities", with_group(id_flags));
      Output(out_path).get() << r.report.dump(2) << "\n";
      return exit_code(r.verdict);
    }
    if (bias->parsed()) {
      const RunOutput r = run("bias", with_group(bias_flags));
      Output(out_path).get() << r.report.dump(2) << "\n";
      return exit_code(r.verdict);
    }
    if (rp->parsed() || pp->parsed()) {
      const bool is_rp = rp->parsed();
      const RunOutput r = run(is_rp ? "rp-check" : "pp-check", with_group(is_rp ? rp_flags : pp_flags));
      write_certificates(r, out_path, summary_path);
      return exit_code(r.verdict);
    }
    if (iso->parsed()) {
      Json cfg = with_group(iso_flags);
      if (!iso_boxes.empty()) {
        Json boxes = Json::array();
        for (const auto& b : iso_boxes) boxes.push_back(parse_list(b));
        cfg["boxes"] = boxes;
      }
      const RunOutput r = run("iso-check", cfg);
      write_certificates(r, out_path, summary_path);
      return exit_code(r.verdict);
    }
    if (sim->parsed()) {
      const Group g(group);
      carnot_mc_options opt;
      carnot_mc_options_default(&opt);
      opt.seed = sim_seed;
      opt.samples = sim_samples;
      opt.substeps = sim_substeps;
      opt.scheme = sim_scheme == "exact-step2" ? 1 : 0;
      opt.threads = sim_threads;
      carnot_batch* batch = nullptr;
      check(carnot_simulate(g.ptr, sim_t, &opt, &batch));
      std::unique_ptr<carnot_batch, void (*)(carnot_batch*)> hold(batch, carnot_batch_free);
      Output out(out_path);
      const Json cfg = {{"group", group}, {"t", sim_t}, {"seed", sim_seed}, {"samples", sim_samples},
                        {"substeps", sim_substeps}, {"scheme", sim_scheme}, {"threads", sim_threads}};
      out.get() << "# config " << cfg.dump() << "\n";
      const int n = carnot_batch_dim(batch);
      out.get() << "sample";
      for (int a = 0; a < n; ++a) out.get() << ",x" << a + 1;
      out.get() << "\n";
      const double* data = carnot_batch_data(batch);
      for (std::size_t k = 0; k < carnot_batch_size(batch); ++k) {
        out.get() << k;
        for (int a = 0; a < n; ++a) out.get() << ',' << fmt(data[k * n + a]);
        out.get() << "\n";
      }
      return 0;
    }
    if (keval->parsed()) {
      const Group g(group);
      const Kernel k(g);
      const int n = carnot_group_dim(g.ptr);
      const int d = carnot_group_horizontal_dim(g.ptr);
      std::vector<std::vector<double>> pts;
      for (const auto& p : kpoints) pts.push_back(parse_list(p));
      if (!kgrid.empty()) {
        const auto spec = parse_list(kgrid);
        if (spec.size() != 3 || spec[2] < 1) throw Failure{"--grid expects lo,hi,count"};
        const int m = static_cast<int>(spec[2]);
        std::vector<double> axis(m);
        for (int i = 0; i < m; ++i) axis[i] = m == 1 ? spec[0] : spec[0] + (spec[1] - spec[0]) * i / (m - 1);
        std::vector<int> idx(n, 0);
        while (true) {
          std::vector<double> p(n);
          for (int a = 0; a < n; ++a) p[a] = axis[idx[a]];
          pts.push_back(p);
          int a = n - 1;
          while (a >= 0 && ++idx[a] == m) idx[a--] = 0;
          if (a < 0) break;
        }
      }
      if (pts.empty()) pts.push_back(std::vector<double>(n, 0.0));
      Output out(out_path);
      out.get() << "# config " << Json{{"group", group}, {"t", parse_list(kt)}}.dump() << "\n";
      out.get() << "t";
      for (int a = 0; a < n; ++a) out.get() << ",x" << a + 1;
      out.get() << ",p";
      for (int i = 0; i < d; ++i) out.get() << ",dlogp_right" << i + 1;
      out.get() << ",pde_residual\n";
      bool warned = false;
      for (double t : parse_list(kt)) {
        for (const auto& p : pts) {
          if (static_cast<int>(p.size()) != n) throw Failure{"point has the wrong number of coordinates"};
          double value = NAN, residual = NAN;
          std::vector<double> grad(d, NAN);
          const carnot_status s = carnot_kernel_value(k.ptr, t, p.data(), &value);
          if (s == CARNOT_OK) {
            check(carnot_kernel_log_gradient(k.ptr, t, p.data(), grad.data()));
            check(carnot_kernel_pde_residual(k.ptr, t, p.data(), &residual));
          } else if (s == CARNOT_ERR_NUMERICAL_UNDERFLOW) {
            warned = true;
            std::cerr << "warning: " << carnot_last_error() << "\n";
          } else {
            check(s);
          }
          out.get() << fmt(t);
          for (double x : p) out.get() << ',' << fmt(x);
          out.get() << ',' << fmt(value);
          for (double x : grad) out.get() << ',' << fmt(x);
          out.get() << ',' << fmt(residual) << "\n";
        }
      }
      return warned ? 2 : 0;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
