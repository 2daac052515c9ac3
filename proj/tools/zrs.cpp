// Command line driver: point evaluation, counting reports, and the named
// invariant suites, with json/csv/text output and stable exit codes.
//
//   0  success, all checks passed
//   1  a verify check failed or an internal invariant broke
//   2  usage error or invalid input (bad flags, bad point, bad rational)
//   3  numerical breakdown inside a kernel
//
// Options live on each subcommand so `verify --suite all --precision
// extended` parses the way it reads. ZRS_PRECISION overrides the default
// backend when the flag is absent.

#include <chrono>
#include <cstdio>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zrs/verify.hpp"

namespace {

constexpr const char* kVersion = "0.3.1";

struct RunConfig {
  std::string precision = "double";
  std::string output = "json";
  int threads = 1;
  unsigned seed = 20240917;
  std::map<std::string, double> tol_overrides;
};

// p/q stays exact in either backend; a bare number is taken as written.
struct Rational {
  bool exact = false;
  long long p = 0, q = 1;
  double approx = 0;
};

Rational parse_rational(const std::string& text) {
  Rational out;
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      size_t ep = 0, eq = 0;
      out.p = std::stoll(text.substr(0, slash), &ep);
      out.q = std::stoll(text.substr(slash + 1), &eq);
      if (ep != slash || eq != text.size() - slash - 1 || out.q <= 0)
        throw std::invalid_argument("");
      out.exact = true;
      out.approx = double(out.p) / double(out.q);
    } else {
      size_t ep = 0;
      out.approx = std::stod(text, &ep);
      if (ep != text.size()) throw std::invalid_argument("");
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a rational like 1/3 or a number, got '" +
                                text + "'");
  }
  return out;
}

// a+bi with either part optional: 0+2i, 1.5, -0.3+2i, 2i, 0.5-1.2i.
zrs::cplx parse_complex(const std::string& text) {
  const std::string bad = "expected a complex number like 0.5+1.2i, got '" + text + "'";
  std::string s = text;
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw std::invalid_argument(bad);
  try {
    if (s.back() != 'i') {
      size_t ep = 0;
      const double re = std::stod(s, &ep);
      if (ep != s.size()) throw std::invalid_argument("");
      return zrs::cplx(re, 0);
    }
    s.pop_back();
    if (s.empty() || s == "+" || s == "-")
      return zrs::cplx(0, s == "-" ? -1 : 1);
    // Split at the sign that starts the imaginary part (not a leading sign,
    // not an exponent sign).
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
      if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) {
      size_t ep = 0;
      const double im = std::stod(s, &ep);
      if (ep != s.size()) throw std::invalid_argument("");
      return zrs::cplx(0, im);
    }
    size_t ep = 0, eq = 0;
    const double re = std::stod(s.substr(0, split), &ep);
    std::string imtext = s.substr(split);
    if (imtext == "+") imtext = "1";
    if (imtext == "-") imtext = "-1";
    const double im = std::stod(imtext, &eq);
    if (ep != split || eq != imtext.size()) throw std::invalid_argument("");
    return zrs::cplx(re, im);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(bad);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument(bad);
  }
}

std::map<std::string, double> parse_tol_overrides(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& item : raw) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("expected --tol name=value, got '" + item + "'");
    const double v = std::stod(item.substr(eq + 1));
    if (!(v > 0)) throw std::invalid_argument("tolerance overrides must be positive");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json j{{"version", kVersion},
                   {"precision", cfg.precision},
                   {"output", cfg.output},
                   {"threads", cfg.threads},
                   {"seed", cfg.seed}};
  j["tol_overrides"] = nlohmann::json::object();
  for (const auto& [k, v] : cfg.tol_overrides) j["tol_overrides"][k] = v;
  return j;
}

void emit(const RunConfig& cfg, const std::string& command,
          const nlohmann::json& results, double wall_ms) {
  if (cfg.output == "json") {
    nlohmann::json report{{"command", command},
                          {"config", config_json(cfg)},
                          {"results", results},
                          {"wall_time_ms", wall_ms}};
    std::printf("%s\n", report.dump(2).c_str());
    return;
  }
  if (cfg.output == "csv") {
    std::printf("name,value,residual,tolerance,status\n");
    for (const auto& r : results) {
      std::string value;
      if (r.contains("value")) {
        value = r["value"].dump();
      } else if (r.contains("values")) {
        for (auto it = r["values"].begin(); it != r["values"].end(); ++it)
          value += (value.empty() ? "" : ";") + it.key() + "=" + it.value().dump();
        value = "\"" + value + "\"";
      }
      std::printf("%s,%s,%s,%s,%s\n", r["name"].get<std::string>().c_str(),
                  value.c_str(),
                  r.contains("residual") ? r["residual"].dump().c_str() : "",
                  r.contains("tolerance") ? r["tolerance"].dump().c_str() : "",
                  r["status"].get<std::string>().c_str());
    }
    return;
  }
  std::printf("%s (%s backend, %.1f ms)\n", command.c_str(), cfg.precision.c_str(),
              wall_ms);
  for (const auto& r : results) {
    std::string line = "  " + r["name"].get<std::string>();
    if (r.contains("value")) line += " = " + r["value"].dump();
    if (r.contains("values")) line += " " + r["values"].dump();
    if (r.contains("residual"))
      line += "  residual " + r["residual"].dump() + " vs " +
              (r.contains("tolerance") ? r["tolerance"].dump() : "-");
    line += "  [" + r["status"].get<std::string>() + "]";
    std::printf("%s\n", line.c_str());
  }
}

struct EvalArgs {
  std::string what;
  int n = 1;
  long long N = 0;
  std::string r_text, s_text, tau_text;
};

template <class C>
nlohmann::json eval_results(const EvalArgs& a) {
  using zrs::to_double;
  const zrs::cplx tau_d = parse_complex(a.tau_text);
  const auto tau = zrs::make_tau(C(tau_d.real(), tau_d.imag()));

  auto coord = [](const std::string& text, const char* which) {
    if (text.empty())
      throw std::invalid_argument(std::string("--") + which +
                                  " is required for this evaluation");
    const Rational v = parse_rational(text);
    return v.exact ? C(double(v.p)) / C(double(v.q)) : C(v.approx);
  };

  nlohmann::json results = nlohmann::json::array();
  auto push_complex = [&](const std::string& name, const C& z,
                          nlohmann::json extra = {}) {
    nlohmann::json values{{"re", to_double(zrs::re_part(z))},
                          {"im", to_double(zrs::im_part(z))}};
    for (auto it = extra.begin(); it != extra.end(); ++it)
      values[it.key()] = it.value();
    results.push_back({{"name", name}, {"values", values}, {"status", "ok"}});
  };

  if (a.what == "M") {
    if (a.N < 3) throw std::invalid_argument("--N >= 3 is required for --what M");
    const auto pv = zrs::m_product(a.n, static_cast<int>(a.N), tau);
    push_complex("M", pv.value,
                 {{"log_abs", to_double(pv.log_abs)},
                  {"factor_count", pv.factor_count}});
    return results;
  }

  const auto pt = zrs::make_point(coord(a.r_text, "r"), coord(a.s_text, "s"));
  if (a.what == "Z") {
    const auto zv = zrs::z_n(a.n, pt, tau);
    push_complex("Z", zv.value, {{"weight", zv.weight}});
  } else if (a.what == "lambda" || a.what == "mu") {
    const auto sm = zrs::pvi_sample(a.n, pt, tau);
    push_complex(a.what, a.what == "lambda" ? sm.lambda : sm.mu,
                 {{"t_re", to_double(zrs::re_part(sm.t))},
                  {"t_im", to_double(zrs::im_part(sm.t))}});
  } else if (a.what == "wp_p") {
    const auto ld = zrs::lattice_data(tau);
    const C z = pt.r + pt.s * ld.tau;
    push_complex("wp", zrs::wp(z, ld));
    push_complex("wp_prime", zrs::wp_prime(z, ld));
  } else {
    throw std::invalid_argument("unknown --what '" + a.what + "'");
  }
  return results;
}

nlohmann::json count_results(int n, long long N) {
  const auto r = zrs::count_L(n, N);
  nlohmann::json values{{"n", r.n},
                        {"N", r.N},
                        {"phi_N", r.phi_N},
                        {"phi_halfN", r.phi_halfN},
                        {"psi_N", r.psi_N},
                        {"eps", r.eps},
                        {"a_n", r.a_n},
                        {"b_n", r.b_n},
                        {"L", r.ell_degree_pred},
                        {"PL", zrs::count_PL(n, N)},
                        {"v_inf_pred", r.v_inf_pred}};
  if (r.k_nN.denominator() == 1)
    values["delta_power"] = r.k_nN.numerator();
  else
    values["delta_power"] = std::to_string(r.k_nN.numerator()) + "/" +
                            std::to_string(r.k_nN.denominator());
  return nlohmann::json::array(
      {{{"name", "count"}, {"values", values}, {"status", "ok"}}});
}

nlohmann::json verify_results(const std::string& suite, const zrs::SuiteOptions& opts,
                              const RunConfig& cfg, bool* all_pass) {
  std::vector<zrs::CheckResult> checks;
  if (suite == "all" && cfg.threads > 1) {
    std::vector<std::future<std::vector<zrs::CheckResult>>> parts;
    for (const auto& s : zrs::suite_names()) {
      if (s == "all") continue;
      parts.push_back(std::async(std::launch::async, [s, opts] {
        auto part = zrs::run_suite(s, opts);
        for (auto& r : part) r.name = s + ": " + r.name;
        return part;
      }));
    }
    for (auto& f : parts) {
      auto part = f.get();
      checks.insert(checks.end(), part.begin(), part.end());
    }
  } else {
    checks = zrs::run_suite(suite, opts);
  }

  // Overrides re-judge the named checks; floor checks keep their direction.
  for (auto& c : checks) {
    const auto it = cfg.tol_overrides.find(c.name);
    if (it == cfg.tol_overrides.end()) continue;
    c.tolerance = it->second;
    const bool floor = c.note.rfind("floor check", 0) == 0;
    c.pass = floor ? c.value > c.tolerance : c.value < c.tolerance;
  }

  nlohmann::json results = nlohmann::json::array();
  *all_pass = true;
  for (const auto& c : checks) {
    *all_pass = *all_pass && c.pass;
    nlohmann::json entry{{"name", c.name},
                         {"residual", c.value},
                         {"tolerance", c.tolerance},
                         {"status", c.pass ? "pass" : "fail"}};
    if (!c.note.empty()) entry["note"] = c.note;
    results.push_back(entry);
  }
  return results;
}

void add_common(CLI::App* sub, RunConfig& cfg, std::vector<std::string>& tol_raw) {
  sub->add_option("--precision", cfg.precision, "numeric backend")
      ->check(CLI::IsMember({"double", "extended"}))
      ->envname("ZRS_PRECISION");
  sub->add_option("--output", cfg.output, "report format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--threads", cfg.threads, "worker pool size")
      ->check(CLI::Range(1, 16));
  sub->add_option("--seed", cfg.seed, "seed for randomized suites");
  sub->add_option("--tol", tol_raw, "tolerance override name=value")
      ->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pre-modular form toolkit: evaluation, counting, verification"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> tol_raw;
  EvalArgs ev;
  int count_n = 1;
  long long count_N = 3;
  std::string suite = "all";
  zrs::SuiteOptions sopts;

  auto* eval_cmd = app.add_subcommand("eval", "evaluate one quantity at a point");
  eval_cmd->add_option("--what", ev.what, "Z, lambda, mu, wp_p, or M")
      ->required()
      ->check(CLI::IsMember({"Z", "lambda", "mu", "wp_p", "M"}));
  eval_cmd->add_option("--n", ev.n, "level");
  eval_cmd->add_option("--N", ev.N, "torsion order (for M)");
  eval_cmd->add_option("--r", ev.r_text, "first coordinate, rational p/q");
  eval_cmd->add_option("--s", ev.s_text, "second coordinate, rational p/q");
  eval_cmd->add_option("--tau", ev.tau_text, "modulus a+bi")->required();
  add_common(eval_cmd, cfg, tol_raw);

  auto* count_cmd = app.add_subcommand("count", "zero-count report for a level pair");
  count_cmd->add_option("--n", count_n, "level")->required();
  count_cmd->add_option("--N", count_N, "torsion order")->required();
  add_common(count_cmd, cfg, tol_raw);

  auto* verify_cmd = app.add_subcommand("verify", "run a named invariant suite");
  verify_cmd->add_option("--suite", suite, "suite name or 'all'")
      ->required()
      ->check(CLI::IsMember(zrs::suite_names()));
  verify_cmd->add_option("--n-max", sopts.n_max, "level cap for the suites");
  verify_cmd->add_option("--samples", sopts.samples, "sample count override");
  add_common(verify_cmd, cfg, tol_raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    cfg.tol_overrides = parse_tol_overrides(tol_raw);
    nlohmann::json results;
    std::string command;
    bool all_pass = true;

    if (eval_cmd->parsed()) {
      command = "eval " + ev.what;
      results = cfg.precision == "extended" ? eval_results<zrs::cplx120>(ev)
                                            : eval_results<zrs::cplx>(ev);
    } else if (count_cmd->parsed()) {
      command = "count";
      results = count_results(count_n, count_N);
    } else {
      command = "verify " + suite;
      sopts.extended = cfg.precision == "extended";
      sopts.seed = cfg.seed;
      results = verify_results(suite, sopts, cfg, &all_pass);
    }

    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    emit(cfg, command, results, ms);
    return all_pass ? 0 : 1;
  } catch (const zrs::invalid_point& e) {
    std::fprintf(stderr, "invalid point: %s\n", e.what());
    return 2;
  } catch (const zrs::numerical_breakdown& e) {
    std::fprintf(stderr, "numerical breakdown: %s\n", e.what());
    return 3;
  } catch (const zrs::error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
