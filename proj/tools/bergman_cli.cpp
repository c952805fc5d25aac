// bergman: batch front end for the monomial-norm and Hankel diagnostics.
//
// Exit status: 0 success, 1 a validation or acceptance check failed,
// 2 invalid flags or arguments, 3 any other failure.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bergman.hpp"

namespace {

using bergman::DomainSpec;
using bergman::MultiIndex;
using bergman::io::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFailure = 3;

struct RunConfig {
  std::string command;
  std::string domain = "disc";
  std::string alpha;
  std::string gamma;
  std::optional<std::uint32_t> N;
  std::string N_grid;
  double tol = 1e-10;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string output = "-";
  std::string kind = "diagonal";
  std::string method = "quadrature";
  std::string symbol_file;
  std::optional<std::uint32_t> max_order;
  unsigned threads = 0;
  bool no_timestamp = false;
};

/// Table form of a result for CSV, alongside the JSON form.
struct Result {
  json body;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int status = kExitOk;
};

std::string num(double v) { return bergman::io::format_machine(v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

// Flag parsers that name the offending flag.
template <typename F>
auto flag(const char* name, F parse) {
  try {
    return parse();
  } catch (const bergman::error& e) {
    throw bergman::usage_error(std::string(name) + ": " + e.what());
  }
}

DomainSpec domain_of(const RunConfig& c) {
  return flag("--domain", [&] { return DomainSpec::parse(c.domain); });
}

MultiIndex index_of(const char* name, const std::string& text, const DomainSpec& d) {
  if (text.empty()) throw bergman::usage_error(std::string(name) + " is required for this command");
  return flag(name, [&] {
    MultiIndex m = MultiIndex::parse(text);
    d.require_dimension(m, name + 2);
    return m;
  });
}

std::vector<std::uint32_t> grid_of(const RunConfig& c) {
  if (c.N) return {*c.N};
  if (c.N_grid.empty()) throw bergman::usage_error("--N or --N-grid is required for this command");
  return flag("--N-grid", [&] { return bergman::io::parse_grid(c.N_grid); });
}

bergman::SymbolCoefficients symbol_of(const RunConfig& c, std::size_t dimension) {
  if (c.symbol_file.empty()) throw bergman::usage_error("--symbol-file is required for this command");
  std::ifstream in(c.symbol_file);
  if (!in) throw bergman::usage_error("--symbol-file: cannot open '" + c.symbol_file + "'");
  return flag("--symbol-file", [&] { return bergman::SymbolCoefficients::parse(in, dimension); });
}

bergman::ExecOptions exec_of(const RunConfig& c) { return {c.threads, 4096}; }

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["domain"] = domain_of(c).to_string();
  j["alpha"] = c.alpha.empty() ? json(nullptr) : json(c.alpha);
  j["gamma"] = c.gamma.empty() ? json(nullptr) : json(c.gamma);
  j["N"] = c.N ? json(*c.N) : json(nullptr);
  j["N_grid"] = c.N_grid.empty() ? json(nullptr) : json(c.N_grid);
  j["tol"] = c.tol;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["output"] = c.output;
  j["kind"] = c.kind;
  j["method"] = c.method;
  j["symbol_file"] = c.symbol_file.empty() ? json(nullptr) : json(c.symbol_file);
  j["max_order"] = c.max_order ? json(*c.max_order) : json(nullptr);
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_trace(Result& r, const bergman::SeriesTrace& t) {
  r.body = bergman::io::to_json(t);
  if (t.points.size() == 1) r.body["value"] = t.points.front().value;
  r.header = {"N", "value", "alpha", "domain", "kind"};
  for (const auto& p : t.points)
    r.rows.push_back({std::to_string(p.N), num(p.value), t.alpha.to_string(), t.domain_key,
                      std::string(bergman::to_string(t.kind))});
}

////////////////////////////////////////////////////////////////////////////////
//
// commands
//
////////////////////////////////////////////////////////////////////////////////

Result cmd_norms(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  std::vector<MultiIndex> gammas;
  if (c.max_order) {
    gammas = bergman::enumerate_up_to_order(d.dimension(), *c.max_order);
  } else {
    gammas.push_back(index_of("--gamma", c.gamma, d));
  }
  bergman::NormCache cache;
  const auto cache_path = bergman::NormCache::environment_path();
  if (cache_path) cache.load(*cache_path);

  Result r;
  r.header = {"gamma", "log_c_squared", "c_squared"};
  json values = json::array();
  for (const auto& g : gammas) {
    const auto v = cache.get_or_compute(d, g);
    values.push_back({{"gamma", g.to_string()}, {"log_c_squared", v.log_c_squared}, {"c_squared", v.c_squared()}});
    r.rows.push_back({g.to_string(), num(v.log_c_squared), num(v.c_squared())});
  }
  if (cache_path) cache.save(*cache_path);
  r.body = gammas.size() == 1 ? values.front() : json{{"norms", values}};
  return r;
}

Result cmd_ratio(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  const MultiIndex g = index_of("--gamma", c.gamma, d);
  const MultiIndex a = index_of("--alpha", c.alpha, d);
  const double lr = bergman::log_ratio(d, g, a);
  const double row = bergman::hankel_row_norm_squared(d, g, a);
  Result r;
  r.body = {{"gamma", g.to_string()},
            {"alpha", a.to_string()},
            {"log_ratio", lr},
            {"ratio", std::exp(lr)},
            {"row_norm_squared", row}};
  r.header = {"gamma", "alpha", "log_ratio", "ratio", "row_norm_squared"};
  r.rows.push_back({g.to_string(), a.to_string(), num(lr), num(std::exp(lr)), num(row)});
  return r;
}

Result cmd_s_alpha(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  Result r;
  add_trace(r, bergman::s_alpha_trace(d, index_of("--alpha", c.alpha, d), grid_of(c), exec_of(c)));
  return r;
}

Result cmd_diagonal(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  Result r;
  add_trace(r, bergman::diagonal_trace(d, index_of("--alpha", c.alpha, d), grid_of(c), exec_of(c)));
  return r;
}

Result cmd_hs_norm(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  const auto f = symbol_of(c, d.dimension());
  Result r;
  r.header = {"N", "hs_norm_squared"};
  json points = json::array();
  for (std::uint32_t N : grid_of(c)) {
    const double v = bergman::hs_norm_squared_partial(d, f, N, exec_of(c));
    points.push_back({{"N", N}, {"value", v}});
    r.rows.push_back({std::to_string(N), num(v)});
  }
  r.body = {{"domain", d.to_string()}, {"terms", f.terms().size()}, {"points", points}};
  return r;
}

Result cmd_divergence(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  const MultiIndex a = index_of("--alpha", c.alpha, d);
  const auto grid = grid_of(c);
  const auto trace = c.kind == "partial" ? bergman::s_alpha_trace(d, a, grid, exec_of(c))
                                         : bergman::diagonal_trace(d, a, grid, exec_of(c));
  const auto report = flag("--N-grid", [&] { return bergman::divergence_fit(trace); });
  Result r;
  add_trace(r, trace);
  r.body["fit"] = bergman::io::to_json(report);
  r.header = {"N", "value", "verdict", "slope", "r_squared"};
  for (auto& row : r.rows) {
    row.resize(2);
    row.push_back(std::string(bergman::to_string(report.verdict)));
    row.push_back(num(report.slope));
    row.push_back(num(report.r_squared));
  }
  return r;
}

Result cmd_disc_dirichlet(const RunConfig& c) {
  const auto f = symbol_of(c, 1);
  const auto check = bergman::disc_dirichlet_check(f);
  Result r;
  r.body = {{"hs_limit", check.hs_limit},
            {"dirichlet_over_pi", check.dirichlet_over_pi},
            {"difference", check.hs_limit - check.dirichlet_over_pi}};
  r.header = {"hs_limit", "dirichlet_over_pi", "difference"};
  r.rows.push_back({num(check.hs_limit), num(check.dirichlet_over_pi), num(check.hs_limit - check.dirichlet_over_pi)});
  return r;
}

Result cmd_dbar(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  if (!c.N) throw bergman::usage_error("--N is required for dbar");
  Result r;
  r.header = {"j", "N", "s_alpha_partial"};
  json entries = json::array();
  for (const auto& [j, v] : bergman::dbar_solution_hs_diagnostic(d, *c.N, exec_of(c))) {
    entries.push_back({{"j", j}, {"value", v}});
    r.rows.push_back({std::to_string(j), std::to_string(*c.N), num(v)});
  }
  r.body = {{"N", *c.N}, {"entries", entries}};
  return r;
}

Result cmd_oracle(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  const MultiIndex g = index_of("--gamma", c.gamma, d);
  const auto est = c.method == "monte-carlo" ? bergman::monte_carlo_c_squared(d, g, c.samples, c.seed, exec_of(c))
                                             : bergman::radial_quadrature_c_squared(d, g, c.tol);
  const double closed = bergman::log_c_squared(d, g).c_squared();
  Result r;
  r.body = bergman::io::to_json(est);
  r.body["gamma"] = g.to_string();
  r.body["closed_form"] = closed;
  r.header = {"gamma", "value", "abs_error", "method", "sample_count", "seed", "closed_form"};
  r.rows.push_back({g.to_string(), num(est.value), num(est.abs_error), std::string(bergman::to_string(est.method)),
                    std::to_string(est.sample_count), std::to_string(est.seed), num(closed)});
  return r;
}

/// Closed forms against every oracle that supports the domain.
Result cmd_validate(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  const std::size_t n = d.dimension();
  const std::uint32_t max_order = c.max_order.value_or(6);
  Result r;
  r.header = {"check", "gamma", "alpha", "expected", "observed", "tolerance", "passed"};
  json checks = json::array();
  json skipped = json::array();
  bool all_ok = true;
  auto record = [&](const std::string& check, const std::string& g, const std::string& a, double expected,
                    double observed, double tolerance) {
    const bool ok = std::abs(expected - observed) <= tolerance;
    all_ok = all_ok && ok;
    checks.push_back({{"check", check},
                      {"gamma", g},
                      {"alpha", a},
                      {"expected", expected},
                      {"observed", observed},
                      {"tolerance", tolerance},
                      {"passed", ok}});
    r.rows.push_back({check, g, a, num(expected), num(observed), num(tolerance), ok ? "true" : "false"});
  };

  const auto gammas = bergman::enumerate_up_to_order(n, max_order);
  try {
    for (const auto& g : gammas) {
      const double exact = bergman::log_c_squared(d, g).c_squared();
      const auto q = bergman::radial_quadrature_c_squared(d, g, std::max(c.tol, 1e-12));
      record("quadrature", g.to_string(), "", exact, q.value, 1e-8 * exact);
    }
    for (const auto& g : bergman::enumerate_up_to_order(n, std::min<std::uint32_t>(max_order, 4)))
      for (const auto& a : bergman::enumerate_up_to_order(n, 2)) {
        if (a.is_zero()) continue;
        const double exact = bergman::hankel_row_norm_squared(d, g, a);
        const auto o = bergman::gram_oracle_row_norm_squared(d, g, a);
        record("gram", g.to_string(), a.to_string(), exact, o.value,
               o.abs_error + 1e-12 * std::max(1.0, std::abs(exact)));
      }
  } catch (const bergman::capability_error& e) {
    skipped.push_back(e.what());
  }
  for (const auto& g : bergman::enumerate_up_to_order(n, 1)) {
    const double exact = bergman::log_c_squared(d, g).c_squared();
    const auto e = bergman::monte_carlo_c_squared(d, g, c.samples, c.seed, exec_of(c));
    record("monte-carlo", g.to_string(), "", exact, e.value, e.abs_error);
  }
  r.body = {{"passed", all_ok}, {"checks", checks}, {"skipped", skipped}};
  r.status = all_ok ? kExitOk : kExitValidation;
  return r;
}

Result cmd_report(const RunConfig& c) {
  const auto results = bergman::acceptance::run_all(exec_of(c));
  Result r;
  r.header = {"id", "title", "passed", "detail"};
  if (!c.no_timestamp) {
    r.header.push_back("seconds");
    r.header.push_back("budget_seconds");
  }
  json rows = json::array();
  bool all_ok = true;
  for (const auto& x : results) {
    all_ok = all_ok && x.ok();
    json j = {{"id", x.id}, {"title", x.title}, {"passed", x.ok()}, {"detail", x.detail}};
    std::vector<std::string> row = {std::to_string(x.id), x.title, x.ok() ? "true" : "false", x.detail};
    if (!c.no_timestamp) {
      j["seconds"] = x.seconds;
      j["budget_seconds"] = x.budget_seconds;
      row.push_back(num(x.seconds));
      row.push_back(num(x.budget_seconds));
    }
    rows.push_back(j);
    r.rows.push_back(row);
    std::cerr << bergman::acceptance::summary_line(x) << '\n';
  }
  r.body = {{"passed", all_ok}, {"criteria", rows}};
  r.status = all_ok ? kExitOk : kExitValidation;
  return r;
}

Result dispatch(const RunConfig& c) {
  if (c.command == "norms") return cmd_norms(c);
  if (c.command == "ratio") return cmd_ratio(c);
  if (c.command == "s-alpha") return cmd_s_alpha(c);
  if (c.command == "diagonal") return cmd_diagonal(c);
  if (c.command == "hs-norm") return cmd_hs_norm(c);
  if (c.command == "divergence") return cmd_divergence(c);
  if (c.command == "disc-dirichlet") return cmd_disc_dirichlet(c);
  if (c.command == "dbar") return cmd_dbar(c);
  if (c.command == "oracle") return cmd_oracle(c);
  if (c.command == "validate") return cmd_validate(c);
  return cmd_report(c);
}

void emit(std::ostream& out, const RunConfig& c, const Result& r) {
  const json config = config_json(c);
  if (c.format == "json") {
    json doc;
    doc["config"] = config;
    if (!c.no_timestamp) doc["timestamp"] = utc_timestamp();
    doc["result"] = r.body;
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : config.items())
    out << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  if (!c.no_timestamp) out << "# timestamp=" << utc_timestamp() << '\n';
  for (std::size_t i = 0; i < r.header.size(); ++i) out << (i ? "," : "") << r.header[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monomial Bergman norms and Hilbert-Schmidt diagnostics of Hankel operators"};
  app.require_subcommand(1);
  RunConfig cfg;

  struct CommandHelp {
    const char* name;
    const char* help;
  };
  const std::vector<CommandHelp> commands = {
      {"norms", "ln c_gamma^2 for one gamma (--gamma) or all |gamma| <= --max-order"},
      {"ratio", "c_{gamma+alpha}^2 / c_gamma^2 and the Hankel row norm"},
      {"s-alpha", "partial sums of S_alpha over |gamma| <= N"},
      {"diagonal", "sums of c_{gamma+alpha}^2 / c_gamma^2 over |gamma| = N"},
      {"hs-norm", "truncated Hilbert-Schmidt norm of the Hankel operator with a polynomial symbol"},
      {"divergence", "fit a partial or diagonal trace and classify its growth"},
      {"disc-dirichlet", "both sides of the disc Dirichlet identity for a polynomial symbol"},
      {"dbar", "S_{e_j} partial sums behind the canonical dbar-solution operator"},
      {"oracle", "independent estimate of c_gamma^2 by quadrature or Monte Carlo"},
      {"validate", "closed forms against quadrature, Monte Carlo and the Gram oracle"},
      {"report", "run every acceptance criterion and print a summary"},
  };
  for (const auto& entry : commands) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.help);
    sub->callback([&cfg, name = std::string(entry.name)] { cfg.command = name; });
    sub->add_option("--domain", cfg.domain, "disc | polydisc:n | ellipsoid:m1,...,mn")->capture_default_str();
    sub->add_option("--alpha", cfg.alpha, "multi-index a1,...,an");
    sub->add_option("--gamma", cfg.gamma, "multi-index g1,...,gn");
    auto* N = sub->add_option("--N", cfg.N, "truncation order");
    auto* grid = sub->add_option("--N-grid", cfg.N_grid, "start:stop:xF | start:stop:+S | a,b,c");
    N->excludes(grid);
    sub->add_option("--tol", cfg.tol, "relative quadrature tolerance")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "Monte Carlo sample count")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--output", cfg.output, "output file, - for standard output")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads, 0 for all cores")->capture_default_str();
    sub->add_flag("--no-timestamp", cfg.no_timestamp, "omit the timestamp and timings");
    sub->add_option("--symbol-file", cfg.symbol_file, "symbol coefficients: g1,...,gn<TAB>re[<TAB>im] per line");
    sub->add_option("--kind", cfg.kind, "trace kind for divergence")
        ->check(CLI::IsMember({"partial", "diagonal"}))
        ->capture_default_str();
    sub->add_option("--method", cfg.method, "oracle method")
        ->check(CLI::IsMember({"quadrature", "monte-carlo"}))
        ->capture_default_str();
    sub->add_option("--max-order", cfg.max_order, "largest |gamma| for norms and validate");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Result r = dispatch(cfg);
    std::ostringstream text;
    emit(text, cfg, r);
    if (cfg.output == "-") {
      std::cout << text.str();
    } else {
      std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
      if (!out) throw bergman::usage_error("--output: cannot open '" + cfg.output + "' for writing");
      out << text.str();
    }
    return r.status;
  } catch (const bergman::usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const bergman::capability_error& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
