#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "refprior/errors.hpp"
#include "refprior/experiment.hpp"

namespace refprior {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expect) {
  throw ConfigError("config: key '" + std::string(key) + "' expects " +
                    std::string(expect) + ", got '" + std::string(value) +
                    "'");
}

double parse_real(std::string_view s, std::string_view key) {
  double v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    bad_value(key, s, "a real number");
  return v;
}

long long parse_ll(std::string_view s, std::string_view key) {
  long long v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    bad_value(key, s, "an integer");
  return v;
}

int parse_int(std::string_view s, std::string_view key) {
  const long long v = parse_ll(s, key);
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max())
    bad_value(key, s, "an integer in int range");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(std::string_view s, std::string_view key) {
  std::uint64_t v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    bad_value(key, s, "an unsigned 64-bit integer");
  return v;
}

ThetaGridSpec parse_grid(std::string_view value) {
  ThetaGridSpec spec;
  const auto parse_counted = [&](std::string_view rest,
                                 ThetaGridSpec::Kind kind) {
    const std::vector<std::string_view> parts = split(rest, ':');
    if (parts.size() != 3)
      throw ConfigError(
          "config: counted theta_grid forms are <kind>:<count>:<low>:<high>");
    spec.kind = kind;
    spec.count = static_cast<std::size_t>(parse_int(parts[0], "theta_grid"));
    spec.low = parse_real(parts[1], "theta_grid");
    spec.high = parse_real(parts[2], "theta_grid");
  };
  if (value.starts_with("list:")) {
    spec.kind = ThetaGridSpec::Kind::Explicit;
    for (std::string_view item : split(value.substr(5), ','))
      spec.values.push_back(parse_real(item, "theta_grid"));
  } else if (value.starts_with("linear:")) {
    parse_counted(value.substr(7), ThetaGridSpec::Kind::Linear);
  } else if (value.starts_with("log:")) {
    parse_counted(value.substr(4), ThetaGridSpec::Kind::Log);
  } else if (value.starts_with("random:")) {
    parse_counted(value.substr(7), ThetaGridSpec::Kind::Random);
  } else if (value.find(':') != std::string_view::npos) {
    throw ConfigError("config: theta_grid kind must be one of list, linear, "
                      "log, random");
  } else {
    // Bare comma list is shorthand for list:
    spec.kind = ThetaGridSpec::Kind::Explicit;
    for (std::string_view item : split(value, ','))
      spec.values.push_back(parse_real(item, "theta_grid"));
  }
  return spec;
}

void apply_key(ExperimentConfig& cfg, std::string_view key,
               std::string_view value) {
  if (key == "model") {
    const auto id = model_from_name(value);
    if (!id) bad_value(key, value, "one of exp, unif0theta, unifthetasq, triangular");
    cfg.model = *id;
  } else if (key == "theta_grid") {
    cfg.theta_grid = parse_grid(value);
  } else if (key == "theta0") {
    cfg.theta0 = parse_real(value, key);
  } else if (key == "k_values") {
    cfg.k_values.clear();
    for (std::string_view item : split(value, ','))
      cfg.k_values.push_back(parse_int(item, key));
  } else if (key == "m") {
    cfg.fixed_m = parse_int(value, key);
  } else if (key == "alpha") {
    cfg.alpha = parse_real(value, key);
  } else if (key == "estimators") {
    cfg.estimators.clear();
    for (std::string_view item : split(value, ',')) {
      const auto kind = estimator_from_name(item);
      if (!kind) bad_value(key, item, "a subset of fk, f, fnac");
      cfg.estimators.push_back(*kind);
    }
  } else if (key == "replications") {
    cfg.replications = parse_int(value, key);
  } else if (key == "master_seed") {
    cfg.master_seed = parse_u64(value, key);
  } else if (key == "output_path") {
    cfg.output_path = std::string(value);
  } else if (key == "timestamp") {
    if (value == "true")
      cfg.timestamp = true;
    else if (value == "false")
      cfg.timestamp = false;
    else
      bad_value(key, value, "true or false");
  } else if (key == "threads") {
    cfg.threads = parse_int(value, key);
  } else if (key == "quad_rel_tol") {
    cfg.quad.rel_tol = parse_real(value, key);
  } else if (key == "quad_abs_tol") {
    cfg.quad.abs_tol = parse_real(value, key);
  } else if (key == "quad_max_subdivisions") {
    cfg.quad.max_subdivisions = parse_int(value, key);
  } else if (key == "quad_tail") {
    if (value == "one_over_x")
      cfg.quad.tail = TailTransform::OneOverX;
    else if (value == "exp_decay")
      cfg.quad.tail = TailTransform::ExpDecay;
    else
      bad_value(key, value, "one_over_x or exp_decay");
  } else {
    throw ConfigError("config: unknown key '" + std::string(key) + "'");
  }
}

void check_domain(const ThetaDomain& dom, double theta, std::string_view what) {
  if (!dom.contains(theta))
    throw ConfigError("config: " + std::string(what) +
                      " lies outside the model's theta domain");
}

}  // namespace

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Fk:
      return "fk";
    case EstimatorKind::F:
      return "f";
    case EstimatorKind::Fnac:
      return "fnac";
  }
  return "unknown";
}

std::optional<EstimatorKind> estimator_from_name(std::string_view name) {
  if (name == "fk") return EstimatorKind::Fk;
  if (name == "f") return EstimatorKind::F;
  if (name == "fnac") return EstimatorKind::Fnac;
  return std::nullopt;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (const std::size_t hash = sv.find('#'); hash != std::string_view::npos)
      sv = sv.substr(0, hash);
    sv = trim(sv);
    if (sv.empty()) continue;
    const std::size_t eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not of the form key = value");
    apply_key(cfg, trim(sv.substr(0, eq)), trim(sv.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg) {
  const Model model(cfg.model);
  const ThetaDomain dom = model.theta_domain();

  const ThetaGridSpec& g = cfg.theta_grid;
  switch (g.kind) {
    case ThetaGridSpec::Kind::Explicit:
      if (g.values.empty())
        throw ConfigError("config: theta_grid list is empty");
      for (double theta : g.values) check_domain(dom, theta, "a theta_grid value");
      break;
    case ThetaGridSpec::Kind::Linear:
    case ThetaGridSpec::Kind::Log:
      if (g.count < 2)
        throw ConfigError("config: spaced theta_grid needs count >= 2");
      [[fallthrough]];
    case ThetaGridSpec::Kind::Random:
      if (g.count < 1)
        throw ConfigError("config: theta_grid needs count >= 1");
      if (!(g.low < g.high))
        throw ConfigError("config: theta_grid needs low < high");
      check_domain(dom, g.low, "theta_grid low");
      check_domain(dom, g.high, "theta_grid high");
      break;
  }

  if (cfg.theta0) check_domain(dom, *cfg.theta0, "theta0");

  if (cfg.k_values.empty()) throw ConfigError("config: k_values is empty");
  for (int k : cfg.k_values)
    if (k < 2) throw ConfigError("config: k_values must all be >= 2");
  if (cfg.fixed_m && *cfg.fixed_m < 2)
    throw ConfigError("config: m must be >= 2");

  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw ConfigError("config: alpha must lie in (0,1)");

  if (cfg.estimators.empty())
    throw ConfigError("config: estimators is empty");
  for (std::size_t i = 0; i < cfg.estimators.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.estimators.size(); ++j)
      if (cfg.estimators[i] == cfg.estimators[j])
        throw ConfigError("config: estimators contains duplicates");

  if (cfg.replications < 1)
    throw ConfigError("config: replications must be >= 1");
  if (cfg.threads < 0) throw ConfigError("config: threads must be >= 0");

  if (!(cfg.quad.rel_tol > 0.0) || !(cfg.quad.abs_tol >= 0.0) ||
      cfg.quad.max_subdivisions < 1)
    throw ConfigError("config: quadrature settings out of range");
}

std::uint64_t resolved_seed(const ExperimentConfig& cfg) {
  if (cfg.master_seed) return *cfg.master_seed;
  if (const char* env = std::getenv("REFPRIOR_SEED"))
    return parse_u64(trim(env), "REFPRIOR_SEED");
  return 1;
}

double resolved_theta0(const ExperimentConfig& cfg) {
  if (cfg.theta0) return *cfg.theta0;
  return Model(cfg.model).default_theta0();
}

int resolved_threads(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("REFPRIOR_THREADS")) {
    const int n = parse_int(trim(env), "REFPRIOR_THREADS");
    if (n < 1)
      throw ConfigError("config: REFPRIOR_THREADS must be >= 1");
    return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace refprior
