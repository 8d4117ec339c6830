#include "config.hpp"

#include <filesystem>
#include <set>
#include <sstream>

#include <fmt/format.h>
#define TOML_ENABLE_FORMATTERS 0
#include <toml.hpp>

#include <lavrentiev/error.hpp>

namespace lavrentiev::cli {

namespace {

// Typed access to one TOML table that remembers which keys were read, so that
// anything left over can be reported as unknown.
class Section {
 public:
  Section(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  bool present() const { return table_ != nullptr; }
  std::string key_name(std::string_view key) const { return fmt::format("{}.{}", name_, key); }

  const toml::node* node(std::string_view key) {
    if (!table_) return nullptr;
    used_.insert(std::string(key));
    return table_->get(key);
  }

  std::optional<double> number(std::string_view key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) return *v;
    throw ConfigError(fmt::format("{} must be a number", key_name(key)));
  }

  std::optional<std::int64_t> integer(std::string_view key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    if (n->is_integer()) return *n->value<std::int64_t>();
    throw ConfigError(fmt::format("{} must be an integer", key_name(key)));
  }

  std::optional<std::string> string(std::string_view key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    if (n->is_string()) return *n->value<std::string>();
    throw ConfigError(fmt::format("{} must be a string", key_name(key)));
  }

  Section table(std::string_view key) {
    const toml::node* n = node(key);
    if (!n) return {nullptr, key_name(key)};
    if (!n->is_table()) throw ConfigError(fmt::format("{} must be a table", key_name(key)));
    return {n->as_table(), key_name(key)};
  }

  void set(double& target, std::string_view key) {
    if (auto v = number(key)) target = *v;
  }
  void set(int& target, std::string_view key) {
    if (auto v = integer(key)) {
      if (*v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
        throw ConfigError(fmt::format("{} is out of range", key_name(key)));
      }
      target = static_cast<int>(*v);
    }
  }

  /// Throws on any key that was never read.
  void finish() const {
    if (!table_) return;
    for (auto&& [k, v] : *table_) {
      if (!used_.count(std::string(k.str()))) {
        throw ConfigError(fmt::format("unknown key '{}'", key_name(k.str())));
      }
    }
  }

 private:
  const toml::table* table_;
  std::string name_;
  std::set<std::string> used_;
};

template <class Enum>
Enum pick(const std::string& value, const std::string& key,
          std::initializer_list<std::pair<const char*, Enum>> options) {
  std::string names;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    names += names.empty() ? name : fmt::format(", {}", name);
  }
  throw ConfigError(fmt::format("{} = \"{}\" is not one of: {}", key, value, names));
}

void parse_problem(Section s, ProblemSpec& p) {
  if (auto v = s.string("kind")) {
    p.kind = pick<ProblemKind>(*v, s.key_name("kind"),
                               {{"volterra", ProblemKind::volterra}, {"elliptic", ProblemKind::elliptic}});
  }
  if (auto v = s.string("source")) {
    p.source = pick<VolterraSource>(*v, s.key_name("source"),
                                    {{"constant_one", VolterraSource::constant_one},
                                     {"benchmark_Aw", VolterraSource::benchmark_Aw},
                                     {"fractional", VolterraSource::fractional}});
  }
  if (auto v = s.string("xi")) {
    p.xi = pick<XiKind>(*v, s.key_name("xi"),
                        {{"linear", XiKind::linear}, {"cubic", XiKind::cubic}, {"arctan", XiKind::arctan}});
  }
  s.set(p.p, "p");
  s.set(p.n, "n");
  s.finish();
}

void parse_noise(Section s, ExperimentConfig& cfg) {
  s.set(cfg.deltas.delta0, "delta0");
  s.set(cfg.deltas.ratio, "ratio");
  s.set(cfg.deltas.count, "count");
  if (const toml::node* n = s.node("seeds")) {
    const toml::array* arr = n->as_array();
    if (!arr) throw ConfigError(fmt::format("{} must be an array of integers", s.key_name("seeds")));
    cfg.seeds.clear();
    for (const toml::node& e : *arr) {
      const auto v = e.value<std::int64_t>();
      if (!e.is_integer() || *v < 0) {
        throw ConfigError(fmt::format("{} must contain nonnegative integers", s.key_name("seeds")));
      }
      cfg.seeds.push_back(static_cast<std::uint64_t>(*v));
    }
  }
  s.finish();
}

void parse_apriori_keys(Section& s, const ProblemSpec& problem, std::optional<APrioriRule>& rule) {
  const auto form = s.string("form");
  const auto c = s.number("C");
  const auto theta = s.number("theta");
  const auto psi = s.string("psi");
  const auto mu = s.number("mu");
  if (!form && !c && !theta && !psi && !mu) return;

  const std::string kind = form.value_or(psi || mu ? "theta_inverse" : "power_law");
  if (kind == "power_law") {
    if (psi || mu) throw ConfigError(fmt::format("{} and {} need form = \"theta_inverse\"", s.key_name("psi"), s.key_name("mu")));
    APrioriRule base = rule && rule->kind == APrioriRule::Kind::power_law ? *rule : default_apriori_rule(problem);
    APrioriRule r;
    r.kind = APrioriRule::Kind::power_law;
    r.c = c.value_or(base.c);
    r.theta = theta.value_or(base.theta);
    if (!(r.c > 0.0)) throw ConfigError(fmt::format("{} must be positive", s.key_name("C")));
    if (!(r.theta > 0.0 && r.theta < 1.0)) throw ConfigError(fmt::format("{} must lie in (0,1)", s.key_name("theta")));
    rule = r;
  } else if (kind == "theta_inverse") {
    if (c || theta) throw ConfigError(fmt::format("{} and {} need form = \"power_law\"", s.key_name("C"), s.key_name("theta")));
    const std::string p = psi.value_or(mu ? "holder" : "linear");
    PsiSpec spec;
    if (p == "linear") {
      if (mu) throw ConfigError(fmt::format("{} only applies to psi = \"holder\"", s.key_name("mu")));
      spec = PsiSpec::linear();
    } else if (p == "logarithmic") {
      if (mu) throw ConfigError(fmt::format("{} only applies to psi = \"holder\"", s.key_name("mu")));
      spec = PsiSpec::logarithmic();
    } else if (p == "holder") {
      const double m = mu.value_or(0.5);
      if (!(m > 0.0 && m <= 0.5)) throw ConfigError(fmt::format("{} must lie in (0, 1/2]", s.key_name("mu")));
      spec = PsiSpec::holder(m);
    } else {
      throw ConfigError(fmt::format("{} = \"{}\" is not one of: linear, holder, logarithmic", s.key_name("psi"), p));
    }
    rule = APrioriRule::theta_inverse(spec);
  } else {
    throw ConfigError(fmt::format("{} = \"{}\" is not one of: power_law, theta_inverse", s.key_name("form"), kind));
  }
}

void parse_discrepancy_keys(Section& s, DiscrepancyRule& r) {
  s.set(r.tau, "tau");
  s.set(r.kappa, "kappa");
  s.set(r.q, "q");
  s.set(r.alpha0, "alpha0");
  s.set(r.max_steps, "max_steps");
}

void parse_lepskii_keys(Section& s, RuleSpec& r) {
  s.set(r.lepskii.beta, "beta");
  s.set(r.lepskii.q, "q");
  s.set(r.lepskii.j_max, "j_max");
  s.set(r.lepskii_alpha0_over_delta, "alpha0_over_delta");
}

void parse_rule(Section s, ExperimentConfig& cfg) {
  RuleSpec& r = cfg.rule;
  if (auto v = s.string("kind")) {
    r.kind = pick<RuleSpec::Kind>(*v, s.key_name("kind"),
                                  {{"apriori", RuleSpec::Kind::apriori},
                                   {"discrepancy", RuleSpec::Kind::discrepancy},
                                   {"lepskii", RuleSpec::Kind::lepskii}});
  }
  if (auto v = s.number("expected_exponent")) cfg.expected_exponent = *v;
  s.set(cfg.slope_tolerance, "slope_tolerance");

  Section apriori = s.table("apriori");
  parse_apriori_keys(apriori, cfg.problem, r.apriori);
  apriori.finish();
  Section discrepancy = s.table("discrepancy");
  parse_discrepancy_keys(discrepancy, r.discrepancy);
  discrepancy.finish();
  Section lepskii = s.table("lepskii");
  parse_lepskii_keys(lepskii, r);
  lepskii.finish();

  // Flat keys belong to the selected rule.
  switch (r.kind) {
    case RuleSpec::Kind::apriori: parse_apriori_keys(s, cfg.problem, r.apriori); break;
    case RuleSpec::Kind::discrepancy: parse_discrepancy_keys(s, r.discrepancy); break;
    case RuleSpec::Kind::lepskii: parse_lepskii_keys(s, r); break;
  }
  s.finish();
}

void parse_solver(Section s, ExperimentConfig& cfg) {
  s.set(cfg.newton_tol, "newton_tol");
  s.set(cfg.max_newton_iters, "max_newton_iters");
  s.finish();
}

void parse_distance(Section s, DistanceStudySpec& d) {
  s.set(d.r_min, "r_min");
  s.set(d.r_max, "r_max");
  s.set(d.r_count, "r_count");
  s.set(d.lambda_min, "lambda_min");
  s.set(d.lambda_max, "lambda_max");
  s.finish();
}

void parse_output(Section s, ExperimentConfig& cfg) {
  if (auto v = s.string("path")) cfg.output = *v;
  s.set(cfg.threads, "threads");
  s.finish();
}

void parse_vsc(Section s, VscStudy& v) {
  s.set(v.n, "n");
  if (auto k = s.string("variant")) {
    v.variant.kind = pick<VscVariant::Kind>(*k, s.key_name("variant"),
                                            {{"lavrentiev", VscVariant::Kind::lavrentiev},
                                             {"tikhonov", VscVariant::Kind::tikhonov}});
  }
  s.set(v.variant.mu, "mu");
  s.set(v.beta, "beta");
  s.set(v.sampler.count, "count");
  s.set(v.sampler.r_min, "r_min");
  s.set(v.sampler.r_max, "r_max");
  s.set(v.sampler.ray_points, "ray_points");
  if (auto seed = s.integer("seed")) {
    if (*seed < 0) throw ConfigError(fmt::format("{} must be nonnegative", s.key_name("seed")));
    v.sampler.seed = static_cast<std::uint64_t>(*seed);
  }
  if (auto b = s.number("bound")) v.bound = *b > 0.0 ? std::optional<double>(*b) : std::nullopt;
  s.finish();
}

void parse_fracpow(Section s, FracpowStudy& f) {
  s.set(f.n, "n");
  s.set(f.dunford.p, "p");
  s.set(f.dunford.panels, "panels");
  s.set(f.dunford.log_s_min, "log_s_min");
  s.set(f.dunford.log_s_max, "log_s_max");
  s.set(f.tolerance, "tolerance");
  s.finish();
}

void validate(const RunConfig& cfg) {
  cfg.experiment.validate();
  const VscStudy& v = cfg.vsc;
  if (v.n < 2) throw ConfigError("vsc.n must be at least 2");
  if (v.variant.kind == VscVariant::Kind::lavrentiev && !(v.variant.mu > 0.0 && v.variant.mu <= 0.5)) {
    throw ConfigError("vsc.mu must lie in (0, 1/2] for the lavrentiev variant");
  }
  if (!(v.variant.mu > 0.0)) throw ConfigError("vsc.mu must be positive");
  if (!(v.beta >= 0.0)) throw ConfigError("vsc.beta must be nonnegative");
  if (v.sampler.count < 0 || v.sampler.ray_points < 0) throw ConfigError("vsc sample counts must be nonnegative");
  if (!(v.sampler.r_min > 0.0 && v.sampler.r_min <= v.sampler.r_max)) {
    throw ConfigError("vsc needs 0 < r_min <= r_max");
  }
  if (cfg.fracpow.n < 2) throw ConfigError("fracpow.n must be at least 2");
  if (!(cfg.fracpow.tolerance > 0.0)) throw ConfigError("fracpow.tolerance must be positive");
  try {
    cfg.fracpow.dunford.validate();
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("fracpow: {}", e.what()));
  }
}

RunConfig from_table(const toml::table& root) {
  RunConfig cfg;
  Section top(&root, "");
  // [problem] first: rule defaults depend on it.
  parse_problem(top.table("problem"), cfg.experiment.problem);
  parse_noise(top.table("noise"), cfg.experiment);
  parse_rule(top.table("rule"), cfg.experiment);
  parse_solver(top.table("solver"), cfg.experiment);
  parse_distance(top.table("distance"), cfg.experiment.distance);
  parse_output(top.table("output"), cfg.experiment);
  parse_vsc(top.table("vsc"), cfg.vsc);
  parse_fracpow(top.table("fracpow"), cfg.fracpow);
  top.finish();
  validate(cfg);
  return cfg;
}

}  // namespace

RunConfig parse_config_string(const std::string& text, const std::string& source_name) {
  try {
    return from_table(toml::parse(text, source_name));
  } catch (const toml::parse_error& e) {
    throw ConfigError(fmt::format("{}:{}:{}: {}", source_name, e.source().begin.line,
                                  e.source().begin.column, e.description()));
  }
}

RunConfig parse_config(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ConfigError(fmt::format("config file '{}' not found", path));
  }
  try {
    return from_table(toml::parse_file(path));
  } catch (const toml::parse_error& e) {
    throw ConfigError(fmt::format("{}:{}:{}: {}", path, e.source().begin.line,
                                  e.source().begin.column, e.description()));
  }
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.n) {
    cfg.experiment.problem.n = *o.n;
    cfg.vsc.n = *o.n;
    cfg.fracpow.n = *o.n;
  }
  if (o.seed) {
    // Keep the number of seeds, renumber them from the given one.
    for (std::size_t i = 0; i < cfg.experiment.seeds.size(); ++i) cfg.experiment.seeds[i] = *o.seed + i;
    cfg.vsc.sampler.seed = *o.seed;
  }
  if (o.delta0) cfg.experiment.deltas.delta0 = *o.delta0;
  if (o.out) cfg.experiment.output = *o.out;
  validate(cfg);
}

}  // namespace lavrentiev::cli
