#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "mutualcover/bounds.hpp"
#include "mutualcover/broadcast.hpp"
#include "mutualcover/oracle.hpp"
#include "mutualcover/sampler.hpp"
#include "mutualcover/spectrum.hpp"
#include "mutualcover/verification.hpp"
#include "mutualcover/version.hpp"

namespace mutualcover::cli {

namespace {

using io::Json;

constexpr std::size_t kMaxSweepPoints = 100'000;

struct Outputs {
  Json summary;
  std::string csv;
  std::vector<std::pair<std::string, std::string>> extra;  // path, content
  std::vector<std::string> console;
  int status = kExitOk;
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i)
    out += (i ? "," : "") + cells[i];
  return out + "\n";
}

double parse_double(const std::string& s, const std::string& where) {
  double out = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  require(res.ec == std::errc() && res.ptr == s.data() + s.size() &&
              std::isfinite(out),
          ErrorKind::kInvalidArgument, where + ": not a number: \"" + s + "\"");
  return out;
}

std::vector<double> expand_range(const std::string& key, const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() == 1) {
    std::vector<double> out;
    std::stringstream list(spec);
    for (std::string v; std::getline(list, v, ',');)
      out.push_back(parse_double(v, "--sweep " + key));
    require(!out.empty(), ErrorKind::kInvalidArgument,
            "--sweep " + key + " has no values");
    return out;
  }
  require(parts.size() == 3, ErrorKind::kInvalidArgument,
          "--sweep " + key + " must be key=a:b:step, key=v or key=v1,v2");
  const double a = parse_double(parts[0], "--sweep " + key);
  const double b = parse_double(parts[1], "--sweep " + key);
  const double step = parse_double(parts[2], "--sweep " + key);
  require(step > 0.0 && b >= a, ErrorKind::kInvalidArgument,
          "--sweep " + key + " needs a <= b and step > 0");
  const double count = std::floor((b - a) / step + 1e-9) + 1.0;
  require(count <= static_cast<double>(kMaxSweepPoints),
          ErrorKind::kInvalidArgument, "--sweep " + key + " has too many points");
  std::vector<double> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i)
    out.push_back(a + static_cast<double>(i) * step);
  return out;
}

// Keys in declaration order with their default lists; the last key varies
// fastest in the grid.
using Axes = std::vector<std::pair<std::string, std::vector<double>>>;
using Point = std::map<std::string, double>;

std::vector<Point> sweep_grid(Axes axes, const std::vector<std::string>& raw,
                              const std::vector<std::string>& integer_keys) {
  for (const auto& s : raw) {
    const auto eq = s.find('=');
    require(eq != std::string::npos && eq > 0, ErrorKind::kInvalidArgument,
            "--sweep expects key=values, got \"" + s + "\"");
    const auto key = s.substr(0, eq);
    auto it = std::find_if(axes.begin(), axes.end(),
                           [&](const auto& a) { return a.first == key; });
    std::string known;
    for (const auto& a : axes) known += (known.empty() ? "" : ", ") + a.first;
    require(it != axes.end(), ErrorKind::kInvalidArgument,
            "unknown sweep key \"" + key + "\" (expected one of: " +
                (known.empty() ? "none" : known) + ")");
    it->second = expand_range(key, s.substr(eq + 1));
  }
  for (const auto& [key, values] : axes) {
    const bool integer = std::find(integer_keys.begin(), integer_keys.end(),
                                   key) != integer_keys.end();
    for (double v : values)
      require(!integer || (v >= 1.0 && v == std::floor(v) && v <= 1e9),
              ErrorKind::kInvalidArgument,
              "sweep key " + key + " takes positive integers");
  }
  double total = 1.0;
  for (const auto& a : axes) total *= static_cast<double>(a.second.size());
  require(total <= static_cast<double>(kMaxSweepPoints),
          ErrorKind::kInvalidArgument, "sweep grid has too many points");
  std::vector<Point> points;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t n = 0; n < static_cast<std::size_t>(total); ++n) {
    Point p;
    for (std::size_t a = 0; a < axes.size(); ++a)
      p[axes[a].first] = axes[a].second[idx[a]];
    points.push_back(std::move(p));
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
    }
  }
  return points;
}

std::string read_file(const std::string& path) {
  require(!path.empty(), ErrorKind::kInvalidArgument, "--input is required");
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kInvalidArgument,
          "cannot read input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Context {
  const RunConfig& cfg;
  std::string input_text;
  double scale = 1.0;  // nats -> display base

  Json load() const { return io::parse_text(input_text); }
  double info(double nats) const { return nats * scale; }
};

Outputs run_info(const Context& ctx) {
  const auto doc = ctx.load();
  const auto j = io::parse_joint(doc);
  const auto points =
      sweep_grid({{"alpha", expand_range("alpha", "0.5:3:0.5")}},
                 ctx.cfg.sweeps, {});
  Outputs out;
  const auto dens = info_density(j);
  Json density = Json::array();
  for (std::size_t u = 0; u < j.rows(); ++u) {
    Json row = Json::array();
    for (std::size_t v = 0; v < j.cols(); ++v)
      row.push_back(io::number(ctx.info(dens(u, v))));
    density.push_back(row);
  }
  const double mi = mutual_information(j);
  out.csv = join({"alpha", "renyi_divergence"});
  Json renyi = Json::array();
  for (const auto& p : points) {
    const double alpha = p.at("alpha");
    require(alpha > 0.0, ErrorKind::kInvalidArgument, "alpha must be > 0");
    const double d = alpha == 1.0 ? mi : renyi_divergence(j, alpha);
    renyi.push_back({{"alpha", alpha}, {"value", io::number(ctx.info(d))}});
    out.csv += join({num(alpha), num(ctx.info(d))});
  }
  out.summary = {{"u_labels", j.u_labels()},
                 {"v_labels", j.v_labels()},
                 {"mutual_information", io::number(ctx.info(mi))},
                 {"varentropy", io::number(ctx.info(varentropy(j)))},
                 {"density", density},
                 {"renyi", renyi}};
  out.console.push_back("I(U;V) = " + num(ctx.info(mi)));
  return out;
}

// Without an explicit "set", F holds the atoms with positive information density.
CoveringSet default_set(const JointPmf& j) {
  const auto dens = info_density(j);
  std::vector<std::uint8_t> mask;
  for (std::size_t u = 0; u < j.rows(); ++u)
    for (std::size_t v = 0; v < j.cols(); ++v) mask.push_back(dens(u, v) > 0.0);
  return CoveringSet::from_mask(j.rows(), j.cols(), std::move(mask));
}

struct BoundKind {
  Axes axes;
  std::function<BoundReport(const JointPmf&, const CoveringSet&, const Point&)>
      eval;
};

std::map<std::string, BoundKind> bound_kinds() {
  const auto m = std::pair<std::string, std::vector<double>>{"m", {8}};
  const auto l = std::pair<std::string, std::vector<double>>{"l", {8}};
  const auto gamma = std::pair<std::string, std::vector<double>>{"gamma", {1}};
  const auto delta = std::pair<std::string, std::vector<double>>{"delta", {2}};
  const auto eps = std::pair<std::string, std::vector<double>>{"eps", {0.1}};
  const auto p = std::pair<std::string, std::vector<double>>{"p", {0.5}};
  const auto n = std::pair<std::string, std::vector<double>>{"n", {1}};
  const auto spectrum = [](const JointPmf& j, const Point& x) {
    return spectrum_power(info_spectrum(j), static_cast<int>(x.at("n")));
  };
  std::map<std::string, BoundKind> k;
  k["unilateral"] = {{m, gamma}, [](const auto& j, const auto& f, const auto& x) {
                       return unilateral_bound(j, f, x.at("m"), x.at("gamma"));
                     }};
  k["resolvability"] = {{m, l, delta, gamma},
                        [](const auto& j, const auto& f, const auto& x) {
                          return resolvability_bound(j, f, x.at("m"), x.at("l"),
                                                     x.at("delta"), x.at("gamma"));
                        }};
  k["secondmoment"] = {{m, l, eps}, [](const auto& j, const auto& f, const auto& x) {
                         return secondmoment_bound(j, f, x.at("m"), x.at("l"),
                                                   x.at("eps"));
                       }};
  k["secondmoment_corrected"] = {
      {m, l, eps}, [](const auto& j, const auto& f, const auto& x) {
        return secondmoment_bound(j, f, x.at("m"), x.at("l"), x.at("eps"),
                                  SecondMomentForm::kCorrected);
      }};
  k["limited_independence"] = {
      {m, l, gamma}, [](const auto& j, const auto& f, const auto& x) {
        return limited_independence_bound(j, f, x.at("m"), x.at("l"),
                                          x.at("gamma"));
      }};
  k["talagrand"] = {{m, l, gamma}, [](const auto& j, const auto& f, const auto& x) {
                      return talagrand_bound(j, f, x.at("m"), x.at("l"),
                                             x.at("gamma"));
                    }};
  k["multivariate"] = {
      {m, l, gamma}, [](const auto& j, const auto& f, const auto& x) {
        const auto mv = MultivarPmf::make({"z"}, {j.u_labels(), j.v_labels()},
                                          {j.data().begin(), j.data().end()});
        return multivariate_bound(mv, {x.at("m"), x.at("l")}, x.at("gamma"),
                                  f.mask());
      }};
  k["typical"] = {{m, l, p, n}, [spectrum](const auto& j, const auto&, const auto& x) {
                    return typical_bound_optimized(spectrum(j, x), x.at("p"),
                                                   x.at("m"), x.at("l"));
                  }};
  k["sim_achievability"] = {
      {m, l, p, n}, [spectrum](const auto& j, const auto&, const auto& x) {
        return sim_achievability_bound(spectrum(j, x), x.at("m"), x.at("l"),
                                       x.at("p"));
      }};
  k["sim_converse"] = {{m, l, n}, [spectrum](const auto& j, const auto&, const auto& x) {
                         return sim_converse_bound(spectrum(j, x), x.at("m"),
                                                   x.at("l"));
                       }};
  k["worstcase_gap"] = {
      {{"m", {16}}, {"l", {16}}, p, n}, [spectrum](const auto& j, const auto&, const auto& x) {
        return worstcase_gap_bound(spectrum(j, x), x.at("m"), x.at("l"),
                                   x.at("p"));
      }};
  return k;
}

Outputs run_bound(const Context& ctx) {
  const auto kinds = bound_kinds();
  const auto it = kinds.find(ctx.cfg.bound);
  std::string names;
  for (const auto& [name, _] : kinds) names += (names.empty() ? "" : ", ") + name;
  require(it != kinds.end(), ErrorKind::kInvalidArgument,
          "unknown bound \"" + ctx.cfg.bound + "\" (expected one of: " + names + ")");
  const auto doc = ctx.load();
  const auto j = io::parse_joint(doc);
  const auto f = io::parse_set(doc, j).value_or(default_set(j));
  const auto points = sweep_grid(it->second.axes, ctx.cfg.sweeps, {"n"});
  const std::vector<std::string> columns{"m", "l", "gamma", "delta", "eps", "p", "n"};
  Outputs out;
  std::vector<std::string> header{"bound"};
  header.insert(header.end(), columns.begin(), columns.end());
  header.insert(header.end(), {"value", "log_value", "clamped"});
  out.csv = join(header);
  Json reports = Json::array();
  for (const auto& x : points) {
    const auto r = it->second.eval(j, f, x);
    std::vector<std::string> row{ctx.cfg.bound};
    for (const auto& c : columns) row.push_back(x.count(c) ? num(x.at(c)) : "");
    row.insert(row.end(), {num(r.value), num(r.log_value), r.clamped ? "1" : "0"});
    out.csv += join(row);
    Json entry = io::to_json(r);
    entry["point"] = x;
    reports.push_back(entry);
  }
  out.summary = {{"bound", ctx.cfg.bound}, {"reports", reports}};
  out.console.push_back(std::to_string(points.size()) + " bound evaluations");
  return out;
}

Outputs run_oracle(const Context& ctx) {
  const auto doc = ctx.load();
  const auto j = io::parse_joint(doc);
  const auto f = io::parse_set(doc, j).value_or(default_set(j));
  const bool mc = ctx.cfg.samples > 0;
  require(!mc || ctx.cfg.seed.has_value(), ErrorKind::kInvalidArgument,
          "--seed is required when --samples requests Monte Carlo");
  const auto points = sweep_grid({{"m", {2}}, {"l", {2}}, {"gamma", {1}}},
                                 ctx.cfg.sweeps, {"m", "l"});
  Outputs out;
  out.csv = join({"m", "l", "gamma", "exact", "mc_mean", "mc_stderr",
                  "bound_name", "bound_value"});
  Json rows = Json::array();
  for (const auto& x : points) {
    const int m = static_cast<int>(x.at("m")), l = static_cast<int>(x.at("l"));
    const double exact = exact_failure(j, f, m, l);
    const auto bound = talagrand_bound(j, f, m, l, x.at("gamma"));
    Json row{{"m", m}, {"l", l}, {"gamma", x.at("gamma")},
             {"exact", io::number(exact)}, {"bound", io::to_json(bound)}};
    std::string mc_mean, mc_se;
    if (mc) {
      const auto est = mc_failure(j, f, {m, l, *ctx.cfg.seed, ctx.cfg.samples},
                                  ctx.cfg.workers);
      mc_mean = num(est.mean);
      mc_se = num(est.std_error);
      row["mc"] = {{"mean", est.mean}, {"std_error", est.std_error},
                   {"hits", est.hits}, {"n_samples", est.n_samples}};
    }
    out.csv += join({num(m), num(l), num(x.at("gamma")), num(exact), mc_mean,
                     mc_se, bound.name, num(bound.value)});
    rows.push_back(row);
  }
  out.summary = {{"rows", rows}};
  out.console.push_back(std::to_string(points.size()) + " oracle evaluations");
  return out;
}

Json mask_json(const CoveringSet& f) {
  Json rows = Json::array();
  for (std::size_t u = 0; u < f.rows(); ++u) {
    Json row = Json::array();
    for (std::size_t v = 0; v < f.cols(); ++v) row.push_back(f.contains(u, v) ? 1 : 0);
    rows.push_back(row);
  }
  return rows;
}

Outputs run_duality(const Context& ctx) {
  const auto j = io::parse_joint(ctx.load());
  const auto points = sweep_grid({{"m", {2}}, {"l", {2}}, {"k", {100000}}},
                                 ctx.cfg.sweeps, {"m", "l", "k"});
  Outputs out;
  out.csv = join({"m", "l", "k", "sup_side", "inf_side", "slack", "ordered",
                  "within_slack"});
  Json rows = Json::array();
  for (const auto& x : points) {
    const int m = static_cast<int>(x.at("m")), l = static_cast<int>(x.at("l"));
    const auto k = static_cast<std::int64_t>(x.at("k"));
    const auto rep = duality_check(j, m, l, k, ctx.cfg.workers);
    out.csv += join({num(m), num(l), num(double(k)), num(rep.sup_side),
                     num(rep.inf_side), num(rep.slack), rep.ordered ? "1" : "0",
                     rep.within_slack ? "1" : "0"});
    rows.push_back({{"m", m}, {"l", l}, {"k", k}, {"sup_side", rep.sup_side},
                    {"inf_side", rep.inf_side}, {"slack", rep.slack},
                    {"ordered", rep.ordered}, {"within_slack", rep.within_slack},
                    {"worst_set", mask_json(rep.worst_set)}});
    out.console.push_back("m=" + num(m) + " l=" + num(l) + " sup " +
                          num(rep.sup_side) + " inf " + num(rep.inf_side));
  }
  out.summary = {{"rows", rows}};
  return out;
}

Outputs run_sampler(const Context& ctx) {
  const auto j = io::parse_joint(ctx.load());
  const auto points = sweep_grid({{"m", {2}}, {"l", {2}}, {"k", {100000}}},
                                 ctx.cfg.sweeps, {"m", "l", "k"});
  Outputs out;
  out.csv = join({"m", "l", "k", "sup_side", "inf_side", "weighted_tv",
                  "slack", "flagged_rows", "rule_path"});
  Json rows = Json::array();
  for (const auto& x : points) {
    const int m = static_cast<int>(x.at("m")), l = static_cast<int>(x.at("l"));
    const auto k = static_cast<std::int64_t>(x.at("k"));
    const auto rep = duality_check(j, m, l, k, ctx.cfg.workers);
    const double weighted =
        exact_tv_of_rule(j, weighted_sampler_rule(j, m, l), m, l);
    const std::string path = "rules/rule_m" + std::to_string(m) + "_l" +
                             std::to_string(l) + "_k" + std::to_string(k) + ".json";
    Json rule = io::to_json(rep.sampler.rule);
    rule["m"] = m;
    rule["l"] = l;
    rule["k"] = k;
    out.extra.emplace_back(path, rule.dump(2) + "\n");
    out.csv += join({num(m), num(l), num(double(k)), num(rep.sup_side),
                     num(rep.inf_side), num(weighted), num(rep.slack),
                     num(double(rep.sampler.rule.flagged_rows())), path});
    rows.push_back({{"m", m}, {"l", l}, {"k", k}, {"sup_side", rep.sup_side},
                    {"inf_side", rep.inf_side}, {"weighted_tv", weighted},
                    {"slack", rep.slack}, {"rule_path", path}});
    out.console.push_back("m=" + num(m) + " l=" + num(l) + " optimal " +
                          num(rep.inf_side) + " weighted " + num(weighted));
  }
  out.summary = {{"rows", rows}};
  return out;
}

Outputs run_exponent(const Context& ctx) {
  const auto& kind = ctx.cfg.kind;
  require(kind == "dee" || kind == "sim" || kind == "weighted" ||
              kind == "broadcast" || kind == "second-order",
          ErrorKind::kInvalidArgument,
          "--kind must be dee, sim, weighted, broadcast or second-order");
  const auto doc = ctx.load();
  Outputs out;
  out.csv = join({"kind", "r1", "r2", "a", "value", "argmax"});
  Json rows = Json::array();
  if (kind == "second-order") {
    const auto j = io::parse_joint(doc);
    for (const auto& x : sweep_grid({{"a", {0}}}, ctx.cfg.sweeps, {})) {
      const double v = second_order_error(j, x.at("a"));
      out.csv += join({kind, "", "", num(x.at("a")), num(v), ""});
      rows.push_back({{"a", x.at("a")}, {"value", v}});
    }
    out.summary = {{"kind", kind}, {"rows", rows}};
    return out;
  }
  const double ln2 = std::log(2.0);
  const auto points =
      sweep_grid({{"r1", {0.5 * ln2}}, {"r2", {0.5 * ln2}}}, ctx.cfg.sweeps, {});
  std::optional<BroadcastSpec> bc;
  std::optional<JointPmf> joint;
  if (kind == "broadcast") bc = io::parse_broadcast(doc);
  else joint = io::parse_joint(doc);
  for (const auto& x : points) {
    const RatePair rates{x.at("r1"), x.at("r2")};
    double value = 0.0, argmax = std::nan("");
    Json row{{"r1", ctx.info(rates.r1)}, {"r2", ctx.info(rates.r2)}};
    if (kind == "dee") {
      value = dee_exponent(*joint, rates);
    } else if (kind == "sim") {
      const auto e = sim_exponent(*joint, rates);
      value = e.value;
      argmax = e.argmax;
      row["notes"] = e.notes;
    } else if (kind == "weighted") {
      try {
        const auto e = weighted_exponent(*joint, rates);
        value = e.value;
        argmax = e.rho_star;
        row["regime"] = e.regime == WeightedCase::kSaturated ? "saturated"
                                                             : "tilted_interior";
        row["closed_form"] = io::number(ctx.info(e.closed_form));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::kRegimeError) throw;
        value = std::nan("");
        row["notes"] = {err.what()};
      }
    } else {
      const auto e = theorem2_exponent(bc->joint, bc->y_channel, bc->z_channel,
                                       bc->x_map, rates);
      value = e.value;
      argmax = e.theta;
      row["terms"] = {io::number(ctx.info(e.term1)), io::number(ctx.info(e.term2)),
                      io::number(ctx.info(e.term3))};
      row["notes"] = e.notes;
    }
    row["value"] = io::number(ctx.info(value));
    row["argmax"] = io::number(argmax);
    out.csv += join({kind, num(ctx.info(rates.r1)), num(ctx.info(rates.r2)), "",
                     num(ctx.info(value)), std::isnan(argmax) ? "" : num(argmax)});
    rows.push_back(row);
  }
  out.summary = {{"kind", kind}, {"rows", rows}};
  out.console.push_back(std::to_string(points.size()) + " exponent evaluations");
  return out;
}

Outputs run_verify(const Context& ctx) {
  require(ctx.cfg.sweeps.empty(), ErrorKind::kInvalidArgument,
          "verify takes no sweeps");
  VerifyOptions options;
  options.workers = ctx.cfg.workers;
  if (ctx.cfg.seed) options.seed = *ctx.cfg.seed;
  Outputs out;
  out.csv = join({"id", "name", "passed", "detail"});
  Json rows = Json::array();
  int failed = 0;
  for (int id = 1; id <= kCriteria; ++id) {
    const auto r = run_criterion(id, options);
    out.console.push_back(format_result(r));
    out.csv += join({std::to_string(r.id), csv_text(r.name), r.passed ? "1" : "0",
                     csv_text(r.detail)});
    rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                    {"detail", r.detail}});
    failed += !r.passed;
  }
  out.summary = {{"seed", options.seed}, {"criteria", rows},
                 {"passed", kCriteria - failed}};
  out.status = failed == 0 ? kExitOk : kExitCriterionFailed;
  return out;
}

std::string canonical_config(const RunConfig& cfg, const std::string& input) {
  std::string s = "subcommand=" + cfg.subcommand;
  if (cfg.subcommand == "exponent") s += ";kind=" + cfg.kind;
  if (cfg.subcommand == "bound") s += ";bound=" + cfg.bound;
  s += ";bits=" + std::to_string(cfg.bits);
  s += ";samples=" + std::to_string(cfg.samples);
  s += ";seed=" + (cfg.seed ? std::to_string(*cfg.seed) : std::string("none"));
  for (const auto& sw : cfg.sweeps) s += ";sweep=" + sw;
  s += ";input=" + input;
  return s;
}

void write_outputs(const RunConfig& cfg, const std::vector<
                   std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  const fs::path root(cfg.out_dir);
  for (const auto& [rel, content] : files) {
    const fs::path path = root / rel;
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    require(static_cast<bool>(f), ErrorKind::kInvalidArgument,
            "cannot write " + path.string());
  }
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Mutual covering bounds, exact oracles and optimal samplers",
               "mutualcover"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  const auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* input = sub->add_option("--input", cfg.input, "Distribution JSON file");
    if (needs_input) input->required();
    sub->add_option("--out", cfg.out_dir, "Output directory")
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed for Monte Carlo streams");
    sub->add_option("--workers", cfg.workers, "Worker threads")
        ->check(CLI::Range(1u, 1024u));
    sub->add_flag("--bits", cfg.bits, "Display information quantities in bits");
    sub->add_option("--sweep", cfg.sweeps,
                    "Parameter sweep key=a:b:step, key=v or key=v1,v2")
        ->allow_extra_args(false);
    sub->add_option("--samples", cfg.samples, "Monte Carlo samples");
  };
  add_common(app.add_subcommand("info", "Mutual information, densities, Renyi sweep"), true);
  auto* bound = app.add_subcommand("bound", "Evaluate a named bound over sweeps");
  add_common(bound, true);
  bound->add_option("--bound", cfg.bound, "Bound name")->capture_default_str();
  add_common(app.add_subcommand("oracle", "Exact and Monte Carlo covering failure"), true);
  add_common(app.add_subcommand("duality", "Worst-case gap against optimal sampler TV"), true);
  add_common(app.add_subcommand("sampler", "Optimal and weighted sampler comparison"), true);
  auto* exponent = app.add_subcommand("exponent", "Error exponents");
  add_common(exponent, true);
  exponent->add_option("--kind", cfg.kind, "dee | sim | weighted | broadcast | second-order")
      ->capture_default_str();
  add_common(app.add_subcommand("verify", "Run the acceptance suite"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  try {
    Context ctx{cfg, cfg.subcommand == "verify" ? std::string() : read_file(cfg.input),
                cfg.bits ? 1.0 / std::log(2.0) : 1.0};
    static const std::map<std::string, std::function<Outputs(const Context&)>>
        handlers{{"info", run_info},         {"bound", run_bound},
                 {"oracle", run_oracle},     {"duality", run_duality},
                 {"sampler", run_sampler},   {"exponent", run_exponent},
                 {"verify", run_verify}};
    Outputs result = handlers.at(cfg.subcommand)(ctx);

    const auto hash = fnv1a(canonical_config(cfg, ctx.input_text));
    char hash_text[32];
    std::snprintf(hash_text, sizeof hash_text, "%016llx",
                  static_cast<unsigned long long>(hash));
    Json meta{{"tool", "mutualcover"},
              {"version", kVersion},
              {"subcommand", cfg.subcommand},
              {"config_hash", std::string("fnv1a64:") + hash_text},
              {"seed", cfg.seed ? Json(*cfg.seed) : Json(nullptr)},
              {"unit", cfg.bits ? "bits" : "nats"}};
    result.summary["unit"] = cfg.bits ? "bits" : "nats";
    std::vector<std::pair<std::string, std::string>> files{
        {"summary.json", result.summary.dump(2) + "\n"},
        {"table.csv", result.csv},
        {"meta.json", meta.dump(2) + "\n"}};
    files.insert(files.end(), result.extra.begin(), result.extra.end());
    write_outputs(cfg, files);
    for (const auto& line : result.console) out << line << "\n";
    out << "wrote " << files.size() << " files to " << cfg.out_dir << "\n";
    return result.status;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kSizeCapExceeded ? kExitCapExceeded
                                                   : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace mutualcover::cli
