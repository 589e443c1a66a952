// Command-line driver: diagrams, statistics, null limits, process simulation
// and the Monte Carlo verification experiments.
//
// Exit codes: 0 ok, 1 failed verdicts, 2 input parse error, 3 consecutive tie
// under the error policy, 4 entropy without finite points, 5 config error,
// 6 any other library error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sublevel_ph/diagram.hpp"
#include "sublevel_ph/error.hpp"
#include "sublevel_ph/experiments.hpp"
#include "sublevel_ph/null_limits.hpp"
#include "sublevel_ph/process.hpp"
#include "sublevel_ph/random.hpp"
#include "sublevel_ph/stats.hpp"

namespace sp = sublevel_ph;

namespace {

int exit_code(sp::ErrorCode code) {
  switch (code) {
    case sp::ErrorCode::ParseError:
    case sp::ErrorCode::NonFiniteInput:
    case sp::ErrorCode::EmptySeries: return 2;
    case sp::ErrorCode::ConsecutiveTie: return 3;
    case sp::ErrorCode::NoFinitePoints: return 4;
    case sp::ErrorCode::InvalidConfig: return 5;
    default: return 6;
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Newline-delimited numbers or a single-column CSV without header.
std::vector<double> read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sp::Error(sp::ErrorCode::ParseError, "cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string field = trim(line);
    if (!field.empty() && field.back() == ',') field = trim(field.substr(0, field.size() - 1));
    if (field.empty()) continue;
    double x = 0.0;
    const char* first = field.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, field.data() + field.size(), x);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw sp::Error(sp::ErrorCode::ParseError, "line " + std::to_string(line_no) + ": '" + field + "'");
    }
    values.push_back(x);
  }
  return values;
}

nlohmann::json read_json(const std::string& path, sp::ErrorCode code) {
  std::ifstream in(path);
  if (!in) throw sp::Error(code, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw sp::Error(code, e.what());
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw sp::Error(sp::ErrorCode::InvalidConfig, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

sp::MarginalModel parse_marginal(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return sp::marginal_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw sp::Error(sp::ErrorCode::InvalidConfig, e.what());
    }
  }
  return sp::marginal_from_json({{"name", text}});
}

nlohmann::json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-dimensional sublevel-set persistence of time series"};
  app.require_subcommand(1, 1);

  std::string input, out, config_path, tie = "error", format = "csv";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t streams = 1;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "Write output to this file instead of stdout");
    cmd->add_option("--seed", seed, "Random seed")->each([&](const std::string&) { seed_given = true; });
  };

  auto* diagram_cmd = app.add_subcommand("diagram", "Persistence diagram of a series as CSV");
  diagram_cmd->add_option("input", input, "Series file")->required()->check(CLI::ExistingFile);
  diagram_cmd->add_option("--tie-policy", tie)->check(CLI::IsMember({"error", "perturb"}));
  diagram_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  add_common(diagram_cmd);

  double alps_L = sp::kInf, total_p = 1.0;
  bool want_entropy = false;
  auto* stats_cmd = app.add_subcommand("stats", "Entropy, ALPS and total persistence as JSON");
  stats_cmd->add_option("input", input, "Series file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--tie-policy", tie)->check(CLI::IsMember({"error", "perturb"}));
  stats_cmd->add_option("--alps-L", alps_L, "ALPS truncation level (default: none)");
  stats_cmd->add_flag("--entropy", want_entropy, "Include persistent entropy");
  stats_cmd->add_option("--total-p", total_p, "Exponent of total persistence");
  add_common(stats_cmd);

  std::string marginal = "uniform01";
  std::vector<double> corner;
  double lifetime = -1.0;
  std::size_t samples = 0, finite_n = 0;
  auto* null_cmd = app.add_subcommand("null", "Closed-form i.i.d. limits and null-diagram samples");
  null_cmd->add_option("--marginal", marginal, "Marginal name or JSON object");
  null_cmd->add_option("--corner", corner, "Thresholds s t")->expected(2);
  null_cmd->add_option("--n", finite_n, "Also report exact expected Betti number at this n");
  null_cmd->add_option("--lifetime", lifetime, "Report the limiting lifetime tail at this level");
  null_cmd->add_option("--sample", samples, "Draw this many null diagram points (CSV)");
  null_cmd->add_option("--streams", streams, "Stream id for sampling");
  add_common(null_cmd);

  std::size_t length = 0;
  std::string process_path;
  auto* sim_cmd = app.add_subcommand("simulate", "Sample paths of a process spec");
  sim_cmd->add_option("process", process_path, "Process spec JSON")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--n", length, "Path length")->required();
  sim_cmd->add_option("--streams", streams, "Number of independent paths (one CSV column each)");
  add_common(sim_cmd);

  struct VerifyCommand {
    CLI::App* cmd;
    const char* experiment;
  };
  std::vector<VerifyCommand> verify_cmds{
      {app.add_subcommand("verify", "Run any experiment config"), nullptr},
      {app.add_subcommand("verify-slln", "Run a slln_rectangles config"), "slln_rectangles"},
      {app.add_subcommand("verify-clt", "Run a clt config"), "clt"},
      {app.add_subcommand("covariance", "Run a covariance config"), "covariance"},
  };
  for (auto& v : verify_cmds) {
    v.cmd->add_option("config", config_path, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    add_common(v.cmd);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const auto policy = tie == "perturb" ? sp::TiePolicy::PerturbByIndex : sp::TiePolicy::Error;

    if (diagram_cmd->parsed()) {
      const auto diagram = sp::compute_diagram(sp::TimeSeries(read_series(input), policy));
      Output o(out);
      if (format == "csv") {
        sp::write_diagram_csv(o.stream(), diagram);
      } else {
        nlohmann::json points = nlohmann::json::array();
        for (const auto& p : diagram.points()) points.push_back({number_json(p.birth), number_json(p.death)});
        o.stream() << nlohmann::json{{"points", points}}.dump(2) << '\n';
      }
      return 0;
    }

    if (stats_cmd->parsed()) {
      const auto diagram = sp::compute_diagram(sp::TimeSeries(read_series(input), policy));
      sp::StatsOptions options;
      options.entropy = want_entropy;
      options.alps_L = alps_L;
      options.total_p = total_p;
      Output o(out);
      o.stream() << sp::to_json(sp::compute_stats(diagram, options)).dump(2) << '\n';
      return 0;
    }

    if (null_cmd->parsed()) {
      const auto law = parse_marginal(marginal);
      Output o(out);
      if (samples > 0) {
        sp::RandomStream rng(seed, streams);
        o.stream() << "birth,death\n";
        for (std::size_t k = 0; k < samples; ++k) {
          const auto p = sp::sample_null_diagram_point(law, rng);
          o.stream() << sp::format_number(p.birth) << ',' << sp::format_number(p.death) << '\n';
        }
        return 0;
      }
      nlohmann::json report{{"marginal", sp::marginal_to_json(law)}};
      if (corner.size() == 2) {
        const double s = corner[0], t = corner[1];
        report["s"] = number_json(s);
        report["t"] = number_json(t);
        report["limiting_betti_ratio"] = sp::limiting_betti_ratio(law, s, t);
        report["corner_mass"] = sp::null_corner_mass(law, s, t);
        if (finite_n > 0) {
          report["n"] = finite_n;
          report["expected_betti"] = sp::expected_betti_finite_n(law, finite_n, s, t);
        }
      }
      if (lifetime >= 0.0) {
        report["lifetime"] = lifetime;
        report["lifetime_tail"] = sp::null_lifetime_tail(law, lifetime);
      }
      o.stream() << report.dump(2) << '\n';
      return 0;
    }

    if (sim_cmd->parsed()) {
      auto spec_json = read_json(process_path, sp::ErrorCode::InvalidConfig);
      if (seed_given) spec_json["seed"] = seed;
      const auto spec = sp::process_spec_from_json(spec_json);
      std::vector<std::vector<double>> paths;
      for (std::uint64_t k = 0; k < streams; ++k) paths.push_back(sp::generate_values(spec, length, k));
      Output o(out);
      for (std::size_t i = 0; i < length; ++i) {
        for (std::size_t k = 0; k < paths.size(); ++k) {
          o.stream() << (k ? "," : "") << sp::format_number(paths[k][i]);
        }
        o.stream() << '\n';
      }
      return 0;
    }

    for (const auto& v : verify_cmds) {
      if (!v.cmd->parsed()) continue;
      auto j = read_json(config_path, sp::ErrorCode::InvalidConfig);
      if (seed_given) j["seed"] = seed;
      const auto config = sp::experiment_config_from_json(j);
      if (v.experiment && config.experiment != v.experiment) {
        throw sp::Error(sp::ErrorCode::InvalidConfig,
                        "config runs '" + config.experiment + "', expected '" + v.experiment + "'");
      }
      const auto report = sp::run_experiment(config);
      Output o(out);
      o.stream() << report.to_json().dump(2) << '\n';
      for (const auto& verdict : report.verdicts) {
        std::cerr << (verdict.pass ? "PASS " : "FAIL ") << verdict.name << " value=" << verdict.value
                  << " tolerance=" << verdict.tolerance << '\n';
      }
      return report.pass() ? 0 : 1;
    }
  } catch (const sp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 6;
  }
  return 0;
}
