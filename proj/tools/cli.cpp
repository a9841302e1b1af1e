#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "flexhedge/case_file.hpp"
#include "flexhedge/csv.hpp"
#include "flexhedge/ed.hpp"
#include "flexhedge/errors.hpp"
#include "flexhedge/hedging.hpp"
#include "flexhedge/lp.hpp"
#include "flexhedge/opf.hpp"

namespace flexhedge::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kPreset = "paper-3bus";
constexpr const char* kOutputEnv = "FLEXHEDGE_OUTPUT_DIR";

bool wants(const RunConfig& c, const std::string& format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

// Write to a temporary sibling, then rename over the target.
void write_artifact(const fs::path& dir, const std::string& name, const std::string& content) {
  const fs::path target = dir / name;
  const fs::path tmp = dir / ("." + name + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os << content;
    if (!os.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

void apply_overrides(Network& net, const std::vector<LineOverride>& overrides) {
  for (const LineOverride& o : overrides) {
    const auto k = net.line_between(o.from, o.to);
    if (!k) {
      throw InvalidInput("--line-limit: no line between buses " + std::to_string(o.from) + " and " +
                         std::to_string(o.to));
    }
    net.lines[*k].flow_limit_mw = o.limit_mw;
  }
}

std::string case_label(const scenario::LineLimitCase& c) { return c.label(); }

casefile::CaseData generate_preset(const RunConfig& c, const scenario::LineLimitCase& line_case) {
  if (*c.preset != kPreset) throw InvalidInput("unknown preset '" + *c.preset + "' (available: paper-3bus)");
  scenario::ScenarioSpec spec = scenario::paper_3bus_spec(line_case, c.seed);
  if (c.prices) spec.wholesale = scenario::load_price_csv(*c.prices);
  scenario::Scenario sc = scenario::generate_scenario(spec);
  casefile::CaseData data;
  data.settings = {{"preset", *c.preset}, {"seed", std::to_string(c.seed)}, {"case", case_label(line_case)}};
  data.net = std::move(sc.net);
  data.hours = std::move(sc.hours);
  return data;
}

casefile::CaseData load_inputs(const RunConfig& c, const scenario::LineLimitCase& line_case) {
  casefile::CaseData data = c.input ? casefile::load_case(*c.input) : generate_preset(c, line_case);
  apply_overrides(data.net, c.line_overrides);
  if (!c.pi_des.empty()) {
    std::vector<BusId> buses;
    if (c.cap_bus) buses.push_back(*c.cap_bus);
    else buses = data.net.price_constrained_buses();
    data.caps.clear();
    for (BusId b : buses) data.caps.push_back({b, c.pi_des});
  }
  return data;
}

std::vector<std::string> validate_case(const casefile::CaseData& data) {
  std::vector<std::string> out = validate_network(data.net);
  for (const HourlyMarketData& h : data.hours) {
    for (auto& v : validate_market_data(data.net, h)) out.push_back(std::move(v));
  }
  for (auto& v : validate_caps(data.net, data.caps)) out.push_back(std::move(v));
  return out;
}

std::string fig_lmp_csv(const hedging::HedgeReport& report) {
  std::ostringstream os;
  os << "hour,bus,pi_des_eur_mwh,lambda_unconstrained_eur_mwh,lambda_hedged_eur_mwh\n";
  for (const auto& r : report.rows) {
    os << r.hour << ',' << r.bus << ',' << csv::format_double(r.pi_des) << ','
       << csv::format_double(r.lambda_unconstrained) << ',' << csv::format_double(r.lambda_hedged) << '\n';
  }
  return os.str();
}

std::string fig_supply_csv(const std::vector<opf::DispatchResult>& results, const casefile::CaseData& data,
                           bool with_flex) {
  std::ostringstream os;
  os << "hour,source,bus,mw\n";
  for (std::size_t h = 0; h < results.size(); ++h) {
    const auto& r = results[h];
    if (!r.optimal()) continue;
    const HourlyMarketData& market = data.hours[h];
    for (const GenOffer& o : market.offers) {
      os << r.hour << ",generation," << o.bus << ',' << csv::format_double(r.gen_at(o.bus)) << '\n';
    }
    if (with_flex) {
      for (BusId k : data.net.price_constrained_buses()) {
        os << r.hour << ",flexibility," << k << ',' << csv::format_double(r.flex_at(k)) << '\n';
      }
    }
    for (const LoadUtility& u : market.utilities) {
      os << r.hour << ",load," << u.bus << ',' << csv::format_double(r.load_at(u.bus)) << '\n';
    }
  }
  return os.str();
}

std::string dispatch_csv(const Network& net, const std::vector<opf::DispatchResult>& results) {
  std::ostringstream os;
  opf::write_dispatch_csv(os, net, results);
  return os.str();
}

void print_report(std::ostream& out, const hedging::HedgeReport& report) {
  out << " hour  bus   pi_des  lmp_unconstr  lmp_hedged  flex_mw  revenue_eur\n";
  for (const auto& r : report.rows) {
    out << std::setw(5) << r.hour << std::setw(5) << r.bus << std::fixed << std::setprecision(2) << std::setw(9)
        << r.pi_des << std::setw(14) << r.lambda_unconstrained << std::setw(12) << r.lambda_hedged
        << std::setprecision(4) << std::setw(9) << r.p_flexreq << std::setw(13)
        << csv::format_money(r.hourly_revenue) << (r.excluded ? "  (excluded)" : "") << '\n';
  }
  out.unsetf(std::ios::floatfield);
  out << "total revenue: EUR " << csv::format_money(report.totals.total_revenue)
      << ", active hours: " << report.totals.hours_active
      << ", max price reduction: " << csv::format_money(report.totals.max_price_reduction) << " EUR/MWh\n";
}

}  // namespace

std::vector<std::string> RunConfig::problems() const {
  std::vector<std::string> out;
  if (input.has_value() == preset.has_value()) out.emplace_back("give exactly one of --input and --preset");
  if (prices && !preset) out.emplace_back("--prices only applies to a preset");
  if (!pi_des.empty() && pi_des.size() != 1 && pi_des.size() != kHoursPerDay) {
    out.emplace_back("--pi-des takes 1 or 24 values");
  }
  for (const auto& f : formats) {
    if (f != "csv" && f != "json") out.push_back("unknown format '" + f + "'");
  }
  return out;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (const auto problems = config.problems(); !problems.empty()) {
    for (const auto& p : problems) err << "error: " << p << '\n';
    return kUsage;
  }
  try {
    const casefile::CaseData data = load_inputs(config, config.line_case);
    if (data.caps.empty()) {
      err << "error: no price cap given (use --pi-des or a [caps] section)\n";
      return kUsage;
    }
    if (const auto violations = validate_case(data); !violations.empty()) {
      for (const auto& v : violations) err << "invalid input: " << v << '\n';
      return kViolations;
    }

    const hedging::HedgeRun run = hedging::run_hedge(data.net, data.hours, data.caps);

    fs::create_directories(config.out_dir);
    if (wants(config, "csv")) {
      std::ostringstream os;
      hedging::write_report_csv(os, run.report);
      write_artifact(config.out_dir, "hedge_report.csv", os.str());
    }
    if (wants(config, "json")) write_artifact(config.out_dir, "hedge_report.json", hedging::report_json(run.report));
    write_artifact(config.out_dir, "dispatch_unconstrained.csv", dispatch_csv(data.net, run.unconstrained));
    write_artifact(config.out_dir, "dispatch_hedged.csv", dispatch_csv(data.net, run.hedged));
    write_artifact(config.out_dir, "fig_lmp.csv", fig_lmp_csv(run.report));
    write_artifact(config.out_dir, "fig_supply_unconstrained.csv", fig_supply_csv(run.unconstrained, data, false));
    write_artifact(config.out_dir, "fig_supply_hedged.csv", fig_supply_csv(run.hedged, data, true));
    {
      std::ostringstream os;
      for (const auto& e : hedging::coordination_trace(run.report)) os << hedging::format_event(e) << '\n';
      write_artifact(config.out_dir, "trace.txt", os.str());
    }
    {
      std::ostringstream os;
      casefile::write_case(os, data);
      write_artifact(config.out_dir, "scenario.txt", os.str());
    }

    print_report(out, run.report);
    for (const auto& w : run.report.warnings) err << "warning: " << w << '\n';

    bool infeasible = false;
    for (const auto* series : {&run.unconstrained, &run.hedged}) {
      for (const auto& r : *series) {
        if (!r.optimal()) {
          infeasible = true;
          err << (config.allow_infeasible ? "warning: " : "error: ") << r.message << '\n';
        }
      }
    }
    if (infeasible && !config.allow_infeasible) return kInfeasible;
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int cmd_sweep(const SweepConfig& config, std::ostream& out, std::ostream& err) {
  RunConfig base = config.base;
  base.pi_des.clear();
  auto problems = base.problems();
  if (config.pi_values.empty()) problems.emplace_back("--pi needs at least one value");
  if (config.base.input && config.cases.size() > 1) {
    problems.emplace_back("--cases applies to presets only; an input file is swept as one scenario");
  }
  if (!problems.empty()) {
    for (const auto& p : problems) err << "error: " << p << '\n';
    return kUsage;
  }
  try {
    std::vector<hedging::LineLimitScenario> scenarios;
    std::vector<HourlyMarketData> series;
    std::optional<Network> first;
    if (base.input) {
      casefile::CaseData data = load_inputs(base, {});
      scenarios.push_back({"input", data.net});
      series = std::move(data.hours);
    } else {
      for (const auto& c : config.cases) {
        casefile::CaseData data = load_inputs(base, c);
        scenarios.push_back({c.kind == scenario::LineCase::Infinite ? "uncongested" : "congested", data.net});
        if (series.empty()) series = std::move(data.hours);
      }
    }
    const Network& net = scenarios.front().net;
    BusId bus = 0;
    if (base.cap_bus) {
      bus = *base.cap_bus;
    } else {
      const auto k = net.price_constrained_buses();
      if (k.empty()) {
        err << "error: network has no price-constrained bus\n";
        return kUsage;
      }
      bus = k.front();
    }
    for (const auto& sc : scenarios) {
      casefile::CaseData probe{{}, sc.net, series, {PriceCap::flat(bus, config.pi_values.front())}};
      if (const auto violations = validate_case(probe); !violations.empty()) {
        for (const auto& v : violations) err << "invalid input: " << v << '\n';
        return kViolations;
      }
    }

    const hedging::SweepResult sweep = hedging::sweep_pi_des(scenarios, series, bus, config.pi_values);
    fs::create_directories(base.out_dir);
    std::ostringstream os;
    hedging::write_sweep_csv(os, sweep);
    write_artifact(base.out_dir, "sweep.csv", os.str());
    if (wants(base, "json")) write_artifact(base.out_dir, "sweep.json", hedging::sweep_json(sweep));

    out << "  pi_des  scenario       revenue_eur\n";
    for (const auto& r : sweep.rows) {
      out << std::setw(8) << csv::format_money(r.pi_des) << "  " << std::left << std::setw(12) << r.scenario
          << std::right << std::setw(14) << csv::format_money(r.total_revenue) << '\n';
    }
    for (const auto& w : sweep.warnings) err << "warning: revenue not monotone: " << w << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int cmd_validate(const fs::path& path, std::ostream& out, std::ostream& err) {
  casefile::CaseData data;
  try {
    data = casefile::load_case(path);
  } catch (const std::exception& e) {
    err << "violation: " << e.what() << '\n';
    return kViolations;
  }
  std::vector<std::string> violations = validate_case(data);
  if (violations.empty()) {
    // Dry LP build for every hour.
    for (const HourlyMarketData& h : data.hours) {
      try {
        (void)opf::build_opf({data.net, h, data.caps, !data.caps.empty()});
      } catch (const std::exception& e) {
        violations.push_back("hour " + std::to_string(h.hour) + ": " + e.what());
      }
    }
  }
  for (const auto& v : violations) err << "violation: " << v << '\n';
  if (!violations.empty()) {
    out << path.string() << ": " << violations.size() << " violation(s)\n";
    return kViolations;
  }
  out << path.string() << ": ok (" << data.net.bus_count() << " buses, " << data.net.lines.size() << " lines, "
      << data.hours.size() << " hours)\n";
  return kOk;
}

int cmd_duality_demo(const DualityDemoConfig& c, std::ostream& out, std::ostream& err) {
  try {
    ed::EdInstance inst;
    inst.offer = {1, c.marginal_cost, 0.0, c.capacity};
    inst.utility = {1, c.marginal_utility, 0.0, c.p_min, c.p_max};
    inst.cap = c.pi_des;
    const ed::EdChainReport rep = ed::solve_chain(inst);
    const auto& r = rep.result;
    out << std::setprecision(10);
    out << "objective (welfare primal)        " << rep.objective_primal << '\n'
        << "objective (dual, lambda capped)   " << rep.objective_dual << '\n'
        << "objective (primal + flexibility)  " << rep.objective_flex << '\n'
        << "max pairwise gap                  " << rep.max_gap << '\n'
        << "lambda without cap                " << rep.lambda_unconstrained << '\n'
        << "p_gen " << r.p_gen << "  p_load " << r.p_load << "  p_flexreq " << r.p_flexreq << '\n'
        << "lambda " << r.lambda << "  mu_lower " << r.mu_lower << "  mu_upper " << r.mu_upper << '\n'
        << "cap binding: " << (rep.cap_binding ? "yes" : "no") << (rep.degenerate ? " (degenerate vertex)" : "")
        << '\n';
    if (c.dump_dir) {
      fs::create_directories(*c.dump_dir);
      auto dump = [&](const std::string& name, const LinearProgram& lp) {
        std::ostringstream os;
        write_mps(os, lp, name);
        write_artifact(*c.dump_dir, name + ".mps", os.str());
      };
      dump("ed_primal", rep.primal.lp);
      dump("ed_dual", rep.dual.lp);
      if (inst.cap) dump("ed_flex", rep.flex_primal.lp);
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

namespace {

std::optional<double> parse_limit(const std::string& text) {
  if (text == "inf") return std::nullopt;
  return csv::parse_double(text, "--line-limit");
}

LineOverride parse_override(const std::string& spec) {
  // from-to=limit
  const auto dash = spec.find('-');
  const auto eq = spec.find('=');
  if (dash == std::string::npos || eq == std::string::npos || dash > eq) {
    throw ParseError("--line-limit expects FROM-TO=MW, got '" + spec + "'");
  }
  LineOverride o;
  o.from = static_cast<BusId>(csv::parse_int(spec.substr(0, dash), "--line-limit"));
  o.to = static_cast<BusId>(csv::parse_int(spec.substr(dash + 1, eq - dash - 1), "--line-limit"));
  o.limit_mw = parse_limit(spec.substr(eq + 1));
  return o;
}

// Comma-separated numbers. An empty string is an empty list.
std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.push_back(csv::parse_double(text.substr(start, comma - start), flag));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

scenario::LineLimitCase parse_case(const std::string& name, double finite_mw) {
  if (name == "infinite") return scenario::LineLimitCase::infinite();
  if (name == "finite") return scenario::LineLimitCase::finite(finite_mw);
  throw ParseError("unknown line-limit case '" + name + "' (infinite|finite)");
}

struct SharedFlags {
  std::string input, preset, prices, case_name = "infinite", out_dir;
  std::string pi_des;
  int cap_bus = 0;
  double finite_limit = 0.6;
  std::vector<std::string> line_limits;
  std::vector<std::string> formats = {"csv", "json"};
  std::uint64_t seed = 7;
  bool allow_infeasible = false;
  std::string config;
};

void add_shared(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--input", f.input, "Case file with network, hourly data and optional caps");
  cmd->add_option("--preset", f.preset, "Built-in scenario generator (paper-3bus)");
  cmd->add_option("--prices", f.prices, "CSV (hour,price_eur_mwh) replacing the preset wholesale series");
  cmd->add_option("--cap-bus", f.cap_bus, "Price-constrained bus to cap (default: all)");
  cmd->add_option("--finite-limit", f.finite_limit, "Line 2-3 limit in the finite case, MW");
  cmd->add_option("--line-limit", f.line_limits, "Per-line override FROM-TO=MW (or =inf)");
  cmd->add_option("--out", f.out_dir, "Output directory");
  cmd->add_option("--format", f.formats, "Report formats: csv,json")->delimiter(',');
  cmd->add_option("--seed", f.seed, "Scenario seed");
  cmd->add_flag("--allow-infeasible", f.allow_infeasible, "Exit 0 even when some hours are infeasible");
  cmd->add_option("--config", f.config, "Settings file (key = value lines, same names as the flags)");
}

RunConfig to_run_config(const SharedFlags& f) {
  RunConfig c;
  if (!f.input.empty()) c.input = f.input;
  if (!f.preset.empty()) c.preset = f.preset;
  if (!f.prices.empty()) c.prices = f.prices;
  c.pi_des = parse_list(f.pi_des, "--pi-des");
  if (f.cap_bus != 0) c.cap_bus = f.cap_bus;
  c.line_case = parse_case(f.case_name, f.finite_limit);
  for (const auto& s : f.line_limits) c.line_overrides.push_back(parse_override(s));
  if (!f.out_dir.empty()) {
    c.out_dir = f.out_dir;
  } else if (const char* env = std::getenv(kOutputEnv); env && *env) {
    c.out_dir = env;
  }
  c.formats = f.formats;
  c.seed = f.seed;
  c.allow_infeasible = f.allow_infeasible;
  return c;
}

// Settings from --config become flags, unless the command line already has them.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const casefile::CaseData cfg = casefile::load_case(path);
  auto present = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&flag](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> out(args.begin(), args.begin() + std::min<std::size_t>(2, args.size()));
  for (const auto& [key, value] : cfg.settings) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (present(flag)) continue;
    if (flag == "--allow-infeasible") {
      if (value == "1" || value == "true") out.push_back(flag);
      continue;
    }
    out.push_back(flag);
    out.push_back(value);
  }
  out.insert(out.end(), args.begin() + std::min<std::size_t>(2, args.size()), args.end());
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"flexhedge: price-capped DC-OPF and demand-side flexibility hedging"};
  app.require_subcommand(1);

  SharedFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Hedge one day at a price cap and write report artifacts");
  add_shared(run, run_flags);
  run->add_option("--case", run_flags.case_name, "Line limits: infinite|finite");
  run->add_option("--pi-des", run_flags.pi_des, "Maximum willingness to pay, EUR/MWh (1 or 24 values)")
;

  SharedFlags sweep_flags;
  std::string sweep_pi;
  std::vector<std::string> sweep_cases = {"infinite", "finite"};
  CLI::App* sweep = app.add_subcommand("sweep", "Aggregator revenue over several caps and line-limit cases");
  add_shared(sweep, sweep_flags);
  sweep->add_option("--pi", sweep_pi, "Caps to sweep, ascending, comma separated");
  sweep->add_option("--cases", sweep_cases, "Line-limit cases: infinite,finite")->delimiter(',');

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Check a case file and dry-build every hour's LP");
  validate->add_option("path", validate_path, "Case file")->required();

  DualityDemoConfig demo;
  std::string demo_cap = "70";
  std::string demo_capacity = "inf";
  std::string demo_dump;
  CLI::App* duality = app.add_subcommand("duality-demo", "Single-bus dispatch: primal, capped dual, flexibility primal");
  duality->add_option("--a", demo.marginal_cost, "Generator marginal cost, EUR/MWh");
  duality->add_option("--b", demo.marginal_utility, "Load marginal utility, EUR/MWh");
  duality->add_option("--p-min", demo.p_min, "Load lower bound, MW");
  duality->add_option("--p-max", demo.p_max, "Load upper bound, MW");
  duality->add_option("--capacity", demo_capacity, "Generator capacity, MW (or inf)");
  duality->add_option("--pi-des", demo_cap, "Price cap, EUR/MWh (or none)");
  duality->add_option("--dump-mps", demo_dump, "Directory for MPS dumps of the three programs");

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(to_run_config(run_flags), out, err);
    if (sweep->parsed()) {
      SweepConfig sc;
      sc.base = to_run_config(sweep_flags);
      sc.pi_values = parse_list(sweep_pi, "--pi");
      sc.cases.clear();
      for (const auto& name : sweep_cases) sc.cases.push_back(parse_case(name, sweep_flags.finite_limit));
      return cmd_sweep(sc, out, err);
    }
    if (validate->parsed()) return cmd_validate(validate_path, out, err);
    if (duality->parsed()) {
      demo.capacity = demo_capacity == "inf" ? kInf : csv::parse_double(demo_capacity, "--capacity");
      if (demo_cap == "none") demo.pi_des.reset();
      else demo.pi_des = csv::parse_double(demo_cap, "--pi-des");
      if (!demo_dump.empty()) demo.dump_dir = demo_dump;
      return cmd_duality_demo(demo, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace flexhedge::cli
