// cpd: parse, explore, check and synthesize supervisors for process-algebraic
// plant models.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cpd/control.hpp"
#include "cpd/error.hpp"
#include "cpd/parser.hpp"
#include "cpd/ppf.hpp"
#include "cpd/relations.hpp"
#include "cpd/synthesis.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kResource = 2, kNoSupervisor = 3 };

struct RunConfig {
  std::string input;
  std::string format = "text";
  std::size_t budget = 1'000'000;
  std::string output;
  bool encap_nonblocking = true;
  bool rho_identity = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// Parses or prints every diagnostic and returns nullopt.
std::optional<cpd::SystemSpec> load(const std::string& path) {
  auto result = cpd::try_parse(read_file(path));
  if (!result.ok()) {
    for (const auto& d : result.diagnostics) std::cerr << cpd::format_diagnostic(path, d) << '\n';
    return std::nullopt;
  }
  return std::move(result.spec);
}

cpd::ExploreOptions explore_options(const RunConfig& cfg) {
  return cpd::ExploreOptions{.budget = cfg.budget, .rho_in_identity = cfg.rho_identity};
}

cpd::ControlOptions control_options(const RunConfig& cfg) {
  return cpd::ControlOptions{.explore = explore_options(cfg), .encapsulated = cfg.encap_nonblocking};
}

cpd::StateSpace space_of(const cpd::SystemSpec& spec, const std::string& which, const RunConfig& cfg) {
  const auto opts = explore_options(cfg);
  if (which == "renamed") return cpd::renamed_plant_space(spec, opts);
  if (which == "supervised" || (which == "auto" && spec.supervisor))
    return cpd::explore(spec.signature, cpd::supervised_plant(spec, cfg.encap_nonblocking), opts);
  return cpd::explore(spec.signature, cpd::Configuration{spec.plant_term(), cpd::Environment::initial(spec.sig())},
                      opts);
}

int cmd_parse(const RunConfig& cfg) {
  auto spec = load(cfg.input);
  if (!spec) return kFail;
  write_output(cfg.output, cpd::print(*spec));
  return kPass;
}

int cmd_explore(const RunConfig& cfg, const std::string& which) {
  auto spec = load(cfg.input);
  if (!spec) return kFail;
  const auto ss = space_of(*spec, which, cfg);
  std::ostringstream counts;
  counts << "states: " << ss.size() << "\ntransitions: " << ss.transitions().size() << "\nmarked: " << ss.marked_count()
         << '\n';
  if (cfg.format == "text") {
    write_output(cfg.output, counts.str());
    return kPass;
  }
  write_output(cfg.output, cpd::export_space(ss, cfg.format == "dot" ? cpd::ExportFormat::dot : cpd::ExportFormat::json));
  std::cerr << counts.str();
  return kPass;
}

cpd::ActionFilter bisim_filter(const std::string& name) {
  if (name == "all") return cpd::ActionFilter::all();
  if (name == "none") return cpd::ActionFilter::none();
  return cpd::ActionFilter::uncontrollable();
}

int cmd_check(const RunConfig& cfg, const std::string& which, const std::string& against, const std::string& bisim,
              const std::string& space) {
  auto spec = load(cfg.input);
  if (!spec) return kFail;
  const bool json = cfg.format == "json";
  std::string out;
  bool pass = true;

  if (which == "pbis") {
    auto other = against.empty() ? spec : load(against);
    if (!other) return kFail;
    if (!(other->sig() == spec->sig()))
      throw cpd::ModelError("pbis: '" + cfg.input + "' and '" + against + "' declare different signatures");
    const auto left = space_of(*spec, space, cfg);
    const auto right = space_of(*other, space, cfg);
    const auto res = cpd::partial_bisim(left, right, bisim_filter(bisim));
    pass = res.holds;
    if (json) {
      std::ostringstream os;
      os << "{\n  \"check\": \"pbis\",\n  \"holds\": " << (pass ? "true" : "false") << "\n}\n";
      out = os.str();
    } else {
      out = std::string("pbis (B = ") + bisim + "): " + (pass ? "pass" : "FAIL") + '\n';
      if (!pass) out += cpd::render_counterexample(left, right, *res.counterexample);
    }
    write_output(cfg.output, out);
    return pass ? kPass : kFail;
  }

  const auto opts = control_options(cfg);
  const bool all = which == "all";
  std::optional<cpd::ControllabilityReport> ctrl;
  if (all || which == "controllability") {
    ctrl = cpd::check_controllability(*spec, opts);
    pass = pass && ctrl->relation.holds;
  }
  std::optional<cpd::StateSpace> supervised;
  auto sup_space = [&]() -> const cpd::StateSpace& {
    if (!supervised) {
      if (ctrl && opts.encapsulated) supervised = ctrl->supervised;
      else supervised = cpd::explore(spec->signature, cpd::supervised_plant(*spec, opts.encapsulated), opts.explore);
    }
    return *supervised;
  };
  std::vector<std::string> parts;
  if (all || which == "requirements") {
    const auto r = cpd::satisfies_globally(sup_space(), spec->requirements);
    pass = pass && r.holds;
    parts.push_back(json ? cpd::to_json(r, sup_space(), spec->requirements)
                         : cpd::render(r, sup_space(), spec->requirements));
  }
  if (ctrl) parts.push_back(json ? cpd::to_json(*ctrl) : cpd::render(*ctrl));
  if (all || which == "nonblocking") {
    const auto r = cpd::check_nonblocking(sup_space());
    pass = pass && r.holds;
    parts.push_back(json ? cpd::to_json(r, sup_space()) : cpd::render(r, sup_space()));
  }
  if (json) {
    out = "[\n";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      auto p = parts[i];
      while (!p.empty() && p.back() == '\n') p.pop_back();
      out += p + (i + 1 < parts.size() ? ",\n" : "\n");
    }
    out += "]\n";
  } else {
    for (const auto& p : parts) out += p;
  }
  write_output(cfg.output, out);
  return pass ? kPass : kFail;
}

int cmd_synth(const RunConfig& cfg, const std::string& report_path) {
  auto spec = load(cfg.input);
  if (!spec) return kFail;
  const auto result = cpd::synthesize(*spec, cpd::SynthesisOptions{explore_options(cfg)});
  const auto supervised_spec = cpd::with_supervisor(*spec, result.supervisor);
  const auto verification = cpd::verify(supervised_spec, control_options(cfg));
  const auto report = cpd::to_json(result, verification, supervised_spec);
  if (!report_path.empty()) write_output(report_path, report);

  if (cfg.format == "json") {
    if (!cfg.output.empty()) write_output(cfg.output, cpd::print(supervised_spec));
    std::cout << report;
  } else {
    std::ostringstream os;
    os << "plant states: " << result.map.plant.size() << ", bad: " << result.map.bad_count()
       << ", supervised: " << result.map.supervised_count() << ", iterations: " << result.map.iterations << '\n'
       << "guards:\n"
       << cpd::render(result.supervisor, spec->sig()) << cpd::render(verification, supervised_spec);
    if (cfg.output.empty()) {
      os << "\n" << cpd::print(supervised_spec);
    } else {
      write_output(cfg.output, cpd::print(supervised_spec));
    }
    std::cout << os.str();
  }
  return verification.passed() ? kPass : kFail;
}

std::vector<std::size_t> parse_ops(const std::string& text) {
  std::vector<std::size_t> ops;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const long v = std::stol(item, &pos);
    if (pos != item.size() || v <= 0) throw cpd::ModelError("ppf: bad operation count '" + item + "'");
    ops.push_back(static_cast<std::size_t>(v));
  }
  return ops;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervisory control synthesis for process algebra with data"};
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv("CPD_BUDGET")) {
    try {
      cfg.budget = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "cpd: ignoring malformed CPD_BUDGET '" << env << "'\n";
    }
  }

  auto common = [&](CLI::App* sub, std::vector<std::string> formats) {
    sub->add_option("file", cfg.input, "Specification file (.cpd)")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--budget", cfg.budget, "State budget")->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", cfg.output, "Output file");
    sub->add_flag("--no-encap-nonblocking{false}", cfg.encap_nonblocking,
                  "Check requirements and nonblocking on the unencapsulated composition");
    sub->add_flag("--rho-identity", cfg.rho_identity, "Keep the updated-variable set in state identity");
  };

  auto* parse = app.add_subcommand("parse", "Parse and print a specification");
  common(parse, {"text"});

  std::string space = "auto";
  auto* explore = app.add_subcommand("explore", "Explore a state space");
  common(explore, {"text", "json", "dot"});
  explore->add_option("--space", space, "plant, renamed, supervised or auto")
      ->check(CLI::IsMember({"auto", "plant", "renamed", "supervised"}));

  std::string which = "all", against, bisim = "uncontrollable";
  auto* check = app.add_subcommand("check", "Verify a supervised plant");
  common(check, {"text", "json"});
  check->add_option("--check", which, "requirements, controllability, nonblocking, pbis or all")
      ->check(CLI::IsMember({"all", "requirements", "controllability", "nonblocking", "pbis"}));
  check->add_option("--against", against, "Right-hand specification for pbis (default: the input itself)");
  check->add_option("--bisim-actions", bisim, "Bisimulation action set for pbis")
      ->check(CLI::IsMember({"all", "none", "uncontrollable"}));
  check->add_option("--space", space, "Space compared by pbis")
      ->check(CLI::IsMember({"auto", "plant", "renamed", "supervised"}));

  std::string report_path;
  auto* synth = app.add_subcommand("synth", "Synthesize a guard supervisor");
  common(synth, {"text", "json"});
  synth->add_option("--report", report_path, "Write the JSON synthesis report here");

  std::size_t counters = 0;
  std::string ops_text = "1";
  std::string ppf_out;
  auto* ppf = app.add_subcommand("ppf", "Generate the printing process function model");
  ppf->add_option("--counters", counters, "Number of page counters (default: length of --ops)");
  ppf->add_option("--ops", ops_text, "Maintenance operations per counter, comma separated");
  ppf->add_option("-o,--output", ppf_out, "Output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) return cmd_parse(cfg);
    if (*explore) return cmd_explore(cfg, space);
    if (*check) return cmd_check(cfg, which, against, bisim, space);
    if (*synth) return cmd_synth(cfg, report_path);
    if (*ppf) {
      const auto ops = parse_ops(ops_text);
      if (counters != 0 && counters != ops.size())
        throw cpd::ModelError("ppf: --counters does not match the number of --ops entries");
      const auto source = cpd::ppf_source(ops);
      cpd::parse(source);  // validate
      write_output(ppf_out, source);
      return kPass;
    }
  } catch (const cpd::BudgetExceeded& e) {
    std::cerr << "cpd: " << e.what() << '\n';
    return kResource;
  } catch (const cpd::SynthesisError& e) {
    std::cerr << "cpd: " << e.what() << '\n';
    return e.kind() == cpd::SynthesisError::Kind::no_supervisor ? kNoSupervisor : kFail;
  } catch (const cpd::ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << cpd::format_diagnostic("<generated>", d) << '\n';
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "cpd: " << e.what() << '\n';
    return kFail;
  }
  return kFail;
}
