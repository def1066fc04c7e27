#include "tyche/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tyche/analyzer.hpp"
#include "tyche/parser.hpp"
#include "tyche/printer.hpp"
#include "tyche/rewriter.hpp"
#include "tyche/riskgen.hpp"
#include "tyche/runtime.hpp"

namespace tyche::cli {

namespace {

/// Any failure while turning an app source into a RewrittenApp.
struct CompileFailure {
  Error error;
};

struct Compiled {
  std::string path;
  dsl::AppAst ast;
  std::vector<dsl::PermissionRequest> requests;
  RewrittenApp app;
};

std::string read_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open app source '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Compiled compile_app(const std::string& path, const RiskTable& table) {
  std::string source = read_source(path);
  try {
    auto ast = dsl::parse_source(source);
    auto requests = dsl::check_annotations(ast);
    auto app = rewrite(ast, requests, table);
    return {path, std::move(ast), std::move(requests), std::move(app)};
  } catch (const Error& e) {
    throw CompileFailure{e.in_file(path)};
  }
}

struct Common {
  std::string risk_table;
  std::string catalog;
};

Catalog catalog_from(const Common& c) { return c.catalog.empty() ? builtin_catalog() : load_catalog(c.catalog); }

int status_for(const Error& e) {
  switch (category_of(e.kind())) {
    case ErrorCategory::Compile: return kCompileError;
    case ErrorCategory::Denial: return kDenied;
    case ErrorCategory::Data: return kDataError;
  }
  return kDataError;
}

void add_catalog_flag(CLI::App* sub, Common& c) {
  sub->add_option("--catalog", c.catalog, "Capability catalog JSON (default: built-in catalog)")
      ->check(CLI::ExistingFile);
}

void add_risk_table_flag(CLI::App* sub, Common& c) {
  sub->add_option("--risk-table", c.risk_table, "Risk table file")->required()->envname("TYCHE_RISK_TABLE");
}

bool has_violation(const Trace& t) {
  return std::any_of(t.events().begin(), t.events().end(),
                     [](const TraceEvent& e) { return e.kind() == TraceKind::PolicyViolation; });
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk-based permissions for smart-home apps", "tyche"};
  app.require_subcommand(1);

  Common common;

  // compile
  std::string compile_src;
  bool emit_rewritten = false;
  auto* compile = app.add_subcommand("compile", "Check annotations and inject the reference monitor");
  compile->add_option("app", compile_src, "SmartApp source (.ty)")->required();
  compile->add_flag("--emit-rewritten", emit_rewritten, "Print the guarded program");
  add_risk_table_flag(compile, common);
  add_catalog_flag(compile, common);

  // install
  std::string install_src, home_path, answers_path;
  bool interactive = false;
  auto* install_cmd = app.add_subcommand("install", "Install an app into a simulated home");
  install_cmd->add_option("app", install_src, "SmartApp source (.ty)")->required();
  install_cmd->add_option("--home", home_path, "Home device file (JSON)")->required();
  auto* answers_opt = install_cmd->add_option("--answers", answers_path, "Scripted prompt answers");
  auto* interactive_opt = install_cmd->add_flag("--interactive", interactive, "Prompt on the console");
  answers_opt->excludes(interactive_opt);
  add_risk_table_flag(install_cmd, common);
  add_catalog_flag(install_cmd, common);

  // run
  std::vector<std::string> run_srcs;
  std::string scenario_path, trace_path, run_answers;
  auto* run = app.add_subcommand("run", "Install apps and run a scenario, printing the trace");
  run->add_option("apps", run_srcs, "SmartApp sources (.ty)")->required();
  run->add_option("--home", home_path, "Home device file (JSON)")->required();
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  run->add_option("--trace", trace_path, "Write the trace here instead of stdout");
  run->add_option("--answers", run_answers, "Scripted prompt answers (default: accept, first device)");
  add_risk_table_flag(run, common);
  add_catalog_flag(run, common);

  // analyze
  std::vector<std::string> analyze_srcs;
  std::string format = "plain";
  auto* analyze = app.add_subcommand("analyze", "Compare functional and risk-based access");
  analyze->add_option("apps", analyze_srcs, "SmartApp sources (.ty)")->required();
  analyze->add_option("--format", format, "plain or json")->check(CLI::IsMember({"plain", "json"}));
  add_risk_table_flag(analyze, common);
  add_catalog_flag(analyze, common);

  // riskgen
  std::string survey_path, out_path, group_name = "expert";
  double alpha = 0.05;
  bool stats = false;
  auto* riskgen = app.add_subcommand("riskgen", "Derive a risk table from survey data");
  riskgen->add_option("survey", survey_path, "Survey CSV")->required();
  riskgen->add_option("--alpha", alpha, "Significance level of the random-clicker test")
      ->check(CLI::Range(0.0, 1.0));
  riskgen->add_option("--group", group_name, "Group whose clustering becomes the table")
      ->check(CLI::IsMember({"expert", "informed", "uninformed"}));
  riskgen->add_option("--out", out_path, "Output risk table")->required();
  riskgen->add_flag("--stats", stats, "Print cluster counts, cut points and correlations");
  add_catalog_flag(riskgen, common);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsage;
  }

  try {
    const Catalog catalog = catalog_from(common);

    if (*compile) {
      auto table = load_risk_table(common.risk_table, catalog);
      auto c = compile_app(compile_src, table);
      auto counts = guard_count(c.app);
      out << "compiled " << c.ast.name << " (" << compile_src << ")\n";
      for (const auto& r : c.requests)
        out << "  request " << r.binding << ": " << r.capability << " at " << to_upper_string(r.level) << " risk\n";
      out << "  guards: " << counts.commands << " commands, " << counts.attribute_reads << " attribute reads, "
          << counts.subscriptions << " subscriptions\n";
      if (emit_rewritten) out << "\n" << dsl::pretty_print(c.app.ast(), {.show_guards = true});
      return kOk;
    }

    if (*install_cmd) {
      auto table = load_risk_table(common.risk_table, catalog);
      auto c = compile_app(install_src, table);
      auto home = load_home(home_path, catalog);
      Trace trace;
      std::unique_ptr<PromptSource> prompt;
      if (interactive) {
        out << "App " << c.ast.name << " requests:\n";
        for (const auto& n : c.app.startup_notice())
          out << "  " << n.capability << " at " << to_upper_string(n.level) << " risk\n";
        prompt = std::make_unique<ConsolePrompt>(in, out);
      } else if (!answers_path.empty()) {
        prompt = std::make_unique<ScriptedPrompt>(ScriptedPrompt::load(answers_path));
      } else {
        prompt = std::make_unique<AcceptAllPrompt>();
      }
      auto installed = install(c.app, home, *prompt, interactive ? nullptr : &trace);
      out << render(trace);
      out << "installed " << installed.name() << "\n";
      for (const auto& g : installed.grants())
        out << "  grant " << g.binding << " -> " << g.device << ": " << g.capability << " at "
            << to_upper_string(g.level) << " risk\n";
      return kOk;
    }

    if (*run) {
      auto table = load_risk_table(common.risk_table, catalog);
      std::vector<Compiled> compiled;
      for (const auto& src : run_srcs) compiled.push_back(compile_app(src, table));
      auto home = load_home(home_path, catalog);
      auto scenario = load_scenario(scenario_path);
      std::unique_ptr<PromptSource> prompt;
      if (!run_answers.empty()) prompt = std::make_unique<ScriptedPrompt>(ScriptedPrompt::load(run_answers));
      else prompt = std::make_unique<AcceptAllPrompt>();
      std::vector<InstalledApp> installed;
      for (const auto& c : compiled) installed.push_back(install(c.app, home, *prompt));
      Trace trace = run_scenario(installed, home, scenario, table, catalog);
      if (trace_path.empty()) {
        out << render(trace);
      } else {
        std::ofstream f(trace_path);
        if (!f) throw Error(ErrorKind::IoError, "cannot write trace '" + trace_path + "'");
        f << render(trace);
      }
      if (has_violation(trace)) {
        err << "policy violation: the reference monitor denied at least one operation\n";
        return kDenied;
      }
      return kOk;
    }

    if (*analyze) {
      auto table = load_risk_table(common.risk_table, catalog);
      std::vector<AccessReport> reports;
      for (const auto& src : analyze_srcs) {
        auto c = compile_app(src, table);
        reports.push_back(analyze_app(c.ast.name, c.requests, table, catalog));
      }
      out << (format == "json" ? render_json(reports) : render_plain(reports));
      return kOk;
    }

    if (*riskgen) {
      auto responses = load_survey(survey_path, catalog);
      RiskgenOptions opts{alpha, *parse_group(group_name)};
      auto result = derive_risk_table(std::move(responses), catalog, opts);
      std::ofstream f(out_path);
      if (!f) throw Error(ErrorKind::IoError, "cannot write risk table '" + out_path + "'");
      f << serialize(result.table);
      if (stats) out << render_stats(result);
      out << "wrote " << out_path << "\n";
      return kOk;
    }
  } catch (const CompileFailure& f) {
    err << "error: " << f.error.what() << "\n";
    return kCompileError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return status_for(e);
  }
  return kUsage;
}

}  // namespace tyche::cli
