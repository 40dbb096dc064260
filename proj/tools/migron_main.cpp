#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "migron/error.hpp"
#include "migron/harness.hpp"
#include "migron/interp.hpp"
#include "migron/migrate.hpp"
#include "migron/runtime.hpp"
#include "migron/syntax.hpp"
#include "migron/typecheck.hpp"

namespace {

using namespace migron;
using nlohmann::json;

MigrationMode pick_mode(const std::string& mode, const std::string& weakening) {
  if (mode == "precise") return MigrationMode::precise();
  return MigrationMode::compatible(weakening == "all-inputs" ? WeakenVariant::AllInputsToDyn
                                                             : WeakenVariant::NegBaseToDyn);
}

int run_migrate(const std::string& file, const MigrationMode& mode, const std::string& show, bool as_json,
                const std::string& smt_dump) {
  Expr program = parse(read_source(file));
  SolverOptions options = default_solver_options();
  std::vector<std::string> transcripts;
  if (!smt_dump.empty()) options.on_transcript = [&](const std::string& s) { transcripts.push_back(s); };
  MigrationResult r = migrate(mode, program, options);
  if (!smt_dump.empty()) {
    std::ofstream out(smt_dump);
    for (std::size_t i = 0; i < transcripts.size(); ++i) out << "; phase " << i + 1 << "\n" << transcripts[i];
    if (!out) throw Error("cannot write " + smt_dump);
  }
  if (as_json) {
    json annotations = json::array();
    for (const auto& b : binder_annotations(r.migrated_surface))
      annotations.push_back({{"name", b.name}, {"type", to_string(b.type)}});
    json out = {{"mode", to_string(mode)},
                {"type", to_string(r.program_type)},
                {"surface", print(r.migrated_surface)},
                {"coerced", print(r.migrated_coerced, PrintStyle::WithCoercions)},
                {"annotations", annotations},
                {"weights_satisfied", r.weights_satisfied},
                {"weights_total", r.weights_total}};
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  if (show == "surface") {
    std::cout << print(r.migrated_surface) << '\n';
  } else if (show == "type") {
    std::cout << to_string(r.program_type) << '\n';
  } else {
    std::cout << print(r.migrated_coerced, PrintStyle::WithCoercions) << '\n';
  }
  return 0;
}

int run_eval(const std::string& file, std::size_t steps) {
  Expr program = parse(read_source(file));
  auto [coerced, type] = insert_coercions({}, program);
  Outcome o = eval(coerced, steps);
  std::cout << describe(o) << '\n';
  return 0;
}

int run_check(const std::string& file) {
  Expr program = parse(read_source(file));
  std::cout << to_string(typecheck_gtlc({}, program)) << '\n';
  return 0;
}

int run_bench(const std::string& manifest_path, const std::string& mode_name, const std::string& weakening,
              unsigned jobs, bool as_json) {
  SuiteManifest manifest = load_manifest(manifest_path);
  std::vector<MigrationMode> modes;
  if (mode_name == "both") {
    modes = {MigrationMode::precise(), pick_mode("compatible", weakening)};
  } else {
    modes = {pick_mode(mode_name, weakening)};
  }
  json all = json::array();
  bool failed = false;
  for (const auto& mode : modes) {
    Report report = run_suite(manifest, mode, jobs);
    for (const auto& p : report.programs) failed = failed || p.error.has_value();
    if (as_json) {
      all.push_back(report_json(report));
    } else {
      std::cout << report_table(report) << '\n';
    }
  }
  if (as_json) std::cout << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type migration for the gradually typed lambda calculus"};
  app.require_subcommand(1);

  std::string file, mode = "precise", weakening = "neg-base", show = "coercions", smt_dump;
  bool as_json = false;
  unsigned jobs = 1;
  std::size_t steps = kDefaultStepLimit;

  auto* mig = app.add_subcommand("migrate", "Migrate a program");
  mig->add_option("file", file, "Program source")->required();
  mig->add_option("--mode", mode)->check(CLI::IsMember({"precise", "compatible"}));
  mig->add_option("--weaken", weakening)->check(CLI::IsMember({"neg-base", "all-inputs"}));
  mig->add_option("--show", show)->check(CLI::IsMember({"coercions", "surface", "type"}));
  mig->add_flag("--json", as_json);
  mig->add_option("--dump-smt", smt_dump, "Write the solver transcript to a file");

  auto* bench = app.add_subcommand("bench", "Run and classify a benchmark suite");
  bench->add_option("manifest", file, "Suite manifest (TOML)")->required();
  bench->add_option("--mode", mode)->check(CLI::IsMember({"precise", "compatible", "both"}));
  bench->add_option("--weaken", weakening)->check(CLI::IsMember({"neg-base", "all-inputs"}));
  bench->add_option("--jobs", jobs)->check(CLI::Range(1u, 256u));
  bench->add_flag("--json", as_json);

  auto* ev = app.add_subcommand("eval", "Insert coercions and run an unmigrated program");
  ev->add_option("file", file, "Program source")->required();
  ev->add_option("--steps", steps, "Step limit");

  auto* chk = app.add_subcommand("check", "Typecheck a program in the gradual type system");
  chk->add_option("file", file, "Program source")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*mig) return run_migrate(file, pick_mode(mode, weakening), show, as_json, smt_dump);
    if (*bench) return run_bench(file, mode, weakening, jobs, as_json);
    if (*ev) return run_eval(file, steps);
    if (*chk) return run_check(file);
  } catch (const migron::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
