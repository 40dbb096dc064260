#include "migron/harness.hpp"

#include <toml++/toml.hpp>

#include <atomic>
#include <chrono>
#include <fmt/format.h>
#include <thread>

#include "migron/error.hpp"
#include "migron/runtime.hpp"
#include "migron/syntax.hpp"

namespace migron {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

ModeWitness read_witness(const toml::table* t, const std::filesystem::path& base, const std::string& id) {
  ModeWitness w;
  if (!t) return w;
  if (auto c = (*t)["distinguishing_context"].value<std::string>()) w.distinguishing_context = resolve(base, *c);
  if (auto c = (*t)["compatible_witness"].value<std::string>()) w.compatible_witness = resolve(base, *c);
  if (w.distinguishing_context && w.compatible_witness)
    throw ManifestError(id + ": a mode carries either a distinguishing context or a compatible witness, not both");
  return w;
}

}  // namespace

SuiteManifest parse_manifest(std::string_view toml_text, const std::filesystem::path& base) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    throw ManifestError(std::string("manifest: ") + std::string(e.description()));
  }
  SuiteManifest m;
  m.suite = root["suite"].value_or(std::string("suite"));
  const toml::array* programs = root["program"].as_array();
  if (!programs) return m;
  for (const auto& node : *programs) {
    const toml::table* t = node.as_table();
    if (!t) throw ManifestError("manifest: [[program]] entries must be tables");
    ProgramEntry p;
    auto id = (*t)["id"].value<std::string>();
    auto source = (*t)["source"].value<std::string>();
    if (!id || !source) throw ManifestError("manifest: every program needs id and source");
    p.id = *id;
    p.source = resolve(base, *source);
    if (const toml::array* inputs = (*t)["apply_inputs"].as_array()) {
      for (const auto& in : *inputs) {
        std::vector<std::string> args;
        if (auto s = in.value<std::string>()) {
          args.push_back(*s);
        } else if (const toml::array* list = in.as_array()) {
          for (const auto& a : *list) {
            auto s2 = a.value<std::string>();
            if (!s2) throw ManifestError(p.id + ": apply_inputs arguments must be strings");
            args.push_back(*s2);
          }
        } else {
          throw ManifestError(p.id + ": apply_inputs entries must be strings or arrays of strings");
        }
        p.apply_inputs.push_back(std::move(args));
      }
    }
    if (const toml::array* expected = (*t)["expected_precise"].as_array()) {
      for (const auto& e : *expected) {
        auto s = e.value<std::string>();
        auto colon = s ? s->find(':') : std::string::npos;
        if (colon == std::string::npos) throw ManifestError(p.id + ": expected_precise entries look like \"x: T\"");
        std::string name = s->substr(0, colon);
        while (!name.empty() && name.back() == ' ') name.pop_back();
        try {
          p.expected_precise.push_back({name, parse_type(s->substr(colon + 1))});
        } catch (const ParseError& err) {
          throw ManifestError(p.id + ": bad expected type: " + err.what());
        }
      }
    }
    p.precise = read_witness((*t)["precise"].as_table(), base, p.id);
    p.compatible = read_witness((*t)["compatible"].as_table(), base, p.id);
    m.programs.push_back(std::move(p));
  }
  return m;
}

SuiteManifest load_manifest(const std::filesystem::path& path) {
  SourceProgram text = read_source(path.string());
  return parse_manifest(text.text, path.parent_path());
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Rejected: return "Rejected";
    case Verdict::NewDynamicError: return "NewDynamicError";
    case Verdict::UnusableFunction: return "UnusableFunction";
    case Verdict::Restricted: return "Restricted";
    case Verdict::CompatibleImproved: return "CompatibleImproved";
  }
  return "?";
}

namespace {

std::size_t count_hole(const Expr& e) {
  std::size_t n = e.kind() == ExprKind::Var && e.name() == "HOLE" ? 1 : 0;
  for (std::size_t i = 0; i < e.operands().size(); ++i) {
    if (binds_in(e, i) && e.name() == "HOLE") continue;
    n += count_hole(e.operand(i));
  }
  return n;
}

struct Runs {
  std::vector<Outcome> original;
  std::vector<Outcome> migrated;
};

Expr application_context(const std::vector<std::string>& args) {
  Expr e = Expr::var("HOLE");
  for (const auto& a : args) e = Expr::app(e, parse(a));
  return e;
}

Runs execute(const ProgramEntry& entry, const Expr& original, const MigrationResult& m) {
  auto [original_coerced, original_type] = insert_coercions({}, original);
  std::vector<Expr> contexts;
  if (entry.apply_inputs.empty()) {
    contexts.push_back(Expr::var("HOLE"));
  } else {
    for (const auto& args : entry.apply_inputs) contexts.push_back(application_context(args));
  }
  Runs r;
  for (const auto& c : contexts) {
    r.original.push_back(eval(plug(c, original_coerced, original_type)));
    r.migrated.push_back(eval(plug(c, m.migrated_coerced, m.program_type)));
  }
  return r;
}

std::pair<std::size_t, std::size_t> annotation_counts(const Expr& original, const Expr& migrated) {
  auto before = binder_annotations(original);
  auto after = binder_annotations(migrated);
  std::size_t total = 0, improved = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (!before[i].type.is_unknown()) continue;
    ++total;
    if (i < after.size() && !after[i].type.is_unknown()) ++improved;
  }
  return {total, improved};
}

}  // namespace

Expr plug(const Expr& context, const Expr& coerced_program, const Typ& program_type) {
  Expr coerced = insert_coercions({{"HOLE", Typ::unknown()}}, context).first;
  Expr hole = program_type.is_unknown() ? coerced_program
                                        : Expr::coerce(coerce(program_type, Typ::unknown()), coerced_program);
  return substitute(coerced, "HOLE", hole);
}

Expr load_context(const std::filesystem::path& path) {
  Expr c = parse(read_source(path.string()));
  std::size_t holes = count_hole(c);
  if (holes != 1)
    throw ManifestError(path.string() + ": context must mention HOLE exactly once (found " + std::to_string(holes) + ")");
  for (const auto& v : free_vars(c))
    if (v != "HOLE") throw ManifestError(path.string() + ": context has free variable " + v);
  return c;
}

Certificate verify_witness(const Expr& original, const MigrationResult& migrated, const ModeWitness& witness) {
  if (witness.distinguishing_context) {
    Expr context = load_context(*witness.distinguishing_context);
    auto [original_coerced, original_type] = insert_coercions({}, original);
    Outcome before = eval(plug(context, original_coerced, original_type));
    Outcome after = eval(plug(context, migrated.migrated_coerced, migrated.program_type));
    if (!before.is_value() || !after.is_stuck_coercion())
      throw WitnessRefuted("context " + witness.distinguishing_context->filename().string() +
                           " does not expose a new coercion failure: original " + describe(before) +
                           ", migrated " + describe(after));
    return {Certificate::Kind::ContextDistinguishes,
            "original " + describe(before) + "; migrated " + describe(after)};
  }
  if (witness.compatible_witness) {
    Expr hand = parse(read_source(witness.compatible_witness->string()));
    if (erase_coercions(hand) != erase_coercions(original) && !expr_precision(original, hand))
      throw WitnessRefuted(witness.compatible_witness->filename().string() + " is not a migration of the program");
    if (!expr_precision(migrated.migrated_surface, hand))
      throw WitnessRefuted(witness.compatible_witness->filename().string() +
                           " is not at least as precise as the migrated program");
    return {Certificate::Kind::BelowWitness, "migrated program is no more precise than " +
                                                 witness.compatible_witness->filename().string()};
  }
  throw ManifestError("no witness for this mode");
}

Classification classify(const ProgramEntry& entry, const Expr& original, const std::optional<MigrationResult>& migration,
                        MigrationMode mode) {
  Classification c;
  if (!migration) {
    c.verdict = Verdict::Rejected;
    return c;
  }
  std::tie(c.annotations_total, c.annotations_improved) = annotation_counts(original, migration->migrated_surface);

  Runs runs = execute(entry, original, *migration);
  for (std::size_t i = 0; i < runs.original.size(); ++i) {
    const Outcome& before = runs.original[i];
    const Outcome& after = runs.migrated[i];
    if ((before.is_value() || before.is_timeout()) && after.is_stuck_coercion()) {
      c.verdict = Verdict::NewDynamicError;
      c.note = "input " + std::to_string(i) + ": original " + describe(before) + ", migrated " + describe(after);
      return c;
    }
  }

  bool original_ok = false, migrated_all_stuck = true;
  for (std::size_t i = 0; i < runs.original.size(); ++i) {
    original_ok = original_ok || runs.original[i].is_value();
    migrated_all_stuck = migrated_all_stuck && runs.migrated[i].is_stuck();
  }
  if (original_ok && migrated_all_stuck) {
    c.verdict = Verdict::UnusableFunction;
    c.note = "stuck on every input";
    return c;
  }

  const ModeWitness& w = entry.witness(mode);
  if (!w.distinguishing_context && !w.compatible_witness)
    throw ManifestError(entry.id + ": no distinguishing context or compatible witness for " + to_string(mode) + " mode");
  c.certificate = verify_witness(original, *migration, w);
  c.verdict = c.certificate->kind == Certificate::Kind::ContextDistinguishes ? Verdict::Restricted
                                                                             : Verdict::CompatibleImproved;
  return c;
}

std::size_t Report::count(Verdict v) const {
  std::size_t n = 0;
  for (const auto& p : programs)
    if (!p.error && p.classification.verdict == v) ++n;
  return n;
}

ProgramReport run_program(const ProgramEntry& entry, MigrationMode mode, const SolverOptions& options) {
  ProgramReport r;
  r.id = entry.id;
  auto start = std::chrono::steady_clock::now();
  try {
    Expr original = parse(read_source(entry.source.string()));
    std::string rejection;
    try {
      r.migration = migrate(mode, original, options);
    } catch (const SolverError&) {
      throw;
    } catch (const InternalError&) {
      throw;
    } catch (const Error& e) {
      rejection = e.what();
    }
    r.classification = classify(entry, original, r.migration, mode);
    if (!rejection.empty()) r.classification.note = rejection;
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Report run_suite(const SuiteManifest& manifest, MigrationMode mode, unsigned jobs, const SolverOptions& options) {
  Report report;
  report.suite = manifest.suite;
  report.mode = mode;
  report.programs.resize(manifest.programs.size());
  auto start = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.programs.size(); i = next++)
      report.programs[i] = run_program(manifest.programs[i], mode, options);
  };
  unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(manifest.programs.size())));
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

struct Columns {
  std::size_t total = 0, rejected = 0, after_rejected = 0, new_errors = 0, after_errors = 0, unusable = 0,
              after_unusable = 0, restricted = 0, annotations = 0, not_improved = 0, errors = 0;
};

Columns columns(const Report& report) {
  Columns c;
  for (const auto& p : report.programs) {
    ++c.total;
    if (p.error) {
      ++c.errors;
      continue;
    }
    const auto& k = p.classification;
    if (k.verdict == Verdict::Rejected) {
      ++c.rejected;
      continue;
    }
    ++c.after_rejected;
    if (k.verdict == Verdict::NewDynamicError) {
      ++c.new_errors;
      continue;
    }
    ++c.after_errors;
    if (k.verdict == Verdict::UnusableFunction) {
      ++c.unusable;
      continue;
    }
    ++c.after_unusable;
    if (k.verdict == Verdict::Restricted) ++c.restricted;
    c.annotations += k.annotations_total;
    c.not_improved += k.annotations_total - k.annotations_improved;
  }
  return c;
}

}  // namespace

nlohmann::json report_json(const Report& report) {
  using nlohmann::json;
  json programs = json::array();
  for (const auto& p : report.programs) {
    json entry = {{"id", p.id}, {"wall_ms", p.wall_ms}};
    if (p.error) {
      entry["classification"] = "Error";
      entry["error"] = *p.error;
    } else {
      entry["classification"] = to_string(p.classification.verdict);
    }
    entry["annotations_total"] = p.classification.annotations_total;
    entry["annotations_improved"] = p.classification.annotations_improved;
    entry["migrated_source"] = p.migration ? json(print(p.migration->migrated_surface)) : json(nullptr);
    if (p.classification.certificate) entry["certificate"] = p.classification.certificate->detail;
    if (!p.classification.note.empty()) entry["note"] = p.classification.note;
    programs.push_back(std::move(entry));
  }
  Columns c = columns(report);
  json totals = {{"programs", c.total},
                 {"rejected", c.rejected},
                 {"new_dynamic_errors", c.new_errors},
                 {"unusable_functions", c.unusable},
                 {"restricted", c.restricted},
                 {"remaining_after_rejected", c.after_rejected},
                 {"remaining_after_errors", c.after_errors},
                 {"remaining_after_unusable", c.after_unusable},
                 {"annotations_total", c.annotations},
                 {"annotations_not_improved", c.not_improved},
                 {"errors", c.errors},
                 {"wall_ms", report.wall_ms}};
  return {{"suite", report.suite}, {"mode", to_string(report.mode)}, {"programs", programs}, {"totals", totals}};
}

std::string report_table(const Report& report) {
  Columns c = columns(report);
  std::string out = fmt::format("{} ({}), {} programs, {:.0f} ms\n", report.suite, to_string(report.mode), c.total,
                                report.wall_ms);
  out += fmt::format("{:<22} {:<20} {:>6} {:>9}  {}\n", "program", "classification", "ms", "improved", "migration");
  for (const auto& p : report.programs) {
    std::string verdict = p.error ? "Error" : to_string(p.classification.verdict);
    std::string improved =
        fmt::format("{}/{}", p.classification.annotations_improved, p.classification.annotations_total);
    std::string shown = p.error ? *p.error : p.migration ? print(p.migration->migrated_surface) : "";
    out += fmt::format("{:<22} {:<20} {:>6.0f} {:>9}  {}\n", p.id, verdict, p.wall_ms, improved, shown);
  }
  out += fmt::format("\nRejected/Total  NewDynErr/Remaining  Unusable/Remaining  Restricted/Remaining  NotImproved/Total\n");
  out += fmt::format("{:>7} / {:<5} {:>9} / {:<9} {:>8} / {:<9} {:>10} / {:<9} {:>9} / {}\n", c.rejected, c.total,
                     c.new_errors, c.after_rejected, c.unusable, c.after_errors, c.restricted, c.after_unusable,
                     c.not_improved, c.annotations);
  if (c.errors) out += fmt::format("{} program(s) failed with tool or manifest errors\n", c.errors);
  return out;
}

}  // namespace migron
