#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "migron/expr.hpp"
#include "migron/interp.hpp"
#include "migron/migrate.hpp"

namespace migron {

struct ModeWitness {
  std::optional<std::filesystem::path> distinguishing_context;  // a program containing HOLE once
  std::optional<std::filesystem::path> compatible_witness;      // a hand-written migration
};

struct ProgramEntry {
  std::string id;
  std::filesystem::path source;
  // Each input is the argument list the program is applied to.
  std::vector<std::vector<std::string>> apply_inputs;
  // Binder annotations of the precise migration, in pre-order.
  std::vector<BinderAnnotation> expected_precise;
  ModeWitness precise;
  ModeWitness compatible;

  const ModeWitness& witness(MigrationMode mode) const { return mode.is_compatible() ? compatible : precise; }
};

struct SuiteManifest {
  std::string suite;
  std::vector<ProgramEntry> programs;
};

// Relative paths in the manifest resolve against `base`.
SuiteManifest parse_manifest(std::string_view toml_text, const std::filesystem::path& base);
SuiteManifest load_manifest(const std::filesystem::path& path);

enum class Verdict : std::uint8_t { Rejected, NewDynamicError, UnusableFunction, Restricted, CompatibleImproved };
std::string to_string(Verdict v);

struct Certificate {
  enum class Kind : std::uint8_t { ContextDistinguishes, BelowWitness };
  Kind kind;
  std::string detail;
};

struct Classification {
  Verdict verdict = Verdict::Rejected;
  std::size_t annotations_total = 0;
  std::size_t annotations_improved = 0;
  std::optional<Certificate> certificate;
  std::string note;
};

// Plugs a coerced program of type `program_type` into a context whose HOLE expects ⋆.
Expr plug(const Expr& context, const Expr& coerced_program, const Typ& program_type);

// Parses a context and checks it mentions HOLE exactly once.
Expr load_context(const std::filesystem::path& path);

// nullopt for `migration` means the tool rejected the program.
Classification classify(const ProgramEntry& entry, const Expr& original, const std::optional<MigrationResult>& migration,
                        MigrationMode mode);

// Throws WitnessRefuted if the witness does not demonstrate its claim.
Certificate verify_witness(const Expr& original, const MigrationResult& migrated, const ModeWitness& witness);

struct ProgramReport {
  std::string id;
  Classification classification;
  std::optional<MigrationResult> migration;
  std::optional<std::string> error;  // tool or manifest failure
  double wall_ms = 0;
};

struct Report {
  std::string suite;
  MigrationMode mode;
  std::vector<ProgramReport> programs;
  double wall_ms = 0;

  std::size_t count(Verdict v) const;
};

ProgramReport run_program(const ProgramEntry& entry, MigrationMode mode, const SolverOptions& options);
Report run_suite(const SuiteManifest& manifest, MigrationMode mode, unsigned jobs = 1,
                 const SolverOptions& options = default_solver_options());

nlohmann::json report_json(const Report& report);
std::string report_table(const Report& report);

}  // namespace migron
