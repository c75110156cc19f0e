#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "misalign/core_model.hpp"
#include "misalign/experiments.hpp"
#include "misalign/validate.hpp"
#include "misalign/worldgen.hpp"

namespace misalign {

inline constexpr int scenario_format_version = 1;

/// A scenario file holds either an explicit world or a generator spec.
struct ScenarioDocument {
    int format_version = scenario_format_version;
    std::variant<World, WorldSpec> content;

    bool is_world() const { return std::holds_alternative<World>(content); }
    friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed JSON. Line and column are 1-based.
class ScenarioSyntaxError : public ScenarioError {
  public:
    ScenarioSyntaxError(const std::string& what, std::size_t line, std::size_t column)
        : ScenarioError(what), line(line), column(column)
    {
    }
    std::size_t line;
    std::size_t column;
};

/// Well-formed JSON that does not match the schema.
class ScenarioSchemaError : public ScenarioError {
  public:
    ScenarioSchemaError(const std::string& path, const std::string& what)
        : ScenarioError(path + ": " + what), path(path)
    {
    }
    std::string path;
};

/// Schema-valid document describing an invalid world or spec.
class ScenarioSemanticError : public ScenarioError {
  public:
    ScenarioSemanticError(const std::string& what, std::vector<Violation> violations)
        : ScenarioError(what), violations(std::move(violations))
    {
    }
    std::vector<Violation> violations;
};

struct ParseOptions {
    bool strict = true;    // unknown fields are errors; otherwise warnings
    bool validate = true;  // run validate_world / validate_spec after parsing
};

ScenarioDocument parse_scenario(std::string_view text, const ParseOptions& options = {},
                                std::vector<std::string>* warnings = nullptr);

/// Canonical text: sorted keys, two-space indent, shortest round-trip decimals,
/// lower-triangular conflicts.
std::string serialize_scenario(const ScenarioDocument& doc);

std::string read_text_file(const std::string& path);

std::string report_to_json(const MisalignmentReport& report, const World& world);
std::string report_to_csv(const MisalignmentReport& report, const World& world);

/// `experiment,series,x,mean,std,runs`, rows sorted by (series, x), 10 significant digits.
std::string write_curves_csv(std::span<const ExperimentCurve> curves);

}  // namespace misalign
