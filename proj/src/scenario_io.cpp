#include "misalign/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "misalign/format.hpp"

namespace misalign {

using nlohmann::json;

namespace {

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string at_key(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

class SchemaReader {
  public:
    SchemaReader(bool strict, std::vector<std::string>* warnings) : strict_(strict), warnings_(warnings) {}

    void check_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) const
    {
        if (!j.is_object()) throw ScenarioSchemaError(path.empty() ? "<root>" : path, "expected an object");
        for (const auto& item : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), item.key()) != allowed.end()) continue;
            const std::string field = at_key(path, item.key());
            if (strict_) throw ScenarioSchemaError(field, "unknown field");
            if (warnings_) warnings_->push_back(field + ": unknown field ignored");
        }
    }

    static const json& require(const json& obj, const std::string& path, const char* key)
    {
        auto it = obj.find(key);
        if (it == obj.end()) throw ScenarioSchemaError(at_key(path, key), "missing required field");
        return *it;
    }

    static const json* optional(const json& obj, const char* key)
    {
        auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    static double number(const json& j, const std::string& path)
    {
        if (!j.is_number()) throw ScenarioSchemaError(path, "expected a number");
        return j.get<double>();
    }

    static std::size_t count(const json& j, const std::string& path)
    {
        if (!j.is_number_unsigned()) throw ScenarioSchemaError(path, "expected a non-negative integer");
        return j.get<std::size_t>();
    }

    static std::uint64_t u64(const json& j, const std::string& path)
    {
        if (!j.is_number_unsigned()) throw ScenarioSchemaError(path, "expected a non-negative integer");
        return j.get<std::uint64_t>();
    }

    static bool boolean(const json& j, const std::string& path)
    {
        if (!j.is_boolean()) throw ScenarioSchemaError(path, "expected true or false");
        return j.get<bool>();
    }

    static std::string string(const json& j, const std::string& path)
    {
        if (!j.is_string()) throw ScenarioSchemaError(path, "expected a string");
        return j.get<std::string>();
    }

    static const json& array(const json& j, const std::string& path)
    {
        if (!j.is_array()) throw ScenarioSchemaError(path, "expected an array");
        return j;
    }

    static std::vector<double> numbers(const json& j, const std::string& path)
    {
        std::vector<double> out;
        for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(number(j[i], at_index(path, i)));
        return out;
    }

    static std::vector<std::vector<double>> number_rows(const json& j, const std::string& path)
    {
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(numbers(j[i], at_index(path, i)));
        return out;
    }

  private:
    bool strict_;
    std::vector<std::string>* warnings_;
};

ConflictMatrix read_conflict(const json& j, const std::string& path, std::size_t k)
{
    const auto rows = SchemaReader::number_rows(j, path);
    bool triangular = rows.size() == k - 1;
    for (std::size_t r = 0; triangular && r < rows.size(); ++r) triangular = rows[r].size() == r + 1;
    if (triangular) return ConflictMatrix::from_lower_triangular(k, rows);

    bool full = rows.size() == k;
    for (std::size_t r = 0; full && r < rows.size(); ++r) full = rows[r].size() == k;
    if (!full) {
        throw ScenarioSchemaError(path, "expected " + std::to_string(k - 1) + " lower-triangular rows or a " +
                                            std::to_string(k) + "x" + std::to_string(k) + " matrix");
    }
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(Eigen::Index(k + 1), Eigen::Index(k + 1));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) dense(Eigen::Index(r + 1), Eigen::Index(c + 1)) = rows[r][c];
    }
    return ConflictMatrix::from_dense(std::move(dense));
}

World read_world(const json& j, const SchemaReader& reader)
{
    const std::string path = "world";
    reader.check_object(j, path, {"problem_areas", "agents"});
    World world;

    const std::string areas_path = at_key(path, "problem_areas");
    const json& areas = SchemaReader::array(SchemaReader::require(j, path, "problem_areas"), areas_path);
    for (std::size_t a = 0; a < areas.size(); ++a) {
        const std::string apath = at_index(areas_path, a);
        const json& area = areas[a];
        reader.check_object(area, apath, {"id", "goals", "goal_labels", "conflict"});
        ProblemArea pa;
        pa.id = SchemaReader::string(SchemaReader::require(area, apath, "id"), at_key(apath, "id"));
        const std::size_t k = SchemaReader::count(SchemaReader::require(area, apath, "goals"), at_key(apath, "goals"));
        if (k < 1) throw ScenarioSchemaError(at_key(apath, "goals"), "need at least one goal");
        if (const json* labels = SchemaReader::optional(area, "goal_labels")) {
            const std::string lpath = at_key(apath, "goal_labels");
            for (std::size_t i = 0; i < SchemaReader::array(*labels, lpath).size(); ++i) {
                pa.goal_labels.push_back(SchemaReader::string((*labels)[i], at_index(lpath, i)));
            }
        }
        pa.conflict = read_conflict(SchemaReader::require(area, apath, "conflict"), at_key(apath, "conflict"), k);
        world.problem_areas.push_back(std::move(pa));
    }

    const std::string agents_path = at_key(path, "agents");
    const json& agents = SchemaReader::array(SchemaReader::require(j, path, "agents"), agents_path);
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string ipath = at_index(agents_path, i);
        const json& aj = agents[i];
        reader.check_object(aj, ipath, {"id", "kind", "stances"});
        Agent agent;
        agent.id = SchemaReader::string(SchemaReader::require(aj, ipath, "id"), at_key(ipath, "id"));
        if (const json* kind = SchemaReader::optional(aj, "kind")) {
            const auto parsed = parse_agent_kind(SchemaReader::string(*kind, at_key(ipath, "kind")));
            if (!parsed) throw ScenarioSchemaError(at_key(ipath, "kind"), "expected human, ai or other");
            agent.kind = *parsed;
        }
        const std::string spath = at_key(ipath, "stances");
        const json& stances = SchemaReader::array(SchemaReader::require(aj, ipath, "stances"), spath);
        for (std::size_t s = 0; s < stances.size(); ++s) {
            const std::string stpath = at_index(spath, s);
            reader.check_object(stances[s], stpath, {"goal", "weight"});
            Stance stance;
            stance.goal.index = SchemaReader::count(SchemaReader::require(stances[s], stpath, "goal"), at_key(stpath, "goal"));
            stance.weight = SchemaReader::number(SchemaReader::require(stances[s], stpath, "weight"), at_key(stpath, "weight"));
            agent.stances.push_back(stance);
        }
        world.agents.push_back(std::move(agent));
    }
    return world;
}

ValueRange read_range(const json& j, const std::string& path)
{
    const auto values = SchemaReader::numbers(j, path);
    if (values.size() != 2) throw ScenarioSchemaError(path, "expected [min, max]");
    return {values[0], values[1]};
}

WorldSpec read_spec(const json& j, const SchemaReader& reader)
{
    const std::string path = "generator";
    reader.check_object(j, path,
                        {"areas", "agents", "goals_per_area", "randomize", "ranges", "presets", "allow_null_goals", "seed"});
    WorldSpec spec;
    spec.areas = SchemaReader::count(SchemaReader::require(j, path, "areas"), at_key(path, "areas"));
    spec.agents = SchemaReader::count(SchemaReader::require(j, path, "agents"), at_key(path, "agents"));
    {
        const std::string gpath = at_key(path, "goals_per_area");
        const json& goals = SchemaReader::array(SchemaReader::require(j, path, "goals_per_area"), gpath);
        spec.goals_per_area.clear();
        for (std::size_t i = 0; i < goals.size(); ++i) {
            spec.goals_per_area.push_back(SchemaReader::count(goals[i], at_index(gpath, i)));
        }
    }
    if (const json* r = SchemaReader::optional(j, "randomize")) {
        const std::string rpath = at_key(path, "randomize");
        reader.check_object(*r, rpath, {"conflict", "goals", "weights"});
        if (const json* v = SchemaReader::optional(*r, "conflict")) spec.randomize.conflict = SchemaReader::boolean(*v, at_key(rpath, "conflict"));
        if (const json* v = SchemaReader::optional(*r, "goals")) spec.randomize.goals = SchemaReader::boolean(*v, at_key(rpath, "goals"));
        if (const json* v = SchemaReader::optional(*r, "weights")) spec.randomize.weights = SchemaReader::boolean(*v, at_key(rpath, "weights"));
    }
    if (const json* r = SchemaReader::optional(j, "ranges")) {
        const std::string rpath = at_key(path, "ranges");
        reader.check_object(*r, rpath, {"conflict", "weights"});
        if (const json* v = SchemaReader::optional(*r, "conflict")) spec.ranges.conflict = read_range(*v, at_key(rpath, "conflict"));
        if (const json* v = SchemaReader::optional(*r, "weights")) spec.ranges.weights = read_range(*v, at_key(rpath, "weights"));
    }
    if (const json* p = SchemaReader::optional(j, "presets")) {
        const std::string ppath = at_key(path, "presets");
        reader.check_object(*p, ppath, {"conflict", "goals", "weights"});
        if (const json* v = SchemaReader::optional(*p, "conflict")) {
            const std::string cpath = at_key(ppath, "conflict");
            std::vector<std::vector<std::vector<double>>> areas;
            for (std::size_t a = 0; a < SchemaReader::array(*v, cpath).size(); ++a) {
                areas.push_back(SchemaReader::number_rows((*v)[a], at_index(cpath, a)));
            }
            spec.presets.conflict = std::move(areas);
        }
        if (const json* v = SchemaReader::optional(*p, "goals")) {
            const std::string gpath = at_key(ppath, "goals");
            std::vector<std::vector<std::size_t>> goals;
            for (std::size_t i = 0; i < SchemaReader::array(*v, gpath).size(); ++i) {
                const std::string ipath = at_index(gpath, i);
                std::vector<std::size_t> row;
                for (std::size_t a = 0; a < SchemaReader::array((*v)[i], ipath).size(); ++a) {
                    row.push_back(SchemaReader::count((*v)[i][a], at_index(ipath, a)));
                }
                goals.push_back(std::move(row));
            }
            spec.presets.goals = std::move(goals);
        }
        if (const json* v = SchemaReader::optional(*p, "weights")) {
            spec.presets.weights = SchemaReader::number_rows(*v, at_key(ppath, "weights"));
        }
    }
    if (const json* v = SchemaReader::optional(j, "allow_null_goals")) {
        spec.allow_null_goals = SchemaReader::boolean(*v, at_key(path, "allow_null_goals"));
    }
    if (const json* v = SchemaReader::optional(j, "seed")) spec.seed = SchemaReader::u64(*v, at_key(path, "seed"));
    return spec;
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte)
{
    // nlohmann reports the 1-based offset of the last character read
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

json world_to_json(const World& world)
{
    json areas = json::array();
    for (const auto& area : world.problem_areas) {
        json a = {{"id", area.id}, {"goals", area.goal_count()}, {"conflict", area.conflict.lower_triangle()}};
        if (!area.goal_labels.empty()) a["goal_labels"] = area.goal_labels;
        areas.push_back(std::move(a));
    }
    json agents = json::array();
    for (const auto& agent : world.agents) {
        json stances = json::array();
        for (const auto& s : agent.stances) stances.push_back({{"goal", s.goal.index}, {"weight", s.weight}});
        agents.push_back({{"id", agent.id}, {"kind", to_string(agent.kind)}, {"stances", std::move(stances)}});
    }
    return {{"problem_areas", std::move(areas)}, {"agents", std::move(agents)}};
}

json spec_to_json(const WorldSpec& spec)
{
    json j = {
        {"areas", spec.areas},
        {"agents", spec.agents},
        {"goals_per_area", spec.goals_per_area},
        {"randomize", {{"conflict", spec.randomize.conflict}, {"goals", spec.randomize.goals}, {"weights", spec.randomize.weights}}},
        {"ranges",
         {{"conflict", {spec.ranges.conflict.min, spec.ranges.conflict.max}},
          {"weights", {spec.ranges.weights.min, spec.ranges.weights.max}}}},
        {"allow_null_goals", spec.allow_null_goals},
        {"seed", spec.seed},
    };
    json presets = json::object();
    if (spec.presets.conflict) presets["conflict"] = *spec.presets.conflict;
    if (spec.presets.goals) presets["goals"] = *spec.presets.goals;
    if (spec.presets.weights) presets["weights"] = *spec.presets.weights;
    if (!presets.empty()) j["presets"] = std::move(presets);
    return j;
}

}  // namespace

ScenarioDocument parse_scenario(std::string_view text, const ParseOptions& options, std::vector<std::string>* warnings)
{
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_and_column(text, e.byte);
        throw ScenarioSyntaxError("syntax error at line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": " + e.what(),
                                  line, column);
    }

    const SchemaReader reader(options.strict, warnings);
    reader.check_object(root, "", {"format_version", "world", "generator"});
    ScenarioDocument doc;
    doc.format_version = int(SchemaReader::count(SchemaReader::require(root, "", "format_version"), "format_version"));
    if (doc.format_version != scenario_format_version) {
        throw ScenarioSchemaError("format_version", "unsupported version " + std::to_string(doc.format_version));
    }
    const json* world = SchemaReader::optional(root, "world");
    const json* generator = SchemaReader::optional(root, "generator");
    if ((world != nullptr) == (generator != nullptr)) {
        throw ScenarioSchemaError("<root>", "expected exactly one of 'world' or 'generator'");
    }

    try {
        if (world) {
            doc.content = read_world(*world, reader);
        } else {
            doc.content = read_spec(*generator, reader);
        }
    } catch (const PreconditionError& e) {
        throw ScenarioSchemaError(world ? "world" : "generator", e.what());
    }

    if (options.validate) {
        if (const auto* w = std::get_if<World>(&doc.content)) {
            auto violations = validate_world(*w);
            if (has_errors(violations)) {
                throw ScenarioSemanticError("world violates model invariants", std::move(violations));
            }
        } else {
            try {
                validate_spec(std::get<WorldSpec>(doc.content));
            } catch (const SpecError& e) {
                throw ScenarioSemanticError(std::string("generator.") + e.what(), {});
            }
        }
    }
    return doc;
}

std::string serialize_scenario(const ScenarioDocument& doc)
{
    json root = {{"format_version", doc.format_version}};
    if (const auto* w = std::get_if<World>(&doc.content)) {
        root["world"] = world_to_json(*w);
    } else {
        root["generator"] = spec_to_json(std::get<WorldSpec>(doc.content));
    }
    return root.dump(2) + "\n";
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string report_to_json(const MisalignmentReport& report, const World& world)
{
    json areas = json::array();
    for (std::size_t j = 0; j < report.per_area.size(); ++j) {
        const std::string id = j < world.area_count() ? world.problem_areas[j].id : std::to_string(j);
        areas.push_back({{"area", id}, {"score", report.per_area[j]}});
    }
    const json out = {
        {"weighted", report.weighted}, {"n_agents", report.n_agents}, {"n_areas", report.n_areas},
        {"per_area", std::move(areas)}, {"overall", report.overall},
    };
    return out.dump(2) + "\n";
}

std::string report_to_csv(const MisalignmentReport& report, const World& world)
{
    std::string out = "area,score\n";
    for (std::size_t j = 0; j < report.per_area.size(); ++j) {
        const std::string id = j < world.area_count() ? world.problem_areas[j].id : std::to_string(j);
        out += csv_field(id) + "," + format_significant(report.per_area[j], 10) + "\n";
    }
    out += "overall," + format_significant(report.overall, 10) + "\n";
    return out;
}

}  // namespace misalign
