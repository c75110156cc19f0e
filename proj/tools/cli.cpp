#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "misalign/experiments.hpp"
#include "misalign/format.hpp"
#include "misalign/misalignment.hpp"
#include "misalign/scenario_io.hpp"
#include "misalign/validate.hpp"
#include "misalign/worldgen.hpp"

namespace misalign::cli {

namespace {

const std::vector<std::string> experiment_names{"problem-areas",     "goals",           "weight-sensitivity",
                                                "goal-distribution", "conflict-levels", "carla"};

// Flags each experiment understands, beyond --seed/--runs/--out/--threads.
const std::map<std::string, std::vector<std::string>> experiment_flags{
    {"problem-areas", {"--agents", "--areas", "--goals"}},
    {"goals", {"--agents", "--areas", "--goals"}},
    {"weight-sensitivity", {"--agents", "--areas", "--goals", "--weights"}},
    {"goal-distribution", {"--agents", "--goals", "--proportions"}},
    {"conflict-levels", {"--agents", "--goals", "--configs"}},
    {"carla", {"--agents", "--mix", "--conflicts", "--weight-modes"}},
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_violation(const Violation& v)
{
    return std::string(v.severity == Severity::error ? "error" : "warning") + ": " + v.path + ": " +
           to_string(v.kind) + ": " + v.message;
}

ScenarioDocument load_scenario(const std::string& path, bool lenient, bool validate, std::ostream& err)
{
    if (!std::filesystem::exists(path)) throw UsageError("no such file: " + path);
    std::vector<std::string> warnings;
    auto doc = parse_scenario(read_text_file(path), ParseOptions{!lenient, validate}, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    return doc;
}

World materialize(const ScenarioDocument& doc)
{
    if (const auto* w = std::get_if<World>(&doc.content)) return *w;
    return init_world(std::get<WorldSpec>(doc.content));
}

// "0.2,0.8;0.5,0.5" -> {{0.2, 0.8}, {0.5, 0.5}}
std::vector<std::vector<double>> parse_configs(const std::string& text)
{
    std::vector<std::vector<double>> configs;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::vector<double> values;
        std::stringstream items(group);
        std::string item;
        while (std::getline(items, item, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw UsageError("--configs: cannot parse '" + item + "'");
            }
        }
        if (values.empty()) throw UsageError("--configs: empty area config");
        configs.push_back(std::move(values));
    }
    if (configs.empty()) throw UsageError("--configs: no configs given");
    return configs;
}

unsigned threads_from_env()
{
    if (const char* env = std::getenv("MISALIGN_THREADS")) {
        try {
            return unsigned(std::stoul(env));
        } catch (const std::exception&) {
            throw UsageError(std::string("MISALIGN_THREADS: not a number: ") + env);
        }
    }
    return 0;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << text;
}

struct ExperimentArgs {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t runs = 100;
    std::string out_dir;
    unsigned threads = 0;
    std::vector<std::size_t> agents;
    std::vector<std::size_t> areas;
    std::vector<std::size_t> goals;
    std::vector<double> weights;
    std::vector<double> proportions;
    std::string configs;
    std::vector<double> mix;
    std::vector<double> conflicts;
    std::vector<std::string> weight_modes;
};

std::size_t single(const std::vector<std::size_t>& values, std::size_t fallback, const char* flag)
{
    if (values.empty()) return fallback;
    if (values.size() != 1) throw UsageError(std::string(flag) + " takes a single value for this experiment");
    return values.front();
}

int run_experiment(const ExperimentArgs& a, CLI::App& sub, std::ostream& out)
{
    const auto& allowed = experiment_flags.at(a.name);
    for (const char* flag : {"--agents", "--areas", "--goals", "--weights", "--proportions", "--configs", "--mix",
                             "--conflicts", "--weight-modes"}) {
        if (sub.count(flag) > 0 && std::find(allowed.begin(), allowed.end(), flag) == allowed.end()) {
            throw UsageError(std::string(flag) + " does not apply to experiment " + a.name);
        }
    }

    const ExperimentOptions options{a.seed, a.runs, a.threads};
    const auto or_default = [](const auto& given, const auto& fallback) { return given.empty() ? fallback : given; };
    nlohmann::json params = nlohmann::json::object();
    std::vector<ExperimentCurve> curves;
    std::size_t runs = a.runs;

    if (a.name == "problem-areas") {
        const auto agents = or_default(a.agents, defaults::agent_counts);
        const auto areas = or_default(a.areas, defaults::area_counts);
        const auto goals = single(a.goals, 3, "--goals");
        curves = exp_varying_problem_areas(agents, areas, options, goals);
        params = {{"agents", agents}, {"areas", areas}, {"goals", goals}};
    } else if (a.name == "goals") {
        const auto agents = or_default(a.agents, defaults::agent_counts);
        const auto goals = or_default(a.goals, defaults::goal_counts);
        const auto areas = single(a.areas, 4, "--areas");
        curves = exp_varying_goals(agents, goals, options, areas);
        params = {{"agents", agents}, {"areas", areas}, {"goals", goals}};
    } else if (a.name == "weight-sensitivity") {
        const auto weights = or_default(a.weights, defaults::unit_grid(10));
        const auto areas = or_default(a.areas, defaults::area_counts);
        const auto goals = or_default(a.goals, defaults::sensitivity_goal_counts);
        const auto agents = single(a.agents, 100, "--agents");
        curves = exp_weight_sensitivity(weights, areas, goals, options, agents);
        params = {{"agents", agents}, {"areas", areas}, {"goals", goals}, {"weights", weights}};
    } else if (a.name == "goal-distribution") {
        const auto proportions = or_default(a.proportions, defaults::unit_grid(20));
        const auto goals = or_default(a.goals, defaults::distribution_goal_counts);
        const auto agents = single(a.agents, 1000, "--agents");
        curves = exp_goal_distribution(proportions, goals, agents);
        params = {{"agents", agents}, {"goals", goals}, {"proportions", proportions}};
        runs = 1;
    } else if (a.name == "conflict-levels") {
        const auto configs = a.configs.empty() ? defaults::conflict_configs : parse_configs(a.configs);
        const auto goals = or_default(a.goals, defaults::conflict_goal_counts);
        const auto agents = single(a.agents, 120, "--agents");
        curves = exp_conflict_levels(goals, configs, options, agents);
        params = {{"agents", agents}, {"goals", goals}, {"configs", configs}, {"weight_range", {0.25, 0.75}}};
    } else if (a.name == "carla") {
        const auto mix = or_default(a.mix, defaults::unit_grid(20));
        const auto conflicts = or_default(a.conflicts, defaults::carla_conflicts);
        std::vector<CarlaWeightMode> modes;
        for (const auto& m : or_default(a.weight_modes, std::vector<std::string>{"table", "max"})) {
            modes.push_back(m == "table" ? CarlaWeightMode::table : CarlaWeightMode::max);
        }
        const auto agents = single(a.agents, 1000, "--agents");
        curves = exp_carla(mix, conflicts, modes, agents);
        params = {{"agents", agents}, {"mix", mix}, {"conflicts", conflicts},
                  {"weight_modes", or_default(a.weight_modes, std::vector<std::string>{"table", "max"})}};
        runs = 1;
    }

    const std::filesystem::path dir(a.out_dir);
    std::filesystem::create_directories(dir);
    const auto csv_path = dir / (a.name + ".csv");
    write_file(csv_path, write_curves_csv(curves));
    const nlohmann::json meta = {{"experiment", a.name}, {"seed", a.seed}, {"runs", runs}, {"parameters", params}};
    write_file(dir / (a.name + ".meta.json"), meta.dump(2) + "\n");
    out << "wrote " << csv_path.string() << " (experiment=" << a.name << " seed=" << a.seed << " runs=" << runs
        << ")\n";
    return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Misalignment scoring for mixed human/AI agent populations", "misalign"};
    app.require_subcommand(1);

    // eval
    std::string eval_scenario;
    bool eval_unweighted = false;
    std::string eval_format = "json";
    bool eval_lenient = false;
    auto* eval = app.add_subcommand("eval", "Score a scenario (weighted unless --unweighted)");
    eval->add_option("--scenario", eval_scenario, "Scenario file (.json)")->required();
    eval->add_flag("--unweighted", eval_unweighted, "Ignore importance weights");
    eval->add_option("--format", eval_format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    eval->add_flag("--lenient", eval_lenient, "Warn on unknown fields instead of failing");

    // experiment
    ExperimentArgs exp;
    auto* experiment = app.add_subcommand("experiment", "Run a seeded experiment sweep and write <NAME>.csv");
    experiment->add_option("name", exp.name, "Experiment name")->required()->check(CLI::IsMember(experiment_names));
    experiment->add_option("--seed", exp.seed, "Base seed (default 0)");
    experiment->add_option("--runs", exp.runs, "Runs per data point")->check(CLI::PositiveNumber);
    experiment->add_option("--out", exp.out_dir, "Output directory")->required();
    auto* threads_opt = experiment->add_option("--threads", exp.threads, "Worker threads (0 = all cores)");
    experiment->add_option("--agents", exp.agents, "Agent counts")->delimiter(',');
    experiment->add_option("--areas", exp.areas, "Problem-area counts")->delimiter(',');
    experiment->add_option("--goals", exp.goals, "Goal counts")->delimiter(',');
    experiment->add_option("--weights", exp.weights, "Swept weight grid")->delimiter(',');
    experiment->add_option("--proportions", exp.proportions, "Goal-1 proportion grid")->delimiter(',');
    experiment->add_option("--configs", exp.configs, "Per-area conflict configs, e.g. 0.2,0.8;0.5,0.5");
    experiment->add_option("--mix", exp.mix, "Vehicle fraction grid")->delimiter(',');
    experiment->add_option("--conflicts", exp.conflicts, "Vehicle/pedestrian conflict levels")->delimiter(',');
    experiment->add_option("--weight-modes", exp.weight_modes, "table and/or max")
        ->delimiter(',')
        ->check(CLI::IsMember({"table", "max"}));

    // bound
    std::int64_t bound_agents = 0;
    std::int64_t bound_goals = 0;
    auto* bound = app.add_subcommand("bound", "Uniform-split maximum and its large-population limit");
    bound->add_option("--agents", bound_agents, "Agent count n")->required();
    bound->add_option("--goals", bound_goals, "Non-zero goal count k")->required();

    // validate
    std::string validate_scenario;
    bool validate_lenient = false;
    auto* validate = app.add_subcommand("validate", "List invariant violations in a scenario");
    validate->add_option("--scenario", validate_scenario, "Scenario file (.json)")->required();
    validate->add_flag("--lenient", validate_lenient, "Warn on unknown fields instead of failing");

    // generate
    std::string gen_spec;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Materialize a generator spec into an explicit world");
    generate->add_option("--spec", gen_spec, "Generator scenario file (.json)")->required();
    generate->add_option("--out", gen_out, "Output scenario file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (eval->parsed()) {
            const auto doc = load_scenario(eval_scenario, eval_lenient, true, err);
            const World world = materialize(doc);
            const auto report = eval_unweighted ? overall_misalignment(world, false) : evaluate_scenario(world);
            out << (eval_format == "csv" ? report_to_csv(report, world) : report_to_json(report, world));
            return ok;
        }
        if (experiment->parsed()) {
            if (threads_opt->count() == 0) exp.threads = threads_from_env();
            return run_experiment(exp, *experiment, out);
        }
        if (bound->parsed()) {
            out << "max_uniform_misalignment " << format_shortest(max_uniform_misalignment(bound_agents, bound_goals))
                << "\n";
            out << "asymptotic_bound " << format_shortest(asymptotic_bound(bound_goals)) << "\n";
            return ok;
        }
        if (validate->parsed()) {
            const auto doc = load_scenario(validate_scenario, validate_lenient, false, err);
            if (const auto* world = std::get_if<World>(&doc.content)) {
                const auto violations = validate_world(*world);
                for (const auto& v : violations) out << format_violation(v) << "\n";
                if (has_errors(violations)) return validation_failure;
            } else {
                validate_spec(std::get<WorldSpec>(doc.content));
            }
            out << "ok\n";
            return ok;
        }
        if (generate->parsed()) {
            const auto doc = load_scenario(gen_spec, false, true, err);
            const auto* spec = std::get_if<WorldSpec>(&doc.content);
            if (!spec) throw UsageError(gen_spec + " holds an explicit world, not a generator spec");
            write_file(gen_out, serialize_scenario(ScenarioDocument{scenario_format_version, init_world(*spec)}));
            out << "wrote " << gen_out << " (seed=" << spec->seed << ")\n";
            return ok;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const ScenarioSemanticError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& v : e.violations) err << "  " << format_violation(v) << "\n";
        return validation_failure;
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << "\n";
        return validation_failure;
    } catch (const SpecError& e) {
        err << "error: " << e.what() << "\n";
        return validation_failure;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
    return usage_error;
}

}  // namespace misalign::cli
