// purposectl: command-line front end for scenarios, alignment checks, audits and causal analysis.
//
// Exit codes: 0 success or aligned, 1 misaligned / causal failure / audit disagreement,
// 2 parse or validation error, 3 runtime error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "purpose/home_scenario.hpp"
#include "purpose/model_generator.hpp"

namespace {

using namespace purpose;

enum Exit { kOk = 0, kVerdictFailed = 1, kInvalid = 2, kRuntime = 3 };

void write_out(const std::string& body, const std::string& path) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
    out << body;
}

ReportFormat format_of(const std::string& name) { return name == "text" ? ReportFormat::Text : ReportFormat::Json; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Purpose-alignment toolkit"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string report_path;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    const auto formats = CLI::IsMember({"json", "text"});

    auto* check = app.add_subcommand("check", "Decide an alignment case on a scenario");
    std::string case_name;
    std::string mode_name;
    std::optional<double> delta;
    double threshold = 0.0;
    check->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    check->add_option("--case", case_name, "Alignment case")
        ->required()
        ->check(CLI::IsMember({"extrinsic", "vut", "vumax", "intrinsic", "instrumental", "proscriptive", "multidomain-all",
                               "multidomain-any"}));
    check->add_option("--mode", mode_name, "semantic or operational")->required()->check(CLI::IsMember({"semantic", "operational"}));
    check->add_option("--threshold", threshold, "Utility threshold for the vut case");
    check->add_option("--delta", delta, "Probabilistic tolerance for the operational check");
    check->add_option("--seed", seed, "Random seed");
    check->add_option("--report", report_path, "Write the verdict here instead of stdout");
    check->add_option("--format", format, "json or text")->check(formats);

    auto* simulate = app.add_subcommand("simulate", "Run the trial schedule of a scenario");
    std::optional<int> trials;
    simulate->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--trials", trials, "Run only the first N trials")->check(CLI::NonNegativeNumber);
    simulate->add_option("--seed", seed, "Random seed (default: the scenario's)");
    simulate->add_option("--report", report_path, "Write the report here instead of stdout");
    simulate->add_option("--format", format, "json or text")->check(formats);

    auto* audit = app.add_subcommand("audit", "Compare the condition checker with the definition checker on random models");
    int count = 1000;
    std::uint64_t audit_seed = 0;
    audit->add_option("--case", case_name, "Alignment case")->required();
    audit->add_option("--count", count, "Number of models")->check(CLI::PositiveNumber);
    audit->add_option("--seed", audit_seed, "Base seed");
    audit->add_option("--report", report_path, "Write the audit here instead of stdout");
    audit->add_option("--format", format, "json or text")->check(formats);

    auto* cause = app.add_subcommand("cause", "Actual-cause analysis of the committed goal");
    std::string baseline = "idle";
    cause->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    cause->add_option("--baseline", baseline, "Counterfactual regime")->check(CLI::IsMember({"idle", "random"}));
    cause->add_option("--seed", seed, "Random seed");
    cause->add_option("--report", report_path, "Write the verdict here instead of stdout");
    cause->add_option("--format", format, "json or text")->check(formats);

    auto* gen = app.add_subcommand("gen-home-scenario", "Emit the home service robot scenario");
    std::string out_path;
    gen->add_option("--out", out_path, "Output file (stdout when omitted)");

    auto* ground = app.add_subcommand("ground", "Ground a purpose in a domain");
    std::string purpose_id;
    std::string domain_id;
    std::string point;
    std::string context;
    ground->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    ground->add_option("--purpose", purpose_id, "Purpose id")->required();
    ground->add_option("--domain", domain_id, "Domain id")->required();
    ground->add_option("--point", point, "Ground a single point instead of the whole support");
    ground->add_option("--context", context, "Encoder context tag");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*check) {
            const auto spec = load_scenario(scenario_path);
            const auto model = build_alignment_model(spec);
            const AlignmentCase acase{parse_case(case_name), threshold};
            Rng rng(seed.value_or(spec.seed));
            AlignmentVerdict v;
            if (parse_mode(mode_name) == CheckMode::Semantic) {
                v = check_conditions(model, acase);
            } else {
                OperationalOptions opts;
                opts.delta = delta;
                v = check_definition(model, acase, rng, opts);
            }
            write_out(render_verdict(v, format_of(format)), report_path);
            return v.aligned ? kOk : kVerdictFailed;
        }
        if (*simulate) {
            auto spec = load_scenario(scenario_path);
            if (seed) spec.seed = *seed;
            Rng rng(spec.seed);
            const auto report = run_trials(spec, rng, trials);
            write_out(render_report(report, format_of(format)), report_path);
            for (const auto& c : report.checks) {
                for (const auto& v : c.verdicts)
                    if (!v.aligned) return kVerdictFailed;
                if (c.causality && !c.causality->overall) return kVerdictFailed;
            }
            return kOk;
        }
        if (*audit) {
            const AlignmentCase acase{parse_case(case_name), kAuditThreshold};
            const auto report = equivalence_audit(generate_random_model, acase, count, audit_seed);
            write_out(render_audit(report, format_of(format)), report_path);
            return report.agreements == report.count ? kOk : kVerdictFailed;
        }
        if (*cause) {
            const auto spec = load_scenario(scenario_path);
            const auto model = build_alignment_model(spec);
            Rng rng(seed.value_or(spec.seed));
            const bool chain = !model.bindings.front().subgoals.empty();
            const auto v = causal_verdict(model, default_intervention(model, baseline, chain), rng);
            write_out(render_causal(v, format_of(format)), report_path);
            return v.overall ? kOk : kVerdictFailed;
        }
        if (*gen) {
            write_out(emit_scenario(build_home_robot_scenario()), out_path);
            return kOk;
        }
        if (*ground) {
            const auto spec = load_scenario(scenario_path);
            const auto& p = spec.purpose(purpose_id).purpose;
            const auto& enc = spec.encoder(p.owner, p.space_id, domain_id, context);
            const Goal g = point.empty() ? ground_purpose(p, enc) : ground_point(p, point, enc);
            const auto sg = state_goal(g, spec.sensor(p.owner));
            nlohmann::ordered_json out;
            out["goal"] = g.id;
            out["observations"] = g.points;
            out["states"] = sg.states;
            nlohmann::ordered_json utilities = nlohmann::ordered_json::object();
            for (const auto& [o, u] : g.utility_per_point) utilities[o] = u;
            out["utility"] = utilities;
            std::cout << out.dump(2) << "\n";
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const bool invalid = e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::ValidationError;
        return invalid ? kInvalid : kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
