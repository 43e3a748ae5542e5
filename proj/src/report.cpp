#include "purpose/scenario.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace purpose {

namespace {

using json = nlohmann::ordered_json;

template <typename C>
json array_of(const C& items) {
    json out = json::array();
    for (const auto& x : items) out.push_back(x);
    return out;
}

json verdict_json(const AlignmentVerdict& v) {
    json out;
    out["case"] = to_string(v.acase.kind);
    if (v.acase.kind == CaseKind::VariableUtilityThreshold) out["threshold"] = v.acase.threshold;
    out["mode"] = to_string(v.mode);
    out["aligned"] = v.aligned;
    json conditions = json::array();
    for (const auto& c : v.conditions)
        conditions.push_back(json{{"number", c.number},
                                  {"label", c.label},
                                  {"domain", c.domain},
                                  {"holds", c.holds},
                                  {"witnesses", array_of(c.witnesses)}});
    out["conditions"] = conditions;
    json outcomes = json::array();
    for (const auto& o : v.outcomes)
        outcomes.push_back(json{{"domain", o.domain},
                                {"link", o.link},
                                {"achieved", o.achieved},
                                {"state", o.state},
                                {"human_observations", array_of(o.human_observations)},
                                {"encodings", array_of(o.encodings)},
                                {"satisfied", o.satisfied}});
    out["outcomes"] = outcomes;
    out["witness_trace"] = v.witness_trace;
    if (v.success_probability) out["success_probability"] = *v.success_probability;
    out["notes"] = v.notes;
    return out;
}

json causal_json(const CausalVerdict& v) {
    json out;
    out["ac1"] = v.ac1;
    out["ac2"] = json{{"holds", v.ac2.holds},
                      {"baseline", v.ac2.baseline},
                      {"deterministic", v.ac2.deterministic},
                      {"exact", v.ac2.exact},
                      {"p_do", v.ac2.p_do},
                      {"p_baseline", v.ac2.p_baseline},
                      {"se_do", v.ac2.se_do},
                      {"se_baseline", v.ac2.se_baseline},
                      {"p_do_any", v.ac2.p_do_any},
                      {"p_baseline_any", v.ac2.p_baseline_any},
                      {"nodes", v.ac2.nodes}};
    out["ac3"] = json{{"holds", v.ac3.holds},
                      {"executed_cost", v.ac3.executed_cost},
                      {"minimal_cost", v.ac3.minimal_cost},
                      {"integer_costs", v.ac3.integer_costs}};
    out["overall"] = v.overall;
    out["notes"] = v.notes;
    return out;
}

json report_json(const ReportDocument& r) {
    json out;
    out["format_version"] = r.format_version;
    out["scenario"] = json{{"name", r.scenario_name}, {"digest", r.scenario_digest}};
    out["seed"] = r.seed;
    json trials = json::array();
    for (const auto& t : r.trials) {
        json tj;
        tj["trial"] = t.index;
        tj["phase"] = t.phase;
        tj["context"] = t.context;
        tj["domain"] = t.domain;
        tj["start"] = t.start;
        tj["intended"] = t.intended;
        json cands = json::array();
        for (const auto& c : t.candidates) {
            json cj;
            cj["goal"] = c.goal;
            cj["purpose"] = c.purpose;
            cj["feasible"] = c.feasible;
            if (c.feasible) {
                cj["predicted_end"] = c.predicted_end;
                cj["predicted_point"] = c.predicted_point;
                cj["score"] = c.score;
            }
            cands.push_back(cj);
        }
        tj["candidates"] = cands;
        tj["selected"] = t.selected ? json(*t.selected) : json(nullptr);
        tj["selected_purpose"] = t.selected_purpose ? json(*t.selected_purpose) : json(nullptr);
        tj["success"] = t.success;
        tj["steps"] = t.actions.size();
        tj["states"] = t.states;
        tj["actions"] = t.actions;
        json visits = json::object();
        for (const auto& [p, k] : t.proscribed_visits) visits[p] = k;
        tj["proscribed_visits"] = visits;
        trials.push_back(tj);
    }
    out["trials"] = trials;
    json checks = json::array();
    for (const auto& c : r.checks) {
        json cj;
        cj["after_phase"] = c.after_phase;
        json verdicts = json::array();
        for (const auto& v : c.verdicts) verdicts.push_back(verdict_json(v));
        cj["alignment"] = verdicts;
        cj["causality"] = c.causality ? causal_json(*c.causality) : json(nullptr);
        checks.push_back(cj);
    }
    out["checks"] = checks;
    json curves = json::array();
    for (const auto& c : r.learning_curves) curves.push_back(json{{"goal", c.goal}, {"success_rate", c.success_rate}});
    out["learning_curves"] = curves;
    out["warnings"] = r.warnings;
    return out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void verdict_text(std::ostream& os, const AlignmentVerdict& v) {
    os << "alignment " << to_string(v.acase.kind) << " (" << to_string(v.mode) << "): " << (v.aligned ? "aligned" : "misaligned")
       << "\n";
    for (const auto& c : v.conditions) {
        os << "  condition " << c.number << " [" << c.label << "]";
        if (!c.domain.empty()) os << " in " << c.domain;
        os << ": " << (c.holds ? "holds" : "fails");
        if (!c.witnesses.empty()) os << "; witnesses " << join(c.witnesses, ", ");
        os << "\n";
    }
    for (const auto& o : v.outcomes)
        if (!o.satisfied)
            os << "  outcome " << o.achieved << " at " << o.state << " in " << o.domain << " misses the human purpose\n";
    if (v.success_probability) os << "  success probability " << *v.success_probability << "\n";
    if (!v.witness_trace.empty()) {
        os << "  witness trace:";
        for (const auto& s : v.witness_trace) os << " " << s;
        os << "\n";
    }
    for (const auto& n : v.notes) os << "  note: " << n << "\n";
}

void causal_text(std::ostream& os, const CausalVerdict& v) {
    os << "actual cause: " << (v.overall ? "yes" : "no") << "\n";
    os << "  AC1 chain exists: " << yes_no(v.ac1) << "\n";
    os << "  AC2 (" << v.ac2.baseline << " baseline): " << yes_no(v.ac2.holds) << "; P(Y|do)=" << v.ac2.p_do
       << " P(Y|baseline)=" << v.ac2.p_baseline << (v.ac2.exact ? " exact" : " sampled") << "\n";
    os << "  AC3 minimal cost: " << yes_no(v.ac3.holds) << "; executed " << v.ac3.executed_cost << " minimal "
       << v.ac3.minimal_cost << "\n";
    for (const auto& n : v.notes) os << "  note: " << n << "\n";
}

}  // namespace

std::string render_verdict(const AlignmentVerdict& verdict, ReportFormat format) {
    if (format == ReportFormat::Json) return verdict_json(verdict).dump(2) + "\n";
    std::ostringstream os;
    verdict_text(os, verdict);
    return os.str();
}

std::string render_causal(const CausalVerdict& verdict, ReportFormat format) {
    if (format == ReportFormat::Json) return causal_json(verdict).dump(2) + "\n";
    std::ostringstream os;
    causal_text(os, verdict);
    return os.str();
}

std::string render_audit(const AuditReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json out;
        out["case"] = to_string(report.acase.kind);
        out["count"] = report.count;
        out["agreements"] = report.agreements;
        out["aligned"] = report.aligned;
        json dis = json::array();
        for (const auto& d : report.disagreements)
            dis.push_back(json{{"index", d.index}, {"semantic", d.semantic}, {"operational", d.operational}, {"model", d.model}});
        out["disagreements"] = dis;
        return out.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "audit " << to_string(report.acase.kind) << ": " << report.agreements << "/" << report.count << " agree, "
       << report.aligned << " aligned\n";
    for (const auto& d : report.disagreements)
        os << "  model " << d.index << ": semantic " << (d.semantic ? "aligned" : "misaligned") << ", operational "
           << (d.operational ? "aligned" : "misaligned") << "\n"
           << d.model;
    return os.str();
}

std::string render_report(const ReportDocument& report, ReportFormat format) {
    if (format == ReportFormat::Json) return report_json(report).dump(2) + "\n";
    std::ostringstream os;
    os << "scenario " << report.scenario_name << " (digest " << report.scenario_digest << "), seed " << report.seed << "\n";
    for (const auto& t : report.trials) {
        os << "trial " << t.index << " [phase " << t.phase << ", " << t.context << "] from " << t.start << ": ";
        if (t.selected)
            os << t.selected_purpose.value_or("?") << " -> " << *t.selected << ", " << (t.success ? "reached" : "not reached")
               << " in " << t.actions.size() << " steps, end " << t.states.back();
        else
            os << "idle";
        os << "\n";
        for (const auto& c : t.candidates) {
            os << "    candidate " << c.goal << ": ";
            if (c.feasible)
                os << "score " << c.score << " at " << c.predicted_end;
            else
                os << "infeasible";
            os << "\n";
        }
        for (const auto& [p, k] : t.proscribed_visits)
            if (k > 0) os << "    " << k << " visit(s) proscribed by " << p << "\n";
    }
    for (const auto& c : report.checks) {
        os << "after phase " << c.after_phase << ":\n";
        for (const auto& v : c.verdicts) verdict_text(os, v);
        if (c.causality) causal_text(os, *c.causality);
    }
    for (const auto& w : report.warnings) os << "warning: " << w << "\n";
    return os.str();
}

void emit_report(const ReportDocument& report, const std::filesystem::path& path, ReportFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << render_report(report, format);
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

}  // namespace purpose
