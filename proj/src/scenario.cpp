#include "purpose/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace purpose {

namespace {

using json = nlohmann::ordered_json;

const AgentId kRobot = "robot";
const AgentId kHuman = "human";

[[noreturn]] void invalid(const std::string& where, const std::string& message) {
    throw Error(ErrorKind::ValidationError, where + ": " + message);
}

/// Runs a module constructor and reports its failure as a validation error of `where`.
template <typename F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ValidationError) throw;
        invalid(where, e.what());
    } catch (const json::exception& e) {
        invalid(where, e.what());
    }
}

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) invalid(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) invalid(where, std::string("missing field '") + key + "'");
    return *it;
}

std::string text(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) invalid(where, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::string text_or(const json& j, const char* key, const std::string& fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    return text(j, key, where);
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) invalid(where, std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

int integer_or(const json& j, const char* key, int fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) invalid(where, std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

bool flag_or(const json& j, const char* key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean()) invalid(where, std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

std::set<std::string> names(const json& j, const std::string& where) {
    if (!j.is_array()) invalid(where, "expected an array of identifiers");
    std::set<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) invalid(where, "identifiers must be strings");
        out.insert(v.get<std::string>());
    }
    return out;
}

std::set<std::string> names_or(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) return {};
    return names(j.at(key), where + "." + key);
}

std::vector<std::string> name_list(const json& j, const char* key, const std::string& where) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) invalid(where, std::string("field '") + key + "' must be an array");
    for (const auto& v : j.at(key)) {
        if (!v.is_string()) invalid(where, "identifiers must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::map<std::string, std::string> string_table(const json& j, const std::string& where) {
    if (!j.is_object()) invalid(where, "expected an object");
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_string()) invalid(where + "." + k, "expected a string");
        out[k] = v.get<std::string>();
    }
    return out;
}

std::map<std::string, double> number_table(const json& j, const std::string& where) {
    if (!j.is_object()) invalid(where, "expected an object");
    std::map<std::string, double> out;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) invalid(where + "." + k, "expected a number");
        out[k] = v.get<double>();
    }
    return out;
}

Row parse_row(const json& j, const std::string& where) {
    if (j.is_string()) return Row{j.get<std::string>()};
    if (j.is_object()) return Row{number_table(j, where)};
    invalid(where, "row must be an identifier or a probability table");
}

json row_json(const Row& row) {
    if (row.deterministic()) return std::get<std::string>(row.value);
    json out = json::object();
    for (const auto& [k, p] : std::get<Distribution>(row.value)) out[k] = p;
    return out;
}

template <typename C>
json array_of(const C& items) {
    json out = json::array();
    for (const auto& x : items) out.push_back(x);
    return out;
}

json number_object(const std::map<std::string, double>& table) {
    json out = json::object();
    for (const auto& [k, v] : table) out[k] = v;
    return out;
}

std::string_view kind_name(PurposeKind k) { return to_string(k); }

PurposeKind parse_kind(const std::string& s, const std::string& where) {
    for (auto k : {PurposeKind::Need, PurposeKind::Mission, PurposeKind::Human})
        if (to_string(k) == s) return k;
    invalid(where, "unknown purpose kind '" + s + "'");
}

GroundingMode parse_grounding(const std::string& s, const std::string& where) {
    if (s == "point") return GroundingMode::BestPoint;
    if (s == "whole") return GroundingMode::Whole;
    invalid(where, "unknown grounding '" + s + "'");
}

std::string_view grounding_name(GroundingMode g) { return g == GroundingMode::Whole ? "whole" : "point"; }

// ---- parsing ----

Domain parse_domain(const json& j, std::map<DomainId, ActionId>& idle) {
    const std::string id = text(j, "id", "domain");
    const std::string where = "domain " + id;
    const auto states = names(field(j, "states", where), where + ".states");
    const auto actions = names(field(j, "actions", where), where + ".actions");
    std::set<StateId> initial = j.contains("initial") ? names(j.at("initial"), where + ".initial") : states;
    TransitionTable table;
    const json& tr = field(j, "transitions", where);
    if (!tr.is_object()) invalid(where, "transitions must be an object");
    for (const auto& [s, row] : tr.items()) {
        if (!row.is_object()) invalid(where + ".transitions." + s, "expected an object keyed by action");
        for (const auto& [a, r] : row.items()) table[{s, a}] = parse_row(r, where + " row (" + s + ", " + a + ")");
    }
    if (j.contains("idle")) idle[id] = text(j, "idle", where);
    return guarded(where, [&] { return Domain(id, states, actions, std::move(table), std::move(initial)); });
}

SensorModel parse_sensor(const json& j, const std::vector<Domain>& domains) {
    const std::string owner = text(j, "owner", "sensor");
    const std::string where = "sensor " + owner;
    std::map<DomainId, std::set<StateId>> covered;
    for (const auto& d : names(field(j, "domains", where), where + ".domains")) {
        auto it = std::find_if(domains.begin(), domains.end(), [&](const Domain& x) { return x.id() == d; });
        if (it == domains.end()) invalid(where, "unknown domain '" + d + "'");
        covered[d] = it->states();
    }
    std::map<StateId, Row> map;
    const json& m = field(j, "map", where);
    if (!m.is_object()) invalid(where, "map must be an object");
    for (const auto& [s, r] : m.items()) map[s] = parse_row(r, where + " row " + s);
    const auto obs = names(field(j, "observations", where), where + ".observations");
    return guarded(where, [&] { return SensorModel(owner, obs, std::move(covered), std::move(map)); });
}

EncodingSpace parse_space(const json& j) {
    const std::string id = text(j, "id", "space");
    const std::string where = "space " + id;
    const std::string owner = text(j, "owner", where);
    if (j.contains("dims")) {
        std::vector<Axis> dims;
        for (const auto& d : j.at("dims")) {
            Axis ax;
            ax.name = text(d, "name", where + ".dims");
            for (const auto& v : field(d, "values", where + ".dims")) {
                if (!v.is_string()) invalid(where, "axis values must be strings");
                ax.values.push_back(v.get<std::string>());
            }
            dims.push_back(std::move(ax));
        }
        return guarded(where, [&] { return EncodingSpace(id, owner, std::move(dims)); });
    }
    const auto points = names(field(j, "points", where), where + ".points");
    return guarded(where, [&] { return EncodingSpace(id, owner, points); });
}

json space_json(const EncodingSpace& sp) {
    json out;
    out["id"] = sp.id();
    out["owner"] = sp.owner();
    if (sp.dims()) {
        json dims = json::array();
        for (const auto& ax : *sp.dims()) dims.push_back(json{{"name", ax.name}, {"values", ax.values}});
        out["dims"] = dims;
    } else {
        out["points"] = array_of(sp.points());
    }
    return out;
}

json policy_json(const PolicyTable& table, const char* choices) {
    json out = json::array();
    for (const auto& [key, row] : table.table())
        out.push_back(json{{"observation", key.first}, {"goal", key.second}, {choices, number_object(row)}});
    return out;
}

template <typename P>
P parse_policy(const json& j, const char* choices, const std::string& where) {
    P out;
    if (!j.is_array()) invalid(where, "expected an array of rows");
    for (const auto& r : j) {
        const auto o = text(r, "observation", where);
        const auto g = text(r, "goal", where);
        auto row = number_table(field(r, choices, where), where + " (" + o + ", " + g + ")");
        guarded(where + " (" + o + ", " + g + ")", [&] {
            out.set(o, g, std::move(row));
            return 0;
        });
    }
    return out;
}

std::set<StateId> state_ids(const std::vector<Domain>& domains) {
    std::set<StateId> out;
    for (const auto& d : domains) out.insert(d.states().begin(), d.states().end());
    return out;
}

}  // namespace

const Domain& ScenarioSpec::domain(const DomainId& id) const {
    for (const auto& d : domains)
        if (d.id() == id) return d;
    throw Error(ErrorKind::ValidationError, "unknown domain '" + id + "'");
}

const SensorModel& ScenarioSpec::sensor(const AgentId& owner) const {
    for (const auto& s : sensors)
        if (s.owner() == owner) return s;
    throw Error(ErrorKind::ValidationError, "no sensor for agent '" + owner + "'");
}

const EncodingSpace& ScenarioSpec::space(const std::string& id) const {
    for (const auto& s : spaces)
        if (s.id() == id) return s;
    throw Error(ErrorKind::ValidationError, "unknown space '" + id + "'");
}

const PurposeEntry& ScenarioSpec::purpose(const PurposeId& id) const {
    for (const auto& p : purposes)
        if (p.purpose.id == id) return p;
    throw Error(ErrorKind::ValidationError, "unknown purpose '" + id + "'");
}

const ObservationEncoder& ScenarioSpec::encoder(const AgentId& owner, const std::string& space_id, const DomainId& domain_id,
                                                const std::string& context) const {
    auto it = encoders.find({owner, space_id, domain_id, context});
    if (it == encoders.end()) it = encoders.find({owner, space_id, domain_id, ""});
    if (it == encoders.end())
        throw Error(ErrorKind::ValidationError,
                    "no encoder for " + owner + " space " + space_id + " in domain " + domain_id +
                        (context.empty() ? std::string() : " context " + context));
    return it->second;
}

ScenarioSpec parse_scenario(const std::string& source) {
    json root;
    try {
        root = json::parse(source);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, source.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (source[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                               e.what());
    }
    if (!root.is_object()) invalid("scenario", "top level must be an object");
    const int schema = integer_or(root, "schema", kSchemaVersion, "scenario");
    if (schema != kSchemaVersion) invalid("scenario", "unsupported schema " + std::to_string(schema));

    ScenarioSpec spec;
    spec.name = text_or(root, "name", "", "scenario");
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned()) invalid("scenario", "seed must be a non-negative integer");
        spec.seed = root.at("seed").get<std::uint64_t>();
    }
    for (const auto& d : field(root, "domains", "scenario")) spec.domains.push_back(parse_domain(d, spec.idle_actions));
    if (root.contains("sensors"))
        for (const auto& s : root.at("sensors")) spec.sensors.push_back(parse_sensor(s, spec.domains));
    if (root.contains("spaces"))
        for (const auto& s : root.at("spaces")) spec.spaces.push_back(parse_space(s));

    auto space_of = [&](const std::string& id, const std::string& where) -> const EncodingSpace& {
        for (const auto& s : spec.spaces)
            if (s.id() == id) return s;
        invalid(where, "unknown space '" + id + "'");
    };

    if (root.contains("encoders")) {
        for (const auto& e : root.at("encoders")) {
            EncoderKey key{text(e, "owner", "encoder"), text(e, "space", "encoder"), text(e, "domain", "encoder"),
                           text_or(e, "context", "", "encoder")};
            const std::string where = "encoder " + key.owner + "/" + key.space + "/" + key.domain +
                                      (key.context.empty() ? "" : "/" + key.context);
            const auto& sp = space_of(key.space, where);
            auto table = string_table(field(e, "map", where), where + ".map");
            if (spec.encoders.count(key)) invalid(where, "duplicate encoder");
            spec.encoders.emplace(key, guarded(where, [&] { return ObservationEncoder(key.owner, sp, key.domain, table); }));
        }
    }
    if (root.contains("maps")) {
        for (const auto& m : root.at("maps")) {
            const std::string id = text(m, "id", "map");
            const std::string where = "map " + id;
            const auto& human = space_of(text(m, "human_space", where), where);
            const auto& robot = space_of(text(m, "robot_space", where), where);
            auto table = string_table(field(m, "map", where), where + ".map");
            spec.maps.emplace(id, guarded(where, [&] { return AlignmentMap(human, robot, table); }));
        }
    }
    if (root.contains("purposes")) {
        for (const auto& p : root.at("purposes")) {
            PurposeEntry entry;
            const std::string id = text(p, "id", "purpose");
            const std::string where = "purpose " + id;
            const auto& sp = space_of(text(p, "space", where), where);
            PurposeMeta meta;
            meta.kind = parse_kind(text_or(p, "kind", "need", where), where);
            meta.priority = number_or(p, "alpha", 1.0, where);
            meta.intention_flag = flag_or(p, "iota", false, where);
            meta.intended_domains = names_or(p, "domains", where);
            meta.ground_truth = flag_or(p, "ground_truth", false, where);
            entry.active = flag_or(p, "active", true, where);
            entry.grounding = parse_grounding(text_or(p, "grounding", "point", where), where);
            if (p.contains("derive")) {
                const json& d = p.at("derive");
                const auto from = text(d, "from", where + ".derive");
                const auto map_id = text(d, "map", where + ".derive");
                auto src = std::find_if(spec.purposes.begin(), spec.purposes.end(),
                                        [&](const PurposeEntry& x) { return x.purpose.id == from; });
                if (src == spec.purposes.end()) invalid(where, "derives from unknown or later purpose '" + from + "'");
                if (!spec.maps.count(map_id)) invalid(where, "unknown map '" + map_id + "'");
                entry.derived_from = std::make_pair(from, map_id);
                entry.purpose = guarded(where, [&] { return derive_mission(id, src->purpose, spec.maps.at(map_id), sp, meta); });
            } else {
                UtilityFunction u{sp.id(), number_table(field(p, "utility", where), where + ".utility")};
                for (const auto& pt : sp.points()) u.table.emplace(pt, 0.0);
                entry.purpose = guarded(where, [&] { return purpose_from_utility(id, sp, u, meta); });
            }
            for (const auto& other : spec.purposes)
                if (other.purpose.id == id) invalid(where, "duplicate purpose id");
            spec.purposes.push_back(std::move(entry));
        }
    }
    if (root.contains("policy")) spec.policy = parse_policy<ActionPolicy>(root.at("policy"), "actions", "policy");
    if (root.contains("selector"))
        spec.selector = parse_policy<GoalSelectorPolicy>(root.at("selector"), "subgoals", "selector");
    if (root.contains("learner")) {
        const json& l = root.at("learner");
        LearnerConfig cfg;
        cfg.budget_steps = integer_or(l, "budget_steps", cfg.budget_steps, "learner");
        cfg.alpha = number_or(l, "alpha", cfg.alpha, "learner");
        cfg.epsilon = number_or(l, "epsilon", cfg.epsilon, "learner");
        cfg.seed = static_cast<std::uint64_t>(integer_or(l, "seed", 0, "learner"));
        spec.learner = cfg;
    }
    if (root.contains("arbitration")) {
        const json& a = root.at("arbitration");
        spec.arbitration.rule = guarded("arbitration", [&] { return parse_rule(text_or(a, "rule", "motivational", "arbitration")); });
        spec.arbitration.temperature = number_or(a, "temperature", spec.arbitration.temperature, "arbitration");
        spec.arbitration.proscriptive_factor =
            number_or(a, "proscriptive_factor", spec.arbitration.proscriptive_factor, "arbitration");
        spec.arbitration.seed = static_cast<std::uint64_t>(integer_or(a, "seed", 0, "arbitration"));
    }
    spec.trial_timeout = integer_or(root, "trial_timeout", spec.trial_timeout, "scenario");
    if (root.contains("phases")) {
        for (const auto& ph : root.at("phases")) {
            PhaseSpec phase;
            const json& range = field(ph, "trials", "phase");
            if (!range.is_array() || range.size() != 2 || !range[0].is_number_integer() || !range[1].is_number_integer())
                invalid("phase", "trials must be [first, last]");
            phase.first_trial = range[0].get<int>();
            phase.last_trial = range[1].get<int>();
            if (ph.contains("alpha")) phase.priorities = number_table(ph.at("alpha"), "phase.alpha");
            phase.add = name_list(ph, "add", "phase");
            phase.remove = name_list(ph, "remove", "phase");
            spec.phases.push_back(std::move(phase));
        }
    }
    if (root.contains("trials")) {
        for (const auto& t : root.at("trials")) {
            TrialSpec trial;
            trial.context = text_or(t, "context", "", "trial");
            trial.domain = text_or(t, "domain", spec.domains.empty() ? "" : spec.domains.front().id(), "trial");
            trial.start = names_or(t, "start", "trial");
            spec.trials.push_back(std::move(trial));
        }
    }
    if (spec.phases.empty() && !spec.trials.empty())
        spec.phases.push_back(PhaseSpec{1, static_cast<int>(spec.trials.size()), {}, {}, {}});
    if (root.contains("alignment")) {
        const json& a = root.at("alignment");
        AlignmentSection sec;
        sec.human_purpose = text(a, "human_purpose", "alignment");
        if (a.contains("human_forbidden")) sec.human_forbidden = text(a, "human_forbidden", "alignment");
        sec.robot_purpose = text(a, "robot_purpose", "alignment");
        sec.point = text(a, "point", "alignment");
        sec.robot_domains = names(field(a, "domains", "alignment"), "alignment.domains");
        sec.timeout = integer_or(a, "timeout", sec.timeout, "alignment");
        if (a.contains("idle")) sec.idle_action = text(a, "idle", "alignment");
        sec.context = text_or(a, "context", "", "alignment");
        const auto mode = text_or(a, "policy", "planned", "alignment");
        if (mode != "planned" && mode != "table") invalid("alignment", "policy must be 'planned' or 'table'");
        sec.planned_policy = mode == "planned";
        for (const auto& b : field(a, "bindings", "alignment")) {
            BindingSpec bs;
            const std::string where = "alignment binding";
            bs.domain = text(b, "domain", where);
            bs.robot_space = text(b, "robot_space", where);
            bs.human_space = text(b, "human_space", where);
            if (b.contains("forbidden_space")) bs.forbidden_space = text(b, "forbidden_space", where);
            if (b.contains("goal")) bs.goal = names(b.at("goal"), where + ".goal");
            if (b.contains("subgoals"))
                for (const auto& sg : b.at("subgoals"))
                    bs.subgoals.emplace_back(text(sg, "id", where + ".subgoals"),
                                             names(field(sg, "observations", where), where + ".subgoals"));
            bs.true_states = names_or(b, "true_states", where);
            bs.true_observations = names_or(b, "true_observations", where);
            bs.forbidden_states = names_or(b, "forbidden_states", where);
            bs.forbidden_observations = names_or(b, "forbidden_observations", where);
            sec.bindings.push_back(std::move(bs));
        }
        spec.alignment = std::move(sec);
    }
    if (root.contains("checks")) {
        for (const auto& c : root.at("checks")) {
            CheckSpec check;
            check.after_phase = integer_or(c, "after_phase", 1, "check");
            if (c.contains("case")) {
                AlignmentCase ac;
                ac.kind = guarded("check", [&] { return parse_case(text(c, "case", "check")); });
                ac.threshold = number_or(c, "threshold", 0.0, "check");
                check.acase = ac;
            }
            for (const auto& m : name_list(c, "modes", "check"))
                check.modes.push_back(guarded("check", [&] { return parse_mode(m); }));
            if (c.contains("causality")) check.causality_baseline = text(c, "causality", "check");
            spec.checks.push_back(std::move(check));
        }
    }
    validate(spec);
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string emit_scenario(const ScenarioSpec& spec) {
    json root;
    root["schema"] = kSchemaVersion;
    root["name"] = spec.name;
    root["seed"] = spec.seed;
    json domains = json::array();
    for (const auto& d : spec.domains) {
        json dj;
        dj["id"] = d.id();
        dj["states"] = array_of(d.states());
        dj["actions"] = array_of(d.actions());
        dj["initial"] = array_of(d.initial_states());
        if (auto it = spec.idle_actions.find(d.id()); it != spec.idle_actions.end()) dj["idle"] = it->second;
        json tr = json::object();
        for (const auto& [key, row] : d.transition()) tr[key.first][key.second] = row_json(row);
        dj["transitions"] = tr;
        domains.push_back(dj);
    }
    root["domains"] = domains;
    json sensors = json::array();
    for (const auto& s : spec.sensors) {
        json sj;
        sj["owner"] = s.owner();
        sj["observations"] = array_of(s.observations());
        sj["domains"] = array_of(s.covered_domains());
        json m = json::object();
        for (const auto& [st, row] : s.map()) m[st] = row_json(row);
        sj["map"] = m;
        sensors.push_back(sj);
    }
    root["sensors"] = sensors;
    json spaces = json::array();
    for (const auto& s : spec.spaces) spaces.push_back(space_json(s));
    root["spaces"] = spaces;
    json encoders = json::array();
    for (const auto& [key, enc] : spec.encoders) {
        json ej;
        ej["owner"] = key.owner;
        ej["space"] = key.space;
        ej["domain"] = key.domain;
        if (!key.context.empty()) ej["context"] = key.context;
        json m = json::object();
        for (const auto& [o, p] : enc.table()) m[o] = p;
        ej["map"] = m;
        encoders.push_back(ej);
    }
    root["encoders"] = encoders;
    json maps = json::array();
    for (const auto& [id, m] : spec.maps) {
        json t = json::object();
        for (const auto& [r, h] : m.table()) t[r] = h;
        maps.push_back(json{{"id", id}, {"human_space", m.human_space()}, {"robot_space", m.robot_space()}, {"map", t}});
    }
    root["maps"] = maps;
    json purposes = json::array();
    for (const auto& e : spec.purposes) {
        const auto& p = e.purpose;
        json pj;
        pj["id"] = p.id;
        pj["space"] = p.space_id;
        pj["kind"] = kind_name(p.kind);
        if (e.derived_from)
            pj["derive"] = json{{"from", e.derived_from->first}, {"map", e.derived_from->second}};
        else
            pj["utility"] = number_object(p.utility.table);
        pj["alpha"] = p.priority;
        pj["iota"] = p.intention_flag;
        pj["domains"] = array_of(p.intended_domains);
        pj["ground_truth"] = p.ground_truth;
        pj["active"] = e.active;
        pj["grounding"] = grounding_name(e.grounding);
        purposes.push_back(pj);
    }
    root["purposes"] = purposes;
    if (!spec.policy.table().empty()) root["policy"] = policy_json(spec.policy, "actions");
    if (spec.selector) root["selector"] = policy_json(*spec.selector, "subgoals");
    if (spec.learner)
        root["learner"] = json{{"budget_steps", spec.learner->budget_steps},
                               {"alpha", spec.learner->alpha},
                               {"epsilon", spec.learner->epsilon},
                               {"seed", spec.learner->seed}};
    root["arbitration"] = json{{"rule", to_string(spec.arbitration.rule)},
                               {"temperature", spec.arbitration.temperature},
                               {"proscriptive_factor", spec.arbitration.proscriptive_factor},
                               {"seed", spec.arbitration.seed}};
    root["trial_timeout"] = spec.trial_timeout;
    json phases = json::array();
    for (const auto& ph : spec.phases)
        phases.push_back(json{{"trials", {ph.first_trial, ph.last_trial}},
                              {"alpha", number_object(ph.priorities)},
                              {"add", ph.add},
                              {"remove", ph.remove}});
    root["phases"] = phases;
    json trials = json::array();
    for (const auto& t : spec.trials)
        trials.push_back(json{{"context", t.context}, {"domain", t.domain}, {"start", array_of(t.start)}});
    root["trials"] = trials;
    if (spec.alignment) {
        const auto& a = *spec.alignment;
        json aj;
        aj["human_purpose"] = a.human_purpose;
        if (a.human_forbidden) aj["human_forbidden"] = *a.human_forbidden;
        aj["robot_purpose"] = a.robot_purpose;
        aj["point"] = a.point;
        aj["domains"] = array_of(a.robot_domains);
        aj["timeout"] = a.timeout;
        if (a.idle_action) aj["idle"] = *a.idle_action;
        if (!a.context.empty()) aj["context"] = a.context;
        aj["policy"] = a.planned_policy ? "planned" : "table";
        json bindings = json::array();
        for (const auto& b : a.bindings) {
            json bj;
            bj["domain"] = b.domain;
            bj["robot_space"] = b.robot_space;
            bj["human_space"] = b.human_space;
            if (b.forbidden_space) bj["forbidden_space"] = *b.forbidden_space;
            if (b.goal) bj["goal"] = array_of(*b.goal);
            if (!b.subgoals.empty()) {
                json sg = json::array();
                for (const auto& [id, obs] : b.subgoals) sg.push_back(json{{"id", id}, {"observations", array_of(obs)}});
                bj["subgoals"] = sg;
            }
            bj["true_states"] = array_of(b.true_states);
            bj["true_observations"] = array_of(b.true_observations);
            bj["forbidden_states"] = array_of(b.forbidden_states);
            bj["forbidden_observations"] = array_of(b.forbidden_observations);
            bindings.push_back(bj);
        }
        aj["bindings"] = bindings;
        root["alignment"] = aj;
    }
    json checks = json::array();
    for (const auto& c : spec.checks) {
        json cj;
        cj["after_phase"] = c.after_phase;
        if (c.acase) {
            cj["case"] = to_string(c.acase->kind);
            cj["threshold"] = c.acase->threshold;
        }
        json modes = json::array();
        for (auto m : c.modes) modes.push_back(to_string(m));
        cj["modes"] = modes;
        if (c.causality_baseline) cj["causality"] = *c.causality_baseline;
        checks.push_back(cj);
    }
    root["checks"] = checks;
    return root.dump(2) + "\n";
}

void validate(const ScenarioSpec& spec) {
    std::set<DomainId> domain_ids;
    for (const auto& d : spec.domains)
        if (!domain_ids.insert(d.id()).second) invalid("domain " + d.id(), "duplicate domain id");
    const auto all_states = state_ids(spec.domains);
    for (const auto& [d, a] : spec.idle_actions)
        if (!spec.domain(d).has_action(a)) invalid("domain " + d, "idle action '" + a + "' is not an action");
    std::set<AgentId> owners;
    for (const auto& s : spec.sensors)
        if (!owners.insert(s.owner()).second) invalid("sensor " + s.owner(), "duplicate sensor owner");
    std::set<std::string> space_ids;
    for (const auto& s : spec.spaces)
        if (!space_ids.insert(s.id()).second) invalid("space " + s.id(), "duplicate space id");
    for (const auto& [key, enc] : spec.encoders) {
        const std::string where = "encoder " + key.owner + "/" + key.space + "/" + key.domain;
        if (!domain_ids.count(key.domain)) invalid(where, "unknown domain");
        if (spec.space(key.space).owner() != key.owner) invalid(where, "space belongs to another agent");
        const auto& sensor = guarded(where, [&]() -> const SensorModel& { return spec.sensor(key.owner); });
        const std::set<DomainId> filter{key.domain};
        for (const auto& s : spec.domain(key.domain).states()) {
            if (!sensor.covers(s)) invalid(where, "sensor does not cover state " + s);
            for (const auto& o : sensor.row(s).support())
                if (!enc.table().count(o)) invalid(where, "observation " + o + " has no encoding");
        }
    }
    for (const auto& e : spec.purposes) {
        const auto& p = e.purpose;
        const std::string where = "purpose " + p.id;
        for (const auto& d : p.intended_domains)
            if (!domain_ids.count(d)) invalid(where, "unknown intended domain '" + d + "'");
        if (p.kind == PurposeKind::Human && p.owner != kHuman) invalid(where, "human purpose on a robot space");
        if (p.kind != PurposeKind::Human && p.owner != kRobot) invalid(where, "robot purpose on a human space");
    }
    auto require_purpose = [&](const PurposeId& id, const std::string& where) {
        guarded(where, [&] { return spec.purpose(id).purpose.id; });
    };
    if (spec.trial_timeout < 1) invalid("scenario", "trial_timeout must be positive");
    const int n = static_cast<int>(spec.trials.size());
    int next = 1;
    for (std::size_t k = 0; k < spec.phases.size(); ++k) {
        const auto& ph = spec.phases[k];
        const std::string where = "phase " + std::to_string(k + 1);
        if (ph.first_trial != next || ph.last_trial < ph.first_trial)
            invalid(where, "trial ranges must partition the schedule in order");
        next = ph.last_trial + 1;
        for (const auto& [id, alpha] : ph.priorities) {
            require_purpose(id, where + " priority override");
            if (!std::isfinite(alpha)) invalid(where, "priority of " + id + " is not finite");
        }
        for (const auto& id : ph.add) require_purpose(id, where + " add");
        for (const auto& id : ph.remove) require_purpose(id, where + " remove");
    }
    if (!spec.phases.empty() || n > 0)
        if (next != n + 1) invalid("phases", "trial ranges must cover trials 1.." + std::to_string(n));
    for (int i = 0; i < n; ++i) {
        const auto& t = spec.trials[static_cast<std::size_t>(i)];
        const std::string where = "trial " + std::to_string(i + 1);
        if (!domain_ids.count(t.domain)) invalid(where, "unknown domain '" + t.domain + "'");
        const auto& dom = spec.domain(t.domain);
        for (const auto& s : t.start)
            if (!dom.has_state(s)) invalid(where, "start state " + s + " is not in domain " + t.domain);
        guarded(where, [&] { return spec.sensor(kRobot).owner(); });
        for (const auto& e : spec.purposes) {
            const auto& p = e.purpose;
            if (p.owner != kRobot || !p.intended_domains.count(t.domain)) continue;
            guarded(where + " purpose " + p.id, [&] { return spec.encoder(kRobot, p.space_id, t.domain, t.context).domain(); });
        }
    }
    for (const auto& [key, row] : spec.policy.table())
        if (!std::any_of(spec.domains.begin(), spec.domains.end(), [&](const Domain& d) {
                return std::all_of(row.begin(), row.end(), [&](const auto& kv) { return d.has_action(kv.first); });
            }))
            invalid("policy (" + key.first + ", " + key.second + ")", "row names an unknown action");
    if (spec.alignment) {
        const auto& a = *spec.alignment;
        require_purpose(a.human_purpose, "alignment");
        require_purpose(a.robot_purpose, "alignment");
        if (a.human_forbidden) require_purpose(*a.human_forbidden, "alignment");
        if (!spec.purpose(a.robot_purpose).purpose.utility.table.count(a.point))
            invalid("alignment", "point '" + a.point + "' is not in the robot purpose space");
        for (const auto& d : a.robot_domains)
            if (!domain_ids.count(d)) invalid("alignment", "unknown domain '" + d + "'");
        if (a.timeout < 1) invalid("alignment", "timeout must be positive");
        if (a.bindings.empty()) invalid("alignment", "no bindings");
        for (const auto& b : a.bindings) {
            const std::string where = "alignment binding " + b.domain;
            if (!domain_ids.count(b.domain)) invalid(where, "unknown domain");
            for (const auto& s : b.true_states)
                if (!all_states.count(s)) invalid(where, "unknown state " + s);
            for (const auto& s : b.forbidden_states)
                if (!all_states.count(s)) invalid(where, "unknown state " + s);
        }
        guarded("alignment", [&] { return build_alignment_model(spec).timeout; });
    }
    for (std::size_t k = 0; k < spec.checks.size(); ++k) {
        const auto& c = spec.checks[k];
        const std::string where = "check " + std::to_string(k + 1);
        if (c.after_phase < 1 || c.after_phase > static_cast<int>(spec.phases.size()))
            invalid(where, "after_phase " + std::to_string(c.after_phase) + " is not a phase");
        if (!spec.alignment) invalid(where, "checks need an alignment section");
        if (c.acase.has_value() == c.modes.empty()) invalid(where, "a case needs at least one mode and vice versa");
        if (c.causality_baseline && *c.causality_baseline != "idle" && *c.causality_baseline != "random")
            invalid(where, "causality baseline must be idle or random");
    }
}

std::vector<std::string> scenario_warnings(const ScenarioSpec& spec) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < std::max<std::size_t>(spec.phases.size(), 1); ++k) {
        std::set<PurposeId> active;
        std::map<PurposeId, double> alpha;
        for (const auto& e : spec.purposes) {
            if (e.active) active.insert(e.purpose.id);
            alpha[e.purpose.id] = e.purpose.priority;
        }
        for (std::size_t i = 0; i < spec.phases.size() && i <= k; ++i) {
            for (const auto& [id, a] : spec.phases[i].priorities) alpha[id] = a;
            for (const auto& id : spec.phases[i].add) active.insert(id);
            for (const auto& id : spec.phases[i].remove) active.erase(id);
        }
        std::vector<Purpose> robot;
        for (const auto& e : spec.purposes)
            if (active.count(e.purpose.id) && e.purpose.owner == kRobot) {
                robot.push_back(e.purpose);
                robot.back().priority = alpha[e.purpose.id];
            }
        for (const auto& w : proscriptive_dominance_warnings(robot, spec.arbitration))
            out.push_back("phase " + std::to_string(k + 1) + ": " + w);
    }
    return out;
}

AlignmentModel build_alignment_model(const ScenarioSpec& spec) {
    if (!spec.alignment) throw Error(ErrorKind::ValidationError, "scenario has no alignment section");
    const auto& a = *spec.alignment;
    AlignmentModel m;
    for (const auto& d : spec.domains) m.domains.emplace(d.id(), d);
    for (const auto& s : spec.sensors) {
        if (s.owner() == kRobot) m.robot_sensor = s;
        if (s.owner() == kHuman) m.human_sensor = s;
    }
    if (!m.robot_sensor) throw Error(ErrorKind::ValidationError, "alignment: no robot sensor");
    m.human_purpose = spec.purpose(a.human_purpose).purpose;
    if (a.human_forbidden) m.human_forbidden = spec.purpose(*a.human_forbidden).purpose;
    m.robot_purpose = spec.purpose(a.robot_purpose).purpose;
    m.intention_point = a.point;
    m.robot_domains = a.robot_domains;
    m.timeout = a.timeout;
    m.idle_action = a.idle_action;
    for (const auto& bs : a.bindings) {
        DomainBinding b;
        b.domain = bs.domain;
        b.robot_encoder = spec.encoder(kRobot, bs.robot_space, bs.domain, a.context);
        b.human_encoder = spec.encoder(kHuman, bs.human_space, bs.domain, a.context);
        if (bs.forbidden_space) b.human_forbidden_encoder = spec.encoder(kHuman, *bs.forbidden_space, bs.domain, a.context);
        if (bs.goal)
            b.goal = make_goal(goal_id(m.robot_purpose.id, bs.domain, a.point), kRobot, m.robot_purpose.id, bs.domain, *bs.goal);
        else
            b.goal = ground_point(m.robot_purpose, a.point, *b.robot_encoder);
        for (const auto& [id, obs] : bs.subgoals) b.subgoals.push_back(make_goal(id, kRobot, m.robot_purpose.id, bs.domain, obs));
        b.true_states = bs.true_states;
        b.true_observations = bs.true_observations;
        b.forbidden_states = bs.forbidden_states;
        b.forbidden_observations = bs.forbidden_observations;
        if (!m.idle_action)
            if (auto it = spec.idle_actions.find(bs.domain); it != spec.idle_actions.end()) m.idle_action = it->second;
        if (a.planned_policy) {
            const auto& dom = spec.domain(bs.domain);
            m.policy.merge(plan_policy(b.goal, dom, *m.robot_sensor));
            for (const auto& g : b.subgoals) m.policy.merge(plan_policy(g, dom, *m.robot_sensor));
            for (const auto& p : m.robot_purpose.support)
                if (!decode(*b.robot_encoder, p).empty())
                    m.policy.merge(plan_policy(ground_point(m.robot_purpose, p, *b.robot_encoder), dom, *m.robot_sensor));
        }
        m.bindings.push_back(std::move(b));
    }
    m.policy.merge(spec.policy);
    return m;
}

// ---- trial engine ----

namespace {

struct PhaseView {
    std::set<PurposeId> active;
    std::map<PurposeId, double> priority;
};

PhaseView phase_view(const ScenarioSpec& spec, int phase) {
    PhaseView v;
    for (const auto& e : spec.purposes) {
        if (e.active) v.active.insert(e.purpose.id);
        v.priority[e.purpose.id] = e.purpose.priority;
    }
    for (int k = 0; k < phase && k < static_cast<int>(spec.phases.size()); ++k) {
        const auto& ph = spec.phases[static_cast<std::size_t>(k)];
        for (const auto& [id, a] : ph.priorities) v.priority[id] = a;
        for (const auto& id : ph.add) v.active.insert(id);
        for (const auto& id : ph.remove) v.active.erase(id);
    }
    return v;
}

bool has_encoder(const ScenarioSpec& spec, const Purpose& p, const DomainId& d, const std::string& ctx) {
    return spec.encoders.count({p.owner, p.space_id, d, ctx}) || spec.encoders.count({p.owner, p.space_id, d, ""});
}

/// States with some possible observation encoding into the purpose support.
std::set<StateId> support_states(const ScenarioSpec& spec, const Purpose& p, const Domain& dom, const std::string& ctx) {
    const auto& enc = spec.encoder(p.owner, p.space_id, dom.id(), ctx);
    const auto& sensor = spec.sensor(p.owner);
    std::set<StateId> out;
    for (const auto& s : dom.states())
        for (const auto& o : sensor.row(s).support())
            if (p.support.count(encode(enc, o))) {
                out.insert(s);
                break;
            }
    return out;
}

std::optional<Goal> candidate_goal(const ScenarioSpec& spec, const PurposeEntry& e, const Purpose& p, const DomainId& d,
                                   const std::string& ctx) {
    const auto& enc = spec.encoder(kRobot, p.space_id, d, ctx);
    if (e.grounding == GroundingMode::Whole) {
        auto g = ground_purpose(p, enc);
        if (g.ungroundable()) return std::nullopt;
        return g;
    }
    std::optional<PointId> best;
    for (const auto& pt : p.support) {
        if (decode(enc, pt).empty()) continue;
        if (!best || p.utility(pt) > p.utility(*best)) best = pt;
    }
    if (!best) return std::nullopt;
    return ground_point(p, *best, enc);
}

struct Plan {
    Goal goal;
    PurposeId purpose;
    ActionPolicy policy;
    bool feasible = false;
    StateId end;
    std::vector<PointId> point;
    double score = 0.0;
};

}  // namespace

ReportDocument run_trials(const ScenarioSpec& spec, Rng& rng, std::optional<int> max_trials) {
    ReportDocument report;
    report.scenario_name = spec.name;
    ScenarioSpec unseeded = spec;
    unseeded.seed = 0;
    report.scenario_digest = digest(emit_scenario(unseeded));
    report.seed = spec.seed;
    report.warnings = scenario_warnings(spec);

    const int n = max_trials ? std::min(*max_trials, static_cast<int>(spec.trials.size())) : static_cast<int>(spec.trials.size());
    std::map<GoalId, ActionPolicy> learned;
    std::map<GoalId, std::pair<int, int>> tally;
    std::map<GoalId, std::vector<double>> curves;
    std::optional<AlignmentModel> model;

    auto run_checks = [&](int phase) {
        for (const auto& c : spec.checks) {
            if (c.after_phase != phase) continue;
            if (!model) model = build_alignment_model(spec);
            CheckRecord rec;
            rec.after_phase = phase;
            for (auto mode : c.modes)
                rec.verdicts.push_back(mode == CheckMode::Semantic ? check_conditions(*model, *c.acase)
                                                                   : check_definition(*model, *c.acase, rng));
            if (c.causality_baseline) {
                const bool chain = !model->bindings.front().subgoals.empty();
                const auto iv = default_intervention(*model, *c.causality_baseline, chain);
                rec.causality = causal_verdict(*model, iv, rng);
            }
            report.checks.push_back(std::move(rec));
        }
    };

    for (int i = 1; i <= n; ++i) {
        const auto& trial = spec.trials[static_cast<std::size_t>(i - 1)];
        int phase = 0;
        for (std::size_t k = 0; k < spec.phases.size(); ++k)
            if (spec.phases[k].first_trial <= i && i <= spec.phases[k].last_trial) phase = static_cast<int>(k) + 1;
        try {
            const auto view = phase_view(spec, phase);
            const Domain& dom = spec.domain(trial.domain);
            const SensorModel& sensor = spec.sensor(kRobot);
            const std::string& ctx = trial.context;

            TrialRecord rec;
            rec.index = i;
            rec.phase = phase;
            rec.context = ctx;
            rec.domain = dom.id();
            const auto& pool = trial.start.empty() ? dom.initial_states() : trial.start;
            const std::vector<StateId> starts(pool.begin(), pool.end());
            rec.start = starts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(starts.size()) - 1))];

            std::vector<const PurposeEntry*> components;
            std::vector<Purpose> intended;
            for (const auto& e : spec.purposes) {
                if (!view.active.count(e.purpose.id) || e.purpose.owner != kRobot) continue;
                Purpose p = e.purpose;
                p.priority = view.priority.at(p.id);
                if (!has_encoder(spec, p, dom.id(), ctx)) continue;
                components.push_back(&e);
                if (p.intention_flag && p.intended_domains.count(dom.id())) {
                    intended.push_back(p);
                    rec.intended.push_back(p.id);
                }
            }

            std::set<StateId> forbidden;
            for (const auto& p : intended)
                if (p.polarity == Polarity::Proscriptive) {
                    const auto bad = support_states(spec, p, dom, ctx);
                    forbidden.insert(bad.begin(), bad.end());
                }

            MotivationalSpace mspace{kRobot, {}};
            for (const auto* e : components)
                mspace.components.push_back({e->purpose.space_id, view.priority.at(e->purpose.id), e->purpose.utility});

            Rng predict_rng(spec.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i)));
            auto point_at = [&](const StateId& s) {
                const auto o = observe(sensor, s, predict_rng);
                std::vector<PointId> pt;
                for (const auto* e : components) pt.push_back(encode(spec.encoder(kRobot, e->purpose.space_id, dom.id(), ctx), o));
                return pt;
            };

            std::vector<Plan> plans;
            for (const auto& p : intended) {
                if (p.polarity != Polarity::Prescriptive) continue;
                const auto& entry = spec.purpose(p.id);
                auto goal = candidate_goal(spec, entry, p, dom.id(), ctx);
                if (!goal) continue;
                Plan plan{*goal, p.id, {}, false, {}, {}, 0.0};
                const auto targets = state_goal(*goal, sensor).states;
                const auto cost = min_cost_to_reach(dom, targets, forbidden);
                auto it = cost.find(rec.start);
                if (it != cost.end() && it->second <= spec.trial_timeout) {
                    plan.policy = plan_policy(*goal, dom, sensor, forbidden);
                    const auto run = pursue(*goal, plan.policy, dom, sensor, rec.start, spec.trial_timeout, predict_rng);
                    if (run.success) {
                        plan.feasible = true;
                        plan.end = run.end_state;
                        plan.point = point_at(run.end_state);
                        plan.score = composite_utility(mspace, plan.point);
                    }
                }
                plans.push_back(std::move(plan));
            }
            for (const auto& pl : plans)
                rec.candidates.push_back({pl.goal.id, pl.purpose, pl.feasible, pl.end, pl.point, pl.score});

            const Plan* chosen = nullptr;
            std::vector<Goal> feasible;
            for (const auto& pl : plans)
                if (pl.feasible) feasible.push_back(pl.goal);
            if (!feasible.empty()) {
                auto by_goal = [&](const GoalId& g) -> const Plan* {
                    for (const auto& pl : plans)
                        if (pl.goal.id == g) return &pl;
                    return nullptr;
                };
                auto by_purpose = [&](const PurposeId& id) -> const Plan* {
                    for (const auto& pl : plans)
                        if (pl.purpose == id && pl.feasible) return &pl;
                    return nullptr;
                };
                MotivationReadout readout;
                const auto o = observe(sensor, rec.start, predict_rng);
                for (const auto& p : intended) {
                    readout.active_point[p.id] = encode(spec.encoder(kRobot, p.space_id, dom.id(), ctx), o);
                    readout.utility[p.id] = p.utility(readout.active_point[p.id]);
                }
                switch (spec.arbitration.rule) {
                    case ArbitrationRule::Motivational: {
                        auto predict = [&](const Goal& g) -> std::optional<std::vector<PointId>> {
                            const Plan* pl = by_goal(g.id);
                            if (!pl || !pl->feasible) return std::nullopt;
                            return pl->point;
                        };
                        chosen = by_goal(select_motivational(mspace, feasible, predict, spec.arbitration));
                        break;
                    }
                    case ArbitrationRule::Hierarchical:
                        chosen = by_purpose(select_hierarchical(intended, spec.arbitration));
                        break;
                    case ArbitrationRule::Urgency:
                        chosen = by_purpose(select_urgency(intended, readout, spec.arbitration));
                        break;
                    case ArbitrationRule::Softmax:
                        chosen = by_purpose(sample(softmax_distribution(intended, readout, spec.arbitration), rng));
                        break;
                }
            }

            rec.states.push_back(rec.start);
            if (chosen) {
                rec.selected = chosen->goal.id;
                rec.selected_purpose = chosen->purpose;
                const ActionPolicy* policy = &chosen->policy;
                const auto o0 = observe(sensor, rec.start, predict_rng);
                if (spec.policy.has(o0, chosen->goal.id)) {
                    policy = &spec.policy;
                } else if (spec.learner) {
                    auto it = learned.find(chosen->goal.id);
                    if (it == learned.end()) {
                        GoalConditionedTask task{dom.id(), chosen->goal};
                        task.timeout = spec.trial_timeout;
                        it = learned.emplace(chosen->goal.id, learn_policy(task, dom, sensor, *spec.learner)).first;
                    }
                    policy = &it->second;
                }
                const auto run = pursue(chosen->goal, *policy, dom, sensor, rec.start, spec.trial_timeout, rng);
                rec.states = run.trace.ids(EntryKind::State);
                rec.actions = run.trace.ids(EntryKind::Action);
                rec.success = run.success;
                auto& t = tally[chosen->goal.id];
                t.first += run.success ? 1 : 0;
                t.second += 1;
                curves[chosen->goal.id].push_back(static_cast<double>(t.first) / t.second);
            }

            for (const auto& e : spec.purposes) {
                const auto& p = e.purpose;
                if (p.owner != kRobot || p.polarity != Polarity::Proscriptive || !has_encoder(spec, p, dom.id(), ctx)) continue;
                const auto bad = support_states(spec, p, dom, ctx);
                rec.proscribed_visits[p.id] = static_cast<int>(
                    std::count_if(rec.states.begin(), rec.states.end(), [&](const StateId& s) { return bad.count(s) > 0; }));
            }
            report.trials.push_back(std::move(rec));
        } catch (const Error& e) {
            const std::string what = e.what();
            throw Error(e.kind(), "trial " + std::to_string(i) + ": " + what.substr(to_string(e.kind()).size() + 2), e.detail());
        }
        if (phase > 0 && spec.phases[static_cast<std::size_t>(phase - 1)].last_trial == i) run_checks(phase);
    }
    for (const auto& [g, c] : curves) report.learning_curves.push_back({g, c});
    if (model)
        for (const auto& rec : report.checks)
            for (const auto& v : rec.verdicts)
                for (const auto& note : v.notes)
                    if (std::find(report.warnings.begin(), report.warnings.end(), note) == report.warnings.end())
                        report.warnings.push_back(note);
    return report;
}

std::string digest(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace purpose
