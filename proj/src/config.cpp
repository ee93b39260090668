#include "convspec/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "convspec/serialize.hpp"
#include "json.hpp"

namespace convspec {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

const Json& need(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, "missing field '" + key + "'");
    return *it;
}

std::string get_string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

long long get_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
}

double get_number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

bool get_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

GroupElement parse_element_at(const GroupSpec& spec, const Json& j, const std::string& path) {
    const std::string text = get_string(j, path);
    try {
        return parse_element(spec, text);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

mpq_class parse_rational_at(const Json& j, const std::string& path) {
    try {
        if (j.is_number_integer()) {
            return mpq_class(static_cast<long>(j.get<long long>()));
        }
        return parse_rational(get_string(j, path));
    } catch (const std::invalid_argument& e) {
        throw ParseError(path + ": " + e.what());
    }
}

GroupSpec parse_group(const Json& j, const std::string& path);

ActionSpec parse_action(const Json& j, const GroupSpec& fiber, const std::string& path) {
    const std::string kind = get_string(need(j, "kind", path), path + ".kind");
    if (kind == "trivial") return ActionSpec::trivial();
    if (kind == "conjugation_by") {
        return ActionSpec::conjugation_by(
            parse_element_at(fiber, need(j, "element", path), path + ".element"));
    }
    if (kind == "generator_images") {
        const Json& imgs = need(j, "images", path);
        if (!imgs.is_array()) fail(path + ".images", "expected an array");
        std::vector<std::vector<GroupElement>> images;
        for (std::size_t s = 0; s < imgs.size(); ++s) {
            const Json& inner = imgs[s];
            std::ostringstream ip;
            ip << path << ".images[" << s << "]";
            if (!inner.is_array()) fail(ip.str(), "expected an array");
            std::vector<GroupElement> row;
            for (std::size_t k = 0; k < inner.size(); ++k) {
                std::ostringstream ep;
                ep << ip.str() << "[" << k << "]";
                row.push_back(parse_element_at(fiber, inner[k], ep.str()));
            }
            images.push_back(std::move(row));
        }
        return ActionSpec::generator_images(std::move(images));
    }
    if (kind == "index_permutations") {
        const Json& ps = need(j, "permutations", path);
        if (!ps.is_array()) fail(path + ".permutations", "expected an array");
        std::vector<std::vector<int>> perms;
        for (std::size_t s = 0; s < ps.size(); ++s) {
            std::ostringstream ip;
            ip << path << ".permutations[" << s << "]";
            if (!ps[s].is_array()) fail(ip.str(), "expected an array");
            std::vector<int> perm;
            for (const Json& v : ps[s]) {
                perm.push_back(static_cast<int>(get_int(v, ip.str())));
            }
            perms.push_back(std::move(perm));
        }
        return ActionSpec::index_permutations(std::move(perms));
    }
    fail(path + ".kind", "unknown action kind '" + kind + "'");
}

GroupSpec parse_group(const Json& j, const std::string& path) {
    const std::string ctor = get_string(need(j, "constructor", path), path + ".constructor");
    try {
        if (ctor == "IntLattice") {
            return GroupSpec::int_lattice(
                static_cast<int>(get_int(need(j, "dim", path), path + ".dim")));
        }
        if (ctor == "Cyclic") {
            return GroupSpec::cyclic(get_int(need(j, "n", path), path + ".n"));
        }
        if (ctor == "Symmetric") {
            return GroupSpec::symmetric(
                static_cast<int>(get_int(need(j, "n", path), path + ".n")));
        }
        if (ctor == "FreeGroup") {
            return GroupSpec::free_group(
                static_cast<int>(get_int(need(j, "rank", path), path + ".rank")));
        }
        if (ctor == "DirectProduct") {
            return GroupSpec::direct_product(parse_group(need(j, "left", path), path + ".left"),
                                             parse_group(need(j, "right", path), path + ".right"));
        }
        if (ctor == "Semidirect") {
            GroupSpec fiber = parse_group(need(j, "fiber", path), path + ".fiber");
            GroupSpec base = parse_group(need(j, "base", path), path + ".base");
            ActionSpec action = parse_action(need(j, "action", path), fiber, path + ".action");
            return GroupSpec::semidirect(std::move(fiber), std::move(base), std::move(action));
        }
        if (ctor == "WreathLite") {
            GroupSpec factor = parse_group(need(j, "factor", path), path + ".factor");
            const int copies =
                static_cast<int>(get_int(need(j, "copies", path), path + ".copies"));
            GroupSpec base = parse_group(need(j, "base", path), path + ".base");
            const Json& ps = need(j, "permutations", path);
            if (!ps.is_array()) fail(path + ".permutations", "expected an array");
            std::vector<std::vector<int>> perms;
            for (const Json& p : ps) {
                if (!p.is_array()) fail(path + ".permutations", "expected arrays of indices");
                std::vector<int> perm;
                for (const Json& v : p) {
                    perm.push_back(static_cast<int>(get_int(v, path + ".permutations")));
                }
                perms.push_back(std::move(perm));
            }
            return GroupSpec::wreath_lite(factor, copies, std::move(base), std::move(perms));
        }
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
    fail(path + ".constructor", "unknown constructor '" + ctor + "'");
}

Measure parse_measure(const GroupSpec& spec, const Json& j, const std::string& path,
                      std::size_t ball_cap) {
    if (j.is_array()) {
        Measure m = Measure::zero(spec);
        for (std::size_t k = 0; k < j.size(); ++k) {
            std::ostringstream ep;
            ep << path << "[" << k << "]";
            const Json& entry = j[k];
            GroupElement x = parse_element_at(spec, need(entry, "element", ep.str()),
                                              ep.str() + ".element");
            // Bare entries weigh 1; once either component is spelled out the
            // other defaults to 0.
            ComplexRational c(1);
            if (entry.contains("re") || entry.contains("im")) c = ComplexRational();
            if (entry.contains("re")) c.re = parse_rational_at(entry["re"], ep.str() + ".re");
            if (entry.contains("im")) c.im = parse_rational_at(entry["im"], ep.str() + ".im");
            m.add_to(x, c);
        }
        return m;
    }
    if (j.is_object() && j.contains("indicator")) {
        const Json& elems = j["indicator"];
        if (!elems.is_array()) fail(path + ".indicator", "expected an array of elements");
        std::vector<GroupElement> xs;
        for (std::size_t k = 0; k < elems.size(); ++k) {
            std::ostringstream ep;
            ep << path << ".indicator[" << k << "]";
            xs.push_back(parse_element_at(spec, elems[k], ep.str()));
        }
        try {
            return Measure::indicator(spec, xs);
        } catch (const ValidationError& e) {
            fail(path + ".indicator", e.what());
        }
    }
    if (j.is_object() && j.contains("conjugacy_class_indicator")) {
        GroupElement x = parse_element_at(spec, j["conjugacy_class_indicator"],
                                          path + ".conjugacy_class_indicator");
        return conjugacy_class_indicator(x, ball_cap);
    }
    fail(path, "expected a coefficient list or an indicator shorthand");
}

Parameters parse_parameters(const Json& j, const std::string& path) {
    Parameters p;
    if (j.is_null()) return p;
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("radii")) {
        const Json& r = j["radii"];
        if (!r.is_array() || r.empty()) fail(path + ".radii", "expected a nonempty array");
        p.radii.clear();
        for (const Json& v : r) {
            const long long val = get_int(v, path + ".radii");
            if (val < 0 || val > 64) fail(path + ".radii", "radius out of range [0, 64]");
            p.radii.push_back(static_cast<int>(val));
        }
    }
    auto cap_field = [&](const char* key, std::size_t& target) {
        if (!j.contains(key)) return;
        const long long v = get_int(j[key], path + "." + key);
        if (v < 1) fail(path + "." + key, "must be at least 1");
        target = static_cast<std::size_t>(v);
    };
    cap_field("ball_cap", p.ball_cap);
    cap_field("support_cap", p.support_cap);
    cap_field("dense_cap", p.dense_cap);
    if (j.contains("cluster_tol")) {
        p.cluster_tol = get_number(j["cluster_tol"], path + ".cluster_tol");
        if (p.cluster_tol <= 0) fail(path + ".cluster_tol", "must be positive");
    }
    if (j.contains("kernel_tol")) {
        p.kernel_tol = get_number(j["kernel_tol"], path + ".kernel_tol");
        if (p.kernel_tol < 0) fail(path + ".kernel_tol", "must be nonnegative");
    }
    if (j.contains("grid")) {
        const long long g = get_int(j["grid"], path + ".grid");
        if (g < 8) fail(path + ".grid", "must be at least 8");
        p.grid = static_cast<std::size_t>(g);
    }
    if (j.contains("seed")) {
        p.seed = static_cast<std::uint64_t>(get_int(j["seed"], path + ".seed"));
    }
    return p;
}

OutputSpec parse_output(const Json& j, const std::string& path) {
    OutputSpec out;
    if (j.is_null()) return out;
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("directory")) {
        out.directory = get_string(j["directory"], path + ".directory");
        if (out.directory.empty()) fail(path + ".directory", "must not be empty");
    }
    if (j.contains("formats")) {
        const Json& f = j["formats"];
        if (!f.is_array()) fail(path + ".formats", "expected an array");
        out.json = false;
        out.csv = false;
        for (const Json& v : f) {
            const std::string s = get_string(v, path + ".formats");
            if (s == "json") {
                out.json = true;
            } else if (s == "csv") {
                out.csv = true;
            } else {
                fail(path + ".formats", "unknown format '" + s + "'");
            }
        }
    }
    return out;
}

SymmetricSetData parse_symmetric_set(const GroupSpec& spec, const Json& j,
                                     const std::string& path) {
    if (spec.kind() != GroupKind::Semidirect) {
        fail(path, "requires a Semidirect group");
    }
    SymmetricSetData data;
    data.xspec = spec;
    const Json& g0 = need(j, "G0", path);
    if (!g0.is_array() || g0.empty()) fail(path + ".G0", "expected a nonempty array");
    for (std::size_t k = 0; k < g0.size(); ++k) {
        std::ostringstream ep;
        ep << path << ".G0[" << k << "]";
        data.g0.push_back(parse_element_at(spec.base(), g0[k], ep.str()));
    }
    const Json& fams = need(j, "families", path);
    if (!fams.is_object()) fail(path + ".families", "expected an object keyed by G0 elements");

    std::map<GroupElement, std::vector<GroupElement>, ElementLess> by_base;
    for (const auto& [key, value] : fams.items()) {
        GroupElement g = [&] {
            try {
                return parse_element(spec.base(), key);
            } catch (const Error& e) {
                throw ParseError(path + ".families key '" + key + "': " + e.what());
            }
        }();
        if (!value.is_array()) fail(path + ".families['" + key + "']", "expected an array");
        std::vector<GroupElement> fam;
        for (std::size_t k = 0; k < value.size(); ++k) {
            std::ostringstream ep;
            ep << path << ".families['" << key << "'][" << k << "]";
            fam.push_back(parse_element_at(spec.fiber(), value[k], ep.str()));
        }
        if (!by_base.emplace(g, std::move(fam)).second) {
            fail(path + ".families", "duplicate family for " + key);
        }
    }
    std::set<GroupElement, ElementLess> g0_set(data.g0.begin(), data.g0.end());
    for (const auto& [g, fam] : by_base) {
        (void)fam;
        if (g0_set.find(g) == g0_set.end()) {
            fail(path + ".families", "family key " + format_element(g) + " is not in G0");
        }
    }
    for (const GroupElement& g : data.g0) {
        auto it = by_base.find(g);
        if (it == by_base.end()) {
            fail(path + ".families", "no family for " + format_element(g));
        }
        data.families.push_back(it->second);
    }
    return data;
}

const std::set<std::string>& known_task_types() {
    static const std::set<std::string> kinds = {"check",   "spectrum",   "moments",
                                               "fourier", "semidirect", "report"};
    return kinds;
}

}  // namespace

const Measure* AnalysisConfig::find_measure(const std::string& name) const {
    for (const auto& [n, m] : measures) {
        if (n == name) return &m;
    }
    return nullptr;
}

AnalysisConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config: expected a JSON object");
    if (j.contains("schema")) {
        const std::string schema = get_string(j["schema"], "schema");
        if (schema != "convspec-config/1") {
            fail("schema", "unsupported schema '" + schema + "'");
        }
    }

    AnalysisConfig cfg;
    cfg.source_text = text;
    cfg.group = parse_group(need(j, "group", "config"), "group");
    cfg.parameters = parse_parameters(j.contains("parameters") ? j["parameters"] : Json(),
                                      "parameters");
    cfg.output = parse_output(j.contains("output") ? j["output"] : Json(), "output");

    if (j.contains("measures")) {
        const Json& ms = j["measures"];
        if (!ms.is_object()) fail("measures", "expected an object of named measures");
        for (const auto& [name, block] : ms.items()) {
            if (name.empty()) fail("measures", "measure names must not be empty");
            if (cfg.find_measure(name)) fail("measures", "duplicate measure '" + name + "'");
            cfg.measures.emplace_back(
                name, parse_measure(cfg.group, block, "measures." + name,
                                    cfg.parameters.ball_cap));
        }
    }

    if (j.contains("characters") && !j["characters"].is_null()) {
        const Json& ch = j["characters"];
        if (ch.is_string()) {
            if (ch.get<std::string>() != "auto") {
                fail("characters", "expected \"auto\" or an explicit list");
            }
        } else if (ch.is_array()) {
            cfg.characters_auto = false;
            for (std::size_t k = 0; k < ch.size(); ++k) {
                std::ostringstream ep;
                ep << "characters[" << k << "]";
                const Json& w = need(ch[k], "weights", ep.str());
                if (!w.is_array()) fail(ep.str() + ".weights", "expected an array");
                std::vector<mpq_class> weights;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    std::ostringstream wp;
                    wp << ep.str() << ".weights[" << i << "]";
                    weights.push_back(parse_rational_at(w[i], wp.str()));
                }
                try {
                    cfg.characters.emplace_back(cfg.group, std::move(weights));
                } catch (const ValidationError& e) {
                    fail(ep.str(), e.what());
                }
            }
        } else {
            fail("characters", "expected \"auto\" or an explicit list");
        }
    }
    if (cfg.characters_auto) {
        cfg.characters = character_space(cfg.group).basis;
    }

    if (j.contains("symmetric_set") && !j["symmetric_set"].is_null()) {
        cfg.symmetric_set = parse_symmetric_set(cfg.group, j["symmetric_set"], "symmetric_set");
    }

    const Json& tasks = need(j, "tasks", "config");
    if (!tasks.is_array()) fail("tasks", "expected an array");
    if (tasks.empty()) fail("tasks", "the task list is empty");
    std::set<std::string> names;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        std::ostringstream tp;
        tp << "tasks[" << k << "]";
        const Json& t = tasks[k];
        TaskSpec task;
        task.type = get_string(need(t, "type", tp.str()), tp.str() + ".type");
        if (!known_task_types().count(task.type)) {
            fail(tp.str() + ".type", "unknown task type '" + task.type + "'");
        }
        if (t.contains("name")) {
            task.name = get_string(t["name"], tp.str() + ".name");
        } else {
            std::ostringstream def;
            def << task.type << "_" << k;
            task.name = def.str();
        }
        if (!names.insert(task.name).second) {
            fail(tp.str() + ".name", "duplicate task name '" + task.name + "'");
        }

        auto measure_ref = [&](const char* key, std::string& target, bool required) {
            if (t.contains(key)) {
                target = get_string(t[key], tp.str() + "." + key);
                if (!cfg.find_measure(target)) {
                    fail(tp.str() + "." + key, "unresolved measure '" + target + "'");
                }
            } else if (required) {
                fail(tp.str(), std::string("missing field '") + key + "'");
            }
        };

        if (task.type == "check" || task.type == "spectrum" || task.type == "moments" ||
            task.type == "fourier") {
            measure_ref("measure", task.measure, true);
        }
        if (task.type == "semidirect") {
            measure_ref("measure", task.measure, false);
            if (task.measure.empty() && !cfg.symmetric_set) {
                fail(tp.str(), "needs a measure or a top-level symmetric_set block");
            }
        }
        measure_ref("perturbation", task.perturbation, false);
        measure_ref("eigenvector", task.eigenvector, false);

        if (t.contains("route")) {
            task.route = get_string(t["route"], tp.str() + ".route");
            if (task.route != "commutation" && task.route != "central") {
                fail(tp.str() + ".route", "expected 'commutation' or 'central'");
            }
        }
        if (t.contains("required")) {
            const Json& req = t["required"];
            if (!req.is_array()) fail(tp.str() + ".required", "expected an array");
            for (const Json& r : req) {
                task.required.push_back(get_string(r, tp.str() + ".required"));
            }
        }
        if (t.contains("radii")) {
            const Json& r = t["radii"];
            if (!r.is_array() || r.empty()) {
                fail(tp.str() + ".radii", "expected a nonempty array");
            }
            for (const Json& v : r) {
                const long long val = get_int(v, tp.str() + ".radii");
                if (val < 0 || val > 64) fail(tp.str() + ".radii", "radius out of range [0, 64]");
                task.radii.push_back(static_cast<int>(val));
            }
        }
        if (t.contains("nmax")) {
            task.nmax = static_cast<int>(get_int(t["nmax"], tp.str() + ".nmax"));
            if (task.nmax < 0) fail(tp.str() + ".nmax", "must be nonnegative");
        }
        if (t.contains("dual_points")) {
            task.dual_points = static_cast<int>(get_int(t["dual_points"], tp.str() + ".dual_points"));
            if (task.dual_points < 1) fail(tp.str() + ".dual_points", "must be at least 1");
        }
        if (t.contains("scan")) {
            task.scan = get_bool(t["scan"], tp.str() + ".scan");
        }
        cfg.tasks.push_back(std::move(task));
    }
    return cfg;
}

AnalysisConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace convspec
