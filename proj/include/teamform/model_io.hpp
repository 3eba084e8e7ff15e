#pragma once

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "teamform/dynamics.hpp"
#include "teamform/model.hpp"

namespace teamform {

using nlohmann::json;

struct ModelFile {
    Model model;
    std::optional<double> epsilon;
    std::optional<Scheme> scheme;
};

namespace io_detail {

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

inline Rat parse_rat(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_object()) {
        reject_unknown_keys(v, {"num", "den"}, where);
        if (!v.contains("num") || !v.contains("den"))
            throw ConfigError(where + ": rational needs num and den");
        long long den = v["den"].get<long long>();
        if (den == 0) throw ConfigError(where + ": zero denominator");
        return Rat(v["num"].get<long long>(), den);
    }
    throw ConfigError(where + ": expected an integer or a {num, den} object");
}

inline json rat_to_json(const Rat& r) {
    return json{{"num", r.numerator()}, {"den", r.denominator()}};
}

inline std::string real_to_string(double d) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

inline json util_to_json(const Util& u) {
    if (u.exact()) return rat_to_json(u.rat());
    return json(real_to_string(u.approx()));
}

inline Util parse_util(const json& v, const std::string& where) {
    if (v.is_string()) return Util::real(std::stod(v.get<std::string>()));
    return Util(parse_rat(v, where));
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "uniform") return Scheme::uniform;
    if (s == "uniform-destructive") return Scheme::uniform_destructive;
    throw ConfigError("unknown perturbation scheme '" + s + "'");
}

inline std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::unperturbed: return "unperturbed";
        case Scheme::uniform: return "uniform";
        case Scheme::uniform_destructive: return "uniform-destructive";
        case Scheme::coalition_wise: return "coalition-wise";
    }
    return "?";
}

}  // namespace io_detail

inline ModelFile parse_model_json(const json& doc) {
    using namespace io_detail;
    if (!doc.is_object()) throw ConfigError("model file: top level must be an object");
    reject_unknown_keys(doc, {"agents", "activities", "projects", "payoff", "flags", "dynamics",
                              "guards"},
                        "model file");
    for (const char* key : {"agents", "activities", "projects", "payoff"})
        if (!doc.contains(key)) throw ConfigError(std::string("model file: missing '") + key + "'");

    ModelFile out;
    Model& m = out.model;
    std::unordered_map<std::string, int> agent_index;
    for (const auto& a : doc["agents"]) {
        reject_unknown_keys(a, {"name", "endowment"}, "agents");
        std::string name = a.at("name").get<std::string>();
        if (!agent_index.emplace(name, m.n).second)
            throw ConfigError("duplicate agent name '" + name + "'");
        m.agent_names.push_back(name);
        m.endowments.push_back(a.at("endowment").get<int>());
        m.n++;
    }
    std::unordered_map<std::string, int> activity_index;
    for (const auto& a : doc["activities"]) {
        std::string name = a.get<std::string>();
        if (!activity_index.emplace(name, static_cast<int>(m.technology.activities.size())).second)
            throw ConfigError("duplicate activity '" + name + "'");
        m.technology.activities.push_back(name);
    }
    for (const auto& p : doc["projects"]) {
        reject_unknown_keys(p, {"activity", "time"}, "projects");
        Project proj;
        std::string act = p.at("activity").get<std::string>();
        auto it = activity_index.find(act);
        if (it == activity_index.end()) throw ConfigError("project uses unknown activity '" + act + "'");
        proj.activity = it->second;
        proj.time.assign(m.n, 0);
        for (const auto& [aname, hours] : p.at("time").items()) {
            auto ai = agent_index.find(aname);
            if (ai == agent_index.end())
                throw ConfigError("project time entry names unknown agent '" + aname + "'");
            proj.time[ai->second] = hours.get<int>();
        }
        m.technology.projects.push_back(std::move(proj));
    }

    const json& pay = doc["payoff"];
    std::string family = pay.at("family").get<std::string>();
    if (family == "linear") {
        reject_unknown_keys(pay, {"family", "v"}, "payoff");
        Rat v = parse_rat(pay.at("v"), "payoff.v");
        if (v <= Rat(0)) throw ConfigError("linear payoff requires v > 0");
        m.payoff = Linear{v};
    } else if (family == "equal_split") {
        reject_unknown_keys(pay, {"family"}, "payoff");
        m.payoff = EqualSplit{};
    } else if (family == "table") {
        reject_unknown_keys(pay, {"family", "entries"}, "payoff");
        Table tab;
        for (const auto& e : pay.at("entries")) {
            reject_unknown_keys(e, {"state", "utilities"}, "payoff.entries");
            State x{};
            for (int pi : e.at("state").get<std::vector<int>>()) {
                if (pi < 0 || pi >= static_cast<int>(m.technology.projects.size()))
                    throw ConfigError("table entry references project index out of range");
                x = x.with(pi);
            }
            std::vector<Util> u;
            for (const auto& uv : e.at("utilities")) u.push_back(parse_util(uv, "payoff.entries"));
            if (static_cast<int>(u.size()) != m.n)
                throw ConfigError("table entry utility vector length does not match agent count");
            tab.utilities.emplace(x.bits, std::move(u));
        }
        m.payoff = std::move(tab);
    } else if (family == "publishing") {
        reject_unknown_keys(pay, {"family", "U", "V", "phi", "pgood"}, "payoff");
        Publishing pub;
        if (pay.contains("U")) pub.U = pay["U"].get<double>();
        if (pay.contains("V")) pub.V = pay["V"].get<double>();
        if (pub.U <= 0 || pub.V <= 0) throw ConfigError("publishing payoff requires U, V > 0");
        if (pay.contains("phi")) {
            pub.phi = pay["phi"].get<std::vector<double>>();
            if (pub.phi.size() != m.technology.projects.size())
                throw ConfigError("phi length does not match project count");
            for (double f : pub.phi)
                if (!(f > 0)) throw ConfigError("phi entries must be positive");
        }
        if (pay.contains("pgood")) {
            pub.pgood = pay["pgood"].get<std::vector<double>>();
            if (pub.pgood.size() != m.technology.projects.size())
                throw ConfigError("pgood length does not match project count");
            for (double g : pub.pgood)
                if (!(g > 0 && g <= 1)) throw ConfigError("pgood entries must lie in (0, 1]");
        }
        m.payoff = std::move(pub);
    } else {
        throw ConfigError("unknown payoff family '" + family + "'");
    }

    if (doc.contains("flags")) {
        reject_unknown_keys(doc["flags"], {"unique_activity_per_state"}, "flags");
        if (doc["flags"].contains("unique_activity_per_state"))
            m.technology.unique_activity_per_state =
                doc["flags"]["unique_activity_per_state"].get<bool>();
    }
    if (doc.contains("dynamics")) {
        const json& dyn = doc["dynamics"];
        reject_unknown_keys(dyn, {"draw_weights", "epsilon", "scheme"}, "dynamics");
        if (dyn.contains("draw_weights")) {
            for (const auto& w : dyn["draw_weights"])
                m.draw_weights.push_back(parse_rat(w, "dynamics.draw_weights"));
        }
        if (dyn.contains("epsilon")) out.epsilon = dyn["epsilon"].get<double>();
        if (dyn.contains("scheme")) out.scheme = parse_scheme(dyn["scheme"].get<std::string>());
    }
    if (doc.contains("guards")) {
        const json& g = doc["guards"];
        reject_unknown_keys(g, {"max_states", "max_coalition_n"}, "guards");
        if (g.contains("max_states")) m.guards.max_states = g["max_states"].get<std::size_t>();
        if (g.contains("max_coalition_n")) m.guards.max_coalition_n = g["max_coalition_n"].get<int>();
    }
    validate_model(m);
    return out;
}

inline ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("model file '" + path + "': " + e.what());
    }
    return parse_model_json(doc);
}

inline json save_model(const ModelFile& mf) {
    using namespace io_detail;
    const Model& m = mf.model;
    json doc;
    doc["agents"] = json::array();
    for (int i = 0; i < m.n; ++i)
        doc["agents"].push_back({{"name", m.agent_names[i]}, {"endowment", m.endowments[i]}});
    doc["activities"] = m.technology.activities;
    doc["projects"] = json::array();
    for (const auto& p : m.technology.projects) {
        json time = json::object();
        for (int i = 0; i < m.n; ++i)
            if (p.time[i] > 0) time[m.agent_names[i]] = p.time[i];
        doc["projects"].push_back(
            {{"activity", m.technology.activities[p.activity]}, {"time", time}});
    }
    if (const auto* lin = std::get_if<Linear>(&m.payoff)) {
        doc["payoff"] = {{"family", "linear"}, {"v", rat_to_json(lin->v)}};
    } else if (std::get_if<EqualSplit>(&m.payoff)) {
        doc["payoff"] = {{"family", "equal_split"}};
    } else if (const auto* tab = std::get_if<Table>(&m.payoff)) {
        json entries = json::array();
        std::vector<std::uint64_t> keys;
        for (const auto& [bits, u] : tab->utilities) {
            (void)u;
            keys.push_back(bits);
        }
        std::sort(keys.begin(), keys.end(), [](std::uint64_t a, std::uint64_t b) {
            return state_order(State{a}, State{b});
        });
        for (std::uint64_t bits : keys) {
            json utilities = json::array();
            for (const Util& u : tab->utilities.at(bits)) utilities.push_back(util_to_json(u));
            entries.push_back({{"state", State{bits}.members()}, {"utilities", utilities}});
        }
        doc["payoff"] = {{"family", "table"}, {"entries", entries}};
    } else {
        const auto& pub = std::get<Publishing>(m.payoff);
        doc["payoff"] = {{"family", "publishing"}, {"U", pub.U}, {"V", pub.V}};
        if (!pub.phi.empty()) doc["payoff"]["phi"] = pub.phi;
        if (!pub.pgood.empty()) doc["payoff"]["pgood"] = pub.pgood;
    }
    if (m.technology.unique_activity_per_state)
        doc["flags"] = {{"unique_activity_per_state", true}};
    json dyn = json::object();
    if (!m.draw_weights.empty()) {
        json ws = json::array();
        for (const auto& w : m.draw_weights) ws.push_back(rat_to_json(w));
        dyn["draw_weights"] = ws;
    }
    if (mf.epsilon) dyn["epsilon"] = *mf.epsilon;
    if (mf.scheme) dyn["scheme"] = scheme_name(*mf.scheme);
    if (!dyn.empty()) doc["dynamics"] = dyn;
    return doc;
}

}  // namespace teamform
