// Command-line front end: enumerate lattices, compute stability sets, run the
// exact chain analysis and the Monte Carlo simulator, verify the structural
// propositions, and dump the built-in example models.

#include <CLI11.hpp>
#include <iostream>

#include "teamform/teamform.hpp"

namespace {

using namespace teamform;
using teamform::json;

struct Options {
    std::string model_path;
    std::string example;
    std::string output = "text";
    bool classes = false;
};

Rat parse_cost(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(s));
        long long num = std::stoll(s.substr(0, slash));
        long long den = std::stoll(s.substr(slash + 1));
        if (den == 0) throw ConfigError("cost denominator is zero");
        return Rat(num, den);
    } catch (const std::invalid_argument&) {
        throw ConfigError("cost must be an integer or num/den rational: '" + s + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("cost out of range: '" + s + "'");
    }
}

ModelFile resolve_model(const Options& opt) {
    if (!opt.model_path.empty() && !opt.example.empty())
        throw ConfigError("--model and --example are mutually exclusive");
    if (!opt.model_path.empty()) return load_model(opt.model_path);
    if (!opt.example.empty()) return ModelFile{builtin_example(opt.example), {}, {}};
    throw ConfigError("one of --model or --example is required");
}

json state_json(State x) { return json(x.members()); }

json states_json(const StateSpace& space, const std::vector<int>& idx) {
    json arr = json::array();
    for (int i : idx) arr.push_back(state_json(space.states[i]));
    return arr;
}

std::string state_text(State x) {
    std::string s = "{";
    bool first = true;
    for (int p : x.members()) {
        if (!first) s += ",";
        s += std::to_string(p);
        first = false;
    }
    return s + "}";
}

void print_states(std::ostream& os, const StateSpace& space, const std::vector<int>& idx) {
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? " " : "") << state_text(space.states[idx[k]]);
}

json rat_json(const Rat& r) { return io_detail::rat_to_json(r); }
json real_json(double d) { return json(io_detail::real_to_string(d)); }

void add_class_report(json& doc, const StateSpace& space) {
    json per_class = json::array();
    std::vector<int> size(space.num_classes, 0), rep(space.num_classes, -1);
    for (int i = 0; i < static_cast<int>(space.states.size()); ++i) {
        int c = space.class_id[i];
        size[c]++;
        if (rep[c] < 0) rep[c] = i;
    }
    for (int c = 0; c < space.num_classes; ++c)
        per_class.push_back({{"id", c},
                             {"size", size[c]},
                             {"representative", state_json(space.states[rep[c]])}});
    doc["classes"] = per_class;
    doc["num_classes"] = space.num_classes;
}

void emit(const Options& opt, const json& doc, const std::function<void(std::ostream&)>& text) {
    if (opt.output == "json")
        std::cout << doc.dump(2) << "\n";
    else
        text(std::cout);
}

int cmd_enumerate(const Options& opt) {
    Model m = resolve_model(opt).model;
    StateSpace space = enumerate_states(m);
    int max_l = space.states.empty() ? 0 : space.states.back().size();
    json doc{{"num_states", space.states.size()},
             {"num_maximal", space.maximal.size()},
             {"num_maximal_classes", class_count(space, space.maximal)},
             {"max_projects", max_l},
             {"num_max_project_states", space.max_projects.size()},
             {"maximal_states", states_json(space, space.maximal)},
             {"max_project_states", states_json(space, space.max_projects)}};
    if (opt.classes) add_class_report(doc, space);
    emit(opt, doc, [&](std::ostream& os) {
        os << "states: " << space.states.size() << "\n"
           << "maximal: " << space.maximal.size() << " (" << class_count(space, space.maximal)
           << " classes up to activity relabeling)\n"
           << "max projects per state: " << max_l << " (" << space.max_projects.size()
           << " states)\nmaximal states: ";
        print_states(os, space, space.maximal);
        os << "\n";
        if (opt.classes) {
            os << "classes: " << space.num_classes << "\n";
        }
    });
    return 0;
}

int cmd_stability(const Options& opt, const std::string& notion, const std::string& cost) {
    Model m = resolve_model(opt).model;
    StateSpace space = enumerate_states(m);
    if (notion == "mts") {
        auto mts = mts_set(m, space);
        json doc{{"notion", "mts"},
                 {"num_stable", mts.size()},
                 {"stable_states", states_json(space, mts)}};
        if (opt.classes) doc["num_stable_classes"] = class_count(space, mts);
        emit(opt, doc, [&](std::ostream& os) {
            os << "team-wise stable states: " << mts.size() << "\n";
            print_states(os, space, mts);
            os << "\n";
        });
        return 0;
    }
    if (notion == "cs") {
        Rat c = cost.empty() ? Rat(0) : parse_cost(cost);
        auto cs = cs_set(m, space, c);
        auto th = cost_thresholds(m, space);
        json doc{{"notion", "cs"},
                 {"cost", rat_json(c)},
                 {"num_stable", cs.size()},
                 {"stable_states", states_json(space, cs)}};
        if (th.c_low) doc["c_low"] = th.c_low->exact() ? rat_json(th.c_low->rat())
                                                       : real_json(th.c_low->approx());
        if (th.c_high) doc["c_high"] = th.c_high->exact() ? rat_json(th.c_high->rat())
                                                          : real_json(th.c_high->approx());
        if (opt.classes) doc["num_stable_classes"] = class_count(space, cs);
        emit(opt, doc, [&](std::ostream& os) {
            os << "coalitionally stable states at cost " << c.numerator() << "/" << c.denominator()
               << ": " << cs.size() << "\n";
            print_states(os, space, cs);
            os << "\n";
            if (th.c_low && th.c_low->exact())
                os << "c_low = " << th.c_low->rat().numerator() << "/"
                   << th.c_low->rat().denominator() << "\n";
            if (th.c_high && th.c_high->exact())
                os << "c_high = " << th.c_high->rat().numerator() << "/"
                   << th.c_high->rat().denominator() << "\n";
        });
        return 0;
    }
    if (notion == "farsighted") {
        FarsightedMode mode = static_cast<int>(space.states.size()) <=
                                      m.guards.farsighted_exhaustive_max
                                  ? FarsightedMode::exhaustive
                                  : FarsightedMode::greedy;
        auto sets = farsighted_stable_sets(m, space, mode);
        json arr = json::array();
        for (const auto& fs : sets)
            arr.push_back({{"states", states_json(space, fs.members)},
                           {"certified", {fs.certified_i, fs.certified_ii, fs.certified_iii}}});
        json doc{{"notion", "farsighted"},
                 {"mode", mode == FarsightedMode::exhaustive ? "exhaustive" : "greedy"},
                 {"num_sets", sets.size()},
                 {"sets", arr}};
        emit(opt, doc, [&](std::ostream& os) {
            os << "farsightedly stable sets ("
               << (mode == FarsightedMode::exhaustive ? "exhaustive" : "greedy")
               << "): " << sets.size() << "\n";
            for (const auto& fs : sets) {
                print_states(os, space, fs.members);
                os << "\n";
            }
        });
        return 0;
    }
    throw ConfigError("unknown stability notion '" + notion + "'");
}

int cmd_stochastic(const Options& opt) {
    Model m = resolve_model(opt).model;
    StateSpace space = enumerate_states(m);
    SsResult ss = ss_set(m, space);
    json gamma = json::array();
    for (std::size_t k = 0; k < ss.potentials.nodes.size(); ++k)
        gamma.push_back({{"state", state_json(space.states[ss.potentials.nodes[k]])},
                         {"potential", ss.potentials.gamma[k]}});
    json doc{{"num_stochastically_stable", ss.via_potentials.size()},
             {"stochastically_stable", states_json(space, ss.via_potentials)},
             {"max_project_states", states_json(space, ss.via_max_projects)},
             {"matches_max_project_states", ss.equal},
             {"potentials", gamma}};
    if (opt.classes)
        doc["num_stochastically_stable_classes"] = class_count(space, ss.via_potentials);
    emit(opt, doc, [&](std::ostream& os) {
        os << "stochastically stable states: " << ss.via_potentials.size() << "\n";
        print_states(os, space, ss.via_potentials);
        os << "\nequal to the maximum-project set: " << (ss.equal ? "yes" : "no") << "\n";
    });
    return 0;
}

int cmd_stationary(const Options& opt, double epsilon) {
    ModelFile mf = resolve_model(opt);
    const Model& m = mf.model;
    if (epsilon <= 0 && mf.epsilon) epsilon = *mf.epsilon;
    StateSpace space = enumerate_states(m);
    auto chain = perturbed_transition_matrix(m, space, epsilon, Scheme::uniform_destructive);
    auto pi = stationary_distribution(chain);
    double max_mass = 0.0;
    for (int i : space.max_projects) max_mass += pi[i];
    // report the states carrying the most mass
    std::vector<int> order(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return pi[a] > pi[b]; });
    json top = json::array();
    for (int k = 0; k < static_cast<int>(order.size()) && k < 10; ++k)
        top.push_back({{"state", state_json(space.states[order[k]])},
                       {"probability", real_json(pi[order[k]])}});
    json doc{{"epsilon", real_json(epsilon)},
             {"scheme", "uniform-destructive"},
             {"mass_on_max_project_states", real_json(max_mass)},
             {"top_states", top}};
    emit(opt, doc, [&](std::ostream& os) {
        os << "stationary distribution at epsilon = " << epsilon << "\n"
           << "mass on the maximum-project states: " << max_mass << "\n";
        for (int k = 0; k < static_cast<int>(order.size()) && k < 10; ++k)
            os << "  " << state_text(space.states[order[k]]) << "  " << pi[order[k]] << "\n";
    });
    return 0;
}

int cmd_simulate(const Options& opt, const SimulationConfig& cfg_in, const std::string& scheme) {
    ModelFile mf = resolve_model(opt);
    const Model& m = mf.model;
    SimulationConfig cfg = cfg_in;
    if (!scheme.empty())
        cfg.scheme = io_detail::parse_scheme(scheme);
    else if (mf.scheme)
        cfg.scheme = *mf.scheme;
    if (cfg.epsilon <= 0 && mf.epsilon) cfg.epsilon = *mf.epsilon;
    StateSpace space = enumerate_states(m);
    OccupancyReport rep = run_simulation(m, space, cfg);
    std::vector<int> order(rep.frequency.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rep.frequency[a] > rep.frequency[b]; });
    json top = json::array();
    for (int k = 0; k < static_cast<int>(order.size()) && k < 10; ++k)
        top.push_back({{"state", state_json(space.states[order[k]])},
                       {"frequency", real_json(rep.frequency[order[k]])}});
    double max_mass = 0.0;
    for (int i : space.max_projects) max_mass += rep.frequency[i];
    json doc{{"epsilon", real_json(cfg.epsilon)},
             {"scheme", io_detail::scheme_name(cfg.scheme)},
             {"steps", cfg.steps},
             {"burn_in", cfg.burn_in},
             {"seed", cfg.seed},
             {"replicas", cfg.replicas},
             {"samples", rep.samples},
             {"modal_state", state_json(space.states[rep.modal_state])},
             {"mass_on_max_project_states", real_json(max_mass)},
             {"top_states", top}};
    if (opt.classes) doc["modal_class"] = rep.modal_class;
    emit(opt, doc, [&](std::ostream& os) {
        os << "simulated " << cfg.steps << " steps (seed " << cfg.seed << ", epsilon "
           << cfg.epsilon << ", " << io_detail::scheme_name(cfg.scheme) << ")\n"
           << "modal state: " << state_text(space.states[rep.modal_state]) << "\n"
           << "mass on the maximum-project states: " << max_mass << "\n";
    });
    return 0;
}

int cmd_verify(const Options& opt) {
    Model m = resolve_model(opt).model;
    VerificationReport rep = verify_propositions(m);
    auto status_name = [](CheckStatus s) {
        switch (s) {
            case CheckStatus::passed: return "pass";
            case CheckStatus::not_applicable: return "not-applicable";
            case CheckStatus::failed: return "fail";
        }
        return "?";
    };
    json arr = json::array();
    for (const auto& c : rep.checks)
        arr.push_back({{"id", c.id},
                       {"status", status_name(c.status)},
                       {"hypotheses", c.hypotheses},
                       {"detail", c.detail}});
    json doc{{"checks", arr}, {"all_passed", rep.all_passed()}};
    emit(opt, doc, [&](std::ostream& os) {
        for (const auto& c : rep.checks)
            os << c.id << ": " << status_name(c.status) << "  [" << c.hypotheses << "] "
               << c.detail << "\n";
        os << (rep.all_passed() ? "all applicable checks passed" : "FAILURES present") << "\n";
    });
    return rep.all_passed() ? 0 : 1;
}

int cmd_examples(const Options& opt, const std::string& name) {
    if (name.empty()) {
        json doc{{"examples", builtin_example_names()}};
        emit(opt, doc, [&](std::ostream& os) {
            for (const auto& n : builtin_example_names()) os << n << "\n";
        });
        return 0;
    }
    ModelFile mf{builtin_example(name), {}, {}};
    json doc = save_model(mf);
    emit(opt, doc, [&](std::ostream& os) { os << doc.dump(2) << "\n"; });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"team formation analysis"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--model", opt.model_path, "model file (JSON)");
    app.add_option("--example", opt.example, "built-in example name");
    app.add_option("--output", opt.output, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--classes", opt.classes, "report activity-relabeling classes");

    auto* enumerate = app.add_subcommand("enumerate", "enumerate the feasible-state lattice");

    std::string notion, cost;
    auto* stability = app.add_subcommand("stability", "compute a stability set");
    stability->add_option("--notion", notion, "stability notion")
        ->required()
        ->check(CLI::IsMember({"mts", "cs", "farsighted"}));
    stability->add_option("--cost", cost, "switching cost (integer or num/den)");

    auto* stochastic = app.add_subcommand("stochastic", "stochastically stable states");

    double st_eps = 0.0;
    auto* stationary = app.add_subcommand("stationary", "exact stationary distribution");
    stationary->add_option("--epsilon", st_eps, "perturbation rate")->required();

    SimulationConfig sim;
    bool burn_set = false;
    std::string sim_scheme;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation");
    simulate->add_option("--epsilon", sim.epsilon, "perturbation rate")->required();
    simulate->add_option("--steps", sim.steps, "number of steps")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed")->required();
    simulate->add_option("--scheme", sim_scheme, "perturbation scheme")
        ->check(CLI::IsMember({"uniform", "uniform-destructive"}));
    simulate->add_option("--burn-in", sim.burn_in, "discarded prefix")->each([&](const std::string&) {
        burn_set = true;
    });
    simulate->add_option("--replicas", sim.replicas, "independent replicas");

    auto* verify = app.add_subcommand("verify", "verify the structural propositions");

    std::string example_name;
    auto* examples = app.add_subcommand("examples", "list or dump built-in examples");
    examples->add_option("name", example_name, "example to dump");

    // global flags may appear after the subcommand
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*enumerate) return cmd_enumerate(opt);
        if (*stability) return cmd_stability(opt, notion, cost);
        if (*stochastic) return cmd_stochastic(opt);
        if (*stationary) return cmd_stationary(opt, st_eps);
        if (*simulate) {
            if (!burn_set) sim.burn_in = std::max<std::uint64_t>(1, sim.steps / 100);
            return cmd_simulate(opt, sim, sim_scheme);
        }
        if (*verify) return cmd_verify(opt);
        if (*examples) return cmd_examples(opt, example_name);
    } catch (const CapacityError& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
