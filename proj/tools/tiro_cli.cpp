#include "tiro/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace tiro;

enum Exit { kPositive = 0, kNegative = 1, kUnknown = 2, kUsage = 3, kResource = 4 };

struct Settings {
    std::string format = "text";
    unsigned seed = 0;
    int threads = 1;
    bool json() const { return format == "json"; }
};

// ── Input helpers ───────────────────────────────────────────────────

TimedWordDocument load_word(const std::string& path) { return parse_timed_word(read_text(path), path); }

Json load_json(const std::string& path) { return parse_json(read_text(path), path == "-" ? "<stdin>" : path); }

/// A named standard diff, or the path of a diff file over the given alphabet.
DiffFunction make_diff(const std::string& source, const Alphabet& sigma) {
    if (source == "zero-one") return DiffFunction::zero_one(sigma);
    if (source == "equality") return DiffFunction::equality(sigma);
    if (source == "hamming") return DiffFunction::hamming(sigma);
    std::string text = read_text(source);
    std::istringstream in(text);
    return parse_diff(in, [&](const std::string&) { return sigma; }, source);
}

Alphabet word_alphabet(const std::vector<const TimedWordDocument*>& docs) {
    for (auto* d : docs)
        if (d->alphabet) return *d->alphabet;
    Alphabet sigma("sigma", {});
    for (auto* d : docs)
        for (auto& e : d->word.events()) sigma.add(e.letter);
    return sigma;
}

LabeledWord labels_of(const TimedWord& w) {
    LabeledWord out;
    for (auto& e : w.events()) out.push_back({Label::parse(e.letter), e.time});
    return out;
}

Rational parse_positive(const std::string& text, const std::string& what) {
    Rational r = parse_rational(text);
    if (r <= 0) throw PreconditionError(what + " must be positive");
    return r;
}

void print(const Settings& s, const Json& j, const std::string& text) {
    if (s.json()) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

std::string show_word(const Word& w) {
    std::string out;
    for (auto& a : w) out += (out.empty() ? "" : " ") + a;
    return out.empty() ? "ε" : out;
}

std::string indent(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out += "    " + line + "\n";
    return out.empty() ? "    (empty)\n" : out;
}

int report_robustness(const Settings& s, const RobustnessResult& r) {
    std::string text = std::string("verdict: ") + verdict_name(r.verdict) + "\nK: " + to_string(r.K) + "\n";
    if (r.discrete) {
        const auto& d = *r.discrete;
        text += "discrete witness:\n  input 1:  " + show_word(d.input_1) + "\n  input 2:  " + show_word(d.input_2) +
                "\n  output 1: " + show_word(d.output_1) + "\n  output 2: " + show_word(d.output_2) +
                "\n  d_I = " + d.input_distance.str() + "\n  d_O = " + d.output_distance.str() + "\n";
    }
    if (r.timed) {
        const auto& t = *r.timed;
        text += "timed witness (horizon " + to_string(t.horizon) + "):\n  input 1:\n" + indent(format_timed_word(t.input_1)) +
                "  input 2:\n" + indent(format_timed_word(t.input_2)) + "  output 1:\n" +
                indent(format_timed_word(t.output_1)) + "  output 2:\n" + indent(format_timed_word(t.output_2)) +
                "  d_I = " + t.input_distance.str() + "\n  d_O = " + t.output_distance.str() + "\n";
    }
    text += "note: " + r.note + "\n";
    print(s, robustness_to_json(r), text);
    return verdict_exit_code(r.verdict);
}

// ── Verbs ───────────────────────────────────────────────────────────

struct DistanceArgs {
    std::string metric = "timed-manhattan", u, v, diff = "zero-one";
    bool pad = false;
};

int run_distance(const Settings& s, const DistanceArgs& a) {
    auto du = load_word(a.u), dv = load_word(a.v);
    Alphabet sigma = word_alphabet({&du, &dv});
    DiffFunction d = make_diff(a.diff, sigma);
    TimedWord u = du.word, v = dv.word;
    if (a.pad && !u.empty() && !v.empty()) {
        Rational end = std::max(u.end(), v.end());
        u = pad_to(u, end);
        v = pad_to(v, end);
    }
    Json j{{"metric", a.metric}};
    ExtendedValue value;
    if (a.metric == "timed-manhattan") {
        value = timed_manhattan(u, v, d);
    } else if (a.metric == "accumulated-delay") {
        value = accumulated_delay(u, v);
    } else if (a.metric == "generalized-manhattan") {
        value = generalized_manhattan(u.untimed(), v.untimed(), d);
    } else if (a.metric == "skorokhod") {
        auto r = skorokhod_detailed(CadlagFunction::from_word(u), CadlagFunction::from_word(v), d);
        value = r.value;
        j["retiming"] = Json::array();
        for (auto& t : r.retiming) j["retiming"].push_back(to_string(t));
    } else {
        throw CLI::ValidationError("--metric", "unknown metric '" + a.metric + "'");
    }
    j["value"] = value.str();
    print(s, j, value.str() + "\n");
    return kPositive;
}

struct SimulateArgs {
    std::string circuit, input, horizon, csv;
};

int run_simulate(const Settings& s, const SimulateArgs& a) {
    AsyncCircuit C = circuit_from_json(load_json(a.circuit), a.circuit);
    auto doc = load_word(a.input);
    Rational horizon = parse_positive(a.horizon, "horizon");
    Waveform w = simulate(C, doc.word, horizon);
    TimedWord out = w.output.to_word();
    if (!a.csv.empty()) {
        std::ofstream f(a.csv);
        if (!f) throw ParseError(a.csv + ": cannot write file");
        std::set<Rational> times;
        for (auto* g : {&w.input, &w.output, &w.excitation, &w.secondary})
            for (auto& p : g->pieces()) times.insert(p.start);
        f << "time,input,output,excitation,secondary\n";
        for (auto& t : times)
            f << to_string(t) << "," << w.input.value_at(t) << "," << w.output.value_at(t) << ","
              << w.excitation.value_at(t) << "," << w.secondary.value_at(t) << "\n";
    }
    Json j{{"horizon", to_string(horizon)}, {"output", timed_word_to_json(out)}};
    print(s, j, format_timed_word(out));
    return kPositive;
}

struct WordQueryArgs {
    std::string automaton, word;
};

int run_accepts(const Settings& s, const WordQueryArgs& a) {
    TimedAutomaton A = automaton_from_json(load_json(a.automaton), a.automaton);
    LabeledWord w = labels_of(load_word(a.word).word);
    bool acc = accepts(A, w).accepted;
    Json j{{"accepted", acc}};
    std::string text = acc ? "accepted\n" : "rejected\n";
    if (acc && A.is_weighted()) {
        auto v = wta_value(A, w).str();
        j["value"] = v;
        text += "value: " + v + "\n";
    }
    print(s, j, text);
    return acc ? kPositive : kNegative;
}

int run_value(const Settings& s, const WordQueryArgs& a) {
    TimedAutomaton A = automaton_from_json(load_json(a.automaton), a.automaton);
    auto v = wta_value(A, labels_of(load_word(a.word).word));
    print(s, Json{{"value", v.str()}}, v.str() + "\n");
    return kPositive;
}

struct EmptinessArgs {
    std::string automaton, threshold;
};

int run_emptiness(const Settings& s, const EmptinessArgs& a) {
    TimedAutomaton A = automaton_from_json(load_json(a.automaton), a.automaton);
    if (a.threshold.empty()) {
        auto r = emptiness(A);
        Json j{{"empty", r.empty}};
        std::string text = r.empty ? "empty\n" : "nonempty; witness:\n" + indent(format_labeled_word(r.witness->word));
        if (r.witness) j["witness"] = labeled_word_to_json(r.witness->word);
        print(s, j, text);
        return r.empty ? kPositive : kNegative;
    }
    Rational lambda = parse_rational(a.threshold);
    auto r = quantitative_emptiness(A, lambda);
    Json j{{"threshold", to_string(lambda)}, {"infimum", r.infimum.str()}, {"below_threshold", r.yes}};
    std::string text = "infimum: " + r.infimum.str() + "\n";
    if (r.witness) {
        j["witness"] = labeled_word_to_json(r.witness->word);
        j["witness_value"] = r.witness_value->str();
        text += "word of value " + r.witness_value->str() + " below " + to_string(lambda) + ":\n" +
                indent(format_labeled_word(r.witness->word));
    } else {
        text += "no word of value below " + to_string(lambda) + "\n";
    }
    print(s, j, text);
    return r.yes ? kNegative : kPositive;
}

struct FunctionalityArgs {
    std::string transducer;
    bool syntactic = false;
    std::size_t lag = 3;
};

int run_functionality(const Settings& s, const FunctionalityArgs& a) {
    TimedTransducer T = transducer_from_json(load_json(a.transducer), a.transducer);
    if (a.syntactic) {
        auto r = syntactic_functionality(T);
        Json j{{"sufficient", r.sufficient}, {"reasons", r.reasons}};
        std::string text = r.sufficient ? "Sufficient\n" : "Inconclusive\n";
        for (auto& why : r.reasons) text += "  " + why + "\n";
        print(s, j, text);
        return r.sufficient ? kPositive : kUnknown;
    }
    FunctionalityOptions opt;
    opt.lag_capacity = a.lag;
    auto r = check_functionality(T, opt);
    Json j{{"functional", r.functional}, {"note", r.note}};
    std::string text = r.functional ? "Functional\nnote: " + r.note + "\n" : "NotFunctional\n";
    if (r.witness) {
        const auto& w = *r.witness;
        j["witness"] = {{"input", timed_word_to_json(w.input)},
                        {"output_1", timed_word_to_json(w.output_1)},
                        {"output_2", timed_word_to_json(w.output_2)},
                        {"interleaving", labeled_word_to_json(w.word)}};
        text += "input:\n" + indent(format_timed_word(w.input)) + "output 1:\n" + indent(format_timed_word(w.output_1)) +
                "output 2:\n" + indent(format_timed_word(w.output_2));
    }
    print(s, j, text);
    return r.functional ? kPositive : kNegative;
}

int run_untiming(const std::string& path) {
    TimedTransducer T = transducer_from_json(load_json(path), path);
    std::cout << fst_to_json(untime_transducer(T)).dump(2) << "\n";
    return kPositive;
}

int run_embed(const std::string& path, bool rigid) {
    DiscreteTransducer F = fst_from_json(load_json(path), path);
    std::cout << transducer_to_json(embed_discrete(F, rigid)).dump(2) << "\n";
    return kPositive;
}

struct RobustnessArgs {
    std::string model, K, diff_in, diff_out;
    std::size_t max_states = 2'000'000;
    // transducer only
    std::string metric_in = "timed-manhattan", metric_out = "timed-manhattan", lambda = "1", bound = "1";
    std::size_t N = 1;
    bool assume_functional = false;
    // fst only
    bool equal_lengths_only = false;
};

/// Parameters default to the values stored in the model document.
void fill_from_model(RobustnessArgs& a, const Json& j) {
    auto take = [&](std::string& field, const char* key) {
        if (!field.empty() || !j.contains(key)) return;
        field = j[key].is_string() ? j[key].get<std::string>() : j[key].dump();
    };
    take(a.K, "K");
    take(a.diff_in, "diff_in");
    take(a.diff_out, "diff_out");
    if (a.K.empty()) throw CLI::ValidationError("--K", "K is required");
}

int run_robustness_asc(const Settings& s, RobustnessArgs a) {
    Json j = load_json(a.model);
    fill_from_model(a, j);
    AsyncCircuit C = circuit_from_json(j, a.model);
    Rational K = parse_positive(a.K, "K");
    auto width = [](std::size_t n) { return bit_vector_alphabet(static_cast<int>(n)); };
    DiffFunction dI = make_diff(a.diff_in.empty() ? "hamming" : a.diff_in, width(C.inputs().size()));
    DiffFunction dO = make_diff(a.diff_out.empty() ? "hamming" : a.diff_out, width(C.outputs().size()));
    return report_robustness(s, check_asc_robustness(C, dI, dO, K, a.max_states));
}

int run_robustness_fst(const Settings& s, RobustnessArgs a) {
    Json j = load_json(a.model);
    fill_from_model(a, j);
    DiscreteTransducer F = fst_from_json(j, a.model);
    Rational K = parse_positive(a.K, "K");
    DiffFunction dI = make_diff(a.diff_in.empty() ? "zero-one" : a.diff_in, F.input_alphabet());
    DiffFunction dO = make_diff(a.diff_out.empty() ? "zero-one" : a.diff_out, F.output_alphabet());
    DiscreteRobustnessOptions opt;
    opt.unequal_lengths = !a.equal_lengths_only;
    opt.max_states = a.max_states;
    ExplicitLetterTransducer t(F);
    return report_robustness(s, check_discrete_robustness(t, dI, dO, K, opt));
}

DistanceAutomaton make_distance(const std::string& metric, const DiffFunction& d, const Rational& lambda,
                                const Rational& bound) {
    if (metric == "timed-manhattan") return manhattan_distance(d);
    if (metric == "accumulated-delay") return accumulated_delay_distance(d.alphabet(), lambda, bound);
    if (metric == "skorokhod") return skorokhod_distance(d, lambda, bound);
    throw CLI::ValidationError("--metric", "unknown metric '" + metric + "'");
}

int run_robustness_transducer(const Settings& s, RobustnessArgs a) {
    Json j = load_json(a.model);
    fill_from_model(a, j);
    TimedTransducer T = transducer_from_json(j, a.model);
    Rational K = parse_positive(a.K, "K");
    Rational lambda = parse_positive(a.lambda, "lambda"), bound = parse_positive(a.bound, "bound");
    DiffFunction dIf = make_diff(a.diff_in.empty() ? "zero-one" : a.diff_in, T.input_alphabet());
    DiffFunction dOf = make_diff(a.diff_out.empty() ? "zero-one" : a.diff_out, T.output_alphabet());
    auto dI = make_distance(a.metric_in, dIf, lambda, bound);
    auto dO = make_distance(a.metric_out, dOf, lambda, bound);
    TransducerRobustnessOptions opt;
    opt.assume_functional = a.assume_functional;
    opt.search.limits.max_nodes = a.max_states;
    opt.functionality.limits.max_nodes = a.max_states;
    return report_robustness(s, check_robustness(T, dI, dO, K, {a.N}, opt));
}

struct GadgetArgs {
    std::string edges, target, K;
};

int run_gadget(const GadgetArgs& a) {
    std::string text = read_text(a.edges);
    std::string formula;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (auto c = line.find("//"); c != std::string::npos) line = line.substr(0, c);
        formula += line + " ";
    }
    BoolFormula E = BoolFormula::parse(formula);
    std::vector<bool> target;
    for (char c : a.target) {
        if (c != '0' && c != '1') throw CLI::ValidationError("--target", "target must be a bit string");
        target.push_back(c == '1');
    }
    Json j = circuit_to_json(gen_reachability_gadget(E, target));
    if (!a.K.empty()) j["K"] = to_string(parse_positive(a.K, "K"));
    j["diff_in"] = "hamming";
    j["diff_out"] = "hamming";
    std::cout << j.dump(2) << "\n";
    return kPositive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timed I/O robustness toolkit"};
    app.require_subcommand(1);
    Settings settings;
    app.add_option("--format", settings.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", settings.seed, "Seed for randomized helpers");
    app.add_option("--threads", settings.threads, "Worker threads")->check(CLI::PositiveNumber);

    DistanceArgs dist;
    auto* distance = app.add_subcommand("distance", "Distance between two timed words");
    distance->add_option("u", dist.u, "First timed word")->required();
    distance->add_option("v", dist.v, "Second timed word")->required();
    distance->add_option("--metric", dist.metric, "timed-manhattan, accumulated-delay, skorokhod or generalized-manhattan");
    distance->add_option("--diff", dist.diff, "zero-one, equality, hamming, or a diff file");
    distance->add_flag("--pad", dist.pad, "Extend the shorter word to the later end");

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Dense-time simulation of a circuit");
    simulate_cmd->add_option("circuit", sim.circuit, "Circuit JSON")->required();
    simulate_cmd->add_option("input", sim.input, "Input timed word")->required();
    simulate_cmd->add_option("--horizon", sim.horizon, "End of simulation")->required();
    simulate_cmd->add_option("--csv", sim.csv, "Write all waveforms to a CSV file");

    WordQueryArgs query;
    auto* accepts_cmd = app.add_subcommand("accepts", "Whether an automaton accepts a timed word");
    accepts_cmd->add_option("automaton", query.automaton, "Automaton JSON")->required();
    accepts_cmd->add_option("word", query.word, "Timed word")->required();
    auto* value_cmd = app.add_subcommand("value", "Value of a timed word in a weighted automaton");
    value_cmd->add_option("automaton", query.automaton, "Automaton JSON")->required();
    value_cmd->add_option("word", query.word, "Timed word")->required();

    EmptinessArgs empt;
    auto* emptiness_cmd = app.add_subcommand("emptiness", "Language or quantitative emptiness");
    emptiness_cmd->add_option("automaton", empt.automaton, "Automaton JSON")->required();
    emptiness_cmd->add_option("--threshold", empt.threshold, "Look for a word of value below this");

    FunctionalityArgs func;
    auto* functionality = app.add_subcommand("functionality", "Whether a timed transducer is functional");
    functionality->add_option("transducer", func.transducer, "Transducer JSON")->required();
    functionality->add_flag("--syntactic", func.syntactic, "Only the local sufficient condition");
    functionality->add_option("--lag", func.lag, "Output lag tracked between the two runs")->check(CLI::PositiveNumber);

    std::string untime_path;
    auto* untiming = app.add_subcommand("untiming", "Finite-state transducer of the untimed relation");
    untiming->add_option("transducer", untime_path, "Transducer JSON")->required();

    std::string embed_path;
    bool rigid = false;
    auto* embed = app.add_subcommand("embed", "Timed transducer of a finite-state transducer");
    embed->add_option("fst", embed_path, "FST JSON")->required();
    embed->add_flag("--rigid", rigid, "Emit outputs at the instant of their input");

    RobustnessArgs rob;
    auto* robustness = app.add_subcommand("robustness", "K-Lipschitz robustness");
    robustness->require_subcommand(1);
    auto common = [&](CLI::App* c, const std::string& what) {
        c->add_option("model", rob.model, what + " (- for standard input)")->required();
        c->add_option("--K", rob.K, "Lipschitz constant");
        c->add_option("--diff-in", rob.diff_in, "Input diff: zero-one, equality, hamming, or a file");
        c->add_option("--diff-out", rob.diff_out, "Output diff: zero-one, equality, hamming, or a file");
        c->add_option("--max-states", rob.max_states, "Exploration budget");
    };
    auto* rob_asc = robustness->add_subcommand("asc", "Asynchronous sequential circuit");
    common(rob_asc, "Circuit JSON");
    auto* rob_fst = robustness->add_subcommand("fst", "Letter-to-letter finite-state transducer");
    common(rob_fst, "FST JSON");
    rob_fst->add_flag("--equal-lengths-only", rob.equal_lengths_only, "Compare inputs of equal length only");
    auto* rob_td = robustness->add_subcommand("transducer", "Timed transducer");
    common(rob_td, "Transducer JSON");
    rob_td->add_option("--metric-in", rob.metric_in, "timed-manhattan, accumulated-delay or skorokhod");
    rob_td->add_option("--metric-out", rob.metric_out, "timed-manhattan, accumulated-delay or skorokhod");
    rob_td->add_option("--lambda", rob.lambda, "Minimum segment duration");
    rob_td->add_option("--bound", rob.bound, "Maximum delay");
    rob_td->add_option("--N", rob.N, "Asserted synchronization bound")->check(CLI::PositiveNumber);
    rob_td->add_flag("--assume-functional", rob.assume_functional, "Skip the functionality check");

    GadgetArgs gad;
    auto* gadget = app.add_subcommand("gadget", "Circuit encoding reachability in a succinct graph");
    gadget->add_option("--edges", gad.edges, "Edge formula over v0.. and w0..")->required();
    gadget->add_option("--target", gad.target, "Target vertex as a bit string")->required();
    gadget->add_option("--K", gad.K, "Lipschitz constant stored with the circuit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*distance) return run_distance(settings, dist);
        if (*simulate_cmd) return run_simulate(settings, sim);
        if (*accepts_cmd) return run_accepts(settings, query);
        if (*value_cmd) return run_value(settings, query);
        if (*emptiness_cmd) return run_emptiness(settings, empt);
        if (*functionality) return run_functionality(settings, func);
        if (*untiming) return run_untiming(untime_path);
        if (*embed) return run_embed(embed_path, rigid);
        if (*rob_asc) return run_robustness_asc(settings, rob);
        if (*rob_fst) return run_robustness_fst(settings, rob);
        if (*rob_td) return run_robustness_transducer(settings, rob);
        if (*gadget) return run_gadget(gad);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceExceeded& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        if (settings.json()) std::cout << Json{{"verdict", "ResourceExceeded"}, {"note", e.what()}}.dump(2) << "\n";
        return kResource;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
