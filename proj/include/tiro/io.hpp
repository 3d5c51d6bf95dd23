#pragma once

#include "tiro/asc.hpp"
#include "tiro/transducers.hpp"

#include "json.hpp"

#include <fstream>
#include <iostream>
#include <iterator>

namespace tiro {

using Json = nlohmann::ordered_json;

// ── Files ───────────────────────────────────────────────────────────

/// Whole contents of a file, or of standard input for "-".
inline std::string read_text(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1 + std::count(text.begin(), text.begin() + std::min(e.byte, text.size()), '\n');
        throw ParseError(source + ":" + std::to_string(line) + ": " + e.what());
    }
}

namespace detail {

struct JsonReader {
    std::string source;

    [[noreturn]] void fail(const std::string& where, const std::string& msg) const {
        throw ParseError(source + ": " + where + ": " + msg);
    }

    const Json& field(const Json& j, const std::string& key, const std::string& where) const {
        if (!j.is_object()) fail(where, "expected an object");
        if (!j.contains(key)) fail(where, "missing field '" + key + "'");
        return j.at(key);
    }

    std::string text(const Json& j, const std::string& where) const {
        if (!j.is_string()) fail(where, "expected a string");
        return j.get<std::string>();
    }

    std::vector<std::string> strings(const Json& j, const std::string& where) const {
        if (j.is_string()) return {j.get<std::string>()};
        if (!j.is_array()) fail(where, "expected an array of strings");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(text(j[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }

    Rational rational(const Json& j, const std::string& where) const {
        try {
            if (j.is_number_integer()) return Rational(j.get<long long>());
            if (j.is_string()) return parse_rational(j.get<std::string>());
        } catch (const std::exception& e) {
            fail(where, e.what());
        }
        fail(where, "expected an integer or a rational string such as \"3/2\"");
    }

    /// A letter sequence given as an array or as one string of whitespace-separated letters.
    Word word(const Json& j, const std::string& where) const {
        if (j.is_array()) return strings(j, where);
        std::string s = text(j, where);
        Word out;
        std::istringstream in(s);
        for (std::string x; in >> x;) out.push_back(x);
        return out;
    }
};

inline std::string guard_text(const TimedAutomaton& A, const ClockConstraint& g) {
    return format_guard(g, A.clocks());
}

}  // namespace detail

// ── Timed automata ──────────────────────────────────────────────────

inline TimedAutomaton automaton_from_json(const Json& j, const std::string& source = "<automaton>") {
    detail::JsonReader r{source};
    TimedAutomaton A;
    try {
        for (auto& l : r.strings(r.field(j, "alphabet", "document"), "alphabet")) A.add_letter(Label::parse(l));
        if (j.contains("clocks"))
            for (auto& c : r.strings(j["clocks"], "clocks")) A.add_clock(c);
        std::set<std::string> accepting;
        if (j.contains("accepting"))
            for (auto& a : r.strings(j["accepting"], "accepting")) accepting.insert(a);
        const Json& locs = r.field(j, "locations", "document");
        if (!locs.is_array()) r.fail("locations", "expected an array");
        for (std::size_t i = 0; i < locs.size(); ++i) {
            std::string where = "locations[" + std::to_string(i) + "]";
            if (locs[i].is_string()) {
                std::string n = locs[i].get<std::string>();
                A.add_location(n, 0, accepting.count(n) > 0);
                continue;
            }
            std::string n = r.text(r.field(locs[i], "name", where), where + ".name");
            Rational w = locs[i].contains("weight") ? r.rational(locs[i]["weight"], where + ".weight") : Rational(0);
            bool acc = accepting.count(n) > 0 || locs[i].value("accepting", false);
            A.add_location(n, w, acc);
        }
        for (auto& a : accepting)
            if (!A.location_index(a)) r.fail("accepting", "unknown location '" + a + "'");
        if (j.contains("location_weights")) {
            const Json& lw = j["location_weights"];
            if (!lw.is_object()) r.fail("location_weights", "expected an object");
            for (auto& [name, v] : lw.items()) {
                auto li = A.location_index(name);
                if (!li) r.fail("location_weights", "unknown location '" + name + "'");
                A.set_location_weight(*li, r.rational(v, "location_weights." + name));
            }
        }
        auto loc = [&](const Json& v, const std::string& where) {
            std::string n = r.text(v, where);
            auto li = A.location_index(n);
            if (!li) r.fail(where, "unknown location '" + n + "'");
            return *li;
        };
        A.set_initial(loc(r.field(j, "initial", "document"), "initial"));
        const Json& sw = j.contains("switches") ? j["switches"] : Json::array();
        if (!sw.is_array()) r.fail("switches", "expected an array");
        for (std::size_t i = 0; i < sw.size(); ++i) {
            std::string where = "switches[" + std::to_string(i) + "]";
            const Json& s = sw[i];
            Switch out;
            out.from = loc(r.field(s, "from", where), where + ".from");
            out.to = loc(r.field(s, "to", where), where + ".to");
            bool silent = s.value("silent", false) || (s.contains("letter") && s["letter"].is_null());
            if (!silent) {
                std::string l = r.text(r.field(s, "letter", where), where + ".letter");
                auto li = A.letter_index(Label::parse(l));
                if (!li) r.fail(where + ".letter", "letter '" + l + "' not in alphabet");
                out.letter = *li;
            }
            if (s.contains("guard")) {
                try {
                    out.guard = parse_guard(r.text(s["guard"], where + ".guard"), [&](const std::string& c) {
                        auto ci = A.clock_index(c);
                        if (!ci) throw ParseError("unknown clock '" + c + "'");
                        return *ci;
                    });
                } catch (const ParseError& e) {
                    r.fail(where + ".guard", e.what());
                }
            }
            if (s.contains("resets"))
                for (auto& c : r.strings(s["resets"], where + ".resets")) {
                    auto ci = A.clock_index(c);
                    if (!ci) r.fail(where + ".resets", "unknown clock '" + c + "'");
                    out.resets.push_back(*ci);
                }
            if (s.contains("weight")) out.weight = r.rational(s["weight"], where + ".weight");
            A.add_switch(std::move(out));
        }
    } catch (const PreconditionError& e) {
        throw ParseError(source + ": " + e.what());
    }
    return A;
}

inline Json automaton_to_json(const TimedAutomaton& A) {
    Json j;
    j["alphabet"] = Json::array();
    for (auto& l : A.alphabet()) j["alphabet"].push_back(l.str());
    j["clocks"] = A.clocks();
    j["locations"] = A.locations();
    j["initial"] = A.locations()[A.initial()];
    j["accepting"] = Json::array();
    for (std::size_t i = 0; i < A.location_count(); ++i)
        if (A.accepting(static_cast<int>(i))) j["accepting"].push_back(A.locations()[i]);
    Json lw = Json::object();
    for (std::size_t i = 0; i < A.location_count(); ++i)
        if (A.location_weights()[i] != 0) lw[A.locations()[i]] = to_string(A.location_weights()[i]);
    j["location_weights"] = lw;
    j["switches"] = Json::array();
    for (auto& s : A.switches()) {
        Json o;
        o["from"] = A.locations()[s.from];
        if (s.letter) o["letter"] = A.alphabet()[*s.letter].str();
        else o["silent"] = true;
        if (!s.guard.atoms.empty()) o["guard"] = detail::guard_text(A, s.guard);
        o["resets"] = Json::array();
        for (int x : s.resets) o["resets"].push_back(A.clocks()[x]);
        o["to"] = A.locations()[s.to];
        if (s.weight != 0) o["weight"] = to_string(s.weight);
        j["switches"].push_back(o);
    }
    return j;
}

inline TimedTransducer transducer_from_json(const Json& j, const std::string& source = "<transducer>") {
    detail::JsonReader r{source};
    TimedAutomaton A = automaton_from_json(j, source);
    try {
        Alphabet in("input", r.strings(r.field(j, "input_alphabet", "document"), "input_alphabet"));
        Alphabet out("output", r.strings(r.field(j, "output_alphabet", "document"), "output_alphabet"));
        return TimedTransducer(std::move(A), std::move(in), std::move(out));
    } catch (const PreconditionError& e) {
        throw ParseError(source + ": " + e.what());
    }
}

inline Json transducer_to_json(const TimedTransducer& T) {
    Json j = automaton_to_json(T.base());
    j["input_alphabet"] = T.input_alphabet().symbols();
    j["output_alphabet"] = T.output_alphabet().symbols();
    return j;
}

// ── Finite-state transducers ────────────────────────────────────────

inline DiscreteTransducer fst_from_json(const Json& j, const std::string& source = "<fst>") {
    detail::JsonReader r{source};
    try {
        Alphabet in("input", r.strings(r.field(j, "input_alphabet", "document"), "input_alphabet"));
        Alphabet out("output", r.strings(r.field(j, "output_alphabet", "document"), "output_alphabet"));
        DiscreteTransducer F(in, out);
        for (auto& s : r.strings(r.field(j, "states", "document"), "states")) F.add_state(s);
        auto state = [&](const std::string& n, const std::string& where) {
            auto q = F.state_index(n);
            if (!q) r.fail(where, "unknown state '" + n + "'");
            return *q;
        };
        for (auto& s : r.strings(r.field(j, "initial", "document"), "initial")) F.add_initial(state(s, "initial"));
        if (j.contains("accepting"))
            for (auto& s : r.strings(j["accepting"], "accepting")) F.set_accepting(state(s, "accepting"), true);
        const Json& ts = j.contains("transitions") ? j["transitions"] : Json::array();
        for (std::size_t i = 0; i < ts.size(); ++i) {
            std::string where = "transitions[" + std::to_string(i) + "]";
            const Json& t = ts[i];
            F.add_transition({state(r.text(r.field(t, "from", where), where + ".from"), where),
                              r.text(r.field(t, "in", where), where + ".in"), r.word(r.field(t, "out", where), where + ".out"),
                              state(r.text(r.field(t, "to", where), where + ".to"), where)});
        }
        if (j.contains("empty_input_outputs"))
            for (auto& w : j["empty_input_outputs"]) F.empty_input_outputs.push_back(r.word(w, "empty_input_outputs"));
        return F;
    } catch (const PreconditionError& e) {
        throw ParseError(source + ": " + e.what());
    }
}

inline Json fst_to_json(const DiscreteTransducer& F) {
    Json j;
    j["input_alphabet"] = F.input_alphabet().symbols();
    j["output_alphabet"] = F.output_alphabet().symbols();
    j["states"] = F.state_names();
    j["initial"] = Json::array();
    for (int q : F.initial()) j["initial"].push_back(F.state_names()[q]);
    j["accepting"] = Json::array();
    for (int q = 0; q < F.size(); ++q)
        if (F.accepting(q)) j["accepting"].push_back(F.state_names()[q]);
    j["transitions"] = Json::array();
    for (auto& t : F.transitions())
        j["transitions"].push_back({{"from", F.state_names()[t.from]}, {"in", t.in}, {"out", t.out}, {"to", F.state_names()[t.to]}});
    if (!F.empty_input_outputs.empty()) j["empty_input_outputs"] = F.empty_input_outputs;
    return j;
}

// ── Circuits ────────────────────────────────────────────────────────

inline std::string gate_op_text(const Gate& g) {
    switch (g.op) {
        case GateOp::input: return "INPUT";
        case GateOp::and_gate: return "AND";
        case GateOp::or_gate: return "OR";
        case GateOp::not_gate: return "NOT";
        case GateOp::xor_gate: return "XOR";
        case GateOp::delay: return "DELAY(" + std::to_string(g.parameter) + ")";
        case GateOp::constant: return "CONST(" + std::to_string(g.parameter) + ")";
    }
    return "?";
}

/// Parses an operator such as "AND" or "DELAY(2)" into the operator and its parameter.
inline std::pair<GateOp, int> parse_gate_op(const std::string& text) {
    static const std::map<std::string, GateOp> plain{{"INPUT", GateOp::input}, {"AND", GateOp::and_gate},
                                                     {"OR", GateOp::or_gate},   {"NOT", GateOp::not_gate},
                                                     {"XOR", GateOp::xor_gate}};
    if (auto it = plain.find(text); it != plain.end()) return {it->second, 0};
    for (auto [prefix, op] : {std::pair{"DELAY(", GateOp::delay}, std::pair{"CONST(", GateOp::constant}}) {
        std::string p = prefix;
        if (text.rfind(p, 0) != 0 || text.back() != ')') continue;
        std::string num = text.substr(p.size(), text.size() - p.size() - 1);
        if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
            num.size() > 6)
            throw ParseError("bad parameter in '" + text + "'");
        return {op, std::stoi(num)};
    }
    throw ParseError("unknown gate operator '" + text + "'");
}

inline AsyncCircuit circuit_from_json(const Json& j, const std::string& source = "<circuit>") {
    detail::JsonReader r{source};
    AsyncCircuit C;
    try {
        const Json& gates = r.field(j, "gates", "document");
        if (!gates.is_array()) r.fail("gates", "expected an array");
        for (std::size_t i = 0; i < gates.size(); ++i) {
            std::string where = "gates[" + std::to_string(i) + "]";
            const Json& g = gates[i];
            std::pair<GateOp, int> op;
            try {
                op = parse_gate_op(r.text(r.field(g, "op", where), where + ".op"));
            } catch (const ParseError& e) {
                r.fail(where + ".op", e.what());
            }
            std::vector<std::string> args;
            if (g.contains("args")) args = r.strings(g["args"], where + ".args");
            C.add_gate(r.text(r.field(g, "id", where), where + ".id"), op.first, args, op.second);
        }
        C.set_outputs(r.strings(r.field(j, "outputs", "document"), "outputs"));
        C.validate();
    } catch (const PreconditionError& e) {
        throw ParseError(source + ": " + e.what());
    }
    return C;
}

inline Json circuit_to_json(const AsyncCircuit& C) {
    Json j;
    j["gates"] = Json::array();
    for (auto& g : C.gates()) {
        Json o{{"id", g.id}, {"op", gate_op_text(g)}};
        o["args"] = Json::array();
        for (int a : g.args) o["args"].push_back(C.gates()[a].id);
        j["gates"].push_back(o);
    }
    j["outputs"] = Json::array();
    for (int o : C.outputs()) j["outputs"].push_back(C.gates()[o].id);
    return j;
}

// ── Reports ─────────────────────────────────────────────────────────

inline Json timed_word_to_json(const TimedWord& w) {
    Json j = Json::array();
    for (auto& e : w.events()) j.push_back({e.letter, to_string(e.time)});
    return j;
}

inline Json labeled_word_to_json(const LabeledWord& w) {
    Json j = Json::array();
    for (auto& e : w) j.push_back({e.label.str(), to_string(e.time)});
    return j;
}

inline Json robustness_to_json(const RobustnessResult& r) {
    Json j;
    j["verdict"] = verdict_name(r.verdict);
    j["K"] = to_string(r.K);
    j["note"] = r.note;
    j["explored_states"] = r.explored_states;
    if (r.discrete) {
        const auto& d = *r.discrete;
        j["discrete_witness"] = {{"input_1", d.input_1},
                                 {"input_2", d.input_2},
                                 {"output_1", d.output_1},
                                 {"output_2", d.output_2},
                                 {"d_I", d.input_distance.str()},
                                 {"d_O", d.output_distance.str()}};
    }
    if (r.timed) {
        const auto& t = *r.timed;
        j["witness"] = {{"input_1", timed_word_to_json(t.input_1)},
                        {"input_2", timed_word_to_json(t.input_2)},
                        {"output_1", timed_word_to_json(t.output_1)},
                        {"output_2", timed_word_to_json(t.output_2)},
                        {"horizon", to_string(t.horizon)},
                        {"d_I", t.input_distance.str()},
                        {"d_O", t.output_distance.str()}};
    }
    return j;
}

}  // namespace tiro
