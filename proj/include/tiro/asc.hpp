#pragma once

#include "tiro/discrete.hpp"
#include "tiro/metrics.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <unordered_map>

namespace tiro {

// ── Circuits ────────────────────────────────────────────────────────

enum class GateOp { input, and_gate, or_gate, not_gate, xor_gate, delay, constant };

struct Gate {
    std::string id;
    GateOp op = GateOp::input;
    std::vector<int> args;
    /// Delay of a DELAY gate, value of a constant gate.
    int parameter = 0;
};

/// An asynchronous sequential circuit: boolean gates plus unit-step-delay elements.
/// The inputs of delay gates are the excitation variables, their outputs the secondary variables.
class AsyncCircuit {
public:
    int add_gate(const std::string& id, GateOp op, std::vector<std::string> args = {}, int parameter = 0) {
        if (index_.count(id)) throw PreconditionError("duplicate gate id '" + id + "'");
        Gate g{id, op, {}, parameter};
        pending_args_.push_back(std::move(args));
        gates_.push_back(std::move(g));
        index_[id] = static_cast<int>(gates_.size()) - 1;
        resolved_ = false;
        return index_[id];
    }

    void set_outputs(const std::vector<std::string>& ids) { output_names_ = ids; resolved_ = false; }

    /// Resolves references and checks arities, delays and the absence of delay-free cycles.
    void validate() {
        for (std::size_t i = 0; i < gates_.size(); ++i) {
            gates_[i].args.clear();
            for (auto& a : pending_args_[i]) {
                auto it = index_.find(a);
                if (it == index_.end()) throw PreconditionError("gate '" + gates_[i].id + "' references unknown gate '" + a + "'");
                gates_[i].args.push_back(it->second);
            }
            const Gate& g = gates_[i];
            std::size_t n = g.args.size();
            auto arity = [&](bool ok) {
                if (!ok) throw PreconditionError("gate '" + g.id + "' has wrong number of arguments");
            };
            switch (g.op) {
                case GateOp::input:
                case GateOp::constant: arity(n == 0); break;
                case GateOp::not_gate:
                case GateOp::delay: arity(n == 1); break;
                default: arity(n >= 1); break;
            }
            if (g.op == GateOp::delay && g.parameter < 1) throw PreconditionError("delay of gate '" + g.id + "' must be a positive integer");
            if (g.op == GateOp::constant && g.parameter != 0 && g.parameter != 1)
                throw PreconditionError("constant gate '" + g.id + "' must be 0 or 1");
        }
        outputs_.clear();
        for (auto& o : output_names_) {
            auto it = index_.find(o);
            if (it == index_.end()) throw PreconditionError("unknown output gate '" + o + "'");
            outputs_.push_back(it->second);
        }
        if (outputs_.empty()) throw PreconditionError("circuit has no outputs");
        inputs_.clear();
        delays_.clear();
        for (std::size_t i = 0; i < gates_.size(); ++i) {
            if (gates_[i].op == GateOp::input) inputs_.push_back(static_cast<int>(i));
            if (gates_[i].op == GateOp::delay) delays_.push_back(static_cast<int>(i));
        }
        // topological order of the combinational part, breaking at delays
        order_.clear();
        std::vector<int> state(gates_.size(), 0);
        std::vector<int> stack;
        std::function<void(int)> visit = [&](int g) {
            if (state[g] == 2) return;
            if (state[g] == 1) {
                std::string cycle;
                auto it = std::find(stack.begin(), stack.end(), g);
                for (; it != stack.end(); ++it) cycle += gates_[*it].id + " -> ";
                throw PreconditionError("delay-free cycle: " + cycle + gates_[g].id);
            }
            state[g] = 1;
            stack.push_back(g);
            if (gates_[g].op != GateOp::delay)
                for (int a : gates_[g].args) visit(a);
            stack.pop_back();
            state[g] = 2;
            order_.push_back(g);
        };
        for (std::size_t i = 0; i < gates_.size(); ++i) visit(static_cast<int>(i));
        resolved_ = true;
    }

    bool validated() const { return resolved_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<int>& inputs() const { return checked(inputs_); }
    const std::vector<int>& outputs() const { return checked(outputs_); }
    const std::vector<int>& delays() const { return checked(delays_); }
    std::optional<int> gate_index(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    int max_delay() const {
        int m = 0;
        for (int d : delays()) m = std::max(m, gates_[d].parameter);
        return m;
    }

    struct Evaluation {
        std::vector<bool> excitation, output;
    };

    /// Evaluates the combinational part for given input and secondary (delay output) values.
    Evaluation evaluate(const std::vector<bool>& in, const std::vector<bool>& secondary) const {
        checked(order_);
        if (in.size() != inputs_.size() || secondary.size() != delays_.size())
            throw PreconditionError("evaluation needs one value per input and delay");
        std::vector<char> val(gates_.size(), 0);
        for (std::size_t i = 0; i < inputs_.size(); ++i) val[inputs_[i]] = in[i];
        for (std::size_t j = 0; j < delays_.size(); ++j) val[delays_[j]] = secondary[j];
        for (int g : order_) {
            const Gate& gate = gates_[g];
            auto arg = [&](std::size_t k) { return val[gate.args[k]] != 0; };
            switch (gate.op) {
                case GateOp::input:
                case GateOp::delay: break;
                case GateOp::constant: val[g] = gate.parameter != 0; break;
                case GateOp::not_gate: val[g] = !arg(0); break;
                case GateOp::and_gate: {
                    bool v = true;
                    for (std::size_t k = 0; k < gate.args.size(); ++k) v = v && arg(k);
                    val[g] = v;
                    break;
                }
                case GateOp::or_gate: {
                    bool v = false;
                    for (std::size_t k = 0; k < gate.args.size(); ++k) v = v || arg(k);
                    val[g] = v;
                    break;
                }
                case GateOp::xor_gate: {
                    bool v = false;
                    for (std::size_t k = 0; k < gate.args.size(); ++k) v = v != arg(k);
                    val[g] = v;
                    break;
                }
            }
        }
        Evaluation ev;
        for (int d : delays_) ev.excitation.push_back(val[gates_[d].args[0]] != 0);
        for (int o : outputs_) ev.output.push_back(val[o] != 0);
        return ev;
    }

private:
    template <class T>
    const T& checked(const T& x) const {
        if (!resolved_) throw PreconditionError("circuit not validated");
        return x;
    }

    std::vector<Gate> gates_;
    std::vector<std::vector<std::string>> pending_args_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::string> output_names_;
    std::vector<int> inputs_, outputs_, delays_, order_;
    bool resolved_ = false;
};

// ── Bit-vector letters ──────────────────────────────────────────────

inline Symbol bits_to_symbol(const std::vector<bool>& bits) {
    Symbol s;
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline std::vector<bool> symbol_to_bits(const Symbol& s, std::size_t width) {
    if (s.size() != width) throw std::domain_error("letter '" + s + "' is not a " + std::to_string(width) + "-bit vector");
    std::vector<bool> out;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::domain_error("letter '" + s + "' is not boolean");
        out.push_back(c == '1');
    }
    return out;
}

// ── Dense simulation ────────────────────────────────────────────────

/// Per-variable signals of a simulation, each a bit-vector valued function on [0, T].
/// Without delay elements the excitation and secondary signals hold the letter "-" throughout.
struct Waveform {
    CadlagFunction input, output, excitation, secondary;
};

namespace detail {
inline CadlagFunction signal_from_samples(const std::vector<std::pair<Rational, Symbol>>& samples, const Rational& end) {
    std::vector<Event> ev;
    for (auto& [t, s] : samples) ev.push_back({s, t});
    ev.push_back({samples.back().second, end});
    return CadlagFunction::from_word(TimedWord(std::move(ev)));
}
}  // namespace detail

/// Simulates the circuit on an input word over bit-vector letters, observed up to the horizon.
/// Values change only at integer translates of the input breakpoints.
inline Waveform simulate(const AsyncCircuit& C, const TimedWord& input, const Rational& horizon) {
    if (input.empty() || input.start() != 0) throw PreconditionError("circuit input must start at time 0");
    CadlagFunction f = CadlagFunction::from_word(pad_to(input, horizon));
    const std::size_t m = C.inputs().size(), k = C.delays().size();

    std::set<Rational> fracs{Rational(0)};
    for (auto& b : f.breakpoints()) fracs.insert(frac_of(b));
    std::vector<Rational> lattice;
    for (Integer i = 0; Rational(i) <= horizon; ++i)
        for (auto& x : fracs)
            if (Rational(i) + x <= horizon) lattice.push_back(Rational(i) + x);
    std::sort(lattice.begin(), lattice.end());

    std::map<Rational, std::vector<bool>> z_at;
    std::vector<std::pair<Rational, Symbol>> in_s, out_s, z_s, y_s;
    for (auto& p : lattice) {
        std::vector<bool> in = symbol_to_bits(f.value_at(p), m);
        std::vector<bool> y(k, false);
        for (std::size_t j = 0; j < k; ++j) {
            Rational d = C.gates()[C.delays()[j]].parameter;
            if (p >= d) y[j] = z_at.at(p - d)[j];
        }
        auto ev = C.evaluate(in, y);
        z_at[p] = ev.excitation;
        in_s.push_back({p, bits_to_symbol(in)});
        out_s.push_back({p, bits_to_symbol(ev.output)});
        z_s.push_back({p, k == 0 ? Symbol("-") : bits_to_symbol(ev.excitation)});
        y_s.push_back({p, k == 0 ? Symbol("-") : bits_to_symbol(y)});
    }
    auto sig = [&](const std::vector<std::pair<Rational, Symbol>>& s) { return detail::signal_from_samples(s, horizon); };
    return {sig(in_s), sig(out_s), sig(z_s), sig(y_s)};
}

// ── Compilation to a succinct transducer ────────────────────────────

/// The circuit's behavior on step functions as a deterministic letter-to-letter transducer.
/// A state packs the excitation values of the last M rounds into an integer; states are
/// produced on demand and never enumerated.
class CircuitTransducer {
public:
    explicit CircuitTransducer(const AsyncCircuit& C) : C_(C) {
        if (!C.validated()) throw PreconditionError("circuit not validated");
        std::size_t bits = 0;
        for (int d : C.delays()) {
            offset_.push_back(static_cast<int>(bits));
            bits += C.gates()[d].parameter;
        }
        if (bits > 63) throw ResourceExceeded("circuit state needs more than 63 bits");
        input_ = bit_vector_alphabet(static_cast<int>(C.inputs().size()));
        output_ = bit_vector_alphabet(static_cast<int>(C.outputs().size()));
    }

    const Alphabet& input_alphabet() const { return input_; }
    const Alphabet& output_alphabet() const { return output_; }
    std::vector<StateCode> initial_states() const { return {0}; }
    bool accepting(StateCode) const { return true; }

    /// Output letter and next state on one input letter.
    std::pair<Symbol, StateCode> step(StateCode q, const Symbol& a) const {
        const auto& delays = C_.delays();
        std::vector<bool> y(delays.size());
        for (std::size_t j = 0; j < delays.size(); ++j) {
            int d = C_.gates()[delays[j]].parameter;
            y[j] = (q >> (offset_[j] + d - 1)) & 1u;
        }
        auto ev = C_.evaluate(symbol_to_bits(a, C_.inputs().size()), y);
        StateCode next = 0;
        for (std::size_t j = 0; j < delays.size(); ++j) {
            int d = C_.gates()[delays[j]].parameter;
            StateCode reg = (q >> offset_[j]) & ((StateCode(1) << d) - 1);
            reg = ((reg << 1) | (ev.excitation[j] ? 1u : 0u)) & ((StateCode(1) << d) - 1);
            next |= reg << offset_[j];
        }
        return {bits_to_symbol(ev.output), next};
    }

    std::vector<std::pair<Symbol, StateCode>> successors(StateCode q, const Symbol& a) const { return {step(q, a)}; }

    bool has_transition(StateCode q, const Symbol& a, const Symbol& b, StateCode r) const {
        return step(q, a) == std::pair<Symbol, StateCode>{b, r};
    }

    Word run(const Word& in) const {
        StateCode q = 0;
        Word out;
        for (auto& a : in) {
            auto [b, r] = step(q, a);
            out.push_back(b);
            q = r;
        }
        return out;
    }

private:
    const AsyncCircuit& C_;
    std::vector<int> offset_;
    Alphabet input_, output_;
};

inline CircuitTransducer compile_to_transducer(const AsyncCircuit& C) { return CircuitTransducer(C); }

/// Materializes the reachable part of a circuit transducer.
inline DiscreteTransducer expand(const CircuitTransducer& t, std::size_t max_states = 1 << 16) {
    DiscreteTransducer T(t.input_alphabet(), t.output_alphabet());
    std::map<StateCode, int> ids;
    std::deque<StateCode> queue{0};
    ids[0] = T.add_state("q0", true, true);
    while (!queue.empty()) {
        StateCode q = queue.front();
        queue.pop_front();
        for (auto& a : t.input_alphabet().symbols()) {
            auto [b, r] = t.step(q, a);
            if (!ids.count(r)) {
                if (ids.size() >= max_states) throw ResourceExceeded("circuit transducer too large to expand");
                ids[r] = T.add_state("q" + std::to_string(r), true);
                queue.push_back(r);
            }
            T.add_transition({ids[q], a, {b}, ids[r]});
        }
    }
    return T;
}

// ── Robustness ──────────────────────────────────────────────────────

/// K-robustness of a circuit for timed Manhattan distances, decided on its step-function
/// behavior; witnesses come back as step-function waveforms and are re-checked by simulation.
inline RobustnessResult check_asc_robustness(const AsyncCircuit& C, const DiffFunction& dI, const DiffFunction& dO,
                                             const Rational& K, std::size_t max_states = 2'000'000) {
    CircuitTransducer t(C);
    DiscreteRobustnessOptions opt;
    opt.unequal_lengths = false;
    opt.max_states = max_states;
    RobustnessResult res = check_discrete_robustness(t, dI, dO, K, opt);
    if (res.verdict == Verdict::robust)
        res.note = "step-function pairs of equal length suffice; " + res.note;
    if (res.verdict != Verdict::not_robust) return res;
    const auto& w = *res.discrete;
    Rational horizon(static_cast<long>(w.input_1.size()));
    TimedWitness tw;
    tw.input_1 = step_word(w.input_1);
    tw.input_2 = step_word(w.input_2);
    tw.horizon = horizon;
    tw.output_1 = simulate(C, tw.input_1, horizon).output.to_word();
    tw.output_2 = simulate(C, tw.input_2, horizon).output.to_word();
    tw.input_distance = timed_manhattan(tw.input_1, tw.input_2, dI);
    tw.output_distance = timed_manhattan(tw.output_1, tw.output_2, dO);
    if (!(tw.output_distance > K * tw.input_distance)) throw std::logic_error("decoded circuit witness failed validation");
    res.timed = tw;
    return res;
}

// ── Reachability gadget ─────────────────────────────────────────────

/// A boolean formula over named variables, parsed from text such as "(v0 & !w1) | w0 ^ 1".
class BoolFormula {
public:
    enum class Kind { constant, variable, negation, conjunction, disjunction, exclusive };

    static BoolFormula parse(const std::string& text) {
        Parser p{text, 0};
        BoolFormula f = p.expr();
        p.skip();
        if (p.pos != text.size()) throw ParseError("unexpected '" + text.substr(p.pos, 1) + "' at offset " + std::to_string(p.pos));
        return f;
    }

    Kind kind = Kind::constant;
    bool value = false;
    std::string name;
    std::vector<BoolFormula> parts;

    bool eval(const std::function<bool(const std::string&)>& env) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::variable: return env(name);
            case Kind::negation: return !parts[0].eval(env);
            case Kind::conjunction:
                for (auto& p : parts)
                    if (!p.eval(env)) return false;
                return true;
            case Kind::disjunction:
                for (auto& p : parts)
                    if (p.eval(env)) return true;
                return false;
            case Kind::exclusive: {
                bool v = false;
                for (auto& p : parts) v = v != p.eval(env);
                return v;
            }
        }
        return false;
    }

    void variables(std::set<std::string>& out) const {
        if (kind == Kind::variable) out.insert(name);
        for (auto& p : parts) p.variables(out);
    }

private:
    struct Parser {
        const std::string& s;
        std::size_t pos;
        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        BoolFormula nary(Kind k, BoolFormula first, char op, BoolFormula (Parser::*next)()) {
            BoolFormula f;
            f.kind = k;
            f.parts.push_back(std::move(first));
            while (eat(op)) f.parts.push_back((this->*next)());
            if (f.parts.size() == 1) return std::move(f.parts[0]);
            return f;
        }
        BoolFormula expr() { return nary(Kind::disjunction, exclusive(), '|', &Parser::exclusive); }
        BoolFormula exclusive() { return nary(Kind::exclusive, conjunction(), '^', &Parser::conjunction); }
        BoolFormula conjunction() { return nary(Kind::conjunction, factor(), '&', &Parser::factor); }
        BoolFormula factor() {
            skip();
            if (eat('!')) {
                BoolFormula f;
                f.kind = Kind::negation;
                f.parts.push_back(factor());
                return f;
            }
            if (eat('(')) {
                BoolFormula f = expr();
                if (!eat(')')) throw ParseError("expected ')' at offset " + std::to_string(pos));
                return f;
            }
            skip();
            if (pos < s.size() && (s[pos] == '0' || s[pos] == '1')) {
                BoolFormula f;
                f.value = s[pos++] == '1';
                return f;
            }
            std::size_t b = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
            if (b == pos) throw ParseError("expected a variable at offset " + std::to_string(b));
            BoolFormula f;
            f.kind = Kind::variable;
            f.name = s.substr(b, pos - b);
            return f;
        }
    };
};

/// Builds a circuit that oscillates exactly when its input walks, one edge per round starting from
/// the zero vertex, along the succinct graph E(v, w) into the target vertex. Variables of E are
/// v0..v{n-1} for the current vertex and w0..w{n-1} for the next one.
inline AsyncCircuit gen_reachability_gadget(const BoolFormula& E, const std::vector<bool>& target) {
    const int n = static_cast<int>(target.size());
    if (n < 1) throw PreconditionError("target vector must be nonempty");
    std::set<std::string> vars;
    E.variables(vars);
    for (auto& v : vars) {
        bool ok = v.size() > 1 && (v[0] == 'v' || v[0] == 'w') &&
                  std::all_of(v.begin() + 1, v.end(), [](char c) { return c >= '0' && c <= '9'; });
        if (!ok || std::stoi(v.substr(1)) >= n)
            throw PreconditionError("edge formula variable '" + v + "' does not match " + std::to_string(n) + "-bit vertices");
    }
    AsyncCircuit C;
    for (int i = 0; i < n; ++i) C.add_gate("w" + std::to_string(i), GateOp::input);
    for (int i = 0; i < n; ++i) C.add_gate("v" + std::to_string(i), GateOp::delay, {"u" + std::to_string(i)}, 1);
    int counter = 0;
    std::function<std::string(const BoolFormula&)> emit = [&](const BoolFormula& f) -> std::string {
        using K = BoolFormula::Kind;
        if (f.kind == K::variable) return f.name;
        std::string id = "e" + std::to_string(counter++);
        std::vector<std::string> args;
        for (auto& p : f.parts) args.push_back(emit(p));
        switch (f.kind) {
            case K::constant: C.add_gate(id, GateOp::constant, {}, f.value ? 1 : 0); break;
            case K::negation: C.add_gate(id, GateOp::not_gate, args); break;
            case K::conjunction: C.add_gate(id, GateOp::and_gate, args); break;
            case K::disjunction: C.add_gate(id, GateOp::or_gate, args); break;
            case K::exclusive: C.add_gate(id, GateOp::xor_gate, args); break;
            default: break;
        }
        return id;
    };
    std::string edge = emit(E);
    std::vector<std::string> hit_args{edge};
    for (int i = 0; i < n; ++i) {
        std::string w = "w" + std::to_string(i);
        C.add_gate("u" + std::to_string(i), GateOp::and_gate, {edge, w});
        if (target[i]) {
            hit_args.push_back(w);
        } else {
            C.add_gate("nw" + std::to_string(i), GateOp::not_gate, {w});
            hit_args.push_back("nw" + std::to_string(i));
        }
    }
    C.add_gate("hit", GateOp::and_gate, hit_args);
    C.add_gate("z", GateOp::or_gate, {"hit", "y"});
    C.add_gate("y", GateOp::delay, {"z"}, 1);
    C.add_gate("o", GateOp::or_gate, {"hit", "y"});
    C.set_outputs({"o"});
    C.validate();
    return C;
}

/// Explicit reachability of the target from the zero vertex along a nonempty path.
inline bool succinct_reachable(const BoolFormula& E, const std::vector<bool>& target) {
    const int n = static_cast<int>(target.size());
    auto edge = [&](int v, int w) {
        return E.eval([&](const std::string& name) {
            int i = std::stoi(name.substr(1));
            int x = name[0] == 'v' ? v : w;
            return ((x >> (n - 1 - i)) & 1) != 0;
        });
    };
    int t = 0;
    for (int i = 0; i < n; ++i) t = (t << 1) | (target[i] ? 1 : 0);
    std::vector<bool> seen(1 << n, false);
    std::deque<int> q{0};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w = 0; w < (1 << n); ++w)
            if (edge(v, w) && !seen[w]) {
                if (w == t) return true;
                seen[w] = true;
                q.push_back(w);
            }
    }
    return false;
}

}  // namespace tiro
