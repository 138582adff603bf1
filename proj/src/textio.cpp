#include "pnta/textio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <sstream>

#include "pnta/errors.hpp"

namespace pnta {

namespace {

struct Token {
    enum class Kind { Ident, Number, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 0, col = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) {
        std::size_t pos = 0;
        int line = 1, col = 1;
        auto advance = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k) {
                if (src[pos] == '\n') { ++line; col = 1; } else ++col;
                ++pos;
            }
        };
        while (pos < src.size()) {
            char c = src[pos];
            if (std::isspace(static_cast<unsigned char>(c))) { advance(1); continue; }
            if (c == '#' || (c == '/' && pos + 1 < src.size() && src[pos + 1] == '/')) {
                while (pos < src.size() && src[pos] != '\n') advance(1);
                continue;
            }
            Token t;
            t.line = line;
            t.col = col;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos;
                while (pos < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                        src[pos] == '_'))
                    advance(1);
                t.kind = Token::Kind::Ident;
                t.text = src.substr(start, pos - start);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos;
                while (pos < src.size() &&
                       (std::isdigit(static_cast<unsigned char>(src[pos])) ||
                        src[pos] == '.'))
                    advance(1);
                t.kind = Token::Kind::Number;
                t.text = src.substr(start, pos - start);
            } else {
                t.kind = Token::Kind::Sym;
                static const char* two[] = {":=", "->", "!=", "<=", ">=", "=="};
                std::string pair = src.substr(pos, 2);
                bool is_two = false;
                for (const char* s : two)
                    if (pair == s) { is_two = true; break; }
                t.text = is_two ? pair : std::string(1, c);
                advance(t.text.size());
            }
            tokens_.push_back(std::move(t));
        }
        Token end;
        end.line = line;
        end.col = col;
        tokens_.push_back(end);
    }

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = idx_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    Token next() {
        Token t = peek();
        if (idx_ + 1 < tokens_.size()) ++idx_;
        return t;
    }

private:
    std::vector<Token> tokens_;
    std::size_t idx_ = 0;
};

[[noreturn]] void parse_fail(const Token& t, const std::string& msg) {
    std::ostringstream os;
    os << "parse error at line " << t.line << ":" << t.col << ": " << msg;
    if (t.kind != Token::Kind::End) os << " (got '" << t.text << "')";
    throw Error(ErrorKind::Parse, os.str());
}

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    bool at_sym(const std::string& s) const {
        return lex_.peek().kind == Token::Kind::Sym && lex_.peek().text == s;
    }
    bool at_ident(const std::string& s) const {
        return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == s;
    }
    bool at_end() const { return lex_.peek().kind == Token::Kind::End; }

    void expect_sym(const std::string& s) {
        if (!at_sym(s)) parse_fail(lex_.peek(), "expected '" + s + "'");
        lex_.next();
    }
    void expect_ident(const std::string& s) {
        if (!at_ident(s)) parse_fail(lex_.peek(), "expected '" + s + "'");
        lex_.next();
    }
    std::string ident(const std::string& what) {
        if (lex_.peek().kind != Token::Kind::Ident)
            parse_fail(lex_.peek(), "expected " + what);
        return lex_.next().text;
    }
    bool accept_sym(const std::string& s) {
        if (!at_sym(s)) return false;
        lex_.next();
        return true;
    }
    bool accept_ident(const std::string& s) {
        if (!at_ident(s)) return false;
        lex_.next();
        return true;
    }

    Rational rational() {
        if (lex_.peek().kind != Token::Kind::Number)
            parse_fail(lex_.peek(), "expected a number");
        Token t = lex_.next();
        Rational value = decimal(t);
        if (accept_sym("/")) {
            if (lex_.peek().kind != Token::Kind::Number)
                parse_fail(lex_.peek(), "expected a denominator");
            Token d = lex_.next();
            Rational den = decimal(d);
            if (den.is_zero()) parse_fail(d, "zero denominator");
            value = value / den;
        }
        return value;
    }

    const Token& peek(std::size_t ahead = 0) const { return lex_.peek(ahead); }
    Token next() { return lex_.next(); }

private:
    static Rational decimal(const Token& t) {
        auto dot = t.text.find('.');
        try {
            if (dot == std::string::npos) return Rational(std::stoll(t.text));
            std::string whole = t.text.substr(0, dot);
            std::string frac = t.text.substr(dot + 1);
            if (frac.empty() || frac.find('.') != std::string::npos)
                parse_fail(t, "malformed number");
            std::int64_t den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            return Rational((whole.empty() ? 0 : std::stoll(whole)) * den +
                                std::stoll(frac),
                            den);
        } catch (const std::logic_error&) {
            parse_fail(t, "number out of range");
        }
    }

    Lexer lex_;
};

RelOp rel_op_from(const Token& t) {
    if (t.text == "<") return RelOp::Lt;
    if (t.text == "<=") return RelOp::Le;
    if (t.text == ">") return RelOp::Gt;
    if (t.text == ">=") return RelOp::Ge;
    if (t.text == "=" || t.text == "==") return RelOp::Eq;
    parse_fail(t, "expected a comparison operator");
}

// --- constraint expressions --------------------------------------------------

ClockConstraint parse_or(Parser& p, const Template& tmpl,
                         const std::map<std::string, Rational>& consts);

ClockConstraint parse_constraint_unary(Parser& p, const Template& tmpl,
                                       const std::map<std::string, Rational>& consts) {
    if (p.accept_sym("!"))
        return ClockConstraint::make_not(parse_constraint_unary(p, tmpl, consts));
    if (p.accept_sym("(")) {
        ClockConstraint inner = parse_or(p, tmpl, consts);
        p.expect_sym(")");
        return inner;
    }
    if (p.accept_ident("true")) return ClockConstraint::make_true();
    if (p.accept_ident("false")) return ClockConstraint::make_false();

    Token ct = p.peek();
    std::string clock = p.ident("a clock name");
    ConstraintAtom atom;
    atom.clock = tmpl.clock_index(clock);
    if (atom.clock < 0) parse_fail(ct, "unknown clock '" + clock + "'");
    if (p.accept_sym("-")) {
        Token ot = p.peek();
        std::string other = p.ident("a clock name");
        atom.other_clock = tmpl.clock_index(other);
        if (atom.other_clock < 0) parse_fail(ot, "unknown clock '" + other + "'");
    }
    atom.op = rel_op_from(p.peek());
    p.next();
    if (p.peek().kind == Token::Kind::Ident) {
        Token kt = p.peek();
        std::string name = p.ident("a constant name");
        auto it = consts.find(name);
        if (it == consts.end()) parse_fail(kt, "unknown constant '" + name + "'");
        atom.bound = it->second;
    } else {
        atom.bound = p.rational();
    }
    return ClockConstraint::make_atom(atom);
}

ClockConstraint parse_and(Parser& p, const Template& tmpl,
                          const std::map<std::string, Rational>& consts) {
    std::vector<ClockConstraint> parts{parse_constraint_unary(p, tmpl, consts)};
    while (p.accept_sym("&")) parts.push_back(parse_constraint_unary(p, tmpl, consts));
    return parts.size() == 1 ? parts.front()
                             : ClockConstraint::make_and(std::move(parts));
}

ClockConstraint parse_or(Parser& p, const Template& tmpl,
                         const std::map<std::string, Rational>& consts) {
    std::vector<ClockConstraint> parts{parse_and(p, tmpl, consts)};
    while (p.accept_sym("|")) parts.push_back(parse_and(p, tmpl, consts));
    return parts.size() == 1 ? parts.front()
                             : ClockConstraint::make_or(std::move(parts));
}

// --- model -------------------------------------------------------------------

void parse_template(Parser& p, ModelDocument& doc) {
    Template tmpl;
    Token name_tok = p.peek();
    tmpl.name = p.ident("a template name");
    if (doc.spec.template_index(tmpl.name) >= 0)
        parse_fail(name_tok, "duplicate template '" + tmpl.name + "'");
    p.expect_sym("{");

    std::string init_name;
    std::vector<ClockConstraint> invs;
    struct RawWhen {
        std::string peer;
        std::set<std::string> states;
        int line;
    };
    VarBinding binding;

    while (!p.accept_sym("}")) {
        Token kw = p.peek();
        std::string stmt = p.ident("a template statement");
        if (stmt == "clocks") {
            do {
                tmpl.clocks.push_back(p.ident("a clock name"));
            } while (p.accept_sym(","));
            p.expect_sym(";");
        } else if (stmt == "init") {
            init_name = p.ident("a state name");
            p.expect_sym(";");
        } else if (stmt == "state") {
            std::string s = p.ident("a state name");
            if (tmpl.state_index(s) >= 0) parse_fail(kw, "duplicate state '" + s + "'");
            tmpl.states.push_back(s);
            if (p.accept_ident("inv"))
                invs.push_back(parse_or(p, tmpl, doc.spec.constants));
            else
                invs.push_back(ClockConstraint::make_true());
            p.expect_sym(";");
        } else if (stmt == "trans") {
            Transition tr;
            Token st = p.peek();
            tr.source = tmpl.state_index(p.ident("a source state"));
            if (tr.source < 0) parse_fail(st, "unknown source state");
            p.expect_sym("->");
            Token tt = p.peek();
            tr.target = tmpl.state_index(p.ident("a target state"));
            if (tr.target < 0) parse_fail(tt, "unknown target state");
            p.expect_sym("{");
            int trans_index = static_cast<int>(tmpl.transitions.size());
            while (!p.accept_sym("}")) {
                Token ikw = p.peek();
                std::string inner = p.ident("a transition statement");
                if (inner == "guard") {
                    tr.guard = parse_or(p, tmpl, doc.spec.constants);
                } else if (inner == "reset") {
                    do {
                        Token ck = p.peek();
                        int c = tmpl.clock_index(p.ident("a clock name"));
                        if (c < 0) parse_fail(ck, "unknown clock");
                        tr.resets.push_back(c);
                    } while (p.accept_sym(","));
                } else if (inner == "when") {
                    std::string peer = p.ident("a template name");
                    p.expect_ident("in");
                    p.expect_sym("{");
                    std::set<std::string> states;
                    if (!p.at_sym("}")) {
                        do {
                            states.insert(p.ident("a state name"));
                        } while (p.accept_sym(","));
                    }
                    p.expect_sym("}");
                    tr.sync_guard.allowed[peer] = std::move(states);
                } else if (inner == "var") {
                    std::string var = p.ident("a variable name");
                    if (!binding.variable.empty() && binding.variable != var)
                        parse_fail(ikw, "template uses more than one variable");
                    binding.variable = var;
                    VarAction action;
                    if (p.accept_sym(":=")) {
                        if (p.accept_ident("pid")) action = VarAction::WritePid;
                        else if (p.peek().kind == Token::Kind::Number &&
                                 p.peek().text == "0") {
                            p.next();
                            action = VarAction::WriteZero;
                        } else parse_fail(p.peek(), "expected 'pid' or '0'");
                    } else if (p.accept_sym("=") || p.accept_sym("==")) {
                        if (p.accept_ident("pid")) action = VarAction::TestPid;
                        else if (p.peek().kind == Token::Kind::Number &&
                                 p.peek().text == "0") {
                            p.next();
                            action = VarAction::TestZero;
                        } else parse_fail(p.peek(), "expected 'pid' or '0'");
                    } else if (p.accept_sym("!=")) {
                        p.expect_ident("pid");
                        action = VarAction::TestNotPid;
                    } else {
                        parse_fail(p.peek(), "expected ':=', '=', or '!='");
                    }
                    if (binding.actions.count(trans_index))
                        parse_fail(ikw, "transition annotated twice");
                    binding.uses.insert(trans_index);
                    binding.actions[trans_index] = action;
                } else {
                    parse_fail(ikw, "unknown transition statement '" + inner + "'");
                }
                p.expect_sym(";");
            }
            tmpl.transitions.push_back(std::move(tr));
        } else {
            parse_fail(kw, "unknown template statement '" + stmt + "'");
        }
    }

    if (tmpl.states.empty()) parse_fail(name_tok, "template has no states");
    if (init_name.empty()) parse_fail(name_tok, "template has no init statement");
    tmpl.initial = tmpl.state_index(init_name);
    if (tmpl.initial < 0)
        parse_fail(name_tok, "init names unknown state '" + init_name + "'");
    tmpl.invariants = std::move(invs);
    doc.spec.templates.push_back(std::move(tmpl));
    if (!binding.empty())
        doc.bindings[doc.spec.templates.back().name] = std::move(binding);
}

}  // namespace

ModelDocument parse_model(const std::string& text) {
    Parser p(text);
    ModelDocument doc;
    doc.spec.source = "<input>";
    bool saw_system = false;
    std::vector<std::string> system_order;

    while (!p.at_end()) {
        Token kw = p.peek();
        std::string stmt = p.ident("a top-level statement");
        if (stmt == "const") {
            std::string name = p.ident("a constant name");
            p.expect_sym("=");
            Rational value = p.rational();
            p.expect_sym(";");
            if (doc.spec.constants.count(name))
                parse_fail(kw, "duplicate constant '" + name + "'");
            doc.spec.constants[name] = value;
        } else if (stmt == "template") {
            parse_template(p, doc);
        } else if (stmt == "system") {
            saw_system = true;
            p.expect_sym("{");
            while (!p.accept_sym("}")) {
                Token tn = p.peek();
                std::string name = p.ident("a template name");
                if (doc.spec.template_index(name) < 0)
                    parse_fail(tn, "unknown template '" + name + "'");
                p.expect_sym(":");
                p.expect_ident("param");
                p.expect_sym(";");
                system_order.push_back(name);
            }
            if (system_order.empty()) parse_fail(kw, "no templates in system block");
        } else {
            parse_fail(kw, "unknown top-level statement '" + stmt + "'");
        }
    }
    if (!saw_system)
        throw Error(ErrorKind::Parse, "parse error: missing system block");
    for (const auto& t : doc.spec.templates) {
        if (std::find(system_order.begin(), system_order.end(), t.name) ==
            system_order.end())
            throw Error(ErrorKind::Parse, "parse error: template '" + t.name +
                                              "' missing from system block");
    }

    // Def.-3 repair: every allowed set must contain the peer's initial state.
    for (auto& t : doc.spec.templates) {
        for (std::size_t ti = 0; ti < t.transitions.size(); ++ti) {
            for (auto& [peer_name, allowed] :
                 t.transitions[ti].sync_guard.allowed) {
                int pi = doc.spec.template_index(peer_name);
                if (pi < 0) continue;  // validate_network reports this
                const std::string& init =
                    doc.spec.templates[static_cast<std::size_t>(pi)].initial_name();
                if (!allowed.count(init)) {
                    allowed.insert(init);
                    doc.warnings.push_back(
                        t.name + "/trans#" + std::to_string(ti) + ": allowed set for '" +
                        peer_name + "' was missing its initial state '" + init +
                        "'; added");
                }
            }
        }
    }

    auto diags = validate_network(doc.spec);
    if (!diags.empty()) {
        std::string msg = "invalid model:";
        for (const auto& d : diags) msg += "\n  " + d.where + ": " + d.message;
        throw Error(ErrorKind::Validation, msg);
    }
    return doc;
}

// --- property ----------------------------------------------------------------

namespace {

StateFormula parse_sf_or(Parser& p, const Property& prop, const NetworkSpec& spec);

StateFormula parse_sf_unary(Parser& p, const Property& prop, const NetworkSpec& spec) {
    if (p.accept_sym("!"))
        return StateFormula::make_not(parse_sf_unary(p, prop, spec));
    if (p.accept_sym("(")) {
        StateFormula inner = parse_sf_or(p, prop, spec);
        p.expect_sym(")");
        return inner;
    }
    if (p.accept_ident("true")) return StateFormula::make_true();
    Token st = p.peek();
    std::string state = p.ident("a state name");
    p.expect_sym("(");
    Token vt = p.peek();
    std::string var = p.ident("an index variable");
    p.expect_sym(")");
    int binder = -1;
    for (std::size_t b = 0; b < prop.binders.size(); ++b)
        if (prop.binders[b].var == var) binder = static_cast<int>(b);
    if (binder < 0) parse_fail(vt, "unbound index variable '" + var + "'");
    const Template& tmpl = spec.templates[static_cast<std::size_t>(
        prop.binders[static_cast<std::size_t>(binder)].template_index)];
    int si = tmpl.state_index(state);
    if (si < 0)
        parse_fail(st, "unknown state '" + state + "' of template " + tmpl.name);
    return StateFormula::make_atom(binder, si);
}

StateFormula parse_sf_and(Parser& p, const Property& prop, const NetworkSpec& spec) {
    StateFormula f = parse_sf_unary(p, prop, spec);
    while (p.accept_sym("&"))
        f = StateFormula::make_and(std::move(f), parse_sf_unary(p, prop, spec));
    return f;
}

StateFormula parse_sf_or(Parser& p, const Property& prop, const NetworkSpec& spec) {
    StateFormula f = parse_sf_and(p, prop, spec);
    while (p.accept_sym("|"))
        f = StateFormula::make_or(std::move(f), parse_sf_and(p, prop, spec));
    return f;
}

TimeBound parse_bound(Parser& p) {
    p.expect_sym("[");
    TimeBound b;
    b.op = rel_op_from(p.peek());
    p.next();
    b.value = p.rational();
    p.expect_sym("]");
    return b;
}

}  // namespace

Property parse_property(const std::string& text, const NetworkSpec& spec) {
    Parser p(text);
    Property prop;
    p.expect_ident("forall");
    do {
        Binder b;
        b.var = p.ident("an index variable");
        p.expect_sym(":");
        Token tt = p.peek();
        std::string tname = p.ident("a template name");
        b.template_index = spec.template_index(tname);
        if (b.template_index < 0) parse_fail(tt, "unknown template '" + tname + "'");
        for (const auto& other : prop.binders)
            if (other.var == b.var) parse_fail(tt, "duplicate binder '" + b.var + "'");
        prop.binders.push_back(std::move(b));
    } while (p.accept_sym(","));

    if (p.accept_ident("with")) {
        do {
            Token vt = p.peek();
            std::string a = p.ident("an index variable");
            p.expect_sym("!=");
            std::string b = p.ident("an index variable");
            auto known = [&](const std::string& v) {
                for (const auto& bd : prop.binders)
                    if (bd.var == v) return true;
                return false;
            };
            if (!known(a) || !known(b) || a == b)
                parse_fail(vt, "malformed distinctness constraint");
            prop.pairwise_distinct = true;
        } while (p.accept_sym(",") || p.accept_sym("&"));
    }
    p.expect_sym(".");

    Token qt = p.peek();
    std::string q = p.ident("a path quantifier");
    if (q == "A") prop.quantifier = PathQuantifier::A;
    else if (q == "E") prop.quantifier = PathQuantifier::E;
    else if (q == "Ainf") prop.quantifier = PathQuantifier::Ainf;
    else if (q == "Einf") prop.quantifier = PathQuantifier::Einf;
    else if (q == "Afin") prop.quantifier = PathQuantifier::Afin;
    else if (q == "Efin") prop.quantifier = PathQuantifier::Efin;
    else parse_fail(qt, "unknown path quantifier '" + q + "'");

    bool fin = prop.quantifier == PathQuantifier::Afin ||
               prop.quantifier == PathQuantifier::Efin;
    if (p.at_ident("F") || p.at_ident("G")) {
        std::string op = p.next().text;
        prop.op = op == "F" ? PathOp::F : PathOp::G;
        if (fin && prop.op == PathOp::F)
            throw Error(ErrorKind::UnsupportedQuantifierOperator,
                        "UnsupportedQuantifierOperator: " + q +
                            " quantifies finite computations; F over them is "
                            "not part of the supported fragment (use G)");
        prop.bound = parse_bound(p);
        prop.phi = parse_sf_or(p, prop, spec);
    } else if (p.at_sym("(")) {
        if (fin)
            throw Error(ErrorKind::UnsupportedQuantifierOperator,
                        "UnsupportedQuantifierOperator: " + q +
                            " supports only G");
        p.expect_sym("(");
        prop.op = PathOp::U;
        prop.phi = parse_sf_or(p, prop, spec);
        p.expect_sym(")");
        p.expect_ident("U");
        prop.bound = parse_bound(p);
        p.expect_sym("(");
        prop.psi = parse_sf_or(p, prop, spec);
        p.expect_sym(")");
    } else {
        parse_fail(p.peek(), "expected F, G, or (φ) U[~q] (ψ)");
    }
    if (!p.at_end()) parse_fail(p.peek(), "trailing input after property");
    return prop;
}

// --- printing ----------------------------------------------------------------

std::string print_model(const ModelDocument& doc) {
    std::ostringstream os;
    for (const auto& [name, value] : doc.spec.constants)
        os << "const " << name << " = " << value.str() << ";\n";
    if (!doc.spec.constants.empty()) os << "\n";

    for (const auto& t : doc.spec.templates) {
        os << "template " << t.name << " {\n";
        if (!t.clocks.empty()) {
            os << "  clocks ";
            for (std::size_t i = 0; i < t.clocks.size(); ++i)
                os << (i ? ", " : "") << t.clocks[i];
            os << ";\n";
        }
        os << "  init " << t.initial_name() << ";\n";
        for (std::size_t s = 0; s < t.states.size(); ++s) {
            os << "  state " << t.states[s];
            if (!t.invariants[s].is_true())
                os << " inv " << constraint_str(t.invariants[s], t);
            os << ";\n";
        }
        const VarBinding* binding = nullptr;
        if (auto it = doc.bindings.find(t.name); it != doc.bindings.end())
            binding = &it->second;
        for (std::size_t ti = 0; ti < t.transitions.size(); ++ti) {
            const Transition& tr = t.transitions[ti];
            os << "  trans " << t.states[static_cast<std::size_t>(tr.source)]
               << " -> " << t.states[static_cast<std::size_t>(tr.target)] << " {";
            std::string body;
            std::ostringstream bs;
            if (!tr.guard.is_true())
                bs << " guard " << constraint_str(tr.guard, t) << ";";
            if (!tr.resets.empty()) {
                bs << " reset ";
                for (std::size_t i = 0; i < tr.resets.size(); ++i)
                    bs << (i ? ", " : "")
                       << t.clocks[static_cast<std::size_t>(tr.resets[i])];
                bs << ";";
            }
            for (const auto& [peer, allowed] : tr.sync_guard.allowed) {
                bs << " when " << peer << " in {";
                std::size_t i = 0;
                for (const auto& s : allowed) bs << (i++ ? ", " : "") << s;
                bs << "};";
            }
            if (binding) {
                if (auto it = binding->actions.find(static_cast<int>(ti));
                    it != binding->actions.end())
                    bs << " var " << binding->variable << " "
                       << var_action_str(it->second) << ";";
            }
            body = bs.str();
            os << body << (body.empty() ? "" : " ") << "}\n";
        }
        os << "}\n\n";
    }
    os << "system {\n";
    for (const auto& t : doc.spec.templates) os << "  " << t.name << ": param;\n";
    os << "}\n";
    return os.str();
}

std::string print_property(const Property& prop, const NetworkSpec& spec) {
    std::ostringstream os;
    os << "forall ";
    for (std::size_t b = 0; b < prop.binders.size(); ++b) {
        if (b) os << ", ";
        os << prop.binders[b].var << ":"
           << spec.templates[static_cast<std::size_t>(
                                 prop.binders[b].template_index)]
                  .name;
    }
    if (prop.pairwise_distinct && prop.binders.size() >= 2) {
        os << " with ";
        bool first = true;
        for (std::size_t a = 0; a < prop.binders.size(); ++a)
            for (std::size_t b = a + 1; b < prop.binders.size(); ++b) {
                if (prop.binders[a].template_index != prop.binders[b].template_index)
                    continue;
                if (!first) os << ", ";
                first = false;
                os << prop.binders[a].var << " != " << prop.binders[b].var;
            }
    }
    os << " . " << quantifier_str(prop.quantifier) << " ";

    std::function<void(const StateFormula&)> sf = [&](const StateFormula& f) {
        switch (f.kind) {
            case StateFormula::Kind::True: os << "true"; break;
            case StateFormula::Kind::Atom: {
                const Binder& b =
                    prop.binders[static_cast<std::size_t>(f.binder)];
                const Template& t = spec.templates[static_cast<std::size_t>(
                    b.template_index)];
                os << t.states[static_cast<std::size_t>(f.state)] << "(" << b.var
                   << ")";
                break;
            }
            case StateFormula::Kind::Not:
                os << "!";
                if (f.children.front().kind == StateFormula::Kind::Atom) {
                    sf(f.children.front());
                } else {
                    os << "(";
                    sf(f.children.front());
                    os << ")";
                }
                break;
            case StateFormula::Kind::And:
            case StateFormula::Kind::Or: {
                os << "(";
                const char* sep = f.kind == StateFormula::Kind::And ? " & " : " | ";
                for (std::size_t i = 0; i < f.children.size(); ++i) {
                    if (i) os << sep;
                    sf(f.children[i]);
                }
                os << ")";
                break;
            }
        }
    };
    std::string bound =
        "[" + rel_op_str(prop.bound.op) + prop.bound.value.str() + "]";
    switch (prop.op) {
        case PathOp::F:
            os << "F" << bound << " ";
            sf(prop.phi);
            break;
        case PathOp::G:
            os << "G" << bound << " ";
            sf(prop.phi);
            break;
        case PathOp::U:
            os << "(";
            sf(prop.phi);
            os << ") U" << bound << " (";
            sf(prop.psi);
            os << ")";
            break;
    }
    return os.str();
}

// --- traces and reports --------------------------------------------------------

namespace {

Rational unscale(const Rational& engine_value, const NetworkSpec& spec) {
    return engine_value / Rational(spec.scale);
}

}  // namespace

std::string emit_trace(const Run& run, const NetworkSpec& spec) {
    std::ostringstream os;
    const char* klass = run.klass == RunClass::Infinite     ? "infinite"
                        : run.klass == RunClass::Deadlocked ? "deadlocked"
                                                            : "finite-prefix";
    os << "# run class=" << klass << " steps=" << run.steps.size() << "\n";
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
        const RunStep& s = run.steps[i];
        os << "@t=" << unscale(run.times[i], spec).str() << " ";
        if (s.kind == RunStep::Kind::Delay) {
            os << "delay " << unscale(s.delay, spec).str();
        } else {
            const Template& t =
                spec.templates[static_cast<std::size_t>(s.template_index)];
            const Transition& tr =
                t.transitions[static_cast<std::size_t>(s.transition)];
            os << t.name << "[" << s.instance << "]: "
               << t.states[static_cast<std::size_t>(tr.source)] << " -> "
               << t.states[static_cast<std::size_t>(tr.target)] << " (reset {";
            for (std::size_t r = 0; r < tr.resets.size(); ++r)
                os << (r ? ", " : "")
                   << t.clocks[static_cast<std::size_t>(tr.resets[r])];
            os << "})";
        }
        os << "\n";
    }
    if (run.klass == RunClass::Infinite) {
        if (run.cycle_start >= 0)
            os << "** cycle to step " << run.cycle_start << " **\n";
        else
            os << "** time diverges **\n";
    } else if (run.klass == RunClass::Deadlocked) {
        os << "** deadlock **\n";
    }
    return os.str();
}

std::string sizes_str(const SizeVector& sizes) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < sizes.size(); ++i) os << (i ? "," : "") << sizes[i];
    os << ")";
    return os.str();
}

std::string emit_report(const ParamVerdict& pv, const NetworkSpec& spec,
                        const std::string& engine, double wall_seconds) {
    std::ostringstream os;
    os << "engine: " << engine << "\n";
    os << "cutoff:";
    for (std::size_t l = 0; l < pv.cutoff.sizes.size(); ++l)
        os << " " << spec.templates[l].name << "=" << pv.cutoff.sizes[l] << " ["
           << pv.cutoff.reasons[l] << "]";
    os << "\n";
    for (const auto& sizes : pv.checked) {
        bool failed = std::find(pv.failures.begin(), pv.failures.end(), sizes) !=
                      pv.failures.end();
        os << "size " << sizes_str(sizes) << ": " << (failed ? "false" : "true")
           << "\n";
    }
    os << "overall: " << (pv.truth ? "true" : "false") << "\n";
    os << "checked=" << pv.checked.size() << " failures=" << pv.failures.size()
       << " states=" << pv.detail.stats.states_explored << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "wall: %.2fs", wall_seconds);
    os << buf << "\n";
    return os.str();
}

}  // namespace pnta
