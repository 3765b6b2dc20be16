#include "feedsep/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "feedsep/errors.hpp"
#include "feedsep/fixtures.hpp"

namespace feedsep {

ModelTextError::ModelTextError(std::size_t line, std::size_t column, std::string message, std::string token)
    : std::runtime_error([&] {
          std::string what = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
          if (!token.empty()) what += " (at '" + token + "')";
          return what;
      }()),
      line_(line),
      column_(column),
      message_(std::move(message)),
      token_(std::move(token)) {}

std::string default_disturbance_name(std::string_view var_name) {
    if (var_name.size() > 1 && var_name.front() == 'X') return "U" + std::string(var_name.substr(1));
    return "U" + std::string(var_name);
}

namespace {

constexpr std::string_view kSymbols = "+*()=,";

struct Pos {
    std::size_t line = 0;
    std::size_t col = 0;
    std::string token;
};

struct Tok {
    bool symbol = false;
    std::string text;
    std::size_t col = 0;
};

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
}

bool is_keyword(std::string_view s) {
    return s == "model" || s == "mod" || s == "disturbance" || s == "prob" || s == "var" || s == "parents" ||
           s == "noise" || s == "table";
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
}

std::vector<Tok> tokenize(std::string_view line) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char ch = line[i];
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (kSymbols.find(ch) != std::string_view::npos) {
            out.push_back({true, std::string(1, ch), i + 1});
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#' &&
               kSymbols.find(line[i]) == std::string_view::npos) {
            ++i;
        }
        out.push_back({false, std::string(line.substr(start, i - start)), start + 1});
    }
    return out;
}

// Syntax tree before names are resolved.
struct RawExpr {
    enum class Kind { Int, Ident, Add, Mul } kind = Kind::Int;
    int value = 0;
    std::string name;
    Pos pos;
    std::vector<RawExpr> kids;
};

struct RawDisturbance {
    std::string name;
    Pos pos;
    std::vector<Rational> probs;
};

struct RawVar {
    std::string name;
    Pos pos;
    std::optional<std::pair<std::string, Pos>> noise;
    bool is_table = false;
    RawExpr expr;
    std::vector<std::pair<std::string, Pos>> parents;
    std::vector<std::pair<int, Pos>> table;
    Pos table_pos;
};

struct RawModel {
    std::optional<std::pair<std::string, Pos>> name;
    std::optional<std::pair<int, Pos>> modulus;
    std::vector<RawDisturbance> disturbances;
    std::vector<RawVar> vars;
};

class LineParser {
public:
    LineParser(std::size_t line_no, std::vector<Tok> toks, std::size_t line_len)
        : line_(line_no), toks_(std::move(toks)), line_len_(line_len) {}

    bool at_end() const { return i_ >= toks_.size(); }
    const Tok* peek() const { return at_end() ? nullptr : &toks_[i_]; }
    bool peek_word(std::string_view w) const { return !at_end() && !toks_[i_].symbol && toks_[i_].text == w; }
    bool peek_symbol(char c) const { return !at_end() && toks_[i_].symbol && toks_[i_].text[0] == c; }

    Pos here() const {
        if (at_end()) return {line_, line_len_ + 1, ""};
        return {line_, toks_[i_].col, toks_[i_].text};
    }

    [[noreturn]] void fail(const std::string& message) const {
        const Pos p = here();
        throw ParseError(p.line, p.col, message, p.token);
    }

    Tok next(const std::string& expected) {
        if (at_end()) fail("expected " + expected + " but the line ended");
        return toks_[i_++];
    }

    std::pair<std::string, Pos> word(const std::string& expected) {
        const Pos p = here();
        Tok t = next(expected);
        if (t.symbol) {
            --i_;
            fail("expected " + expected);
        }
        return {t.text, p};
    }

    std::pair<std::string, Pos> identifier(const std::string& expected) {
        const Pos p = here();
        auto [text, pos] = word(expected);
        if (!is_identifier(text) || is_keyword(text)) {
            throw ParseError(p.line, p.col, "expected " + expected, text);
        }
        return {text, pos};
    }

    std::pair<int, Pos> integer(const std::string& expected) {
        const Pos p = here();
        auto [text, pos] = word(expected);
        if (!all_digits(text) || text.size() > 9) throw ParseError(p.line, p.col, "expected " + expected, text);
        return {std::stoi(text), pos};
    }

    void keyword(std::string_view w) {
        if (!peek_word(w)) fail("expected '" + std::string(w) + "'");
        ++i_;
    }

    void symbol(char c) {
        if (!peek_symbol(c)) fail(std::string("expected '") + c + "'");
        ++i_;
    }

    void finish() {
        if (!at_end()) fail("unexpected trailing input");
    }

    // expr := term ('+' term)*
    RawExpr expr(const std::string& owner) {
        RawExpr lhs = term(owner);
        while (peek_symbol('+')) {
            const Pos p = here();
            ++i_;
            RawExpr node;
            node.kind = RawExpr::Kind::Add;
            node.pos = p;
            node.kids.push_back(std::move(lhs));
            node.kids.push_back(term(owner));
            lhs = std::move(node);
        }
        return lhs;
    }

private:
    // term := factor ('*' factor)*
    RawExpr term(const std::string& owner) {
        RawExpr lhs = factor(owner);
        while (peek_symbol('*')) {
            const Pos p = here();
            ++i_;
            RawExpr node;
            node.kind = RawExpr::Kind::Mul;
            node.pos = p;
            node.kids.push_back(std::move(lhs));
            node.kids.push_back(factor(owner));
            lhs = std::move(node);
        }
        return lhs;
    }

    // factor := INT | IDENT | '(' expr ')'
    RawExpr factor(const std::string& owner) {
        if (peek_symbol('(')) {
            ++i_;
            RawExpr inner = expr(owner);
            symbol(')');
            return inner;
        }
        const Pos p = here();
        if (at_end()) fail("expected a number, a name or '('");
        if (toks_[i_].symbol) fail("expected a number, a name or '('");
        const std::string text = toks_[i_].text;
        RawExpr leaf;
        leaf.pos = p;
        if (all_digits(text)) {
            if (text.size() > 9) fail("constant too large");
            leaf.kind = RawExpr::Kind::Int;
            leaf.value = std::stoi(text);
        } else if (is_identifier(text) && !is_keyword(text)) {
            if (text == owner) {
                throw ValidationError(p.line, p.col, "equation for '" + owner + "' refers to itself", text);
            }
            leaf.kind = RawExpr::Kind::Ident;
            leaf.name = text;
        } else {
            fail("expected a number, a name or '('");
        }
        ++i_;
        return leaf;
    }

    std::size_t line_;
    std::vector<Tok> toks_;
    std::size_t line_len_;
    std::size_t i_ = 0;
};

void parse_statement(LineParser& p, RawModel& m) {
    const Pos start = p.here();
    auto [head, head_pos] = p.word("a statement keyword");
    if (head == "model") {
        if (m.name) throw ParseError(start.line, start.col, "duplicate 'model' statement", head);
        m.name = p.word("a model name");
        p.finish();
    } else if (head == "mod") {
        if (m.modulus) throw ParseError(start.line, start.col, "duplicate 'mod' statement", head);
        auto value = p.integer("a modulus");
        if (value.first < 2) {
            throw ValidationError(value.second.line, value.second.col, "modulus must be at least 2", value.second.token);
        }
        m.modulus = value;
        p.finish();
    } else if (head == "disturbance") {
        RawDisturbance d;
        std::tie(d.name, d.pos) = p.identifier("a disturbance name");
        p.keyword("prob");
        if (p.at_end()) p.fail("expected at least one probability");
        Rational sum = 0;
        while (!p.at_end()) {
            auto [text, pos] = p.word("a probability");
            Rational r;
            try {
                r = parse_rational(text);
            } catch (const InputError&) {
                throw ParseError(pos.line, pos.col, "expected a probability such as 1/2", text);
            }
            if (r < 0) throw ValidationError(pos.line, pos.col, "probabilities must be non-negative", text);
            sum += r;
            d.probs.push_back(r);
        }
        if (sum != 1) {
            throw ValidationError(d.pos.line, d.pos.col,
                                  "probabilities of '" + d.name + "' sum to " + to_string(sum) + ", not 1", d.name);
        }
        m.disturbances.push_back(std::move(d));
    } else if (head == "var") {
        RawVar v;
        std::tie(v.name, v.pos) = p.identifier("a variable name");
        if (p.peek_word("parents")) {
            v.is_table = true;
            p.keyword("parents");
            while (!p.peek_word("noise")) {
                if (p.peek_symbol(',')) {
                    p.symbol(',');
                    continue;
                }
                auto parent = p.identifier("a parent name or 'noise'");
                if (parent.first == v.name) {
                    throw ValidationError(parent.second.line, parent.second.col,
                                          "variable '" + v.name + "' lists itself as a parent", parent.first);
                }
                v.parents.push_back(std::move(parent));
            }
            p.keyword("noise");
            v.noise = p.identifier("a disturbance name");
            v.table_pos = p.here();
            p.keyword("table");
            if (p.at_end()) p.fail("expected table entries");
            while (!p.at_end()) v.table.push_back(p.integer("a table entry"));
        } else {
            if (p.peek_word("noise")) {
                p.keyword("noise");
                v.noise = p.identifier("a disturbance name");
            }
            p.symbol('=');
            v.expr = p.expr(v.name);
            p.finish();
        }
        m.vars.push_back(std::move(v));
    } else {
        throw ParseError(head_pos.line, head_pos.col, "unknown statement", head);
    }
}

[[noreturn]] void invalid(const Pos& p, const std::string& message) {
    throw ValidationError(p.line, p.col, message, p.token);
}

struct Resolver {
    const std::map<std::string, VarId>& vars;
    const std::map<std::string, VarId>& owners;  // disturbance name -> owning variable
    int modulus;
    const std::string& owner_name;
    VarId owner;

    Expr resolve(const RawExpr& e) const {
        switch (e.kind) {
            case RawExpr::Kind::Int:
                if (e.value >= modulus) {
                    invalid(e.pos, "constant outside 0.." + std::to_string(modulus - 1));
                }
                return Expr::constant(e.value);
            case RawExpr::Kind::Ident: {
                if (auto it = vars.find(e.name); it != vars.end()) return Expr::var(it->second);
                if (auto it = owners.find(e.name); it != owners.end()) {
                    if (it->second == owner) return Expr::own_u();
                    invalid(e.pos, "equation for '" + owner_name + "' uses another variable's disturbance");
                }
                invalid(e.pos, "unknown name");
            }
            case RawExpr::Kind::Add: return Expr::add(resolve(e.kids[0]), resolve(e.kids[1]));
            case RawExpr::Kind::Mul: return Expr::mul(resolve(e.kids[0]), resolve(e.kids[1]));
        }
        invalid(e.pos, "unexpected expression");
    }
};

Scm build(const RawModel& m) {
    if (!m.modulus) throw ValidationError(0, 0, "missing 'mod' statement", "");
    const int k = m.modulus->first;

    std::map<std::string, VarId> var_ids;
    for (std::size_t i = 0; i < m.vars.size(); ++i) {
        if (!var_ids.emplace(m.vars[i].name, VarId{i}).second) {
            invalid(m.vars[i].pos, "duplicate variable '" + m.vars[i].name + "'");
        }
    }
    std::map<std::string, const RawDisturbance*> dists;
    for (const auto& d : m.disturbances) {
        if (var_ids.count(d.name)) invalid(d.pos, "'" + d.name + "' is already a variable name");
        if (!dists.emplace(d.name, &d).second) invalid(d.pos, "duplicate disturbance '" + d.name + "'");
        if (d.probs.size() != static_cast<std::size_t>(k)) {
            invalid(d.pos, "disturbance '" + d.name + "' needs " + std::to_string(k) + " probabilities, got " +
                               std::to_string(d.probs.size()));
        }
    }

    std::map<std::string, VarId> owners;
    for (std::size_t i = 0; i < m.vars.size(); ++i) {
        const RawVar& v = m.vars[i];
        const std::string own = v.noise ? v.noise->first : default_disturbance_name(v.name);
        const Pos& at = v.noise ? v.noise->second : v.pos;
        if (!dists.count(own)) {
            invalid(at, "variable '" + v.name + "' has no disturbance '" + own + "' (declare it or add 'noise <U>')");
        }
        if (!owners.emplace(own, VarId{i}).second) invalid(at, "disturbance '" + own + "' is owned by two variables");
    }
    for (const auto& d : m.disturbances) {
        if (!owners.count(d.name)) invalid(d.pos, "disturbance '" + d.name + "' is not owned by any variable");
    }

    std::vector<Variable> out;
    for (std::size_t i = 0; i < m.vars.size(); ++i) {
        const RawVar& v = m.vars[i];
        const VarId self{i};
        Variable var;
        var.name = v.name;
        const std::string own = v.noise ? v.noise->first : default_disturbance_name(v.name);
        var.disturbance = Disturbance{own, dists.at(own)->probs};
        if (!v.is_table) {
            const Resolver r{var_ids, owners, k, v.name, self};
            var.equation = Equation{self, r.resolve(v.expr)};
        } else {
            Table t;
            for (const auto& [name, pos] : v.parents) {
                auto it = var_ids.find(name);
                if (it == var_ids.end()) invalid(pos, "unknown parent '" + name + "'");
                if (!t.parents.empty() && !(t.parents.back() < it->second)) {
                    invalid(pos, "table parents must be distinct and listed in declaration order");
                }
                t.parents.push_back(it->second);
            }
            std::size_t expected = static_cast<std::size_t>(k);
            for (std::size_t j = 0; j < t.parents.size(); ++j) expected *= static_cast<std::size_t>(k);
            if (v.table.size() != expected) {
                invalid(v.table_pos, "table for '" + v.name + "' needs " + std::to_string(expected) +
                                         " entries, got " + std::to_string(v.table.size()));
            }
            for (const auto& [value, pos] : v.table) {
                if (value >= k) invalid(pos, "table entry outside 0.." + std::to_string(k - 1));
                t.outputs.push_back(value);
            }
            var.equation = Equation{self, std::move(t)};
        }
        out.push_back(std::move(var));
    }

    try {
        return Scm(m.name ? m.name->first : std::string(), k, std::move(out));
    } catch (const InputError& e) {
        throw ValidationError(0, 0, e.what(), "");
    }
}

std::string print_expr(const Expr& e, const Scm& scm, VarId owner, int context) {
    switch (e.kind()) {
        case Expr::Kind::Const: return std::to_string(e.value());
        case Expr::Kind::OwnU: return scm.variable(owner).disturbance.name;
        case Expr::Kind::Var: return scm.variable(e.var_id()).name;
        case Expr::Kind::Add: {
            std::string s = print_expr(e.lhs(), scm, owner, 0) + " + " + print_expr(e.rhs(), scm, owner, 1);
            return context >= 1 ? "(" + s + ")" : s;
        }
        case Expr::Kind::Mul: {
            std::string s = print_expr(e.lhs(), scm, owner, 1) + " * " + print_expr(e.rhs(), scm, owner, 2);
            return context >= 2 ? "(" + s + ")" : s;
        }
    }
    return {};
}

}  // namespace

Scm parse_model(std::string_view text) {
    RawModel model;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        auto toks = tokenize(line);
        if (!toks.empty()) {
            LineParser p(line_no, std::move(toks), line.size());
            parse_statement(p, model);
        }
        begin = end + 1;
    }
    return build(model);
}

std::string serialize_model(const Scm& scm) {
    std::ostringstream out;
    if (!scm.name().empty()) out << "model " << scm.name() << '\n';
    out << "mod " << scm.modulus() << '\n';
    for (const auto& v : scm.variables()) {
        out << "disturbance " << v.disturbance.name << " prob";
        for (const auto& p : v.disturbance.probs) out << ' ' << to_string(p);
        out << '\n';
    }
    for (std::size_t i = 0; i < scm.size(); ++i) {
        const VarId self{i};
        const Variable& v = scm.variable(self);
        out << "var " << v.name;
        if (const auto* expr = std::get_if<Expr>(&v.equation.form)) {
            if (v.disturbance.name != default_disturbance_name(v.name)) out << " noise " << v.disturbance.name;
            out << " = " << print_expr(*expr, scm, self, 0) << '\n';
        } else {
            const auto& t = std::get<Table>(v.equation.form);
            out << " parents";
            for (VarId p : t.parents) out << ' ' << scm.variable(p).name;
            out << " noise " << v.disturbance.name << " table";
            for (Value o : t.outputs) out << ' ' << o;
            out << '\n';
        }
    }
    return out.str();
}

ModelSource load_model(const std::string& ref) {
    if (auto text = fixture_text(ref)) {
        return ModelSource{*text, parse_model(*text), "fixture:" + ref};
    }
    std::ifstream in(ref, std::ios::binary);
    if (!in) {
        std::string names;
        for (const auto& n : fixture_names()) names += (names.empty() ? "" : ", ") + n;
        throw InputError("no fixture or readable file named '" + ref + "' (fixtures: " + names + ")");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    Scm scm = parse_model(text);
    return ModelSource{std::move(text), std::move(scm), ref};
}

}  // namespace feedsep
