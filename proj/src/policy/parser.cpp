#include "paarc/policy/parser.hpp"

#include <charconv>
#include <set>
#include <sstream>

namespace paarc::policy {

PolicyError::PolicyError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

enum class Tok { word, string, integer, timestamp, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::int64_t number = 0;
    std::size_t line = 1;
    std::size_t col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (is_word_start(c)) {
                t.kind = Tok::word;
                while (pos_ < src_.size() && is_word_char(src_[pos_])) t.text += advance();
            } else if (c == '"') {
                t.kind = Tok::string;
                t.text = read_string(t);
            } else if (c == '@') {
                advance();
                t.kind = Tok::timestamp;
                t.number = read_integer(t);
            } else if (c == '-' || is_digit(c)) {
                t.kind = Tok::integer;
                t.number = read_integer(t);
            } else {
                t.kind = Tok::punct;
                t.text = read_punct(t);
            }
            out.push_back(std::move(t));
        }
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_word_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_word_char(char c) { return is_word_start(c) || is_digit(c) || c == '-'; }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    std::string read_string(const Token& at) {
        advance();
        std::string s;
        for (;;) {
            if (pos_ >= src_.size() || src_[pos_] == '\n')
                throw ParseError(at.line, at.col, "unterminated string literal");
            char c = advance();
            if (c == '"') return s;
            if (c == '\\') {
                if (pos_ >= src_.size()) throw ParseError(at.line, at.col, "unterminated string literal");
                char e = advance();
                switch (e) {
                case '"': s += '"'; break;
                case '\\': s += '\\'; break;
                case 'n': s += '\n'; break;
                case 't': s += '\t'; break;
                default: throw ParseError(line_, col_ - 2, std::string("unknown escape \\") + e);
                }
            } else {
                s += c;
            }
        }
    }

    std::int64_t read_integer(const Token& at) {
        std::size_t start = pos_;
        if (pos_ < src_.size() && src_[pos_] == '-') advance();
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
        std::string_view digits = src_.substr(start, pos_ - start);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            throw ParseError(at.line, at.col, "malformed integer '" + std::string(digits) + "'");
        return v;
    }

    std::string read_punct(const Token& at) {
        char c = advance();
        auto peek_eq = [&] {
            if (pos_ < src_.size() && src_[pos_] == '=') {
                advance();
                return true;
            }
            return false;
        };
        switch (c) {
        case '{': case '}': case '(': case ')': case ':': case '.':
            return std::string(1, c);
        case '<': return peek_eq() ? "<=" : "<";
        case '>': return peek_eq() ? ">=" : ">";
        case '=':
            if (peek_eq()) return "==";
            break;
        case '!':
            if (peek_eq()) return "!=";
            break;
        default: break;
        }
        throw ParseError(at.line, at.col, std::string("unexpected character '") + c + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool is_segment(std::string_view s) {
    if (s.empty() || s.front() < 'a' || s.front() > 'z') return false;
    for (char c : s) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    }
    return true;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::vector<Policy> policy_set() {
        std::vector<Policy> out;
        std::set<std::string> ids;
        while (peek().kind != Tok::end) {
            const Token& id_tok = peek(1);
            Policy p = policy();
            if (!ids.insert(p.id).second)
                throw DuplicatePolicyId(id_tok.line, id_tok.col, "duplicate policy id \"" + p.id + "\"");
            out.push_back(std::move(p));
        }
        return out;
    }

    Expr lone_expr() {
        Expr e = expr();
        if (peek().kind != Tok::end) fail(peek(), "trailing input after expression");
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool at_word(std::string_view w) const { return peek().kind == Tok::word && peek().text == w; }
    bool at_punct(std::string_view p) const { return peek().kind == Tok::punct && peek().text == p; }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg + describe(t));
    }
    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::end: return " (at end of input)";
        case Tok::string: return " (found string \"" + t.text + "\")";
        case Tok::integer: return " (found integer " + std::to_string(t.number) + ")";
        case Tok::timestamp: return " (found timestamp @" + std::to_string(t.number) + ")";
        default: return " (found '" + t.text + "')";
        }
    }

    void expect_word(std::string_view w) {
        if (!at_word(w)) fail(peek(), "expected '" + std::string(w) + "'");
        next();
    }
    void expect_punct(std::string_view p) {
        if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
        next();
    }
    std::string expect_string(const std::string& what) {
        if (peek().kind != Tok::string) fail(peek(), "expected " + what);
        return next().text;
    }

    Policy policy() {
        expect_word("policy");
        Policy p;
        const Token& id_tok = peek();
        p.id = expect_string("policy id string");
        if (p.id.empty()) throw ParseError(id_tok.line, id_tok.col, "policy id must not be empty");
        expect_punct("{");
        if (at_word("target")) {
            next();
            expect_punct(":");
            p.target = expr();
        }
        if (at_word("combining")) {
            next();
            expect_punct(":");
            const Token& alg = peek();
            auto parsed = alg.kind == Tok::word ? combining_from_string(alg.text) : std::nullopt;
            if (!parsed) fail(alg, "expected deny-overrides, permit-overrides or first-applicable");
            next();
            p.combining = *parsed;
        }
        if (!at_word("rule")) fail(peek(), "expected 'rule'");
        bool saw_otherwise = false;
        while (at_word("rule")) {
            const Token& rule_tok = peek();
            if (saw_otherwise)
                throw MisplacedOtherwise(rule_tok.line, rule_tok.col,
                                         "policy \"" + p.id + "\": otherwise rule must be the last rule");
            next();
            p.rules.push_back(rule());
            saw_otherwise = p.rules.back().is_otherwise();
        }
        expect_punct("}");
        return p;
    }

    Rule rule() {
        Rule r;
        if (at_word("permit")) {
            r.effect = RuleEffect::permit;
        } else if (at_word("deny")) {
            r.effect = RuleEffect::deny;
        } else {
            fail(peek(), "expected 'permit' or 'deny'");
        }
        next();
        if (at_word("when")) {
            next();
            r.condition = expr();
        } else if (at_word("otherwise")) {
            next();
        } else {
            fail(peek(), "expected 'when' or 'otherwise'");
        }
        while (at_word("obligate")) {
            next();
            r.obligations.push_back(expect_string("obligation id string"));
        }
        return r;
    }

    Expr expr() {
        Expr lhs = conjunction();
        while (at_word("or")) {
            next();
            lhs = Expr::any(std::move(lhs), conjunction());
        }
        return lhs;
    }

    Expr conjunction() {
        Expr lhs = unary();
        while (at_word("and")) {
            next();
            lhs = Expr::all(std::move(lhs), unary());
        }
        return lhs;
    }

    Expr unary() {
        if (at_word("not")) {
            next();
            return Expr::negate(unary());
        }
        if (at_punct("(")) {
            next();
            Expr e = expr();
            expect_punct(")");
            return e;
        }
        if (at_word("present")) {
            next();
            expect_punct("(");
            AttrPath p = path();
            expect_punct(")");
            return Expr::present(std::move(p));
        }
        return comparison();
    }

    Expr comparison() {
        AttrPath p = path();
        const Token& op_tok = peek();
        CompareOp op;
        if (op_tok.kind != Tok::punct) fail(op_tok, "expected comparison operator");
        if (op_tok.text == "==") op = CompareOp::eq;
        else if (op_tok.text == "!=") op = CompareOp::ne;
        else if (op_tok.text == "<") op = CompareOp::lt;
        else if (op_tok.text == "<=") op = CompareOp::le;
        else if (op_tok.text == ">") op = CompareOp::gt;
        else if (op_tok.text == ">=") op = CompareOp::ge;
        else fail(op_tok, "expected comparison operator");
        next();
        const Token& lit_tok = peek();
        AttrValue lit = literal();
        try {
            return Expr::compare(op, std::move(p), std::move(lit));
        } catch (const std::invalid_argument& e) {
            throw ParseError(lit_tok.line, lit_tok.col, e.what());
        }
    }

    AttrValue literal() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::string: next(); return t.text;
        case Tok::integer: next(); return t.number;
        case Tok::timestamp: next(); return Timestamp{t.number};
        case Tok::word:
            if (t.text == "true" || t.text == "false") {
                next();
                return t.text == "true";
            }
            break;
        default: break;
        }
        fail(t, "expected literal");
    }

    AttrPath path() {
        const Token& head = peek();
        auto cat = head.kind == Tok::word ? category_from_string(head.text) : std::nullopt;
        if (!cat) fail(head, "expected attribute path (subject., resource., action. or environment.)");
        next();
        std::string name;
        do {
            expect_punct(".");
            const Token& seg = peek();
            if (seg.kind != Tok::word || !is_segment(seg.text)) fail(seg, "expected attribute name segment");
            if (!name.empty()) name += '.';
            name += next().text;
        } while (at_punct("."));
        return AttrPath(*cat, std::move(name));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string print_literal(const AttrValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
    return to_display(v);
}

struct Printer {
    std::string operator()(const AndNode& n) const { return "(" + print_expr(n.lhs) + " and " + print_expr(n.rhs) + ")"; }
    std::string operator()(const OrNode& n) const { return "(" + print_expr(n.lhs) + " or " + print_expr(n.rhs) + ")"; }
    std::string operator()(const NotNode& n) const { return "not " + print_expr(n.operand); }
    std::string operator()(const CompareNode& n) const {
        return n.path.str() + " " + std::string(to_string(n.op)) + " " + print_literal(n.literal);
    }
    std::string operator()(const PresentNode& n) const { return "present(" + n.path.str() + ")"; }
};

}  // namespace

std::vector<Policy> parse_policy_set(std::string_view text) {
    return Parser(Lexer(text).run()).policy_set();
}

Expr parse_expr(std::string_view text) {
    return Parser(Lexer(text).run()).lone_expr();
}

std::string print_expr(const Expr& e) {
    return std::visit(Printer{}, e.node());
}

std::string print_policy_set(std::span<const Policy> policies) {
    std::ostringstream os;
    for (const auto& p : policies) {
        os << "policy " << quote(p.id) << " {\n";
        if (p.target) os << "  target: " << print_expr(*p.target) << "\n";
        os << "  combining: " << to_string(p.combining) << "\n";
        for (const auto& r : p.rules) {
            os << "  rule " << to_string(r.effect);
            if (r.condition) os << " when " << print_expr(*r.condition);
            else os << " otherwise";
            for (const auto& o : r.obligations) os << " obligate " << quote(o);
            os << "\n";
        }
        os << "}\n";
    }
    return os.str();
}

}  // namespace paarc::policy
