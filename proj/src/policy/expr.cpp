#include "paarc/policy/expr.hpp"

namespace paarc::policy {

std::string_view to_string(CompareOp op) {
    switch (op) {
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    }
    return "?";
}

namespace {

bool is_ordering(CompareOp op) {
    return op != CompareOp::eq && op != CompareOp::ne;
}

template <typename T>
bool apply(CompareOp op, const T& a, const T& b) {
    switch (op) {
    case CompareOp::eq: return a == b;
    case CompareOp::ne: return a != b;
    case CompareOp::lt: return a < b;
    case CompareOp::le: return a <= b;
    case CompareOp::gt: return a > b;
    case CompareOp::ge: return a >= b;
    }
    return false;
}

bool compare_values(const CompareNode& c, const AttrValue& bound) {
    if (bound.index() != c.literal.index()) {
        throw TypeMismatch(c.path, "cannot compare " + c.path.str() + " (" + std::string(type_name(bound)) +
                                       ") with " + std::string(type_name(c.literal)) + " literal");
    }
    return std::visit(
        [&](const auto& lit) -> bool {
            using T = std::decay_t<decltype(lit)>;
            const T& val = std::get<T>(bound);
            if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, bool>) {
                if (is_ordering(c.op))
                    throw TypeMismatch(c.path, "ordering comparison on " + std::string(type_name(bound)));
                return c.op == CompareOp::eq ? val == lit : val != lit;
            } else {
                return apply(c.op, val, lit);
            }
        },
        c.literal);
}

struct Evaluator {
    const RequestContext& ctx;

    Truth operator()(const AndNode& n) const {
        Truth l = evaluate(n.lhs, ctx);
        if (l.is_false()) return l;
        Truth r = evaluate(n.rhs, ctx);
        if (r.is_false()) return r;
        if (l.is_missing()) return l;
        return r;
    }
    Truth operator()(const OrNode& n) const {
        Truth l = evaluate(n.lhs, ctx);
        if (l.is_true()) return l;
        Truth r = evaluate(n.rhs, ctx);
        if (r.is_true()) return r;
        if (l.is_missing()) return l;
        return r;
    }
    Truth operator()(const NotNode& n) const {
        Truth t = evaluate(n.operand, ctx);
        if (t.is_missing()) return t;
        return t.is_true() ? Truth::no() : Truth::yes();
    }
    Truth operator()(const CompareNode& n) const {
        const AttrValue* v = ctx.find(n.path);
        if (!v) return Truth::missing(n.path);
        return compare_values(n, *v) ? Truth::yes() : Truth::no();
    }
    Truth operator()(const PresentNode& n) const {
        return ctx.contains(n.path) ? Truth::yes() : Truth::no();
    }
};

}  // namespace

Expr Expr::all(Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{AndNode{std::move(lhs), std::move(rhs)}}));
}

Expr Expr::any(Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{OrNode{std::move(lhs), std::move(rhs)}}));
}

Expr Expr::negate(Expr operand) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{NotNode{std::move(operand)}}));
}

Expr Expr::compare(CompareOp op, AttrPath path, AttrValue literal) {
    if (is_ordering(op) && (std::holds_alternative<std::string>(literal) || std::holds_alternative<bool>(literal)))
        throw std::invalid_argument("operator " + std::string(to_string(op)) + " needs an integer or timestamp literal");
    return Expr(std::make_shared<const ExprNode>(ExprNode{CompareNode{op, std::move(path), std::move(literal)}}));
}

Expr Expr::present(AttrPath path) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{PresentNode{std::move(path)}}));
}

bool operator==(const AndNode& a, const AndNode& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
bool operator==(const OrNode& a, const OrNode& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
bool operator==(const NotNode& a, const NotNode& b) { return a.operand == b.operand; }
bool operator==(const CompareNode& a, const CompareNode& b) {
    return a.op == b.op && a.path == b.path && a.literal == b.literal;
}
bool operator==(const PresentNode& a, const PresentNode& b) { return a.path == b.path; }

bool operator==(const Expr& a, const Expr& b) {
    return a.node_ == b.node_ || a.node_->v == b.node_->v;
}

Truth evaluate(const Expr& e, const RequestContext& ctx) {
    return std::visit(Evaluator{ctx}, e.node());
}

}  // namespace paarc::policy
