#pragma once

#include "paarc/policy/attribute.hpp"

#include <memory>
#include <stdexcept>
#include <variant>

namespace paarc::policy {

enum class CompareOp { eq, ne, lt, le, gt, ge };

std::string_view to_string(CompareOp op);

class Expr;

struct AndNode;
struct OrNode;
struct NotNode;
struct CompareNode;
struct PresentNode;

struct ExprNode;

/// Immutable boolean expression tree. Copies share structure.
class Expr {
public:
    static Expr all(Expr lhs, Expr rhs);
    static Expr any(Expr lhs, Expr rhs);
    static Expr negate(Expr operand);
    /// Throws std::invalid_argument when an ordering operator is given a
    /// string or boolean literal.
    static Expr compare(CompareOp op, AttrPath path, AttrValue literal);
    static Expr present(AttrPath path);

    const std::variant<AndNode, OrNode, NotNode, CompareNode, PresentNode>& node() const noexcept;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct AndNode {
    Expr lhs;
    Expr rhs;
};
struct OrNode {
    Expr lhs;
    Expr rhs;
};
struct NotNode {
    Expr operand;
};
struct CompareNode {
    CompareOp op;
    AttrPath path;
    AttrValue literal;
};
struct PresentNode {
    AttrPath path;
};

struct ExprNode {
    std::variant<AndNode, OrNode, NotNode, CompareNode, PresentNode> v;
};

inline const std::variant<AndNode, OrNode, NotNode, CompareNode, PresentNode>& Expr::node() const noexcept {
    return node_->v;
}

bool operator==(const AndNode& a, const AndNode& b);
bool operator==(const OrNode& a, const OrNode& b);
bool operator==(const NotNode& a, const NotNode& b);
bool operator==(const CompareNode& a, const CompareNode& b);
bool operator==(const PresentNode& a, const PresentNode& b);

/// Raised when a comparison pairs incompatible value variants.
class TypeMismatch : public std::runtime_error {
public:
    TypeMismatch(AttrPath path, std::string message)
        : std::runtime_error(std::move(message)), path_(std::move(path)) {}
    const AttrPath& path() const noexcept { return path_; }

private:
    AttrPath path_;
};

/// Three-valued result: true, false, or the leftmost missing attribute.
class Truth {
public:
    static Truth yes() { return Truth(Kind::yes); }
    static Truth no() { return Truth(Kind::no); }
    static Truth missing(AttrPath p) { return Truth(std::move(p)); }

    bool is_true() const noexcept { return kind_ == Kind::yes; }
    bool is_false() const noexcept { return kind_ == Kind::no; }
    bool is_missing() const noexcept { return kind_ == Kind::missing; }
    /// Only meaningful when is_missing().
    const AttrPath& missing_path() const { return *path_; }

    bool operator==(const Truth&) const = default;

private:
    enum class Kind { yes, no, missing };
    explicit Truth(Kind k) : kind_(k) {}
    explicit Truth(AttrPath p) : kind_(Kind::missing), path_(std::move(p)) {}
    Kind kind_;
    std::optional<AttrPath> path_;
};

/// And/Or short-circuit on a determinate dominating operand even when the
/// other side is missing. Throws TypeMismatch.
Truth evaluate(const Expr& e, const RequestContext& ctx);

}  // namespace paarc::policy
