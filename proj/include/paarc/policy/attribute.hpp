#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace paarc::policy {

enum class Category { subject, resource, action, environment };

std::string_view to_string(Category c);
std::optional<Category> category_from_string(std::string_view s);

/// Integer seconds since the scenario epoch.
struct Timestamp {
    std::int64_t seconds = 0;
    auto operator<=>(const Timestamp&) const = default;
};

/// A fully qualified attribute name, e.g. `subject.cert.status`.
/// `name` excludes the category segment.
class AttrPath {
public:
    AttrPath(Category category, std::string name);

    /// Parses `category.seg{.seg}`; throws std::invalid_argument.
    static AttrPath parse(std::string_view dotted);

    Category category() const noexcept { return category_; }
    const std::string& name() const noexcept { return name_; }
    std::string str() const;

    auto operator<=>(const AttrPath&) const = default;

private:
    Category category_;
    std::string name_;
};

bool is_valid_attr_name(std::string_view name);

using AttrValue = std::variant<std::string, std::int64_t, bool, Timestamp>;

std::string_view type_name(const AttrValue& v);
std::string to_display(const AttrValue& v);

/// Attribute bag presented for evaluation. At most one value per path.
class RequestContext {
public:
    RequestContext() = default;
    RequestContext(std::initializer_list<std::pair<const AttrPath, AttrValue>> init) : values_(init) {}

    const AttrValue* find(const AttrPath& p) const;
    bool contains(const AttrPath& p) const { return values_.count(p) != 0; }
    /// Binds or overwrites.
    void set(const AttrPath& p, AttrValue v) { values_.insert_or_assign(p, std::move(v)); }
    bool erase(const AttrPath& p) { return values_.erase(p) != 0; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    bool operator==(const RequestContext&) const = default;

private:
    std::map<AttrPath, AttrValue> values_;
};

}  // namespace paarc::policy
