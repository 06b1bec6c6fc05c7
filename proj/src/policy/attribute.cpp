#include "paarc/policy/attribute.hpp"

namespace paarc::policy {

std::string_view to_string(Category c) {
    switch (c) {
    case Category::subject: return "subject";
    case Category::resource: return "resource";
    case Category::action: return "action";
    case Category::environment: return "environment";
    }
    return "?";
}

std::optional<Category> category_from_string(std::string_view s) {
    if (s == "subject") return Category::subject;
    if (s == "resource") return Category::resource;
    if (s == "action") return Category::action;
    if (s == "environment") return Category::environment;
    return std::nullopt;
}

bool is_valid_attr_name(std::string_view name) {
    if (name.empty() || name.front() < 'a' || name.front() > 'z') return false;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
        if (!ok) return false;
    }
    return true;
}

AttrPath::AttrPath(Category category, std::string name)
    : category_(category), name_(std::move(name)) {
    if (!is_valid_attr_name(name_))
        throw std::invalid_argument("invalid attribute name '" + name_ + "'");
}

AttrPath AttrPath::parse(std::string_view dotted) {
    auto dot = dotted.find('.');
    if (dot == std::string_view::npos)
        throw std::invalid_argument("attribute path needs a category prefix: '" + std::string(dotted) + "'");
    auto cat = category_from_string(dotted.substr(0, dot));
    if (!cat)
        throw std::invalid_argument("unknown attribute category in '" + std::string(dotted) + "'");
    return AttrPath(*cat, std::string(dotted.substr(dot + 1)));
}

std::string AttrPath::str() const {
    std::string out(to_string(category_));
    out += '.';
    out += name_;
    return out;
}

std::string_view type_name(const AttrValue& v) {
    switch (v.index()) {
    case 0: return "string";
    case 1: return "integer";
    case 2: return "boolean";
    default: return "timestamp";
    }
}

std::string to_display(const AttrValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return '"' + x + '"';
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, Timestamp>) {
                return "@" + std::to_string(x.seconds);
            } else {
                return std::to_string(x);
            }
        },
        v);
}

const AttrValue* RequestContext::find(const AttrPath& p) const {
    auto it = values_.find(p);
    return it == values_.end() ? nullptr : &it->second;
}

}  // namespace paarc::policy
