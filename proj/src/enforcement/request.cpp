#include "paarc/enforcement/request.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace paarc::enforcement {

using policy::AttrPath;
using policy::AttrValue;
using policy::Category;

policy::RequestContext base_context(const ServiceRequest& req) {
    policy::RequestContext ctx = req.attrs;
    ctx.set(AttrPath(Category::action, "name"), req.action);
    ctx.set(AttrPath(Category::subject, "id"), req.requester);
    ctx.set(AttrPath(Category::resource, "id"), req.service_id);
    return ctx;
}

namespace {

constexpr std::string_view kMagic = "PAARC-MSG/1";

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '%': out += "%25"; break;
        case '\n': out += "%0A"; break;
        case '\r': out += "%0D"; break;
        default: out += c;
        }
    }
    return out;
}

std::string unescape(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '%') {
            out += s[i];
            continue;
        }
        if (i + 2 >= s.size()) throw std::invalid_argument("truncated escape in technical message");
        std::string_view hex = s.substr(i + 1, 2);
        if (hex == "25") out += '%';
        else if (hex == "0A") out += '\n';
        else if (hex == "0D") out += '\r';
        else throw std::invalid_argument("unknown escape %" + std::string(hex));
        i += 2;
    }
    return out;
}

std::string encode_value(const AttrValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::string>) return "s:" + escape(x);
            else if constexpr (std::is_same_v<T, bool>) return x ? "b:1" : "b:0";
            else if constexpr (std::is_same_v<T, policy::Timestamp>) return "t:" + std::to_string(x.seconds);
            else return "i:" + std::to_string(x);
        },
        v);
}

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    return v;
}

AttrValue decode_value(std::string_view s) {
    if (s.size() < 2 || s[1] != ':') throw std::invalid_argument("untagged attribute value");
    std::string_view body = s.substr(2);
    switch (s[0]) {
    case 's': return unescape(body);
    case 'i': return parse_int(body);
    case 't': return policy::Timestamp{parse_int(body)};
    case 'b':
        if (body == "1") return true;
        if (body == "0") return false;
        break;
    default: break;
    }
    throw std::invalid_argument("bad attribute value '" + std::string(s) + "'");
}

}  // namespace

std::string to_technical(const ServiceRequest& req) {
    std::ostringstream os;
    os << kMagic << '\n';
    os << "request-id: " << escape(req.request_id) << '\n';
    os << "requester: " << escape(req.requester) << '\n';
    os << "service: " << escape(req.service_id) << '\n';
    os << "action: " << escape(req.action) << '\n';
    for (const auto& [path, value] : req.attrs) os << "attr: " << path.str() << '=' << encode_value(value) << '\n';
    os << "payload: " << escape(req.payload) << '\n';
    return os.str();
}

ServiceRequest from_technical(std::string_view wire) {
    ServiceRequest req;
    std::size_t pos = 0;
    auto next_line = [&]() -> std::optional<std::string_view> {
        if (pos >= wire.size()) return std::nullopt;
        auto nl = wire.find('\n', pos);
        if (nl == std::string_view::npos) throw std::invalid_argument("technical message must end with a newline");
        std::string_view line = wire.substr(pos, nl - pos);
        pos = nl + 1;
        return line;
    };
    auto first = next_line();
    if (!first || *first != kMagic) throw std::invalid_argument("missing PAARC-MSG/1 header");
    bool saw_payload = false;
    while (auto line = next_line()) {
        auto colon = line->find(": ");
        if (colon == std::string_view::npos) throw std::invalid_argument("malformed header line");
        std::string_view key = line->substr(0, colon);
        std::string_view val = line->substr(colon + 2);
        if (key == "request-id") req.request_id = unescape(val);
        else if (key == "requester") req.requester = unescape(val);
        else if (key == "service") req.service_id = unescape(val);
        else if (key == "action") req.action = unescape(val);
        else if (key == "payload") {
            req.payload = unescape(val);
            saw_payload = true;
        } else if (key == "attr") {
            auto eq = val.find('=');
            if (eq == std::string_view::npos) throw std::invalid_argument("attr line without '='");
            AttrPath path = AttrPath::parse(val.substr(0, eq));
            if (req.attrs.contains(path)) throw std::invalid_argument("duplicate attr " + path.str());
            req.attrs.set(path, decode_value(val.substr(eq + 1)));
        } else {
            throw std::invalid_argument("unknown header '" + std::string(key) + "'");
        }
    }
    if (!saw_payload) throw std::invalid_argument("missing payload line");
    return req;
}

}  // namespace paarc::enforcement
