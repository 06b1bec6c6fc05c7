#pragma once

#include "paarc/audit/audit_log.hpp"
#include "paarc/enforcement/pdp.hpp"
#include "paarc/registry/registry.hpp"

#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace paarc::enforcement {

enum class Entity { requester, registry, pep, pdp, store, provider, publisher };

enum class MessageKind {
    find,          // requester -> registry
    record,        // registry -> requester, service found
    not_found,     // registry -> requester
    request,       // requester -> pep
    decide,        // pep -> pdp
    retrieve,      // pdp -> store
    decision,      // pdp -> pep
    invoke,        // pep -> provider
    outcome,       // provider -> pep
    failure,       // provider -> pep, invocation raised
    notify,        // pep -> publisher
};

std::string_view to_string(Entity e);
std::string_view to_string(MessageKind k);

struct TraceEvent {
    std::uint32_t seq = 0;
    Entity from = Entity::requester;
    Entity to = Entity::requester;
    MessageKind kind = MessageKind::find;

    bool operator==(const TraceEvent&) const = default;
};

/// Time-ordered protocol events of one enforcement; seq is contiguous from 1.
class MessageTrace {
public:
    void add(Entity from, Entity to, MessageKind kind);
    const std::vector<TraceEvent>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool contains(MessageKind k) const;

    bool operator==(const MessageTrace&) const = default;

private:
    std::vector<TraceEvent> events_;
};

enum class Channel { notice_board, api, text_message };

std::string_view to_string(Channel c);
std::optional<Channel> channel_from_string(std::string_view s);

struct Notification {
    Channel channel = Channel::notice_board;
    std::string recipient;
    std::string body;

    bool operator==(const Notification&) const = default;
};

/// Simulation-local sink for status notifications.
class Publisher {
public:
    void publish(Notification n);
    std::vector<Notification> delivered() const;

private:
    mutable std::mutex mutex_;
    std::vector<Notification> delivered_;
};

/// Invoked with the service record and the request in technical form;
/// returns the provider's response bytes or throws.
using ServiceProvider = std::function<std::string(const registry::ServiceRecord&, const std::string& technical)>;

enum class EnforcementStatus { completed, service_not_found, provider_failure };

std::string_view to_string(EnforcementStatus s);

struct EnforcementResult {
    EnforcementStatus status = EnforcementStatus::completed;
    /// Absent only when the service was not found.
    std::optional<policy::Decision> decision;
    std::optional<std::string> outcome;
    std::optional<Notification> notification;
    MessageTrace trace;
    std::size_t pip_calls = 0;
    std::uint64_t snapshot_version = 0;
    std::string error;
};

/// Policy enforcement point. Holds the registry, store, PDP and audit log
/// it coordinates; providers and publishers are supplied per call.
class Pep {
public:
    Pep(const registry::ServiceRegistry& registry, const PolicyStore& store, const Pdp& pdp, audit::AuditLog& audit)
        : registry_(registry), store_(store), pdp_(pdp), audit_(audit) {}

    /// Runs the canonical sequence:
    ///   find, record | not_found, request, decide, retrieve, decision,
    ///   [invoke, outcome | failure], notify
    /// The provider is invoked only on Permit. An audit record is appended
    /// at each step and the publisher hears the final status.
    EnforcementResult enforce(const ServiceRequest& req, const ServiceProvider& provider, Publisher& publisher,
                              std::int64_t tick = 0) const;

private:
    const registry::ServiceRegistry& registry_;
    const PolicyStore& store_;
    const Pdp& pdp_;
    audit::AuditLog& audit_;
};

}  // namespace paarc::enforcement
