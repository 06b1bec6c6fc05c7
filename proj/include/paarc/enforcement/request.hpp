#pragma once

#include "paarc/policy/attribute.hpp"

#include <string>

namespace paarc::enforcement {

struct ServiceRequest {
    std::string request_id;
    std::string requester;
    std::string service_id;
    std::string action;
    std::string payload;
    policy::RequestContext attrs;

    bool operator==(const ServiceRequest&) const = default;
};

/// The attribute bag the PDP sees: `attrs` plus `action.name`, `subject.id`
/// and `resource.id` taken from the request fields (the fields win).
policy::RequestContext base_context(const ServiceRequest& req);

/// Canonical -> technical translation. The technical form is a line-oriented
/// envelope handed to service providers:
///
///     PAARC-MSG/1
///     request-id: r1
///     requester: av-01
///     service: fleet
///     action: av.enroll
///     attr: subject.role=s:av
///     payload: ...
///
/// Values carry a type tag (s, i, b, t); '%', CR and LF are percent-encoded.
std::string to_technical(const ServiceRequest& req);

/// Inverse of to_technical; throws std::invalid_argument on malformed input.
ServiceRequest from_technical(std::string_view wire);

}  // namespace paarc::enforcement
