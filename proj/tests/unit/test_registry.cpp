#include "oracles/shadow.hpp"
#include "support/gen.hpp"

#include <doctest.h>

using namespace paarc::registry;

namespace {

ServiceRecord svc(std::string id, std::map<std::string, std::string> props = {}) {
    return {std::move(id), "cu", std::move(props), "doc", ServiceStatus::valid};
}

}  // namespace

TEST_CASE("publish and find") {
    ServiceRegistry reg;
    reg.publish(svc("telemetry"));
    auto found = reg.find({}, "telemetry");
    REQUIRE(found.size() == 1);
    CHECK(found[0].provider == "cu");
    CHECK_THROWS_AS(reg.publish(svc("telemetry")), DuplicateServiceId);
}

TEST_CASE("queries filter by properties and status") {
    ServiceRegistry reg;
    reg.publish(svc("b", {{"kind", "booking"}}));
    reg.publish(svc("a", {{"kind", "booking"}, {"zone", "north"}}));
    reg.publish(svc("c"));
    auto all = reg.find({});
    REQUIRE(all.size() == 3);
    CHECK(all[0].service_id == "a");
    CHECK(all[2].service_id == "c");
    auto booking = reg.find({{"kind", "booking"}});
    REQUIRE(booking.size() == 2);
    CHECK(booking[0].service_id == "a");
    CHECK(reg.find({{"kind", "booking"}, {"zone", "north"}}).size() == 1);
    reg.invalidate("a");
    CHECK(reg.find({}, "a").empty());
    CHECK_THROWS_AS(reg.invalidate("a"), UnknownServiceId);
    CHECK_THROWS_AS(reg.invalidate("zzz"), UnknownServiceId);
}

TEST_CASE("republishing an invalidated id supersedes it") {
    ServiceRegistry reg;
    reg.publish(svc("s", {{"v", "1"}}));
    reg.invalidate("s");
    reg.publish(svc("s", {{"v", "2"}}));
    auto found = reg.find({}, "s");
    REQUIRE(found.size() == 1);
    CHECK(found[0].properties.at("v") == "2");
}

TEST_CASE("publishing an invalidated record is rejected") {
    ServiceRegistry reg;
    auto r = svc("s");
    r.status = ServiceStatus::invalidated;
    CHECK_THROWS(reg.publish(r));
}

TEST_CASE("registry matches a replayed shadow and queries are monotone") {
    gen::Rng rng(12);
    const std::vector<std::string> keys{"kind", "zone", "tier"};
    const std::vector<std::string> vals{"x", "y"};
    for (int run = 0; run < 40; ++run) {
        ServiceRegistry reg;
        oracle::ShadowRegistry shadow;
        for (int op = 0; op < 60; ++op) {
            std::string id = "s" + std::to_string(gen::pick(rng, 0, 6));
            if (gen::pick(rng, 0, 1)) {
                std::map<std::string, std::string> props;
                for (const auto& k : keys)
                    if (gen::pick(rng, 0, 1)) props[k] = vals[static_cast<std::size_t>(gen::pick(rng, 0, 1))];
                auto rec = svc(id, props);
                if (shadow.publish(rec)) reg.publish(rec);
                else REQUIRE_THROWS_AS(reg.publish(rec), DuplicateServiceId);
            } else {
                if (shadow.invalidate(id)) reg.invalidate(id);
                else REQUIRE_THROWS_AS(reg.invalidate(id), UnknownServiceId);
            }
            PropertyQuery q;
            for (const auto& k : keys)
                if (gen::pick(rng, 0, 2) == 0) q[k] = vals[static_cast<std::size_t>(gen::pick(rng, 0, 1))];
            std::optional<std::string> want_id;
            if (gen::pick(rng, 0, 3) == 0) want_id = "s" + std::to_string(gen::pick(rng, 0, 6));
            auto got = reg.find(q, want_id);
            REQUIRE(got == shadow.find(q, want_id));
            for (const auto& r : got) REQUIRE(r.status == ServiceStatus::valid);

            const std::string& extra = keys[static_cast<std::size_t>(gen::pick(rng, 0, 2))];
            if (!q.count(extra)) {
                PropertyQuery narrower = q;
                narrower[extra] = vals[0];
                auto sub = reg.find(narrower, want_id);
                REQUIRE(sub.size() <= got.size());
                for (const auto& r : sub) REQUIRE(std::find(got.begin(), got.end(), r) != got.end());
            }
        }
    }
}
