#include <doctest.h>

#include <algorithm>
#include <set>

#include "hansim/rng.hpp"
#include "hansim/stnet.hpp"

using namespace hansim;
using namespace hansim::stnet;

namespace {

Network make_net(std::uint32_t nodes, DeliveryModel model, std::uint64_t seed = 1) {
    return Network(nodes, std::move(model), rng::Stream(seed, rng::kPurposeNetwork));
}

Request req(Seconds t, std::uint32_t dev, Action a = Action::On) { return {t, dev, a}; }

}  // namespace

TEST_CASE("perfect delivery spreads a raised request to every view") {
    auto net = make_net(5, Perfect{});
    net.raise(3, req(0, 3));
    net.run_round(0);
    for (std::uint32_t n = 0; n < 5; ++n) {
        const auto known = net.known_requests(n);
        REQUIRE(known.size() == 1);
        CHECK(known[0] == req(0, 3));
    }
}

TEST_CASE("iid loss with p = 0 changes no view") {
    auto net = make_net(4, IidLoss{0.0});
    net.raise(0, req(0, 0));
    const auto before = net.known_requests(1);
    net.run_round(0);
    CHECK(net.known_requests(1) == before);
    CHECK(net.last_round_received(1) == -1);
    // the raiser still sees its own request
    CHECK(net.known_requests(0).size() == 1);
}

TEST_CASE("run_round with no nodes is an error") {
    auto net = make_net(0, Perfect{});
    CHECK_THROWS_AS(net.run_round(0), NoNodesError);
}

TEST_CASE("blackout rounds deliver to nobody, the next good round to everybody") {
    // independent replay oracle: a view equals the union of the payloads of
    // the successful rounds it received, plus everything it raised itself
    auto net = make_net(3, Blackout{{{10, 12}}});
    std::set<Request> raised;

    const auto raise_at = [&](Seconds t, std::uint32_t node) {
        const Request r = req(t, node);
        net.raise(node, r);
        raised.insert(r);
    };

    raise_at(10, 0);
    net.run_round(10);
    raise_at(11, 1);
    net.run_round(11);
    net.run_round(12);
    // during the blackout only the raisers know their own events
    CHECK(net.known_requests(2).empty());
    CHECK(net.known_requests(0).size() == 1);

    net.run_round(13);
    for (std::uint32_t n = 0; n < 3; ++n) {
        const auto known = net.known_requests(n);
        CHECK(std::set<Request>(known.begin(), known.end()) == raised);
        CHECK(net.last_round_received(n) == 13);
    }
}

TEST_CASE("consume returns each request exactly once") {
    auto net = make_net(2, Perfect{});
    net.raise(0, req(5, 0));
    net.run_round(0);
    const auto first = net.consume(1, 5);
    REQUIRE(first.size() == 1);
    CHECK(first[0] == req(5, 0));
    CHECK(net.consume(1, 5).empty());
    CHECK(net.consume(1, 100).empty());
}

TEST_CASE("consume of an empty view is empty") {
    auto net = make_net(2, Perfect{});
    CHECK(net.consume(0, 1000).empty());
}

TEST_CASE("consume filters by time") {
    auto net = make_net(1, Perfect{});
    net.raise(0, req(3, 0));
    net.raise(0, req(7, 0, Action::Off));
    net.run_round(0);
    const auto early = net.consume(0, 5);
    REQUIRE(early.size() == 1);
    CHECK(early[0].time_s == 3);
    const auto late = net.consume(0, 7);
    REQUIRE(late.size() == 1);
    CHECK(late[0].time_s == 7);
}

TEST_CASE("a raiser consumes its own request even when the round is lost") {
    auto net = make_net(3, IidLoss{0.0});
    net.raise(2, req(4, 2));
    net.run_round(4);
    const auto own = net.consume(2, 4);
    REQUIRE(own.size() == 1);
    CHECK(net.consume(2, 100).empty());
}

TEST_CASE("an early self-consumed request is not re-delivered after a sync") {
    auto net = make_net(2, Blackout{{{0, 0}}});
    net.raise(0, req(0, 0));
    net.run_round(0);  // blacked out
    CHECK(net.consume(0, 0).size() == 1);
    net.run_round(1);  // everyone syncs
    CHECK(net.consume(0, 10).empty());      // raiser: already consumed
    CHECK(net.consume(1, 10).size() == 1);  // peer: first sight
}

TEST_CASE("agreement under perfect delivery, every round") {
    rng::Stream workload(99, 5);
    auto net = make_net(6, Perfect{});
    for (Seconds t = 0; t < 500; ++t) {
        if (workload.next_below(3) == 0) {
            const auto node = static_cast<std::uint32_t>(workload.next_below(6));
            net.raise(node, req(t, node, workload.next_below(2) ? Action::On : Action::Off));
        }
        net.run_round(t);
        const auto reference = net.known_requests(0);
        for (std::uint32_t n = 1; n < 6; ++n) CHECK(net.known_requests(n) == reference);
    }
}

TEST_CASE("views only grow") {
    rng::Stream r(123, 6);
    auto net = make_net(4, IidLoss{0.5}, 77);
    std::vector<std::size_t> sizes(4, 0);
    for (Seconds t = 0; t < 300; ++t) {
        if (r.next_below(2) == 0) {
            const auto node = static_cast<std::uint32_t>(r.next_below(4));
            net.raise(node, req(t, node));
        }
        net.run_round(t);
        for (std::uint32_t n = 0; n < 4; ++n) {
            const auto size = net.known_requests(n).size();
            CHECK(size >= sizes[n]);
            sizes[n] = size;
        }
    }
}

TEST_CASE("eventual agreement: one all-successful round re-converges all views") {
    // the acceptance property, exercised over 200 seeds at the unit level
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        rng::Stream r(seed, 7);
        const std::uint32_t nodes = 2 + static_cast<std::uint32_t>(r.next_below(8));
        auto net = make_net(nodes, IidLoss{0.6}, seed);

        std::set<Request> raised;
        Seconds t = 0;
        for (; t < 50; ++t) {
            if (r.next_below(2) == 0) {
                const auto node = static_cast<std::uint32_t>(r.next_below(nodes));
                const Request rq = req(t, node);
                net.raise(node, rq);
                raised.insert(rq);
            }
            net.run_round(t);
        }
        // force one fully successful round by retrying until the loss draws
        // let everyone receive (p = 0.6 makes that quick for small networks)
        bool all = false;
        for (; !all; ++t) {
            net.run_round(t);
            all = std::all_of(net.last_receivers().begin(), net.last_receivers().end(),
                              [](std::uint8_t f) { return f != 0; });
            REQUIRE(t < 10000);
        }
        for (std::uint32_t n = 0; n < nodes; ++n) {
            const auto known = net.known_requests(n);
            CHECK(std::set<Request>(known.begin(), known.end()) == raised);
        }
    }
}
