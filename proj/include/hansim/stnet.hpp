#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hansim/rng.hpp"
#include "hansim/types.hpp"

namespace hansim::stnet {

/// One request on the wire. Ordered by (time, device, action) so views can be
/// kept as sorted sequences.
struct Request {
    Seconds time_s = 0;
    std::uint32_t device = 0;
    Action action = Action::On;

    auto operator<=>(const Request&) const = default;
};

struct Perfect {
    bool operator==(const Perfect&) const = default;
};

/// Each node independently receives a round's payload with probability p.
struct IidLoss {
    double p = 1.0;
    bool operator==(const IidLoss&) const = default;
};

/// Whole rounds where nobody receives; ranges are inclusive round indices.
struct Blackout {
    std::vector<std::pair<std::int64_t, std::int64_t>> rounds;
    bool operator==(const Blackout&) const = default;
};

using DeliveryModel = std::variant<Perfect, IidLoss, Blackout>;

struct RoundConfig {
    Seconds period_s = 1;
    std::string initiator;  ///< static configuration; any node can serve
    DeliveryModel delivery = Perfect{};

    bool operator==(const RoundConfig&) const = default;
};

/// The all-to-all data-sharing plane, collapsed to its effect: once per
/// round, the union of everything every node knows is offered to every node,
/// and the delivery model decides who receives it.
///
/// A request raised at a node is visible to that node immediately (its own
/// button press), lost rounds or not. Consumption is exactly-once per node
/// and never forgets: consumed requests stay shareable, so any node that
/// missed rounds catches up fully from the next round it receives.
class Network {
public:
    Network(std::uint32_t node_count, DeliveryModel delivery, rng::Stream rng);

    /// Records a request raised at `node` this tick. Raise times must be
    /// non-decreasing across calls.
    void raise(std::uint32_t node, const Request& request);

    /// Runs one dissemination round. Throws NoNodesError when the network
    /// has no nodes.
    void run_round(std::int64_t round_index);

    /// Returns, exactly once, every request known to `node` with
    /// time <= upto_s, in dissemination order.
    std::vector<Request> consume(std::uint32_t node, Seconds upto_s);

    /// Everything the node has learned so far (consumed or not), sorted.
    std::vector<Request> known_requests(std::uint32_t node) const;

    std::int64_t last_round_received(std::uint32_t node) const {
        return views_[node].last_round;
    }

    /// Receiver mask of the most recent round; one flag per node.
    const std::vector<std::uint8_t>& last_receivers() const { return last_receivers_; }

    std::uint32_t node_count() const { return static_cast<std::uint32_t>(views_.size()); }

private:
    struct View {
        std::size_t synced = 0;            // prefix of log_ known via rounds
        std::vector<std::size_t> extra;    // self-raised, not yet in prefix
        std::size_t consumed_prefix = 0;   // prefix already handed to the scheduler
        std::vector<std::size_t> consumed_extra;  // self-raised consumed early
        std::int64_t last_round = -1;
    };

    std::vector<Request> log_;  // every request ever raised, time-ordered
    std::vector<View> views_;
    DeliveryModel delivery_;
    rng::Stream rng_;
    std::vector<std::uint8_t> last_receivers_;
};

}  // namespace hansim::stnet
