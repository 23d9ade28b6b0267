#include "hansim/stnet.hpp"

#include <algorithm>

namespace hansim::stnet {

Network::Network(std::uint32_t node_count, DeliveryModel delivery, rng::Stream rng)
    : views_(node_count), delivery_(std::move(delivery)), rng_(rng),
      last_receivers_(node_count, 0) {}

void Network::raise(std::uint32_t node, const Request& request) {
    if (node >= views_.size()) {
        throw UnknownDeviceError("raise on unknown node " + std::to_string(node));
    }
    if (!log_.empty() && request.time_s < log_.back().time_s) {
        throw Error("requests must be raised in non-decreasing time order");
    }
    log_.push_back(request);
    views_[node].extra.push_back(log_.size() - 1);
}

void Network::run_round(std::int64_t round_index) {
    if (views_.empty()) throw NoNodesError("round with no nodes");

    std::fill(last_receivers_.begin(), last_receivers_.end(), std::uint8_t{0});
    if (const auto* blackout = std::get_if<Blackout>(&delivery_)) {
        for (const auto& [lo, hi] : blackout->rounds) {
            if (round_index >= lo && round_index <= hi) return;
        }
        std::fill(last_receivers_.begin(), last_receivers_.end(), std::uint8_t{1});
    } else if (const auto* loss = std::get_if<IidLoss>(&delivery_)) {
        for (auto& flag : last_receivers_) flag = rng_.next_unit() < loss->p ? 1 : 0;
    } else {
        std::fill(last_receivers_.begin(), last_receivers_.end(), std::uint8_t{1});
    }

    for (std::uint32_t n = 0; n < views_.size(); ++n) {
        if (!last_receivers_[n]) continue;
        View& v = views_[n];
        v.synced = log_.size();
        v.extra.clear();  // extras are all below the new watermark
        v.last_round = round_index;
    }
}

std::vector<Request> Network::consume(std::uint32_t node, Seconds upto_s) {
    View& v = views_[node];
    std::vector<Request> out;

    while (v.consumed_prefix < v.synced && log_[v.consumed_prefix].time_s <= upto_s) {
        const std::size_t idx = v.consumed_prefix++;
        const bool seen_as_extra =
            std::binary_search(v.consumed_extra.begin(), v.consumed_extra.end(), idx);
        if (!seen_as_extra) out.push_back(log_[idx]);
    }
    // drop bookkeeping for extras the prefix has passed
    std::erase_if(v.consumed_extra, [&v](std::size_t idx) { return idx < v.consumed_prefix; });

    for (auto it = v.extra.begin(); it != v.extra.end();) {
        if (log_[*it].time_s <= upto_s) {
            out.push_back(log_[*it]);
            v.consumed_extra.insert(
                std::upper_bound(v.consumed_extra.begin(), v.consumed_extra.end(), *it), *it);
            it = v.extra.erase(it);
        } else {
            ++it;
        }
    }
    return out;
}

std::vector<Request> Network::known_requests(std::uint32_t node) const {
    const View& v = views_[node];
    std::vector<Request> out(log_.begin(), log_.begin() + static_cast<std::ptrdiff_t>(v.synced));
    for (std::size_t idx : v.extra) out.push_back(log_[idx]);
    for (std::size_t idx : v.consumed_extra) {
        if (idx >= v.synced) out.push_back(log_[idx]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hansim::stnet
