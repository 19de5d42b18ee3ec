#include "oppnet/window.hpp"

#include <algorithm>
#include <string>

namespace oppnet {

namespace {

const PeerContact* lookup(const std::vector<PeerContact>& row, NodeId peer) {
    const auto it = std::lower_bound(row.begin(), row.end(), peer,
                                     [](const PeerContact& c, NodeId p) { return c.peer < p; });
    return it != row.end() && it->peer == peer ? &*it : nullptr;
}

} // namespace

ContactWindow::ContactWindow(WindowParams params, std::uint32_t node_count)
    : params_(params), peers_(node_count) {
    if (params_.delta < 1) throw ConfigError("window delta must be >= 1");
}

std::optional<Interval> ContactWindow::current_interval() const noexcept {
    if (next_ == 0) return std::nullopt;
    return next_ - 1;
}

void ContactWindow::add_arcs(const Arcs& arcs, Interval t) {
    std::vector<PeerContact> merged;
    for (auto g = arcs.begin(); g != arcs.end();) {
        const NodeId from = g->first;
        const auto g_end = std::find_if(g, arcs.end(), [&](const auto& a) { return a.first != from; });
        auto& row = peers_[from];
        merged.clear();
        merged.reserve(row.size() + static_cast<std::size_t>(g_end - g));
        auto r = row.begin();
        for (; g != g_end; ++g) {
            const NodeId to = g->second;
            while (r != row.end() && r->peer < to) merged.push_back(*r++);
            if (r != row.end() && r->peer == to) {
                merged.push_back({to, r->count + 1, t});
                ++r;
            } else {
                merged.push_back({to, 1, t});
            }
        }
        merged.insert(merged.end(), r, row.end());
        row.swap(merged);
    }
}

void ContactWindow::drop_arcs(const Arcs& arcs) {
    for (auto g = arcs.begin(); g != arcs.end();) {
        const NodeId from = g->first;
        auto& row = peers_[from];
        auto r = row.begin();
        bool emptied = false;
        for (; g != arcs.end() && g->first == from; ++g) {
            r = std::lower_bound(r, row.end(), g->second,
                                 [](const PeerContact& c, NodeId p) { return c.peer < p; });
            emptied |= --r->count == 0;
        }
        if (emptied) std::erase_if(row, [](const PeerContact& c) { return c.count == 0; });
    }
}

void ContactWindow::advance(std::span<const ContactEvent> interval_events) {
    const Interval t = next_;
    for (const auto& e : interval_events) {
        if (e.interval != t)
            throw DataError("window expected events for interval " + std::to_string(t) +
                            ", got interval " + std::to_string(e.interval));
        if (e.a >= node_count() || e.b >= node_count() || e.a == e.b)
            throw DataError("invalid contact endpoints");
    }

    Arcs arcs;
    arcs.reserve(2 * interval_events.size());
    for (const auto& e : interval_events) {
        arcs.emplace_back(e.a, e.b);
        arcs.emplace_back(e.b, e.a);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    add_arcs(arcs, t);
    history_.push_back(std::move(arcs));

    if (history_.size() > params_.delta) {
        drop_arcs(history_.front());
        history_.pop_front();
    }
    ++next_;
}

std::uint32_t ContactWindow::contact_count(NodeId i, NodeId j) const {
    if (i >= node_count()) return 0;
    const auto* c = lookup(peers_[i], j);
    return c ? c->count : 0;
}

std::optional<Interval> ContactWindow::last_contact(NodeId i, NodeId j) const {
    if (i >= node_count()) return std::nullopt;
    const auto* c = lookup(peers_[i], j);
    if (!c) return std::nullopt;
    return c->last_contact;
}

std::vector<NodeId> ContactWindow::active_peers(NodeId i, std::uint32_t c_min) const {
    std::vector<NodeId> out;
    for (const auto& c : peers_.at(i))
        if (c.count >= c_min) out.push_back(c.peer);
    return out;
}

} // namespace oppnet
