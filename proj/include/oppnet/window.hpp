#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "oppnet/trace.hpp"

namespace oppnet {

struct WindowParams {
    std::uint32_t delta = 1; ///< window length in trace intervals, >= 1
};

/// Aggregated contacts between a node and one peer over the current window.
struct PeerContact {
    NodeId peer = 0;
    std::uint32_t count = 0;  ///< distinct in-window intervals with a contact
    Interval last_contact = 0;
};

/// Sliding aggregation of contacts over the last `delta` intervals,
/// [t - delta + 1, t] where t is the current interval.
///
/// Every stored entry has 1 <= count <= delta; peers whose contacts all left
/// the window are dropped. Entries are kept symmetric and sorted by peer.
class ContactWindow {
public:
    ContactWindow(WindowParams params, std::uint32_t node_count);

    /// Pushes the next interval's events (all must carry interval
    /// current_interval() + 1, or 0 for the first call) and retires the
    /// interval that leaves the window. Events must be normalized.
    void advance(std::span<const ContactEvent> interval_events);

    /// Interval most recently advanced to; nullopt before the first advance.
    std::optional<Interval> current_interval() const noexcept;
    /// The interval the next advance() expects.
    Interval next_interval() const noexcept { return next_; }

    std::uint32_t delta() const noexcept { return params_.delta; }
    std::uint32_t node_count() const noexcept { return static_cast<std::uint32_t>(peers_.size()); }

    std::uint32_t contact_count(NodeId i, NodeId j) const;
    std::optional<Interval> last_contact(NodeId i, NodeId j) const;

    /// Peers with contact_count(i, .) >= c_min, ascending by id.
    std::vector<NodeId> active_peers(NodeId i, std::uint32_t c_min) const;

    /// All in-window peers of i, ascending by id.
    std::span<const PeerContact> peers(NodeId i) const { return peers_.at(i); }

private:
    /// Directed (from, to) pairs, sorted; both orientations of each contact.
    using Arcs = std::vector<std::pair<NodeId, NodeId>>;
    void add_arcs(const Arcs& arcs, Interval t);
    void drop_arcs(const Arcs& arcs);

    WindowParams params_;
    Interval next_ = 0;
    std::vector<std::vector<PeerContact>> peers_;
    std::deque<Arcs> history_;
};

} // namespace oppnet
