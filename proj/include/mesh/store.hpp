#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "mesh/wire.hpp"

namespace mesh {

inline constexpr std::size_t kPerQueueCap = 100;
inline constexpr std::size_t kGlobalCap = 198;
inline constexpr int32_t kNoExpiry = INT32_MAX;

struct QueueEntry {
    Message message;
    int32_t timer = 0;  // remaining retention cycles
};

// Shared between the two queues of one node; caps their combined size.
struct CapacityPool {
    std::size_t global_cap = kGlobalCap;
    std::size_t total = 0;
};

enum class AddResult { Accepted, QueueFull, PoolFull };

// FIFO of timed entries. Head-only expiry via timer_tick, duplicate
// lookup by message id, per-queue and pooled capacity limits.
class MessageQueue {
public:
    explicit MessageQueue(CapacityPool* pool = nullptr,
                          std::size_t cap = kPerQueueCap)
        : pool_(pool), cap_(cap) {}

    AddResult add(Message m, int32_t timer);

    // Oldest message, without removal; nullptr when empty.
    const Message* select_first() const;
    void destroy_first();

    bool search(const MessageId& id) const;

    // Removes the head if its timer has run out (at most one entry per
    // call), then decrements every remaining timer. Returns 0 or 1.
    int timer_tick();

    std::vector<std::string> show_all() const;

    std::size_t size() const { return entries_.size(); }
    std::size_t cap() const { return cap_; }
    std::size_t high_water() const { return high_water_; }
    const std::deque<QueueEntry>& entries() const { return entries_; }
    void clear();

    // Deliveries of the head message this round; reset by the node loop.
    uint32_t sent = 0;

private:
    std::deque<QueueEntry> entries_;
    CapacityPool* pool_;
    std::size_t cap_;
    std::size_t high_water_ = 0;
};

}  // namespace mesh
