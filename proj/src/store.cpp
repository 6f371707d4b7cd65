#include "mesh/store.hpp"

#include <algorithm>

namespace mesh {

AddResult MessageQueue::add(Message m, int32_t timer) {
    if (entries_.size() >= cap_) return AddResult::QueueFull;
    if (pool_ && pool_->total >= pool_->global_cap) return AddResult::PoolFull;
    entries_.push_back(QueueEntry{std::move(m), timer});
    if (pool_) ++pool_->total;
    high_water_ = std::max(high_water_, entries_.size());
    return AddResult::Accepted;
}

const Message* MessageQueue::select_first() const {
    return entries_.empty() ? nullptr : &entries_.front().message;
}

void MessageQueue::destroy_first() {
    if (entries_.empty()) return;
    entries_.pop_front();
    if (pool_) --pool_->total;
}

bool MessageQueue::search(const MessageId& id) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const QueueEntry& e) { return e.message.id == id; });
}

int MessageQueue::timer_tick() {
    int removed = 0;
    if (!entries_.empty() && entries_.front().timer <= 0) {
        destroy_first();
        removed = 1;
    }
    for (QueueEntry& e : entries_)
        if (e.timer != kNoExpiry) --e.timer;
    return removed;
}

std::vector<std::string> MessageQueue::show_all() const {
    std::vector<std::string> lines;
    lines.reserve(entries_.size());
    for (const QueueEntry& e : entries_) lines.push_back(render_path(e.message));
    return lines;
}

void MessageQueue::clear() {
    if (pool_) pool_->total -= entries_.size();
    entries_.clear();
    sent = 0;
}

}  // namespace mesh
