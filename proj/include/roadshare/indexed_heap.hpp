#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "roadshare/common.hpp"

namespace roadshare {

/// Addressable binary min-heap over ids 0..capacity-1, keyed by double.
/// Supports insert, extract-min, and general update-key (keys may rise as
/// well as fall; the label-correcting searches need both directions).
/// Ties break toward the smaller id so traversal orders are deterministic.
class IndexedHeap {
  public:
    explicit IndexedHeap(std::size_t capacity)
        : pos_(capacity, kAbsent) {}

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    bool contains(std::int64_t id) const { return pos_[id] != kAbsent; }

    void insert(std::int64_t id, double key) {
        assert(pos_[id] == kAbsent);
        pos_[id] = static_cast<std::int64_t>(heap_.size());
        heap_.push_back({key, id});
        sift_up(heap_.size() - 1);
    }

    void update_key(std::int64_t id, double key) {
        std::int64_t i = pos_[id];
        assert(i != kAbsent);
        double old = heap_[i].key;
        heap_[i].key = key;
        if (key < old) {
            sift_up(static_cast<std::size_t>(i));
        } else if (old < key) {
            sift_down(static_cast<std::size_t>(i));
        }
    }

    /// Insert if absent, otherwise update the key.
    void push_or_update(std::int64_t id, double key) {
        if (contains(id)) {
            update_key(id, key);
        } else {
            insert(id, key);
        }
    }

    std::pair<std::int64_t, double> extract_min() {
        assert(!heap_.empty());
        Entry top = heap_.front();
        pos_[top.id] = kAbsent;
        if (heap_.size() > 1) {
            heap_.front() = heap_.back();
            pos_[heap_.front().id] = 0;
        }
        heap_.pop_back();
        if (!heap_.empty()) sift_down(0);
        return {top.id, top.key};
    }

  private:
    struct Entry {
        double key;
        std::int64_t id;
    };
    static constexpr std::int64_t kAbsent = -1;

    static bool less(const Entry& a, const Entry& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.id < b.id;
    }

    void sift_up(std::size_t i) {
        Entry e = heap_[i];
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            if (!less(e, heap_[parent])) break;
            heap_[i] = heap_[parent];
            pos_[heap_[i].id] = static_cast<std::int64_t>(i);
            i = parent;
        }
        heap_[i] = e;
        pos_[e.id] = static_cast<std::int64_t>(i);
    }

    void sift_down(std::size_t i) {
        Entry e = heap_[i];
        const std::size_t n = heap_.size();
        for (;;) {
            std::size_t child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && less(heap_[child + 1], heap_[child])) ++child;
            if (!less(heap_[child], e)) break;
            heap_[i] = heap_[child];
            pos_[heap_[i].id] = static_cast<std::int64_t>(i);
            i = child;
        }
        heap_[i] = e;
        pos_[e.id] = static_cast<std::int64_t>(i);
    }

    std::vector<Entry> heap_;
    std::vector<std::int64_t> pos_;
};

}  // namespace roadshare
