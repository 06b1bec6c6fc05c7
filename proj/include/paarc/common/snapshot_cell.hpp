#pragma once

#include <atomic>
#include <memory>
#include <mutex>

namespace paarc {

/// Copy-on-write holder: readers load an immutable snapshot without taking
/// the writer lock; writers serialize among themselves and publish a new
/// value with a single atomic swap.
template <typename T>
class SnapshotCell {
public:
    explicit SnapshotCell(T initial = T{}) : current_(std::make_shared<const T>(std::move(initial))) {}

    std::shared_ptr<const T> load() const { return std::atomic_load_explicit(&current_, std::memory_order_acquire); }

    /// Applies `fn(const T&) -> T` to the current value and publishes the
    /// result. Exceptions from `fn` leave the cell unchanged.
    template <typename Fn>
    std::shared_ptr<const T> update(Fn&& fn) {
        std::lock_guard lock(writer_);
        auto next = std::make_shared<const T>(fn(*load()));
        std::atomic_store_explicit(&current_, next, std::memory_order_release);
        return next;
    }

private:
    std::shared_ptr<const T> current_;
    std::mutex writer_;
};

}  // namespace paarc
