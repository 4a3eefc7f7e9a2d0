#ifndef CWC_SPSC_QUEUE_HPP
#define CWC_SPSC_QUEUE_HPP

#include <atomic>
#include <cstddef>
#include <memory>
#include <new>
#include <optional>
#include <stdexcept>
#include <utility>

namespace cwc {

/// Bounded wait-free single-producer/single-consumer FIFO.
///
/// Exactly one thread may call `push` and exactly one thread may call `pop`.
/// The only synchronisation is a release store of the producer (resp.
/// consumer) index paired with an acquire load on the other side; each side
/// keeps a cached copy of the opposite index to avoid touching the shared
/// cache line on every operation.
template <typename T>
class SpscQueue {
 public:
  explicit SpscQueue(std::size_t capacity) : capacity_(capacity), slots_(new Slot[capacity + 1]) {
    if (capacity == 0) throw std::invalid_argument("channel capacity must be positive");
  }

  SpscQueue(const SpscQueue&) = delete;
  SpscQueue& operator=(const SpscQueue&) = delete;

  ~SpscQueue() {
    while (pop()) {
    }
  }

  std::size_t capacity() const { return capacity_; }

  /// Moves `item` in and returns true, or returns false (item untouched) when full.
  bool push(T&& item) {
    const std::size_t tail = tail_.load(std::memory_order_relaxed);
    const std::size_t next = advance(tail);
    if (next == head_cache_) {
      head_cache_ = head_.load(std::memory_order_acquire);
      if (next == head_cache_) return false;
    }
    ::new (slots_[tail].bytes) T(std::move(item));
    tail_.store(next, std::memory_order_release);
    return true;
  }

  bool push(const T& item) {
    T copy(item);
    return push(std::move(copy));
  }

  /// Oldest item, or nullopt when empty.
  std::optional<T> pop() {
    const std::size_t head = head_.load(std::memory_order_relaxed);
    if (head == tail_cache_) {
      tail_cache_ = tail_.load(std::memory_order_acquire);
      if (head == tail_cache_) return std::nullopt;
    }
    T* slot = std::launder(reinterpret_cast<T*>(slots_[head].bytes));
    std::optional<T> out(std::move(*slot));
    slot->~T();
    head_.store(advance(head), std::memory_order_release);
    return out;
  }

  /// Approximate; exact only when called from one side with the other idle.
  bool empty() const { return head_.load(std::memory_order_acquire) == tail_.load(std::memory_order_acquire); }

  std::size_t size() const {
    const std::size_t h = head_.load(std::memory_order_acquire);
    const std::size_t t = tail_.load(std::memory_order_acquire);
    return t >= h ? t - h : t + capacity_ + 1 - h;
  }

 private:
  struct Slot {
    alignas(T) std::byte bytes[sizeof(T)];
  };

  static constexpr std::size_t kLine = 64;

  std::size_t advance(std::size_t i) const { return i == capacity_ ? 0 : i + 1; }

  const std::size_t capacity_;
  std::unique_ptr<Slot[]> slots_;

  alignas(kLine) std::atomic<std::size_t> head_{0};  // consumer index
  std::size_t tail_cache_ = 0;                        // consumer's view of tail_
  alignas(kLine) std::atomic<std::size_t> tail_{0};  // producer index
  std::size_t head_cache_ = 0;                        // producer's view of head_
};

}  // namespace cwc

#endif  // CWC_SPSC_QUEUE_HPP
