#ifndef CWC_FARM_HPP
#define CWC_FARM_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <deque>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cwc/spsc_queue.hpp"

namespace cwc {

inline constexpr std::size_t kDefaultChannelCapacity = 512;

/// Progressive wait used by stage loops when a channel is full or empty:
/// yields first, then short sleeps that lengthen while the stage stays idle.
class Backoff {
 public:
  void pause() {
    if (rounds_ < 64) {
      std::this_thread::yield();
    } else {
      std::this_thread::sleep_for(std::chrono::microseconds(rounds_ < 256 ? 20 : 200));
    }
    ++rounds_;
  }
  void reset() { rounds_ = 0; }

 private:
  unsigned rounds_ = 0;
};

struct FarmOptions {
  std::size_t workers = 1;
  bool feedback = false;
  std::size_t capacity = kDefaultChannelCapacity;
};

struct FarmReport {
  std::size_t emitted = 0;
  std::size_t fed_back = 0;
  std::vector<std::size_t> processed;  // per worker
  std::vector<double> busy_seconds;    // per worker, time spent inside the worker function
  double wall_seconds = 0.0;
};

class FarmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// What the emitter wants to do next.
template <typename Task>
struct Emission {
  enum class Kind { Item, Wait, End };

  Kind kind = Kind::Wait;
  std::optional<Task> task;
  std::optional<std::size_t> worker;  // nullopt: least-loaded worker

  static Emission item(Task t, std::optional<std::size_t> w = std::nullopt) {
    return Emission{Kind::Item, std::move(t), w};
  }
  static Emission wait() { return Emission{}; }
  static Emission end() { return Emission{Kind::End, std::nullopt, std::nullopt}; }
};

/// Emitter's view of the farm: items routed back by the collector and the
/// number of items each worker has been sent but not yet finished.
template <typename Task>
class EmitterContext {
 public:
  EmitterContext(std::size_t workers, const std::vector<std::atomic<std::size_t>>& completed)
      : sent_(workers, 0), completed_(completed) {}

  std::size_t workers() const { return sent_.size(); }

  std::size_t outstanding(std::size_t w) const { return sent_[w] - completed_[w].load(std::memory_order_acquire); }

  /// Lowest-index worker with nothing outstanding.
  std::optional<std::size_t> idle_worker() const {
    for (std::size_t w = 0; w < workers(); ++w)
      if (outstanding(w) == 0) return w;
    return std::nullopt;
  }

  std::size_t least_loaded() const {
    std::size_t best = 0;
    for (std::size_t w = 1; w < workers(); ++w)
      if (outstanding(w) < outstanding(best)) best = w;
    return best;
  }

  std::deque<Task>& feedback() { return feedback_; }

 private:
  template <typename, typename, typename, typename, typename>
  friend class Farm;

  std::vector<std::size_t> sent_;
  const std::vector<std::atomic<std::size_t>>& completed_;
  std::deque<Task> feedback_;
};

/// Collector's handle on the feedback channel. Items that do not fit in the
/// channel are held locally and retried, so the collector never blocks.
template <typename Task>
class FeedbackPort {
 public:
  explicit FeedbackPort(SpscQueue<Task>* channel) : channel_(channel) {}

  void send(Task t) {
    if (!channel_) throw std::logic_error("farm was built without a feedback channel");
    overflow_.push_back(std::move(t));
    ++sent_;
    flush();
  }

  void flush() {
    while (!overflow_.empty() && channel_->push(std::move(overflow_.front()))) overflow_.pop_front();
  }

  std::size_t sent() const { return sent_; }

 private:
  SpscQueue<Task>* channel_;
  std::deque<Task> overflow_;
  std::size_t sent_ = 0;
};

/// emitter -> w workers -> collector, optionally closed by a collector ->
/// emitter feedback channel. Every link is an SPSC queue; the emitter
/// arbitrates fan-out and the collector polls the worker queues round-robin.
template <typename Task, typename Result, typename EmitterFn, typename WorkerFn, typename CollectorFn>
class Farm {
 public:
  Farm(EmitterFn emitter, WorkerFn worker, CollectorFn collector, FarmOptions options)
      : emitter_(std::move(emitter)),
        worker_(std::move(worker)),
        collector_(std::move(collector)),
        options_(options),
        completed_(options.workers) {
    if (options_.workers == 0) throw std::invalid_argument("farm needs at least one worker");
    for (std::size_t i = 0; i < options_.workers; ++i) {
      to_workers_.push_back(std::make_unique<SpscQueue<std::optional<Task>>>(options_.capacity));
      to_collector_.push_back(std::make_unique<SpscQueue<std::optional<Result>>>(options_.capacity));
    }
    if (options_.feedback) feedback_ = std::make_unique<SpscQueue<Task>>(options_.capacity);
    report_.processed.assign(options_.workers, 0);
    report_.busy_seconds.assign(options_.workers, 0.0);
  }

  FarmReport run() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::thread> threads;
    threads.reserve(options_.workers + 2);
    threads.emplace_back([this] { guarded([this] { emitter_loop(); }); });
    for (std::size_t i = 0; i < options_.workers; ++i)
      threads.emplace_back([this, i] { guarded([this, i] { worker_loop(i); }); });
    threads.emplace_back([this] { guarded([this] { collector_loop(); }); });
    for (auto& t : threads) t.join();
    report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (abort_.load()) throw FarmError("farm aborted: " + error_);
    return report_;
  }

 private:
  template <typename F>
  void guarded(F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      fail(e.what());
    } catch (...) {
      fail("unknown exception");
    }
  }

  void fail(const std::string& message) {
    std::lock_guard lock(error_mutex_);
    if (!abort_.exchange(true)) error_ = message;
  }

  bool aborted() const { return abort_.load(std::memory_order_relaxed); }

  template <typename Q, typename V>
  bool push_blocking(Q& q, V&& value) {
    Backoff backoff;
    while (!q.push(std::move(value))) {
      if (aborted()) return false;
      backoff.pause();
    }
    return true;
  }

  void emitter_loop() {
    EmitterContext<Task> ctx(options_.workers, completed_);
    Backoff backoff;
    std::optional<std::optional<Task>> pending;
    std::optional<std::size_t> target;
    while (!aborted()) {
      if (feedback_)
        while (auto fb = feedback_->pop()) ctx.feedback_.push_back(std::move(*fb));
      if (!pending) {
        Emission<Task> e = emitter_(ctx);
        if (e.kind == Emission<Task>::Kind::End) break;
        if (e.kind == Emission<Task>::Kind::Wait) {
          backoff.pause();
          continue;
        }
        if (e.worker && *e.worker >= options_.workers) throw std::out_of_range("emitter targeted a missing worker");
        pending.emplace(std::move(e.task));
        target = e.worker;
      }
      const std::size_t w = target ? *target : ctx.least_loaded();
      if (to_workers_[w]->push(std::move(*pending))) {
        ++ctx.sent_[w];
        ++report_.emitted;
        pending.reset();
        backoff.reset();
      } else {
        backoff.pause();
      }
    }
    for (auto& q : to_workers_)
      if (!push_blocking(*q, std::optional<Task>{})) return;
  }

  void worker_loop(std::size_t index) {
    auto& in = *to_workers_[index];
    auto& out = *to_collector_[index];
    Backoff backoff;
    while (!aborted()) {
      auto message = in.pop();
      if (!message) {
        backoff.pause();
        continue;
      }
      backoff.reset();
      if (!*message) {
        push_blocking(out, std::optional<Result>{});
        return;
      }
      const auto t0 = std::chrono::steady_clock::now();
      std::optional<Result> result(worker_(std::move(**message), index));
      report_.busy_seconds[index] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ++report_.processed[index];
      if (!push_blocking(out, std::move(result))) return;
      completed_[index].fetch_add(1, std::memory_order_release);
    }
  }

  void collector_loop() {
    FeedbackPort<Task> port(feedback_.get());
    std::vector<bool> finished(options_.workers, false);
    std::size_t remaining = options_.workers;
    std::size_t next = 0;
    Backoff backoff;
    while (remaining > 0 && !aborted()) {
      bool got = false;
      for (std::size_t k = 0; k < options_.workers; ++k) {
        const std::size_t i = (next + k) % options_.workers;
        if (finished[i]) continue;
        if (auto message = to_collector_[i]->pop()) {
          got = true;
          next = i + 1;
          if (!*message) {
            finished[i] = true;
            --remaining;
          } else {
            collector_(std::move(**message), port);
          }
          break;
        }
      }
      if (feedback_) port.flush();
      if (got) {
        backoff.reset();
      } else {
        backoff.pause();
      }
    }
    report_.fed_back = port.sent();
  }

  EmitterFn emitter_;
  WorkerFn worker_;
  CollectorFn collector_;
  FarmOptions options_;

  std::vector<std::unique_ptr<SpscQueue<std::optional<Task>>>> to_workers_;
  std::vector<std::unique_ptr<SpscQueue<std::optional<Result>>>> to_collector_;
  std::unique_ptr<SpscQueue<Task>> feedback_;
  std::vector<std::atomic<std::size_t>> completed_;

  std::atomic<bool> abort_{false};
  std::mutex error_mutex_;
  std::string error_;
  FarmReport report_;
};

/// Runs a farm to completion.
///
/// - `emitter(EmitterContext<Task>&) -> Emission<Task>` is polled until it
///   returns `end()`; items routed back by the collector show up in
///   `ctx.feedback()`.
/// - `worker(Task&&, std::size_t worker_index) -> Result`.
/// - `collector(Result&&, FeedbackPort<Task>&)`.
///
/// Throws FarmError if any stage throws.
template <typename Task, typename Result, typename EmitterFn, typename WorkerFn, typename CollectorFn>
FarmReport run_farm(EmitterFn emitter, WorkerFn worker, CollectorFn collector, FarmOptions options) {
  Farm<Task, Result, EmitterFn, WorkerFn, CollectorFn> farm(std::move(emitter), std::move(worker),
                                                            std::move(collector), options);
  return farm.run();
}

}  // namespace cwc

#endif  // CWC_FARM_HPP
