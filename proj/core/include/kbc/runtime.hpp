#pragma once

// Deadlines and the worker pool used by the parallel completion phases.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "kbc/term.hpp"

namespace kbc {

class TimeoutError : public Error {
 public:
  TimeoutError() : Error("time budget exhausted") {}
};

class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget) : at_(Clock::now() + budget) {}

  static Deadline never() { return Deadline(); }

  bool expired() const { return at_ && Clock::now() >= *at_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }
  std::chrono::milliseconds remaining() const;

 private:
  std::optional<Clock::time_point> at_;
};

/// Worker count from KBCV_WORKERS, else every available hardware thread.
std::size_t default_worker_count();

/// Fixed pool of worker threads running indexed batches. `run(n, f)` calls
/// f(0) ... f(n-1), each exactly once, and returns when all are done. The
/// caller thread participates. With one worker (or `parallel == false`) the
/// tasks run inline in ordinal order.
class TaskPool {
 public:
  explicit TaskPool(std::size_t workers = default_worker_count());
  ~TaskPool();
  TaskPool(const TaskPool&) = delete;
  TaskPool& operator=(const TaskPool&) = delete;

  std::size_t workers() const { return threads_.size() + 1; }

  void run(std::size_t n, const std::function<void(std::size_t)>& task);

  /// Maps f over 0..n-1; results are ordered by ordinal.
  template <class F>
  auto map(std::size_t n, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    run(n, [&](std::size_t i) { slots[i].emplace(f(i)); });
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
  }

 private:
  struct Batch {
    const std::function<void(std::size_t)>* task = nullptr;
    std::size_t size = 0;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex error_mutex;
    std::exception_ptr error;
  };

  void work(Batch& batch);
  void worker_loop();

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable finished_;
  Batch* batch_ = nullptr;
  std::uint64_t generation_ = 0;
  std::size_t active_ = 0;
  bool stop_ = false;
};

}  // namespace kbc
