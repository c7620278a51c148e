#include "kbc/runtime.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace kbc {

std::chrono::milliseconds Deadline::remaining() const {
  if (!at_) return std::chrono::milliseconds::max();
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*at_ - Clock::now());
  return std::max(left, std::chrono::milliseconds(0));
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("KBCV_WORKERS")) {
    try {
      long n = std::stol(env);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

TaskPool::TaskPool(std::size_t workers) {
  for (std::size_t i = 1; i < std::max<std::size_t>(workers, 1); ++i) {
    threads_.emplace_back([this] { worker_loop(); });
  }
}

TaskPool::~TaskPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void TaskPool::work(Batch& batch) {
  for (;;) {
    std::size_t i = batch.next.fetch_add(1, std::memory_order_relaxed);
    if (i >= batch.size) return;
    try {
      (*batch.task)(i);
    } catch (...) {
      std::lock_guard lock(batch.error_mutex);
      if (!batch.error) batch.error = std::current_exception();
      // Drain the remaining ordinals so every participant stops early.
      batch.next.store(batch.size, std::memory_order_relaxed);
    }
  }
}

void TaskPool::worker_loop() {
  std::uint64_t seen = 0;
  for (;;) {
    Batch* batch = nullptr;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      batch = batch_;
      if (!batch) continue;  // woke after the batch was already finished
      ++active_;
    }
    work(*batch);
    {
      std::lock_guard lock(mutex_);
      --active_;
    }
    finished_.notify_all();
  }
}

void TaskPool::run(std::size_t n, const std::function<void(std::size_t)>& task) {
  if (n == 0) return;
  if (threads_.empty() || n == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  Batch batch;
  batch.task = &task;
  batch.size = n;
  {
    std::lock_guard lock(mutex_);
    batch_ = &batch;
    ++generation_;
  }
  wake_.notify_all();
  work(batch);
  {
    std::unique_lock lock(mutex_);
    batch_ = nullptr;
    finished_.wait(lock, [&] { return active_ == 0; });
  }
  if (batch.error) std::rethrow_exception(batch.error);
}

}  // namespace kbc
