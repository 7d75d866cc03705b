#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace percbound {

/// Thread count from PERC_BOUND_THREADS, falling back to hardware concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("PERC_BOUND_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Fixed-size worker pool. `run(tasks, fn)` calls fn(t) for t in [0, tasks)
/// and blocks until all calls return. Task-to-worker assignment is dynamic,
/// so callers must make each task's output independent of which worker ran it.
class ThreadPool {
 public:
  explicit ThreadPool(unsigned threads) : threads_(std::max(1u, threads)) {
    for (unsigned w = 1; w < threads_; ++w) workers_.emplace_back([this] { worker_loop(); });
  }

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  ~ThreadPool() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& w : workers_) w.join();
  }

  unsigned size() const noexcept { return threads_; }

  void run(std::size_t tasks, const std::function<void(std::size_t)>& fn) {
    if (tasks == 0) return;
    if (threads_ == 1 || tasks == 1) {
      for (std::size_t t = 0; t < tasks; ++t) fn(t);
      return;
    }
    {
      std::lock_guard lock(mutex_);
      job_ = &fn;
      total_ = tasks;
      next_.store(0);
      pending_ = threads_ - 1;
      error_ = nullptr;
      ++generation_;
    }
    wake_.notify_all();
    drain();
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return pending_ == 0; });
    job_ = nullptr;
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void drain() {
    for (;;) {
      const std::size_t t = next_.fetch_add(1);
      if (t >= total_) return;
      try {
        (*job_)(t);
      } catch (...) {
        std::lock_guard lock(mutex_);
        if (!error_) error_ = std::current_exception();
        next_.store(total_);
      }
    }
  }

  void worker_loop() {
    std::size_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      drain();
      {
        std::lock_guard lock(mutex_);
        --pending_;
      }
      done_.notify_one();
    }
  }

  unsigned threads_;
  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t total_ = 0;
  std::atomic<std::size_t> next_{0};
  unsigned pending_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

/// Splits [0, n) into chunks of `chunk` items and runs body(begin, end) per chunk.
/// The chunk boundaries depend only on n and chunk, never on the worker count.
inline void parallel_chunks(ThreadPool& pool, std::size_t n, std::size_t chunk,
                            const std::function<void(std::size_t, std::size_t)>& body) {
  chunk = std::max<std::size_t>(1, chunk);
  const std::size_t tasks = (n + chunk - 1) / chunk;
  pool.run(tasks, [&](std::size_t t) {
    const std::size_t b = t * chunk;
    body(b, std::min(n, b + chunk));
  });
}

}  // namespace percbound
