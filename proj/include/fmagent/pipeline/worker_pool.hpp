#ifndef FMAGENT_PIPELINE_WORKER_POOL_HPP
#define FMAGENT_PIPELINE_WORKER_POOL_HPP

#include <atomic>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <fmagent/pipeline/bounded_queue.hpp>

namespace fmagent {

    /// Fixed set of threads draining one bounded task queue. Tasks must not
    /// throw; an escaping exception is counted and swallowed.
    class WorkerPool {
    public:
        using Task = std::function<void()>;

        WorkerPool(std::string name, std::size_t workers, std::size_t queue_capacity);
        ~WorkerPool();

        WorkerPool(const WorkerPool&) = delete;
        WorkerPool& operator=(const WorkerPool&) = delete;

        /// Blocks while the queue is full. Throws QueueClosed after shutdown.
        void submit(Task task);

        /// Closes the queue, lets workers finish what is queued, joins them.
        void shutdown();

        const std::string& name() const { return _name; }
        std::size_t workers() const { return _threads.size(); }
        std::size_t queued() const { return _queue.size(); }
        std::size_t completed() const { return _completed.load(); }
        std::size_t escaped_exceptions() const { return _escaped.load(); }

    private:
        void _loop();

        std::string _name;
        BoundedQueue<Task> _queue;
        std::vector<std::thread> _threads;
        std::atomic<std::size_t> _completed{0};
        std::atomic<std::size_t> _escaped{0};
        std::once_flag _shutdown_once;
    };

} // namespace fmagent

#endif
