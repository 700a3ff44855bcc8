#include <fmagent/pipeline/worker_pool.hpp>

namespace fmagent {

    WorkerPool::WorkerPool(std::string name, std::size_t workers, std::size_t queue_capacity) : _name(std::move(name)), _queue(queue_capacity)
    {
        if (workers == 0)
            throw std::invalid_argument(_name + ": worker count must be positive");
        _threads.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i)
            _threads.emplace_back([this] { _loop(); });
    }

    WorkerPool::~WorkerPool() { shutdown(); }

    void WorkerPool::submit(Task task) { _queue.push(std::move(task)); }

    void WorkerPool::shutdown()
    {
        std::call_once(_shutdown_once, [this] {
            _queue.close();
            for (auto& t : _threads)
                if (t.joinable())
                    t.join();
        });
    }

    void WorkerPool::_loop()
    {
        while (auto task = _queue.pop()) {
            try {
                (*task)();
            }
            catch (...) {
                ++_escaped;
            }
            ++_completed;
        }
    }

} // namespace fmagent
