#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <vector>

namespace confl {

using Clock = std::chrono::steady_clock;
using Duration = std::chrono::milliseconds;

/// Cooperative cancellation: a deadline plus cancel flags inherited from
/// every enclosing parallel scope. Long-running searches poll expired()
/// between candidates.
class RunControl {
public:
    using CancelFlag = std::shared_ptr<std::atomic<bool>>;

    RunControl() : deadline_(Clock::time_point::max()) {}
    explicit RunControl(Clock::time_point deadline) : deadline_(deadline) {}

    static RunControl unbounded() { return RunControl(); }
    static RunControl within(Duration d) { return RunControl(Clock::now() + d); }

    /// Child scope that additionally expires after `d` from now.
    RunControl restricted(Duration d) const {
        Clock::time_point child = Clock::now() + d;
        RunControl out(child < deadline_ ? child : deadline_);
        out.cancels_ = cancels_;
        return out;
    }

    /// Child scope that also honors the given cancel flag.
    RunControl with_cancel(CancelFlag cancel) const {
        RunControl out(deadline_);
        out.cancels_ = cancels_;
        out.cancels_.push_back(std::move(cancel));
        return out;
    }

    bool cancelled() const {
        for (const CancelFlag& c : cancels_)
            if (c->load(std::memory_order_relaxed)) return true;
        return false;
    }

    bool expired() const { return cancelled() || Clock::now() >= deadline_; }

    Clock::time_point deadline() const { return deadline_; }

private:
    Clock::time_point deadline_;
    std::vector<CancelFlag> cancels_;
};

}  // namespace confl
