#include "crnsim/des_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crnsim {

const char* event_kind_name(EventKind k) noexcept {
  switch (k) {
    case EventKind::ExternalArrival: return "ExternalArrival";
    case EventKind::ServiceCompletion: return "ServiceCompletion";
    case EventKind::EndOfWarmup: return "EndOfWarmup";
    case EventKind::EndOfRun: return "EndOfRun";
  }
  return "Unknown";
}

namespace {
struct Later {
  bool operator()(const Event& a, const Event& b) const noexcept {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};
}  // namespace

void EventCalendar::push(const Event& e) {
  heap_.push_back(e);
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

const Event& EventCalendar::top() const {
  if (heap_.empty()) throw std::logic_error("EventCalendar::top on empty calendar");
  return heap_.front();
}

Event EventCalendar::pop() {
  if (heap_.empty()) throw std::logic_error("EventCalendar::pop on empty calendar");
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  Event e = heap_.back();
  heap_.pop_back();
  return e;
}

std::uint64_t Engine::schedule(double t, Event e) {
  if (!std::isfinite(t)) {
    throw std::logic_error("Engine::schedule: non-finite event time");
  }
  if (t < clock_) {
    throw std::logic_error("Engine::schedule: event at t=" + std::to_string(t) +
                           " lies before the clock at " + std::to_string(clock_));
  }
  e.time = t;
  e.seq = next_seq_++;
  calendar_.push(e);
  return e.seq;
}

double Engine::run(EventHandler& handler, double horizon) {
  if (!std::isfinite(horizon) || horizon < clock_) {
    throw std::invalid_argument("Engine::run: horizon must be finite and >= clock");
  }
  stop_ = false;
  while (!stop_ && !calendar_.empty()) {
    if (calendar_.top().time > horizon) break;
    const Event e = calendar_.pop();
    clock_ = e.time;  // (time, seq) heap order makes this monotone
    ++dispatched_;
    if (max_events_ != 0 && dispatched_ > max_events_) {
      throw std::runtime_error("Engine::run: event budget of " +
                               std::to_string(max_events_) + " exhausted");
    }
    if (trace_) trace_->on_event(e);
    handler.on_event(*this, e);
  }
  return clock_;
}

}  // namespace crnsim
