#include "ipcat/fresh.hpp"

#include <atomic>

namespace ipcat::fresh {

namespace {
std::atomic<std::uint64_t> counter{0};
}

std::uint64_t next_index() { return counter.fetch_add(1); }

std::uint64_t current() { return counter.load(); }

void reset(std::uint64_t value) { counter.store(value); }

std::string name(const std::string& prefix) {
  return prefix + std::to_string(next_index());
}

std::string name_avoiding(const std::string& prefix,
                          std::initializer_list<const std::set<std::string>*> avoid) {
  for (;;) {
    std::string candidate = name(prefix);
    bool taken = false;
    for (const auto* s : avoid) {
      if (s != nullptr && s->count(candidate)) {
        taken = true;
        break;
      }
    }
    if (!taken) return candidate;
  }
}

}  // namespace ipcat::fresh
