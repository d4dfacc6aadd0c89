#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>

namespace ipcat::fresh {

// Global deterministic counter behind every invented binder name.
// Thread-safe (atomic); reset() rebases it, which the CLI does once per
// sample so that runs with the same seed print identical terms.
std::uint64_t next_index();
std::uint64_t current();
void reset(std::uint64_t value = 0);

// prefix + counter, e.g. name("w") -> "w17".
std::string name(const std::string& prefix);

// Same, but skips candidates occurring in any of the given sets.
std::string name_avoiding(const std::string& prefix,
                          std::initializer_list<const std::set<std::string>*> avoid);

}  // namespace ipcat::fresh
