#pragma once
#include <stdexcept>
#include <string>

namespace kfree {

// Thrown when a request exceeds a configured resource limit.  The message
// names the violated limit and the requested size so callers (and the CLI)
// can report something actionable.
class budget_error : public std::runtime_error {
public:
    budget_error(const std::string& limit_name, unsigned long long requested,
                 unsigned long long limit)
        : std::runtime_error(limit_name + ": requested " + std::to_string(requested) +
                             ", limit " + std::to_string(limit)) {}
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kfree
