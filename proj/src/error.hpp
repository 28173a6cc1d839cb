#pragma once

#include <stdexcept>
#include <string>

namespace hs {

// Status codes shared with the C API and the CLI exit status.
enum class Status : int {
    ok = 0,
    validation = 1,   // bad input, domain error, pole, unsupported field
    budget = 2,       // search or truncation budget exhausted, integer overflow
    invariant = 3,    // internal cross-check failed
};

class Error : public std::runtime_error {
public:
    Error(Status s, const std::string& msg) : std::runtime_error(msg), status_(s) {}
    Status status() const { return status_; }

private:
    Status status_;
};

[[noreturn]] inline void fail_validation(const std::string& msg) { throw Error(Status::validation, msg); }
[[noreturn]] inline void fail_budget(const std::string& msg) { throw Error(Status::budget, msg); }
[[noreturn]] inline void fail_invariant(const std::string& msg) { throw Error(Status::invariant, msg); }

} // namespace hs
