/*
 * check.h
 * Runtime contract checks. All preconditions in the library throw
 * std::runtime_error with a message naming the operation and the offense.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace nanofield {

[[noreturn]] inline void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

inline void check(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
}

}  // namespace nanofield
