#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <utility>

namespace mesh {

// Lightweight success-or-error-message carrier for parse-style functions.
template <typename T>
class Result {
public:
    static Result ok(T value) {
        Result r;
        r.value_ = std::move(value);
        return r;
    }
    static Result err(std::string message) {
        Result r;
        r.error_ = std::move(message);
        return r;
    }

    explicit operator bool() const { return value_.has_value(); }

    const T& operator*() const {
        assert(value_);
        return *value_;
    }
    T& operator*() {
        assert(value_);
        return *value_;
    }
    const T* operator->() const { return &**this; }

    const std::string& error() const { return error_; }

private:
    Result() = default;
    std::optional<T> value_;
    std::string error_;
};

}  // namespace mesh
