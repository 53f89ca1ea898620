#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace reslim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a computed quantity fails an internal consistency check.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A nonnegative real or +infinity, with infinity carried as a tag.
class ExtReal {
public:
    constexpr ExtReal() = default;
    constexpr ExtReal(double v) : value_(v) {}

    static constexpr ExtReal infinity() {
        ExtReal e;
        e.infinite_ = true;
        return e;
    }

    constexpr bool is_finite() const { return !infinite_; }
    constexpr bool is_infinite() const { return infinite_; }

    double value() const {
        if (infinite_) throw Error("value requested from an infinite quantity");
        return value_;
    }
    /// Float view, +inf for the tagged infinity. Only for printing and min/max folds.
    double as_double() const { return infinite_ ? std::numeric_limits<double>::infinity() : value_; }

    friend bool operator<(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
    friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
    friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }
    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

inline ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
inline ExtReal min(const ExtReal& a, const ExtReal& b) { return a < b ? a : b; }

}  // namespace reslim
