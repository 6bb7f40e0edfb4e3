#pragma once

#include <cmath>

#include "lzsm/error.hpp"

namespace lzsm::specfun {

// Real number extended by explicit -inf/+inf sentinels.
class ExtReal {
public:
    enum class Kind { finite, neg_inf, pos_inf };

    ExtReal(double x = 0.0) : kind_(Kind::finite), value_(x) {  // NOLINT: implicit on purpose
        if (std::isnan(x)) throw DomainError("ExtReal: NaN argument");
        if (std::isinf(x)) kind_ = x > 0 ? Kind::pos_inf : Kind::neg_inf;
    }

    static ExtReal neg_inf() { return ExtReal(Kind::neg_inf); }
    static ExtReal pos_inf() { return ExtReal(Kind::pos_inf); }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::finite; }
    double value() const noexcept {
        switch (kind_) {
            case Kind::neg_inf: return -HUGE_VAL;
            case Kind::pos_inf: return HUGE_VAL;
            default: return value_;
        }
    }

    // Shift by a finite amount; sentinels absorb it.
    ExtReal operator+(double d) const { return is_finite() ? ExtReal(value_ + d) : *this; }

private:
    explicit ExtReal(Kind k) : kind_(k), value_(0.0) {}
    Kind kind_;
    double value_;
};

}  // namespace lzsm::specfun
