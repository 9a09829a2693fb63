#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace komparo {

// Shortest round-trip decimal form, locale independent. Used everywhere a
// double reaches a file or a report so outputs are byte-reproducible.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Extended real value: -inf < every finite < +inf. The finite payload is
// never NaN and never an IEEE infinity; those are rejected at construction.
class ExtReal {
  public:
    static ExtReal neg_inf() noexcept { return ExtReal(Tag::NegInf, 0.0); }
    static ExtReal pos_inf() noexcept { return ExtReal(Tag::PosInf, 0.0); }
    static ExtReal finite(double v) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("ExtReal::finite payload must be a finite real");
        }
        return ExtReal(Tag::Finite, v);
    }

    bool is_finite() const noexcept { return tag_ == Tag::Finite; }
    bool is_neg_inf() const noexcept { return tag_ == Tag::NegInf; }
    bool is_pos_inf() const noexcept { return tag_ == Tag::PosInf; }

    double value() const {
        if (tag_ != Tag::Finite) {
            throw std::logic_error("ExtReal::value on an infinite value");
        }
        return value_;
    }

    // Total order with the infinities at the ends.
    friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
        if (a.tag_ != b.tag_) {
            return static_cast<int>(a.tag_) <=> static_cast<int>(b.tag_);
        }
        if (a.tag_ != Tag::Finite) return std::strong_ordering::equal;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        return (a <=> b) == std::strong_ordering::equal;
    }

    ExtReal operator-() const noexcept {
        switch (tag_) {
            case Tag::NegInf: return pos_inf();
            case Tag::PosInf: return neg_inf();
            default: return ExtReal(Tag::Finite, -value_);
        }
    }

    // Serialized tokens are exactly "-inf" / "+inf" for the infinities.
    std::string str() const {
        switch (tag_) {
            case Tag::NegInf: return "-inf";
            case Tag::PosInf: return "+inf";
            default: return format_double(value_);
        }
    }

    // Lossy view as an IEEE double (infinities map to +-infinity).
    double as_double() const noexcept {
        switch (tag_) {
            case Tag::NegInf: return -std::numeric_limits<double>::infinity();
            case Tag::PosInf: return std::numeric_limits<double>::infinity();
            default: return value_;
        }
    }

  private:
    enum class Tag : std::uint8_t { NegInf = 0, Finite = 1, PosInf = 2 };
    ExtReal(Tag tag, double v) : tag_(tag), value_(v) {}
    Tag tag_;
    double value_;
};

}  // namespace komparo
