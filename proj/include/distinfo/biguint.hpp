#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "distinfo/errors.hpp"

namespace distinfo {

// Unsigned big integer, base 2^32 little-endian limbs. Supports just what the
// exact counting paths need: multiply / exact-divide by small factors, log2,
// decimal rendering.
class BigUint {
  public:
    BigUint() : limbs_{0} {}
    explicit BigUint(std::uint64_t v) {
        limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
        if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }

    bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

    void mul_small(std::uint32_t f) {
        std::uint64_t carry = 0;
        for (std::uint32_t& limb : limbs_) {
            const std::uint64_t prod = static_cast<std::uint64_t>(limb) * f + carry;
            limb = static_cast<std::uint32_t>(prod & 0xffffffffULL);
            carry = prod >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    }

    // Division must be exact; a nonzero remainder means the caller's algebra
    // is wrong, so it is treated as an internal error.
    void div_small_exact(std::uint32_t d) {
        if (d == 0) throw contract_error("BigUint: division by zero");
        std::uint64_t rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            const std::uint64_t cur = (rem << 32) | limbs_[i];
            limbs_[i] = static_cast<std::uint32_t>(cur / d);
            rem = cur % d;
        }
        if (rem != 0) throw numerical_error("BigUint: inexact division");
        trim();
    }

    bool operator==(const BigUint& o) const { return limbs_ == o.limbs_; }

    // Bits needed to represent the value (0 for value 0).
    std::size_t bit_length() const {
        if (is_zero()) return 0;
        std::size_t bits = (limbs_.size() - 1) * 32;
        std::uint32_t top = limbs_.back();
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }

    // log2 of the value via the top ~96 bits; relative error ~1e-16.
    double log2() const {
        if (is_zero()) throw contract_error("BigUint: log2 of zero");
        const std::size_t n = limbs_.size();
        double top = 0.0;
        const std::size_t take = n < 3 ? n : 3;
        for (std::size_t i = 0; i < take; ++i)
            top = top * 4294967296.0 + static_cast<double>(limbs_[n - 1 - i]);
        return std::log2(top) + 32.0 * static_cast<double>(n - take);
    }

    std::string to_string() const {
        std::vector<std::uint32_t> work = limbs_;
        std::string digits;
        auto all_zero = [&] {
            for (std::uint32_t w : work)
                if (w) return false;
            return true;
        };
        if (all_zero()) return "0";
        while (!all_zero()) {
            std::uint64_t rem = 0;
            for (std::size_t i = work.size(); i-- > 0;) {
                const std::uint64_t cur = (rem << 32) | work[i];
                work[i] = static_cast<std::uint32_t>(cur / 1000000000ULL);
                rem = cur % 1000000000ULL;
            }
            for (int k = 0; k < 9; ++k) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        return std::string(digits.rbegin(), digits.rend());
    }

  private:
    void trim() {
        while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
    }

    std::vector<std::uint32_t> limbs_;
};

}  // namespace distinfo
