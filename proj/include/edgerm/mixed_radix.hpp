#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "edgerm/error.hpp"

namespace edgerm {

/// Dense index over a product of finite sets. The first coordinate is the
/// most significant digit, so indices enumerate tuples lexicographically.
class MixedRadix {
public:
    MixedRadix() = default;

    explicit MixedRadix(std::vector<std::uint64_t> radices) : radices_(std::move(radices)) {
        strides_.assign(radices_.size(), 1);
        size_ = 1;
        for (std::size_t k = radices_.size(); k-- > 0;) {
            if (radices_[k] == 0) throw DomainError("mixed radix with a zero-sized coordinate");
            strides_[k] = size_;
            if (size_ > std::numeric_limits<std::uint64_t>::max() / radices_[k])
                throw ResourceError("mixed radix product overflows 64 bits");
            size_ *= radices_[k];
        }
    }

    std::uint64_t size() const { return size_; }
    std::size_t width() const { return radices_.size(); }
    const std::vector<std::uint64_t>& radices() const { return radices_; }
    std::uint64_t stride(std::size_t k) const { return strides_[k]; }

    std::uint64_t digit(std::uint64_t index, std::size_t k) const { return (index / strides_[k]) % radices_[k]; }

    void decode(std::uint64_t index, std::span<std::uint64_t> out) const {
        for (std::size_t k = 0; k < radices_.size(); ++k) out[k] = digit(index, k);
    }

    std::vector<std::uint64_t> decode(std::uint64_t index) const {
        std::vector<std::uint64_t> out(radices_.size());
        decode(index, out);
        return out;
    }

    template <class Digits>
    std::uint64_t encode(const Digits& digits) const {
        std::uint64_t index = 0;
        std::size_t k = 0;
        for (auto d : digits) {
            if (static_cast<std::uint64_t>(d) >= radices_[k]) throw DomainError("digit out of range in mixed radix encode");
            index += static_cast<std::uint64_t>(d) * strides_[k];
            ++k;
        }
        if (k != radices_.size()) throw DomainError("wrong number of digits in mixed radix encode");
        return index;
    }

private:
    std::vector<std::uint64_t> radices_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t size_ = 1;
};

}  // namespace edgerm
