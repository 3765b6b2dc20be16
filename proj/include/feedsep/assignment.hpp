#ifndef FEEDSEP_ASSIGNMENT_HPP
#define FEEDSEP_ASSIGNMENT_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "feedsep/graph.hpp"

namespace feedsep {

/// A domain value in 0..k-1.
using Value = int;

/// Total mapping from VarId to Value. The tag keeps observable states and
/// disturbance draws from being mixed up; ordering is lexicographic with
/// the lowest VarId most significant.
template <class Tag>
class BasicAssignment {
public:
    BasicAssignment() = default;
    explicit BasicAssignment(std::vector<Value> values) : values_(std::move(values)) {}

    static BasicAssignment zeros(std::size_t n) { return BasicAssignment(std::vector<Value>(n, 0)); }

    Value operator[](VarId v) const { return values_[v.index]; }
    Value& operator[](VarId v) { return values_[v.index]; }
    std::size_t size() const { return values_.size(); }
    const std::vector<Value>& values() const { return values_; }

    auto operator<=>(const BasicAssignment&) const = default;

private:
    std::vector<Value> values_;
};

struct ObservableTag {};
struct DisturbanceTag {};

/// Values of X_1..X_n.
using XState = BasicAssignment<ObservableTag>;
/// Values of U_1..U_n.
using UDraw = BasicAssignment<DisturbanceTag>;

/// Bijection between total assignments over n variables with domain size k
/// and integers in [0, k^n), preserving lexicographic order.
class StateCodec {
public:
    StateCodec(std::size_t n, int k) : n_(n), k_(k) {}

    std::size_t width() const { return n_; }
    int modulus() const { return k_; }
    /// k^n, or 0 when that overflows 64 bits.
    std::uint64_t state_count() const;

    template <class Tag>
    std::uint64_t encode(const BasicAssignment<Tag>& a) const {
        std::uint64_t code = 0;
        for (Value v : a.values()) code = code * static_cast<std::uint64_t>(k_) + static_cast<std::uint64_t>(v);
        return code;
    }

    template <class Tag>
    BasicAssignment<Tag> decode(std::uint64_t code) const {
        std::vector<Value> values(n_, 0);
        for (std::size_t i = n_; i-- > 0;) {
            values[i] = static_cast<Value>(code % static_cast<std::uint64_t>(k_));
            code /= static_cast<std::uint64_t>(k_);
        }
        return BasicAssignment<Tag>(std::move(values));
    }

private:
    std::size_t n_;
    int k_;
};

}  // namespace feedsep

#endif  // FEEDSEP_ASSIGNMENT_HPP
