#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace rgraph {

using NodeIndex = std::size_t;

inline constexpr std::size_t kMaxNodes = 64;

/// Small fixed-capacity set of node indices backed by a 64-bit mask.
class NodeSet {
public:
    constexpr NodeSet() = default;
    constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}
    NodeSet(std::initializer_list<NodeIndex> nodes) {
        for (auto n : nodes) insert(n);
    }

    static constexpr NodeSet single(NodeIndex n) { return NodeSet(std::uint64_t{1} << n); }
    static constexpr NodeSet first(std::size_t count) {
        return NodeSet(count >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1);
    }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool contains(NodeIndex n) const { return (bits_ >> n) & 1U; }
    constexpr void insert(NodeIndex n) { bits_ |= std::uint64_t{1} << n; }
    constexpr void erase(NodeIndex n) { bits_ &= ~(std::uint64_t{1} << n); }

    constexpr bool intersects(NodeSet o) const { return (bits_ & o.bits_) != 0; }
    constexpr bool subset_of(NodeSet o) const { return (bits_ & ~o.bits_) == 0; }

    constexpr NodeSet operator|(NodeSet o) const { return NodeSet(bits_ | o.bits_); }
    constexpr NodeSet operator&(NodeSet o) const { return NodeSet(bits_ & o.bits_); }
    constexpr NodeSet operator-(NodeSet o) const { return NodeSet(bits_ & ~o.bits_); }
    constexpr NodeSet& operator|=(NodeSet o) { bits_ |= o.bits_; return *this; }
    constexpr NodeSet& operator&=(NodeSet o) { bits_ &= o.bits_; return *this; }
    constexpr NodeSet& operator-=(NodeSet o) { bits_ &= ~o.bits_; return *this; }
    constexpr auto operator<=>(const NodeSet&) const = default;

    /// Lowest member; undefined on an empty set.
    constexpr NodeIndex front() const { return static_cast<NodeIndex>(std::countr_zero(bits_)); }

    std::vector<NodeIndex> to_vector() const {
        std::vector<NodeIndex> out;
        out.reserve(size());
        for (auto b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<NodeIndex>(std::countr_zero(b)));
        return out;
    }

    class iterator {
    public:
        using value_type = NodeIndex;
        using difference_type = std::ptrdiff_t;
        constexpr iterator() = default;
        constexpr explicit iterator(std::uint64_t b) : rest_(b) {}
        constexpr NodeIndex operator*() const { return static_cast<NodeIndex>(std::countr_zero(rest_)); }
        constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
        constexpr iterator operator++(int) { auto t = *this; ++*this; return t; }
        constexpr bool operator==(const iterator&) const = default;

    private:
        std::uint64_t rest_ = 0;
    };
    constexpr iterator begin() const { return iterator(bits_); }
    constexpr iterator end() const { return iterator(0); }

private:
    std::uint64_t bits_ = 0;
};

/// Calls `fn(subset)` for every subset of `universe`, in increasing mask order.
template <typename Fn>
void for_each_subset(NodeSet universe, Fn&& fn) {
    const auto u = universe.bits();
    std::uint64_t s = 0;
    while (true) {
        fn(NodeSet(s));
        if (s == u) break;
        s = (s - u) & u;
    }
}

}  // namespace rgraph
