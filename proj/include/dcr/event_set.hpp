#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace dcr {

using event_index = std::size_t;

/// Fixed-universe set of event indices, stored as a bitset.
///
/// Every set belonging to one graph shares the same universe size, so the
/// binary operators assume equal sizes.
class event_set {
public:
    event_set() = default;
    explicit event_set(std::size_t universe)
        : universe_{universe}, words_((universe + 63) / 64, 0) {}
    event_set(std::size_t universe, std::initializer_list<event_index> members)
        : event_set(universe) {
        for (auto e : members) insert(e);
    }

    static event_set full(std::size_t universe) {
        event_set s(universe);
        for (event_index e = 0; e < universe; ++e) s.insert(e);
        return s;
    }

    [[nodiscard]] std::size_t universe() const noexcept { return universe_; }

    void insert(event_index e) { words_[e / 64] |= bit(e); }
    void erase(event_index e) { words_[e / 64] &= ~bit(e); }
    [[nodiscard]] bool contains(event_index e) const {
        return e < universe_ && (words_[e / 64] & bit(e)) != 0;
    }

    [[nodiscard]] bool empty() const noexcept {
        for (auto w : words_)
            if (w != 0) return false;
        return true;
    }

    [[nodiscard]] std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    [[nodiscard]] bool subset_of(const event_set& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & ~other.words_[i]) != 0) return false;
        return true;
    }

    [[nodiscard]] bool intersects(const event_set& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & other.words_[i]) != 0) return true;
        return false;
    }

    event_set& operator|=(const event_set& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    event_set& operator&=(const event_set& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    event_set& operator-=(const event_set& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend event_set operator|(event_set a, const event_set& b) { return a |= b; }
    friend event_set operator&(event_set a, const event_set& b) { return a &= b; }
    friend event_set operator-(event_set a, const event_set& b) { return a -= b; }

    friend bool operator==(const event_set&, const event_set&) = default;
    friend auto operator<=>(const event_set&, const event_set&) = default;

    /// Members in ascending index order.
    [[nodiscard]] std::vector<event_index> members() const {
        std::vector<event_index> out;
        for_each([&](event_index e) { out.push_back(e); });
        return out;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits != 0) {
                const auto tz = static_cast<std::size_t>(std::countr_zero(bits));
                f(w * 64 + tz);
                bits &= bits - 1;
            }
        }
    }

    [[nodiscard]] std::size_t hash() const noexcept {
        std::size_t h = universe_;
        for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

private:
    static std::uint64_t bit(event_index e) { return std::uint64_t{1} << (e % 64); }

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace dcr

template <>
struct std::hash<dcr::event_set> {
    std::size_t operator()(const dcr::event_set& s) const noexcept { return s.hash(); }
};
