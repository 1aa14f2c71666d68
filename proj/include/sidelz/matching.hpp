#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sidelz/symbols.hpp"

namespace sidelz {

// Polynomial prefix hashes modulo 2^61 - 1; hash(pos, len) in O(1).
class PrefixHash {
public:
    PrefixHash() = default;
    explicit PrefixHash(std::span<const Symbol> seq);

    std::uint64_t hash(std::size_t pos, std::size_t len) const noexcept;
    std::size_t size() const noexcept { return prefix_.empty() ? 0 : prefix_.size() - 1; }

private:
    std::vector<std::uint64_t> prefix_;
    std::vector<std::uint64_t> power_;
};

// Partition of every length-h window of a sequence into exact equality
// classes. Windows are bucketed by rolling hash and each bucket member is
// verified against its class representative by direct comparison, so two
// positions share a class iff their h-grams are equal.
class GramClasses {
public:
    GramClasses() = default;
    GramClasses(std::span<const Symbol> seq, std::size_t h, const PrefixHash& hash);

    std::size_t gram_length() const noexcept { return h_; }
    // Number of positions that start a full gram.
    std::size_t span_count() const noexcept { return class_of_.size(); }

    std::uint32_t class_of(std::size_t pos) const noexcept { return class_of_[pos]; }
    // Ascending start positions of every gram equal to the one at `pos`.
    std::span<const std::uint32_t> occurrences(std::size_t pos) const noexcept;

private:
    std::size_t h_ = 0;
    std::vector<std::uint32_t> class_of_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> positions_;
};

// Fixed-length parsing statistics for the phrase starting at 0-based
// position P (= (i-1)L), with offsets t in [1, P].
struct RecurrenceResult {
    std::uint64_t s = 0;  // smallest (X,Y)-match offset, 0 if none
    std::uint64_t n = 0;  // rank of s among Y-match offsets in increasing order, 0 if none
    std::uint64_t p = 0;  // total Y-match offsets in [1, P]
    std::uint64_t r = 0;  // smallest X-only match offset, 0 if none

    friend bool operator==(const RecurrenceResult&, const RecurrenceResult&) = default;
};

// Y-only index of length-L grams, all the decoder can build.
class YPhraseIndex {
public:
    YPhraseIndex(std::span<const Symbol> y, std::size_t phrase_length);

    std::size_t phrase_length() const noexcept { return classes_.gram_length(); }

    // p: offsets t in [1, pos] with Y[pos - t, pos - t + L) == Y[pos, pos + L).
    std::uint64_t y_match_count(std::size_t pos) const;
    // Offset of the n-th (1-based) Y-match in increasing-offset order, if it exists.
    std::optional<std::uint64_t> nth_y_match(std::size_t pos, std::uint64_t n) const;

    // Y-match offsets in increasing order: walk backwards from the returned index.
    std::span<const std::uint32_t> earlier_occurrences(std::size_t pos) const;

private:
    PrefixHash hash_;
    GramClasses classes_;
};

// Encoder-side index over both streams.
class FixedMatcher {
public:
    FixedMatcher(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t phrase_length);

    // Throws InputError if pos + L exceeds the sequences.
    RecurrenceResult recurrence(std::size_t pos) const;
    const YPhraseIndex& y_index() const noexcept { return y_index_; }

private:
    std::size_t length_;
    YPhraseIndex y_index_;
    PrefixHash x_hash_;
    GramClasses x_classes_;
};

// One-shot form of FixedMatcher::recurrence. phrase_start is 0-based.
RecurrenceResult fixed_recurrence(const SymbolSequence& x, const SymbolSequence& y,
                                  std::size_t phrase_start, std::size_t phrase_length);

// Longest (X,Y)-match at position u against offsets t in [1, window].
struct WindowMatch {
    std::uint64_t length = 0;   // l_i, already clamped to >= 1
    std::uint64_t y_count = 0;  // c_i: Y-matches of length l_i in the window
    std::uint64_t offset = 0;   // smallest offset realizing l_i; 0 when the length was clamped
    std::uint64_t rank = 0;     // 1-based rank of `offset` among the Y-match offsets; 0 if none

    friend bool operator==(const WindowMatch&, const WindowMatch&) = default;
};

// Y-only window index: counts and ranks Y-matches of arbitrary length.
class WindowYIndex {
public:
    WindowYIndex(std::span<const Symbol> y, std::size_t window);

    std::size_t window() const noexcept { return window_; }

    // Result of one enumeration of the Y-matches of Y[u, u+len) with offsets in [1, window].
    struct Enumeration {
        std::uint64_t count = 0;
        std::uint64_t rank_of_target = 0;  // 1-based rank of target_offset, 0 if not a Y-match
        std::uint64_t selected_offset = 0; // offset with rank select_rank, 0 if out of range
    };
    // Requires u >= window and u + len <= |Y|.
    Enumeration enumerate(std::size_t u, std::size_t len, std::uint64_t target_offset = 0,
                          std::uint64_t select_rank = 0) const;

    bool equal(std::size_t a, std::size_t b, std::size_t len) const;

private:
    friend class WindowMatcher;

    std::span<const Symbol> y_;
    std::size_t window_;
    PrefixHash hash_;
    std::vector<GramClasses> levels_;  // gram length 2^j
};

class WindowMatcher {
public:
    static constexpr std::size_t max_level_length = 64;

    WindowMatcher(std::span<const Symbol> x, std::span<const Symbol> y, unsigned y_alphabet,
                  std::size_t window);

    // Requires window <= u < horizon <= |X|.
    WindowMatch query(std::size_t u, std::size_t horizon) const;
    const WindowYIndex& y_index() const noexcept { return y_index_; }

private:
    std::size_t common_prefix(std::size_t a, std::size_t b, std::size_t limit) const;

    std::size_t window_;
    std::vector<Symbol> joint_;
    PrefixHash joint_hash_;
    std::vector<GramClasses> joint_levels_;
    WindowYIndex y_index_;
};

// One-shot form of WindowMatcher::query. u is 0-based; horizon is K.
WindowMatch window_longest_match(const SymbolSequence& x, const SymbolSequence& y, std::size_t u,
                                 std::size_t window, std::size_t horizon);

// j-th smallest t in [1, origin] with seq[origin, origin+L) == seq[origin-t, origin-t+L).
// std::nullopt when the supplied past holds fewer than j recurrences.
std::optional<std::uint64_t> repeated_recurrence_time(std::span<const Symbol> seq,
                                                      std::size_t origin, std::size_t block,
                                                      std::uint64_t j);
// Same for the joint (X,Y) block.
std::optional<std::uint64_t> repeated_recurrence_time(const SymbolSequence& x,
                                                      const SymbolSequence& y, std::size_t origin,
                                                      std::size_t block, std::uint64_t j);

// C: number of Y-match offsets t <= T_{L,1}(X,Y), with `origin` playing the
// role of time 1. std::nullopt if no (X,Y)-recurrence exists in the past.
std::optional<std::uint64_t> match_count_c(const SymbolSequence& x, const SymbolSequence& y,
                                           std::size_t origin, std::size_t block);

}  // namespace sidelz
