#include "sidelz/matching.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "sidelz/errors.hpp"

namespace sidelz {

namespace {

constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
constexpr std::uint64_t kBase = 0x1F3D5B79A4C3E2D1ULL % kMod;

__extension__ typedef unsigned __int128 uint128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) noexcept {
    const uint128 p = static_cast<uint128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(p & kMod) + static_cast<std::uint64_t>(p >> 61);
    if (r >= kMod) {
        r -= kMod;
    }
    return r;
}

bool same_span(std::span<const Symbol> seq, std::size_t a, std::size_t b, std::size_t len) {
    return std::equal(seq.begin() + static_cast<std::ptrdiff_t>(a),
                      seq.begin() + static_cast<std::ptrdiff_t>(a + len),
                      seq.begin() + static_cast<std::ptrdiff_t>(b));
}

// Slice of ascending `occ` with values in [lo, hi).
std::span<const std::uint32_t> in_range(std::span<const std::uint32_t> occ, std::size_t lo,
                                        std::size_t hi) {
    const auto first = std::lower_bound(occ.begin(), occ.end(), lo);
    const auto last = std::lower_bound(first, occ.end(), hi);
    return {first, last};
}

std::vector<GramClasses> build_levels(std::span<const Symbol> seq, const PrefixHash& hash,
                                      std::size_t max_length) {
    std::vector<GramClasses> levels;
    for (std::size_t h = 1; h <= max_length && h <= seq.size(); h *= 2) {
        levels.emplace_back(seq, h, hash);
    }
    return levels;
}

}  // namespace

PrefixHash::PrefixHash(std::span<const Symbol> seq)
    : prefix_(seq.size() + 1, 0), power_(seq.size() + 1, 1) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        std::uint64_t next = mul_mod(prefix_[i], kBase) + seq[i] + 1;
        if (next >= kMod) {
            next -= kMod;
        }
        prefix_[i + 1] = next;
        power_[i + 1] = mul_mod(power_[i], kBase);
    }
}

std::uint64_t PrefixHash::hash(std::size_t pos, std::size_t len) const noexcept {
    const std::uint64_t sub = mul_mod(prefix_[pos], power_[len]);
    const std::uint64_t whole = prefix_[pos + len];
    return whole >= sub ? whole - sub : whole + kMod - sub;
}

GramClasses::GramClasses(std::span<const Symbol> seq, std::size_t h, const PrefixHash& hash)
    : h_(h) {
    if (h == 0 || seq.size() < h) {
        offsets_.assign(1, 0);
        return;
    }
    const std::size_t m = seq.size() - h + 1;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
        keyed[pos] = {hash.hash(pos, h), static_cast<std::uint32_t>(pos)};
    }
    std::sort(keyed.begin(), keyed.end());

    class_of_.resize(m);
    std::uint32_t next_class = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> reps;  // (position, class)
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && keyed[j].first == keyed[i].first) {
            ++j;
        }
        reps.clear();
        for (std::size_t k = i; k < j; ++k) {
            const std::uint32_t pos = keyed[k].second;
            auto rep = std::find_if(reps.begin(), reps.end(), [&](const auto& r) {
                return same_span(seq, r.first, pos, h);
            });
            if (rep == reps.end()) {
                reps.emplace_back(pos, next_class);
                class_of_[pos] = next_class++;
            } else {
                class_of_[pos] = rep->second;
            }
        }
        i = j;
    }

    offsets_.assign(std::size_t{next_class} + 1, 0);
    for (std::uint32_t c : class_of_) {
        ++offsets_[c + 1];
    }
    for (std::size_t c = 0; c < next_class; ++c) {
        offsets_[c + 1] += offsets_[c];
    }
    positions_.resize(m);
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t pos = 0; pos < m; ++pos) {
        positions_[cursor[class_of_[pos]]++] = static_cast<std::uint32_t>(pos);
    }
}

std::span<const std::uint32_t> GramClasses::occurrences(std::size_t pos) const noexcept {
    const std::uint32_t c = class_of_[pos];
    return {positions_.data() + offsets_[c], offsets_[c + 1] - offsets_[c]};
}

YPhraseIndex::YPhraseIndex(std::span<const Symbol> y, std::size_t phrase_length)
    : hash_(y), classes_(y, phrase_length, hash_) {
    if (phrase_length == 0) {
        throw InputError("phrase length must be positive");
    }
}

std::span<const std::uint32_t> YPhraseIndex::earlier_occurrences(std::size_t pos) const {
    if (pos >= classes_.span_count()) {
        throw InputError("phrase at " + std::to_string(pos) + " extends past the sequence end");
    }
    const auto occ = classes_.occurrences(pos);
    const auto end = std::lower_bound(occ.begin(), occ.end(), pos);
    return {occ.begin(), end};
}

std::uint64_t YPhraseIndex::y_match_count(std::size_t pos) const {
    return earlier_occurrences(pos).size();
}

std::optional<std::uint64_t> YPhraseIndex::nth_y_match(std::size_t pos, std::uint64_t n) const {
    const auto earlier = earlier_occurrences(pos);
    if (n == 0 || n > earlier.size()) {
        return std::nullopt;
    }
    return pos - earlier[earlier.size() - n];
}

FixedMatcher::FixedMatcher(std::span<const Symbol> x, std::span<const Symbol> y,
                           std::size_t phrase_length)
    : length_(phrase_length), y_index_(y, phrase_length), x_hash_(x),
      x_classes_(x, phrase_length, x_hash_) {
    if (x.size() != y.size()) {
        throw InputError("length mismatch: |X| = " + std::to_string(x.size()) +
                         ", |Y| = " + std::to_string(y.size()));
    }
}

RecurrenceResult FixedMatcher::recurrence(std::size_t pos) const {
    RecurrenceResult res;
    const auto earlier_y = y_index_.earlier_occurrences(pos);
    res.p = earlier_y.size();
    const std::uint32_t x_class = x_classes_.class_of(pos);
    for (std::size_t idx = earlier_y.size(); idx-- > 0;) {
        const std::uint32_t q = earlier_y[idx];
        if (x_classes_.class_of(q) == x_class) {
            res.s = pos - q;
            res.n = earlier_y.size() - idx;
            break;
        }
    }
    const auto occ_x = x_classes_.occurrences(pos);
    const auto it = std::lower_bound(occ_x.begin(), occ_x.end(), pos);
    if (it != occ_x.begin()) {
        res.r = pos - *(it - 1);
    }
    return res;
}

RecurrenceResult fixed_recurrence(const SymbolSequence& x, const SymbolSequence& y,
                                  std::size_t phrase_start, std::size_t phrase_length) {
    if (phrase_start + phrase_length > x.size() || phrase_start + phrase_length > y.size()) {
        throw InputError("phrase extends past the sequence end");
    }
    const std::size_t n = phrase_start + phrase_length;
    FixedMatcher matcher(x.symbols().first(n), y.symbols().first(n), phrase_length);
    return matcher.recurrence(phrase_start);
}

WindowYIndex::WindowYIndex(std::span<const Symbol> y, std::size_t window)
    : y_(y), window_(window), hash_(y),
      levels_(build_levels(y, hash_, WindowMatcher::max_level_length)) {
    if (window == 0) {
        throw InputError("window size must be positive");
    }
}

bool WindowYIndex::equal(std::size_t a, std::size_t b, std::size_t len) const {
    return hash_.hash(a, len) == hash_.hash(b, len) && same_span(y_, a, b, len);
}

WindowYIndex::Enumeration WindowYIndex::enumerate(std::size_t u, std::size_t len,
                                                  std::uint64_t target_offset,
                                                  std::uint64_t select_rank) const {
    if (u < window_ || len == 0 || u + len > y_.size()) {
        throw InputError("window query out of range");
    }
    Enumeration out;
    std::size_t level = 0;
    while (level + 1 < levels_.size() && (std::size_t{2} << level) <= len) {
        ++level;
    }
    const std::size_t h = levels_[level].gram_length();
    const auto candidates = in_range(levels_[level].occurrences(u), u - window_, u);
    for (std::size_t idx = candidates.size(); idx-- > 0;) {
        const std::size_t q = candidates[idx];
        if (h != len && !equal(q, u, len)) {
            continue;
        }
        ++out.count;
        const std::uint64_t t = u - q;
        if (t == target_offset) {
            out.rank_of_target = out.count;
        }
        if (out.count == select_rank) {
            out.selected_offset = t;
        }
    }
    return out;
}

WindowMatcher::WindowMatcher(std::span<const Symbol> x, std::span<const Symbol> y,
                             unsigned y_alphabet, std::size_t window)
    : window_(window), joint_(x.size()), y_index_(y, window) {
    if (x.size() != y.size()) {
        throw InputError("length mismatch: |X| = " + std::to_string(x.size()) +
                         ", |Y| = " + std::to_string(y.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint_[i] = x[i] * y_alphabet + y[i];
    }
    joint_hash_ = PrefixHash(joint_);
    joint_levels_ = build_levels(joint_, joint_hash_, max_level_length);
}

std::size_t WindowMatcher::common_prefix(std::size_t a, std::size_t b, std::size_t limit) const {
    std::size_t n = 0;
    while (n < limit && joint_[a + n] == joint_[b + n]) {
        ++n;
    }
    return n;
}

WindowMatch WindowMatcher::query(std::size_t u, std::size_t horizon) const {
    if (u < window_ || u >= horizon || horizon > joint_.size()) {
        throw InputError("window query requires window <= u < horizon <= length");
    }
    const std::size_t max_len = horizon - u;
    std::size_t best = 0;
    std::size_t best_q = 0;
    // A match of length >= h implies an equal h-gram in the window, so the
    // longest match is found among the candidates of the highest level that
    // has any. Candidates are visited in increasing offset; ties keep the
    // smallest offset.
    for (std::size_t level = joint_levels_.size(); level-- > 0;) {
        const std::size_t h = joint_levels_[level].gram_length();
        if (h > max_len) {
            continue;
        }
        const auto candidates = in_range(joint_levels_[level].occurrences(u), u - window_, u);
        if (candidates.empty()) {
            continue;
        }
        for (std::size_t idx = candidates.size(); idx-- > 0 && best < max_len;) {
            const std::size_t q = candidates[idx];
            if (best >= h && joint_hash_.hash(q, best + 1) != joint_hash_.hash(u, best + 1)) {
                continue;
            }
            const std::size_t len = common_prefix(q, u, max_len);
            if (len > best) {
                best = len;
                best_q = q;
            }
        }
        break;
    }

    WindowMatch m;
    if (best == 0) {
        m.length = 1;
        m.y_count = y_index_.enumerate(u, 1).count;
        return m;
    }
    m.length = best;
    m.offset = u - best_q;
    const auto e = y_index_.enumerate(u, best, m.offset);
    m.y_count = e.count;
    m.rank = e.rank_of_target;
    return m;
}

WindowMatch window_longest_match(const SymbolSequence& x, const SymbolSequence& y, std::size_t u,
                                 std::size_t window, std::size_t horizon) {
    if (horizon > x.size() || horizon > y.size()) {
        throw InputError("horizon exceeds sequence length");
    }
    if (u < window || u == 0) {
        throw InputError("window query requires u > n_w (1-based)");
    }
    WindowMatcher matcher(x.symbols().first(horizon), y.symbols().first(horizon),
                          y.alphabet_size(), window);
    return matcher.query(u, horizon);
}

std::optional<std::uint64_t> repeated_recurrence_time(std::span<const Symbol> seq,
                                                      std::size_t origin, std::size_t block,
                                                      std::uint64_t j) {
    if (origin + block > seq.size()) {
        throw InputError("block extends past the sequence end");
    }
    if (j == 0) {
        return 0;
    }
    std::uint64_t found = 0;
    for (std::size_t t = 1; t <= origin; ++t) {
        if (same_span(seq, origin - t, origin, block) && ++found == j) {
            return t;
        }
    }
    return std::nullopt;
}

std::optional<std::uint64_t> repeated_recurrence_time(const SymbolSequence& x,
                                                      const SymbolSequence& y, std::size_t origin,
                                                      std::size_t block, std::uint64_t j) {
    if (origin + block > x.size() || origin + block > y.size()) {
        throw InputError("block extends past the sequence end");
    }
    if (j == 0) {
        return 0;
    }
    std::uint64_t found = 0;
    for (std::size_t t = 1; t <= origin; ++t) {
        if (same_span(x.symbols(), origin - t, origin, block) &&
            same_span(y.symbols(), origin - t, origin, block) && ++found == j) {
            return t;
        }
    }
    return std::nullopt;
}

std::optional<std::uint64_t> match_count_c(const SymbolSequence& x, const SymbolSequence& y,
                                           std::size_t origin, std::size_t block) {
    if (origin + block > x.size() || origin + block > y.size()) {
        throw InputError("block extends past the sequence end");
    }
    std::uint64_t count = 0;
    for (std::size_t t = 1; t <= origin; ++t) {
        if (!same_span(y.symbols(), origin - t, origin, block)) {
            continue;
        }
        ++count;
        if (same_span(x.symbols(), origin - t, origin, block)) {
            return count;
        }
    }
    return std::nullopt;
}

}  // namespace sidelz
