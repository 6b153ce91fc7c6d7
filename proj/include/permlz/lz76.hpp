#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "permlz/errors.hpp"

namespace permlz {

// Lempel-Ziv 1976 production complexity.
//
// The exhaustive history parses the sequence left to right; at position p the
// next word copies the longest prefix of S[p..] that also occurs starting at
// some index < p (the copy may overrun p, i.e. self-reproduce) and then
// appends one fresh symbol. That greedy parse realizes the minimal history,
// which is what C counts. The final word may be a pure copy and still counts
// as one production, so C >= 1 for non-empty input.
//
// The longest-valid-copy query is answered with a suffix automaton built over
// the whole sequence, where each state carries the end position of the first
// occurrence of its substrings. A prefix of S[p..] of length len, matched to
// state st, occurs starting before p iff first_end(st) - len + 1 <= p - 1;
// that condition is prefix-closed, so the greedy forward walk is exact.
// Construction and parse are O(T log sigma) with sigma distinct symbols.

namespace detail {

class SuffixAutomaton {
public:
    explicit SuffixAutomaton(std::span<const std::uint64_t> s) {
        const std::size_t cap = 2 * s.size() + 2;
        len_.reserve(cap);
        link_.reserve(cap);
        first_end_.reserve(cap);
        trans_.reserve(cap);
        new_state(0, -1);
        int last = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            last = extend(last, s[i], static_cast<std::int64_t>(i));
        propagate_first_end();
    }

    // Walk one symbol from st; returns -1 if no transition.
    int step(int st, std::uint64_t c) const {
        const auto& tr = trans_[static_cast<std::size_t>(st)];
        auto it = std::lower_bound(tr.begin(), tr.end(), c,
                                   [](const Edge& e, std::uint64_t v) { return e.sym < v; });
        if (it == tr.end() || it->sym != c) return -1;
        return it->to;
    }

    std::int64_t first_end(int st) const { return first_end_[static_cast<std::size_t>(st)]; }

private:
    struct Edge {
        std::uint64_t sym;
        int to;
    };

    int new_state(int len, int link) {
        len_.push_back(len);
        link_.push_back(link);
        first_end_.push_back(-1);
        trans_.emplace_back();
        return static_cast<int>(len_.size()) - 1;
    }

    void set_trans(int st, std::uint64_t c, int to) {
        auto& tr = trans_[static_cast<std::size_t>(st)];
        auto it = std::lower_bound(tr.begin(), tr.end(), c,
                                   [](const Edge& e, std::uint64_t v) { return e.sym < v; });
        if (it != tr.end() && it->sym == c)
            it->to = to;
        else
            tr.insert(it, Edge{c, to});
    }

    int extend(int last, std::uint64_t c, std::int64_t pos) {
        const int cur = new_state(len_[static_cast<std::size_t>(last)] + 1, -1);
        first_end_[static_cast<std::size_t>(cur)] = pos;
        int p = last;
        while (p != -1 && step(p, c) == -1) {
            set_trans(p, c, cur);
            p = link_[static_cast<std::size_t>(p)];
        }
        if (p == -1) {
            link_[static_cast<std::size_t>(cur)] = 0;
            return cur;
        }
        const int q = step(p, c);
        if (len_[static_cast<std::size_t>(p)] + 1 == len_[static_cast<std::size_t>(q)]) {
            link_[static_cast<std::size_t>(cur)] = q;
            return cur;
        }
        const int clone = new_state(len_[static_cast<std::size_t>(p)] + 1,
                                    link_[static_cast<std::size_t>(q)]);
        trans_[static_cast<std::size_t>(clone)] = trans_[static_cast<std::size_t>(q)];
        while (p != -1 && step(p, c) == q) {
            set_trans(p, c, clone);
            p = link_[static_cast<std::size_t>(p)];
        }
        link_[static_cast<std::size_t>(q)] = clone;
        link_[static_cast<std::size_t>(cur)] = clone;
        return cur;
    }

    // first_end of a state = min first_end over its suffix-link subtree.
    void propagate_first_end() {
        const std::size_t n = len_.size();
        std::vector<int> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
        std::sort(idx.begin(), idx.end(),
                  [this](int a, int b) { return len_[static_cast<std::size_t>(a)] >
                                                len_[static_cast<std::size_t>(b)]; });
        for (int v : idx) {
            const int l = link_[static_cast<std::size_t>(v)];
            if (l < 0) continue;
            auto& fe = first_end_[static_cast<std::size_t>(l)];
            const auto fv = first_end_[static_cast<std::size_t>(v)];
            if (fv >= 0 && (fe < 0 || fv < fe)) fe = fv;
        }
    }

    std::vector<int> len_;
    std::vector<int> link_;
    std::vector<std::int64_t> first_end_;
    std::vector<std::vector<Edge>> trans_;
};

} // namespace detail

// Number of words in the exhaustive (= minimal) production history.
inline std::uint64_t lz76_production_count(std::span<const std::uint64_t> s) {
    if (s.empty()) throw empty_sequence("lz76: empty sequence");
    const std::size_t n = s.size();
    detail::SuffixAutomaton sam(s);

    std::uint64_t c = 0;
    std::size_t p = 0;
    while (p < n) {
        std::size_t len = 0;
        int st = 0;
        while (p + len < n) {
            const int nxt = sam.step(st, s[p + len]);
            if (nxt < 0) break;
            // first occurrence of the extended prefix must start before p
            const std::int64_t first_start =
                sam.first_end(nxt) - static_cast<std::int64_t>(len);
            if (first_start > static_cast<std::int64_t>(p) - 1) break;
            st = nxt;
            ++len;
        }
        ++c;
        if (p + len >= n) break; // terminal word, possibly a pure copy
        p += len + 1;
    }
    return c;
}

} // namespace permlz
