#ifndef SPECSEQ_MONOMIAL_HPP
#define SPECSEQ_MONOMIAL_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "specseq/variables.hpp"

namespace specseq {

/* Sparse exponent vector, sorted by variable index, no zero exponents. */
class Monomial {
  public:
    using Entry = std::pair<int, unsigned>;  // (variable index, exponent > 0)

    Monomial() = default;
    explicit Monomial(std::vector<Entry> entries) : e_(std::move(entries)) {
        std::sort(e_.begin(), e_.end());
        std::vector<Entry> merged;
        for (const auto& [v, k] : e_) {
            if (k == 0) continue;
            if (!merged.empty() && merged.back().first == v)
                merged.back().second += k;
            else
                merged.push_back({v, k});
        }
        e_ = std::move(merged);
    }

    static Monomial var(int index, unsigned exp = 1) {
        if (exp == 0) return Monomial();
        return Monomial({{index, exp}});
    }

    bool is_one() const { return e_.empty(); }
    const std::vector<Entry>& entries() const { return e_; }

    unsigned exponent(int var) const {
        for (const auto& [v, k] : e_)
            if (v == var) return k;
        return 0;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [v, k] : e_) d += k;
        return d;
    }

    unsigned state_degree(const VariableTable& t) const {
        unsigned d = 0;
        for (const auto& [v, k] : e_)
            if (t.is_state(v)) d += k;
        return d;
    }

    bool param_only(const VariableTable& t) const {
        for (const auto& [v, k] : e_)
            if (t.is_state(v)) return false;
        return true;
    }

    Monomial operator*(const Monomial& o) const {
        std::vector<Entry> r;
        r.reserve(e_.size() + o.e_.size());
        auto a = e_.begin(), b = o.e_.begin();
        while (a != e_.end() && b != o.e_.end()) {
            if (a->first < b->first)
                r.push_back(*a++);
            else if (a->first > b->first)
                r.push_back(*b++);
            else {
                r.push_back({a->first, a->second + b->second});
                ++a, ++b;
            }
        }
        r.insert(r.end(), a, e_.end());
        r.insert(r.end(), b, o.e_.end());
        Monomial m;
        m.e_ = std::move(r);
        return m;
    }

    // exact division; caller guarantees divisibility
    Monomial divide_exact(const Monomial& o) const {
        std::vector<Entry> r;
        auto a = e_.begin();
        for (const auto& [v, k] : o.e_) {
            while (a != e_.end() && a->first < v) r.push_back(*a++);
            if (a == e_.end() || a->first != v || a->second < k)
                throw error("monomial division is not exact");
            if (a->second > k) r.push_back({v, a->second - k});
            ++a;
        }
        r.insert(r.end(), a, e_.end());
        Monomial m;
        m.e_ = std::move(r);
        return m;
    }

    bool divides(const Monomial& o) const {
        auto b = o.e_.begin();
        for (const auto& [v, k] : e_) {
            while (b != o.e_.end() && b->first < v) ++b;
            if (b == o.e_.end() || b->first != v || b->second < k) return false;
        }
        return true;
    }

    bool operator==(const Monomial& o) const { return e_ == o.e_; }
    bool operator!=(const Monomial& o) const { return e_ != o.e_; }

  private:
    std::vector<Entry> e_;
};

/* Graded lexicographic order: higher total degree first; ties broken
   lexicographically with earlier variables ranked higher.  Returns
   <0 / 0 / >0 as a sorts before / equal / after b in descending order. */
inline int grlex_cmp(const Monomial& a, const Monomial& b) {
    unsigned da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db ? -1 : 1;
    const auto &ea = a.entries(), &eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].first != eb[j].first)
            // the one holding the earlier variable has the larger power there
            return ea[i].first < eb[j].first ? -1 : 1;
        if (ea[i].second != eb[j].second) return ea[i].second > eb[j].second ? -1 : 1;
        ++i, ++j;
    }
    if (i == ea.size() && j == eb.size()) return 0;
    return i < ea.size() ? -1 : 1;
}

// "a prints before b" — descending graded-lex
struct GrlexBefore {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_cmp(a, b) < 0; }
};

}  // namespace specseq

#endif
