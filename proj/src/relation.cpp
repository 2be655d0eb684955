// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#include "altest/relation.hpp"

#include <algorithm>
#include <cassert>

namespace altest {

Relation Relation::singleton(Tuple t) {
    Relation r;
    r.arity = static_cast<int>(t.size());
    r.tuples.push_back(std::move(t));
    return r;
}

bool Relation::contains(const Tuple& t) const {
    return std::binary_search(tuples.begin(), tuples.end(), t);
}

void Relation::insert(Tuple t) {
    auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
    if (it == tuples.end() || *it != t) tuples.insert(it, std::move(t));
}

void Relation::normalize() {
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
}

Relation set_union(const Relation& a, const Relation& b) {
    assert(a.arity == b.arity);
    Relation out;
    out.arity = a.arity;
    std::set_union(a.tuples.begin(), a.tuples.end(), b.tuples.begin(), b.tuples.end(),
                   std::back_inserter(out.tuples));
    return out;
}

Relation set_difference(const Relation& a, const Relation& b) {
    assert(a.arity == b.arity);
    Relation out;
    out.arity = a.arity;
    std::set_difference(a.tuples.begin(), a.tuples.end(), b.tuples.begin(),
                        b.tuples.end(), std::back_inserter(out.tuples));
    return out;
}

Relation set_intersection(const Relation& a, const Relation& b) {
    assert(a.arity == b.arity);
    Relation out;
    out.arity = a.arity;
    std::set_intersection(a.tuples.begin(), a.tuples.end(), b.tuples.begin(),
                          b.tuples.end(), std::back_inserter(out.tuples));
    return out;
}

bool subset_of(const Relation& a, const Relation& b) {
    return std::includes(b.tuples.begin(), b.tuples.end(), a.tuples.begin(),
                         a.tuples.end());
}

Relation product(const Relation& a, const Relation& b) {
    Relation out;
    out.arity = a.arity + b.arity;
    out.tuples.reserve(a.size() * b.size());
    for (const auto& t : a.tuples) {
        for (const auto& u : b.tuples) {
            Tuple v = t;
            v.insert(v.end(), u.begin(), u.end());
            out.tuples.push_back(std::move(v));
        }
    }
    // a and b are sorted, so the concatenation is already canonical.
    return out;
}

Relation join(const Relation& a, const Relation& b) {
    assert(a.arity + b.arity - 2 >= 1);
    Relation out;
    out.arity = a.arity + b.arity - 2;
    for (const auto& t : a.tuples) {
        int pivot = t.back();
        // b is sorted on the first column; find the matching range.
        auto lo = std::lower_bound(b.tuples.begin(), b.tuples.end(), pivot,
                                   [](const Tuple& u, int v) { return u[0] < v; });
        for (auto it = lo; it != b.tuples.end() && (*it)[0] == pivot; ++it) {
            Tuple v(t.begin(), t.end() - 1);
            v.insert(v.end(), it->begin() + 1, it->end());
            out.tuples.push_back(std::move(v));
        }
    }
    out.normalize();
    return out;
}

Relation transpose(const Relation& a) {
    assert(a.arity == 2);
    Relation out;
    out.arity = 2;
    out.tuples.reserve(a.size());
    for (const auto& t : a.tuples) out.tuples.push_back({t[1], t[0]});
    out.normalize();
    return out;
}

Relation transitive_closure(const Relation& a) {
    assert(a.arity == 2);
    Relation acc = a;
    while (true) {
        Relation next = set_union(acc, join(acc, acc));
        if (next.size() == acc.size()) return acc;
        acc = std::move(next);
    }
}

Relation restrict_domain(const Relation& s, const Relation& r) {
    assert(s.arity == 1);
    Relation out;
    out.arity = r.arity;
    for (const auto& t : r.tuples)
        if (s.contains({t[0]})) out.tuples.push_back(t);
    return out;
}

Relation restrict_range(const Relation& r, const Relation& s) {
    assert(s.arity == 1);
    Relation out;
    out.arity = r.arity;
    for (const auto& t : r.tuples)
        if (s.contains({t.back()})) out.tuples.push_back(t);
    return out;
}

Relation identity_over(const Relation& s) {
    assert(s.arity == 1);
    Relation out;
    out.arity = 2;
    for (const auto& t : s.tuples) out.tuples.push_back({t[0], t[0]});
    return out;
}

}  // namespace altest
