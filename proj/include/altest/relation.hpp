// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace altest {

using Tuple = std::vector<int>;  // atom ids

// A finite relation: a canonically sorted, duplicate-free set of equal-length
// atom tuples.
struct Relation {
    int arity = 1;
    std::vector<Tuple> tuples;

    static Relation empty(int arity) { return Relation{arity, {}}; }
    static Relation singleton(Tuple t);

    bool contains(const Tuple& t) const;
    bool is_empty() const { return tuples.empty(); }
    std::size_t size() const { return tuples.size(); }
    void insert(Tuple t);  // keeps canonical order
    void normalize();      // sort + dedupe

    bool operator==(const Relation& o) const {
        return arity == o.arity && tuples == o.tuples;
    }
};

Relation set_union(const Relation& a, const Relation& b);
Relation set_difference(const Relation& a, const Relation& b);
Relation set_intersection(const Relation& a, const Relation& b);
bool subset_of(const Relation& a, const Relation& b);

Relation product(const Relation& a, const Relation& b);

// Dot join: match the last column of `a` against the first column of `b`.
// Requires arity(a) + arity(b) - 2 >= 1.
Relation join(const Relation& a, const Relation& b);

Relation transpose(const Relation& a);          // arity 2
Relation transitive_closure(const Relation& a); // arity 2, iterated squaring

Relation restrict_domain(const Relation& s, const Relation& r);  // s <: r
Relation restrict_range(const Relation& r, const Relation& s);   // r :> s

// Identity relation over the given unary relation.
Relation identity_over(const Relation& s);

}  // namespace altest
