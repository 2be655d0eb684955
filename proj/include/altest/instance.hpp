// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "altest/ast.hpp"
#include "altest/relation.hpp"

namespace altest {

struct Atom {
    int id = 0;       // unique within the universe
    int sig = -1;     // owning top-level signature index
    int ordinal = 0;  // position within that signature's atom pool
};

// A concrete finite valuation of every signature, field and ordering of a
// model. Relations index atoms by id; `universe` lists the live atoms (the
// union of the top-level signature values).
struct Instance {
    std::vector<Atom> universe;
    std::vector<Relation> sig_values;      // indexed by signature index
    std::vector<Relation> field_values;    // indexed like Model::all_fields
    std::vector<Relation> ordering_nexts;  // indexed like Model::orderings

    static Instance empty_for(const Model& model);

    std::string atom_name(const Model& model, int id) const;
    const Atom* atom_by_id(int id) const;
    Relation universe_relation() const;  // arity 1, all atoms
};

// Verifies every structural invariant of an instance against its model's
// declarations: subset containment, extension disjointness, abstract
// coverage, signature multiplicities, field bounds and end multiplicities,
// and ordering linearity. Violations are data, not errors.
std::vector<std::string> check_structure(const Model& model, const Instance& inst);

nlohmann::json instance_to_json(const Model& model, const Instance& inst);
Instance instance_from_json(const Model& model, const nlohmann::json& doc);

}  // namespace altest
