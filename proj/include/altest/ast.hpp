// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace altest {

// Byte offsets into the source plus 1-based line/column, start inclusive,
// end exclusive.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;
};

enum class Mult { Set, Lone, Some, One };

const char* to_string(Mult m);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

enum class ExprBinOp {
    Union,          // +
    Diff,           // -
    Intersect,      // &
    Product,        // ->
    Join,           // .
    DomRestrict,    // <:
    RangeRestrict,  // :>
};

enum class ExprUnOp {
    Transpose,     // ~
    Closure,       // ^
    ReflClosure,   // *
};

enum class ConstKind { None, Univ, Iden };

// Filled in by name resolution; identifies what a bare name denotes.
struct NameTarget {
    enum class Kind { Unresolved, Sig, Field, Var, OrdNext, OrdFirst, OrdLast };
    Kind kind = Kind::Unresolved;
    int sig = -1;    // Sig / Ord*: signature index
    int field = -1;  // Field: index into Model::all_fields
};

struct NameExpr {
    std::string name;
    NameTarget target;
};

struct ConstExpr {
    ConstKind kind;
};

struct BinExpr {
    ExprBinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct UnExpr {
    ExprUnOp op;
    ExprPtr sub;
};

struct Expr {
    std::variant<NameExpr, ConstExpr, BinExpr, UnExpr> node;
    SourceSpan span;
    int arity = -1;  // filled by type checking
};

ExprPtr make_name(std::string name);
ExprPtr make_const(ConstKind kind);
ExprPtr make_binary(ExprBinOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_unary(ExprUnOp op, ExprPtr sub);

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct Formula;
using FormulaPtr = std::shared_ptr<Formula>;

enum class CmpOp { In, Eq };
enum class LogOp { And, Or, Implies, Iff };
enum class QuantKind { All, Some, No, Lone, One };

const char* to_string(QuantKind q);

struct TrueFormula {};

struct CmpFormula {
    CmpOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

// no/some/lone/one applied to an expression.
struct MultFormula {
    QuantKind mult;
    ExprPtr expr;
};

struct NotFormula {
    FormulaPtr sub;
};

struct BinFormula {
    LogOp op;
    FormulaPtr lhs;
    FormulaPtr rhs;
};

struct QuantDecl {
    bool disj = false;
    std::vector<std::string> vars;
    ExprPtr bound;  // must be unary
};

struct QuantFormula {
    QuantKind kind;
    std::vector<QuantDecl> decls;
    FormulaPtr body;
};

struct Formula {
    std::variant<TrueFormula, CmpFormula, MultFormula, NotFormula, BinFormula,
                 QuantFormula>
        node;
    SourceSpan span;
};

FormulaPtr make_true();
FormulaPtr make_cmp(CmpOp op, ExprPtr lhs, ExprPtr rhs);
FormulaPtr make_mult_test(QuantKind mult, ExprPtr expr);
FormulaPtr make_not(FormulaPtr sub);
FormulaPtr make_logic(LogOp op, FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr make_quant(QuantKind kind, std::vector<QuantDecl> decls, FormulaPtr body);

// Left-spine flattening of a conjunction; inverse of a left fold.
std::vector<FormulaPtr> flatten_and(const FormulaPtr& f);
FormulaPtr fold_and(const std::vector<FormulaPtr>& fs);

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

enum class SigKind { TopLevel, Subset, Extension };

struct FieldDecl {
    std::string name;
    int owner = -1;                     // signature index
    std::vector<std::string> columns;   // arity = 1 + columns.size()
    std::vector<int> column_sigs;       // resolved
    Mult mult = Mult::Set;              // applies to the final column
    SourceSpan span;
};

struct SigDecl {
    std::string name;
    SigKind kind = SigKind::TopLevel;
    std::string parent;   // empty for top-level
    int parent_sig = -1;  // resolved
    bool abstract_sig = false;
    std::optional<Mult> mult;  // lone/some/one signature multiplicity
    std::vector<FieldDecl> fields;
    SourceSpan span;

    // Resolved hierarchy info.
    int top = -1;  // index of the root top-level ancestor (self for top-level)
};

struct ScopeEntry {
    std::string sig;
    int sig_index = -1;
    int bound = 0;
    bool exact = false;
};

struct RunCommand {
    std::string name;
    FormulaPtr body;
    std::vector<ScopeEntry> scopes;  // declaration order; missing sigs default to 3
    std::optional<int> expect;       // 0 or 1; required in model files
    SourceSpan span;

    const ScopeEntry* scope_for(const std::string& sig) const;
};

struct Fact {
    std::string name;  // may be empty
    FormulaPtr body;
};

struct PredParam {
    std::vector<std::string> vars;
    ExprPtr bound;
};

struct PredDecl {
    std::string name;
    std::vector<PredParam> params;
    FormulaPtr body;
};

struct FunDecl {
    std::string name;
    std::vector<PredParam> params;
    ExprPtr result_type;
    ExprPtr body;
};

// Locates a field as (sig index, index within that sig's field list).
struct FieldRef {
    int sig = -1;
    int index = -1;
};

struct Model {
    std::optional<std::string> module_name;
    std::vector<int> orderings;  // ordered signature indices, in open order
    std::vector<SigDecl> sigs;
    std::vector<Fact> facts;
    std::vector<PredDecl> preds;
    std::vector<FunDecl> funs;
    std::vector<RunCommand> commands;

    // Lookup structures, built by resolution.
    std::map<std::string, int> sig_by_name;
    std::multimap<std::string, int> fields_by_name;  // name -> all_fields index
    std::vector<FieldRef> all_fields;                // flat field enumeration

    std::string name() const { return module_name.value_or("model"); }

    int sig_index(const std::string& n) const;
    const FieldDecl& field(int flat_index) const;
    std::vector<int> field_candidates(const std::string& n) const;
    std::vector<int> top_sigs() const;
    int ordering_of(int sig) const;  // index into orderings, or -1
    bool is_ordered(int sig) const { return ordering_of(sig) >= 0; }
    const PredDecl* pred_by_name(const std::string& n) const;

    // True if `inner` equals `outer` or is below it in the hierarchy.
    bool sig_within(int inner, int outer) const;
    std::vector<int> children_of(int sig, SigKind kind) const;
};

struct Requirement {
    int index = 0;
    std::string text;
    std::string oracle;  // predicate name in the model
};

// ---------------------------------------------------------------------------
// Structural equality (ignores spans and resolution annotations)
// ---------------------------------------------------------------------------

bool ast_equal(const Expr& a, const Expr& b);
bool ast_equal(const Formula& a, const Formula& b);
bool ast_equal(const RunCommand& a, const RunCommand& b);
bool ast_equal(const Model& a, const Model& b);

}  // namespace altest
