// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#include "altest/ast.hpp"

#include <algorithm>

namespace altest {

const char* to_string(Mult m) {
    switch (m) {
        case Mult::Set: return "set";
        case Mult::Lone: return "lone";
        case Mult::Some: return "some";
        case Mult::One: return "one";
    }
    return "?";
}

const char* to_string(QuantKind q) {
    switch (q) {
        case QuantKind::All: return "all";
        case QuantKind::Some: return "some";
        case QuantKind::No: return "no";
        case QuantKind::Lone: return "lone";
        case QuantKind::One: return "one";
    }
    return "?";
}

ExprPtr make_name(std::string name) {
    auto e = std::make_shared<Expr>();
    e->node = NameExpr{std::move(name), {}};
    return e;
}

ExprPtr make_const(ConstKind kind) {
    auto e = std::make_shared<Expr>();
    e->node = ConstExpr{kind};
    return e;
}

ExprPtr make_binary(ExprBinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->node = BinExpr{op, std::move(lhs), std::move(rhs)};
    return e;
}

ExprPtr make_unary(ExprUnOp op, ExprPtr sub) {
    auto e = std::make_shared<Expr>();
    e->node = UnExpr{op, std::move(sub)};
    return e;
}

FormulaPtr make_true() {
    auto f = std::make_shared<Formula>();
    f->node = TrueFormula{};
    return f;
}

FormulaPtr make_cmp(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
    auto f = std::make_shared<Formula>();
    f->node = CmpFormula{op, std::move(lhs), std::move(rhs)};
    return f;
}

FormulaPtr make_mult_test(QuantKind mult, ExprPtr expr) {
    auto f = std::make_shared<Formula>();
    f->node = MultFormula{mult, std::move(expr)};
    return f;
}

FormulaPtr make_not(FormulaPtr sub) {
    auto f = std::make_shared<Formula>();
    f->node = NotFormula{std::move(sub)};
    return f;
}

FormulaPtr make_logic(LogOp op, FormulaPtr lhs, FormulaPtr rhs) {
    auto f = std::make_shared<Formula>();
    f->node = BinFormula{op, std::move(lhs), std::move(rhs)};
    return f;
}

FormulaPtr make_quant(QuantKind kind, std::vector<QuantDecl> decls, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->node = QuantFormula{kind, std::move(decls), std::move(body)};
    return f;
}

std::vector<FormulaPtr> flatten_and(const FormulaPtr& f) {
    std::vector<FormulaPtr> out;
    FormulaPtr cur = f;
    while (true) {
        const auto* bin = std::get_if<BinFormula>(&cur->node);
        if (bin && bin->op == LogOp::And) {
            out.push_back(bin->rhs);
            cur = bin->lhs;
        } else {
            out.push_back(cur);
            break;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

FormulaPtr fold_and(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return make_true();
    FormulaPtr acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = make_logic(LogOp::And, acc, fs[i]);
    return acc;
}

const ScopeEntry* RunCommand::scope_for(const std::string& sig) const {
    for (const auto& s : scopes)
        if (s.sig == sig) return &s;
    return nullptr;
}

int Model::sig_index(const std::string& n) const {
    auto it = sig_by_name.find(n);
    return it == sig_by_name.end() ? -1 : it->second;
}

const FieldDecl& Model::field(int flat_index) const {
    const FieldRef& ref = all_fields.at(static_cast<std::size_t>(flat_index));
    return sigs[static_cast<std::size_t>(ref.sig)]
        .fields[static_cast<std::size_t>(ref.index)];
}

std::vector<int> Model::field_candidates(const std::string& n) const {
    std::vector<int> out;
    auto [lo, hi] = fields_by_name.equal_range(n);
    for (auto it = lo; it != hi; ++it) out.push_back(it->second);
    return out;
}

std::vector<int> Model::top_sigs() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < sigs.size(); ++i)
        if (sigs[i].kind == SigKind::TopLevel) out.push_back(static_cast<int>(i));
    return out;
}

int Model::ordering_of(int sig) const {
    for (std::size_t i = 0; i < orderings.size(); ++i)
        if (orderings[i] == sig) return static_cast<int>(i);
    return -1;
}

const PredDecl* Model::pred_by_name(const std::string& n) const {
    for (const auto& p : preds)
        if (p.name == n) return &p;
    return nullptr;
}

bool Model::sig_within(int inner, int outer) const {
    int cur = inner;
    while (cur >= 0) {
        if (cur == outer) return true;
        cur = sigs[static_cast<std::size_t>(cur)].parent_sig;
    }
    return false;
}

std::vector<int> Model::children_of(int sig, SigKind kind) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < sigs.size(); ++i)
        if (sigs[i].kind == kind && sigs[i].parent_sig == sig)
            out.push_back(static_cast<int>(i));
    return out;
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool ast_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* an = std::get_if<NameExpr>(&a.node))
        return an->name == std::get<NameExpr>(b.node).name;
    if (const auto* ac = std::get_if<ConstExpr>(&a.node))
        return ac->kind == std::get<ConstExpr>(b.node).kind;
    if (const auto* ab = std::get_if<BinExpr>(&a.node)) {
        const auto& bb = std::get<BinExpr>(b.node);
        return ab->op == bb.op && ast_equal(*ab->lhs, *bb.lhs) &&
               ast_equal(*ab->rhs, *bb.rhs);
    }
    const auto& au = std::get<UnExpr>(a.node);
    const auto& bu = std::get<UnExpr>(b.node);
    return au.op == bu.op && ast_equal(*au.sub, *bu.sub);
}

static bool decls_equal(const std::vector<QuantDecl>& a, const std::vector<QuantDecl>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].disj != b[i].disj || a[i].vars != b[i].vars) return false;
        if (!ast_equal(*a[i].bound, *b[i].bound)) return false;
    }
    return true;
}

bool ast_equal(const Formula& a, const Formula& b) {
    if (a.node.index() != b.node.index()) return false;
    if (std::holds_alternative<TrueFormula>(a.node)) return true;
    if (const auto* ac = std::get_if<CmpFormula>(&a.node)) {
        const auto& bc = std::get<CmpFormula>(b.node);
        return ac->op == bc.op && ast_equal(*ac->lhs, *bc.lhs) &&
               ast_equal(*ac->rhs, *bc.rhs);
    }
    if (const auto* am = std::get_if<MultFormula>(&a.node)) {
        const auto& bm = std::get<MultFormula>(b.node);
        return am->mult == bm.mult && ast_equal(*am->expr, *bm.expr);
    }
    if (const auto* an = std::get_if<NotFormula>(&a.node))
        return ast_equal(*an->sub, *std::get<NotFormula>(b.node).sub);
    if (const auto* ab = std::get_if<BinFormula>(&a.node)) {
        const auto& bb = std::get<BinFormula>(b.node);
        return ab->op == bb.op && ast_equal(*ab->lhs, *bb.lhs) &&
               ast_equal(*ab->rhs, *bb.rhs);
    }
    const auto& aq = std::get<QuantFormula>(a.node);
    const auto& bq = std::get<QuantFormula>(b.node);
    return aq.kind == bq.kind && decls_equal(aq.decls, bq.decls) &&
           ast_equal(*aq.body, *bq.body);
}

bool ast_equal(const RunCommand& a, const RunCommand& b) {
    if (a.name != b.name || a.expect != b.expect) return false;
    if (a.scopes.size() != b.scopes.size()) return false;
    for (std::size_t i = 0; i < a.scopes.size(); ++i) {
        if (a.scopes[i].sig != b.scopes[i].sig || a.scopes[i].bound != b.scopes[i].bound ||
            a.scopes[i].exact != b.scopes[i].exact)
            return false;
    }
    return ast_equal(*a.body, *b.body);
}

static bool field_equal(const FieldDecl& a, const FieldDecl& b) {
    return a.name == b.name && a.columns == b.columns && a.mult == b.mult;
}

static bool sig_equal(const SigDecl& a, const SigDecl& b) {
    if (a.name != b.name || a.kind != b.kind || a.parent != b.parent ||
        a.abstract_sig != b.abstract_sig || a.mult != b.mult)
        return false;
    if (a.fields.size() != b.fields.size()) return false;
    for (std::size_t i = 0; i < a.fields.size(); ++i)
        if (!field_equal(a.fields[i], b.fields[i])) return false;
    return true;
}

bool ast_equal(const Model& a, const Model& b) {
    if (a.module_name != b.module_name) return false;
    if (a.orderings.size() != b.orderings.size()) return false;
    for (std::size_t i = 0; i < a.orderings.size(); ++i) {
        // Compare by name: indices are stable only within one model.
        if (a.sigs[static_cast<std::size_t>(a.orderings[i])].name !=
            b.sigs[static_cast<std::size_t>(b.orderings[i])].name)
            return false;
    }
    if (a.sigs.size() != b.sigs.size()) return false;
    for (std::size_t i = 0; i < a.sigs.size(); ++i)
        if (!sig_equal(a.sigs[i], b.sigs[i])) return false;
    if (a.facts.size() != b.facts.size()) return false;
    for (std::size_t i = 0; i < a.facts.size(); ++i) {
        if (a.facts[i].name != b.facts[i].name) return false;
        if (!ast_equal(*a.facts[i].body, *b.facts[i].body)) return false;
    }
    if (a.preds.size() != b.preds.size()) return false;
    for (std::size_t i = 0; i < a.preds.size(); ++i) {
        const auto& ap = a.preds[i];
        const auto& bp = b.preds[i];
        if (ap.name != bp.name || ap.params.size() != bp.params.size()) return false;
        for (std::size_t j = 0; j < ap.params.size(); ++j) {
            if (ap.params[j].vars != bp.params[j].vars) return false;
            if (!ast_equal(*ap.params[j].bound, *bp.params[j].bound)) return false;
        }
        if (!ast_equal(*ap.body, *bp.body)) return false;
    }
    if (a.funs.size() != b.funs.size()) return false;
    for (std::size_t i = 0; i < a.funs.size(); ++i) {
        const auto& af = a.funs[i];
        const auto& bf = b.funs[i];
        if (af.name != bf.name || af.params.size() != bf.params.size()) return false;
        for (std::size_t j = 0; j < af.params.size(); ++j) {
            if (af.params[j].vars != bf.params[j].vars) return false;
            if (!ast_equal(*af.params[j].bound, *bf.params[j].bound)) return false;
        }
        if (!ast_equal(*af.result_type, *bf.result_type)) return false;
        if (!ast_equal(*af.body, *bf.body)) return false;
    }
    if (a.commands.size() != b.commands.size()) return false;
    for (std::size_t i = 0; i < a.commands.size(); ++i)
        if (!ast_equal(a.commands[i], b.commands[i])) return false;
    return true;
}

}  // namespace altest
