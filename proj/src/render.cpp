// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#include "altest/render.hpp"

#include <sstream>

#include "altest/util.hpp"

namespace altest {

namespace {

// Expression precedence, loosest first. Mirrors the parser.
int expr_prec(const Expr& e) {
    if (std::holds_alternative<NameExpr>(e.node) || std::holds_alternative<ConstExpr>(e.node))
        return 8;
    if (std::holds_alternative<UnExpr>(e.node)) return 7;
    switch (std::get<BinExpr>(e.node).op) {
        case ExprBinOp::Union:
        case ExprBinOp::Diff: return 1;
        case ExprBinOp::Intersect: return 2;
        case ExprBinOp::Product: return 3;
        case ExprBinOp::RangeRestrict: return 4;
        case ExprBinOp::DomRestrict: return 5;
        case ExprBinOp::Join: return 6;
    }
    return 8;
}

const char* expr_op_text(ExprBinOp op) {
    switch (op) {
        case ExprBinOp::Union: return " + ";
        case ExprBinOp::Diff: return " - ";
        case ExprBinOp::Intersect: return " & ";
        case ExprBinOp::Product: return "->";
        case ExprBinOp::RangeRestrict: return " :> ";
        case ExprBinOp::DomRestrict: return " <: ";
        case ExprBinOp::Join: return ".";
    }
    return "?";
}

void render_expr(std::ostream& os, const Expr& e, int min_prec) {
    int prec = expr_prec(e);
    bool parens = prec < min_prec;
    if (parens) os << "(";
    if (const auto* n = std::get_if<NameExpr>(&e.node)) {
        os << n->name;
    } else if (const auto* c = std::get_if<ConstExpr>(&e.node)) {
        switch (c->kind) {
            case ConstKind::None: os << "none"; break;
            case ConstKind::Univ: os << "univ"; break;
            case ConstKind::Iden: os << "iden"; break;
        }
    } else if (const auto* u = std::get_if<UnExpr>(&e.node)) {
        switch (u->op) {
            case ExprUnOp::Transpose: os << "~"; break;
            case ExprUnOp::Closure: os << "^"; break;
            case ExprUnOp::ReflClosure: os << "*"; break;
        }
        render_expr(os, *u->sub, 7);
    } else {
        const auto& b = std::get<BinExpr>(e.node);
        render_expr(os, *b.lhs, prec);
        os << expr_op_text(b.op);
        render_expr(os, *b.rhs, prec + 1);
    }
    if (parens) os << ")";
}

// Formula precedence, loosest first: quantifiers, or, iff, implies, and,
// not, atomic.
int formula_prec(const Formula& f) {
    if (std::holds_alternative<QuantFormula>(f.node)) return 1;
    if (const auto* b = std::get_if<BinFormula>(&f.node)) {
        switch (b->op) {
            case LogOp::Or: return 2;
            case LogOp::Iff: return 3;
            case LogOp::Implies: return 4;
            case LogOp::And: return 5;
        }
    }
    if (std::holds_alternative<NotFormula>(f.node)) return 6;
    return 7;
}

void render_formula(std::ostream& os, const Formula& f, int min_prec);

void render_decls(std::ostream& os, const std::vector<QuantDecl>& decls) {
    for (std::size_t i = 0; i < decls.size(); ++i) {
        if (i) os << ", ";
        if (decls[i].disj) os << "disj ";
        for (std::size_t j = 0; j < decls[i].vars.size(); ++j) {
            if (j) os << ",";
            os << decls[i].vars[j];
        }
        os << " : ";
        render_expr(os, *decls[i].bound, 1);
    }
}

void render_formula(std::ostream& os, const Formula& f, int min_prec) {
    int prec = formula_prec(f);
    bool parens = prec < min_prec;
    if (parens) os << "(";
    if (std::holds_alternative<TrueFormula>(f.node)) {
        os << "{}";
    } else if (const auto* c = std::get_if<CmpFormula>(&f.node)) {
        render_expr(os, *c->lhs, 1);
        os << (c->op == CmpOp::In ? " in " : " = ");
        render_expr(os, *c->rhs, 1);
    } else if (const auto* m = std::get_if<MultFormula>(&f.node)) {
        os << to_string(m->mult) << " ";
        render_expr(os, *m->expr, 1);
    } else if (const auto* n = std::get_if<NotFormula>(&f.node)) {
        os << "not ";
        render_formula(os, *n->sub, 6);
    } else if (const auto* b = std::get_if<BinFormula>(&f.node)) {
        const char* op = b->op == LogOp::And       ? " and "
                         : b->op == LogOp::Or      ? " or "
                         : b->op == LogOp::Implies ? " implies "
                                                   : " iff ";
        bool right_assoc = b->op == LogOp::Implies;
        render_formula(os, *b->lhs, right_assoc ? prec + 1 : prec);
        os << op;
        render_formula(os, *b->rhs, right_assoc ? prec : prec + 1);
    } else {
        const auto& q = std::get<QuantFormula>(f.node);
        os << to_string(q.kind) << " ";
        render_decls(os, q.decls);
        os << " | ";
        render_formula(os, *q.body, 1);
    }
    if (parens) os << ")";
}

// A body block: one conjunct per line.
void render_block(std::ostream& os, const Formula& body, const std::string& indent) {
    if (std::holds_alternative<TrueFormula>(body.node)) {
        os << "{}";
        return;
    }
    auto self = std::make_shared<Formula>(body);
    std::vector<FormulaPtr> lines = flatten_and(self);
    os << "{\n";
    for (const auto& line : lines) {
        os << indent << "  ";
        render_formula(os, *line, 1);
        os << "\n";
    }
    os << indent << "}";
}

void render_field(std::ostream& os, const FieldDecl& f) {
    os << f.name << " : ";
    if (f.columns.size() == 1) {
        os << to_string(f.mult) << " " << f.columns[0];
        return;
    }
    for (std::size_t i = 0; i < f.columns.size(); ++i) {
        if (i) os << " -> ";
        if (i + 1 == f.columns.size() && f.mult != Mult::Set) os << to_string(f.mult) << " ";
        os << f.columns[i];
    }
}

void render_params(std::ostream& os, const std::vector<PredParam>& params) {
    if (params.empty()) return;
    os << "[";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) os << ", ";
        os << join(params[i].vars, ",") << " : ";
        render_expr(os, *params[i].bound, 1);
    }
    os << "]";
}

}  // namespace

std::string render(const Expr& e) {
    std::ostringstream os;
    render_expr(os, e, 1);
    return os.str();
}

std::string render(const Formula& f) {
    std::ostringstream os;
    render_formula(os, f, 1);
    return os.str();
}

std::string render(const RunCommand& cmd) {
    std::ostringstream os;
    os << "run ";
    if (!cmd.name.empty()) os << cmd.name << " ";
    render_block(os, *cmd.body, "");
    if (!cmd.scopes.empty()) {
        os << " for ";
        for (std::size_t i = 0; i < cmd.scopes.size(); ++i) {
            if (i) os << ", ";
            if (cmd.scopes[i].exact) os << "exactly ";
            os << cmd.scopes[i].bound << " " << cmd.scopes[i].sig;
        }
    }
    if (cmd.expect) os << " expect " << *cmd.expect;
    return os.str();
}

std::string render(const Model& model) {
    std::ostringstream os;
    if (model.module_name) os << "module " << *model.module_name << "\n";
    for (int sig : model.orderings)
        os << "open util/ordering[" << model.sigs[static_cast<std::size_t>(sig)].name
           << "]\n";
    if (!model.orderings.empty() || model.module_name) os << "\n";

    for (const auto& s : model.sigs) {
        if (s.abstract_sig) os << "abstract ";
        if (s.mult) os << to_string(*s.mult) << " ";
        os << "sig " << s.name;
        if (s.kind == SigKind::Extension) os << " extends " << s.parent;
        if (s.kind == SigKind::Subset) os << " in " << s.parent;
        if (s.fields.empty()) {
            os << " {}\n";
        } else {
            os << " {\n";
            for (std::size_t i = 0; i < s.fields.size(); ++i) {
                os << "  ";
                render_field(os, s.fields[i]);
                os << (i + 1 < s.fields.size() ? ",\n" : "\n");
            }
            os << "}\n";
        }
    }
    for (const auto& fact : model.facts) {
        os << "\nfact";
        if (!fact.name.empty()) os << " " << fact.name;
        os << " ";
        render_block(os, *fact.body, "");
        os << "\n";
    }
    for (const auto& p : model.preds) {
        os << "\npred " << p.name;
        render_params(os, p.params);
        os << " ";
        render_block(os, *p.body, "");
        os << "\n";
    }
    for (const auto& fn : model.funs) {
        os << "\nfun " << fn.name;
        render_params(os, fn.params);
        os << " : ";
        render_expr(os, *fn.result_type, 1);
        os << " { ";
        render_expr(os, *fn.body, 1);
        os << " }\n";
    }
    for (const auto& cmd : model.commands) {
        os << "\n" << render(cmd) << "\n";
    }
    return os.str();
}

}  // namespace altest
