// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#include "altest/typecheck.hpp"

#include <algorithm>
#include <sstream>

namespace altest {

ColType ColType::meet(const ColType& o) const {
    if (any) return o;
    if (o.any) return *this;
    return {false, mask & o.mask};
}

ColType ColType::join(const ColType& o) const {
    if (any || o.any) return anything();
    return {false, mask | o.mask};
}

namespace {

using InternalEnv = std::map<std::string, ColType>;

[[noreturn]] void fail(ErrorKind kind, const SourceSpan& span, const std::string& msg) {
    ParseError e;
    e.kind = kind;
    e.span = span;
    e.message = msg;
    throw e;
}

ColType sig_coltype(const Model& m, int sig) {
    int top = m.sigs[static_cast<std::size_t>(sig)].top;
    return ColType::of_top(top);
}

struct Hint {
    std::optional<ColType> first;
    std::optional<ColType> last;
};

bool col_admits(const ColType& hint, int top) {
    return hint.any || (hint.mask >> top) & 1;
}

// What a bare name could refer to, before contextual filtering.
bool is_unresolved_overload(const Model& m, const InternalEnv& env, const Expr& e) {
    const auto* ne = std::get_if<NameExpr>(&e.node);
    if (!ne) return false;
    if (ne->target.kind != NameTarget::Kind::Unresolved) return false;
    if (env.count(ne->name)) return false;
    if (m.sig_by_name.count(ne->name)) return false;
    int n = static_cast<int>(m.field_candidates(ne->name).size());
    if (ne->name == "next" || ne->name == "first" || ne->name == "last")
        n += static_cast<int>(m.orderings.size());
    return n > 1;
}

class Checker {
  public:
    Checker(const Model& m, const InternalEnv& env) : m_(m), env_(env) {}

    TypeInfo expr(Expr& e, const Hint& hint = {}) {
        TypeInfo t = expr_inner(e, hint);
        e.arity = t.arity();
        return t;
    }

    void formula(Formula& f) {
        if (std::holds_alternative<TrueFormula>(f.node)) return;
        if (auto* c = std::get_if<CmpFormula>(&f.node)) {
            TypeInfo lt, rt;
            resolve_pair(*c->lhs, *c->rhs, lt, rt);
            if (lt.arity() != rt.arity())
                fail(ErrorKind::Arity, f.span,
                     std::string("arity mismatch: '") +
                         (c->op == CmpOp::In ? "in" : "=") + "' requires equal arities, got " +
                         std::to_string(lt.arity()) + " and " + std::to_string(rt.arity()));
            return;
        }
        if (auto* mt = std::get_if<MultFormula>(&f.node)) {
            expr(*mt->expr);
            return;
        }
        if (auto* n = std::get_if<NotFormula>(&f.node)) {
            formula(*n->sub);
            return;
        }
        if (auto* b = std::get_if<BinFormula>(&f.node)) {
            formula(*b->lhs);
            formula(*b->rhs);
            return;
        }
        auto& q = std::get<QuantFormula>(f.node);
        std::vector<std::string> seen;
        InternalEnv saved = env_;
        for (auto& d : q.decls) {
            TypeInfo bt = expr(*d.bound);
            if (bt.arity() != 1)
                fail(ErrorKind::Arity, f.span,
                     "quantification requires a unary bound, got arity " +
                         std::to_string(bt.arity()));
            for (const auto& v : d.vars) {
                if (std::find(seen.begin(), seen.end(), v) != seen.end())
                    fail(ErrorKind::Resolution, f.span,
                         "duplicate variable '" + v + "' in quantifier block");
                seen.push_back(v);
                env_[v] = bt.cols[0];
            }
        }
        formula(*q.body);
        env_ = std::move(saved);
    }

  private:
    const Model& m_;
    InternalEnv env_;

    // Resolves two sides of a binary position, letting a resolved side
    // disambiguate an overloaded bare name on the other (join and the
    // restriction operators get more precise hints at their own cases).
    void resolve_pair(Expr& l, Expr& r, TypeInfo& lt, TypeInfo& rt) {
        bool l_over = is_unresolved_overload(m_, env_, l);
        bool r_over = is_unresolved_overload(m_, env_, r);
        if (!l_over || r_over) {
            lt = expr(l);
            rt = expr(r);
        } else {
            rt = expr(r);
            lt = expr(l);
        }
    }

    TypeInfo expr_inner(Expr& e, const Hint& hint) {
        if (auto* ne = std::get_if<NameExpr>(&e.node)) return name_ref(e, *ne, hint);
        if (auto* ce = std::get_if<ConstExpr>(&e.node)) {
            TypeInfo t;
            switch (ce->kind) {
                case ConstKind::None: t.cols = {ColType::empty()}; break;
                case ConstKind::Univ: t.cols = {ColType::anything()}; break;
                case ConstKind::Iden:
                    t.cols = {ColType::anything(), ColType::anything()};
                    break;
            }
            return t;
        }
        if (auto* ue = std::get_if<UnExpr>(&e.node)) {
            TypeInfo st = expr(*ue->sub);
            if (st.arity() != 2)
                fail(ErrorKind::Arity, e.span,
                     std::string("'") +
                         (ue->op == ExprUnOp::Transpose  ? "~"
                          : ue->op == ExprUnOp::Closure ? "^"
                                                        : "*") +
                         "' requires a binary operand, got arity " +
                         std::to_string(st.arity()));
            TypeInfo t;
            switch (ue->op) {
                case ExprUnOp::Transpose: t.cols = {st.cols[1], st.cols[0]}; break;
                case ExprUnOp::Closure: t.cols = st.cols; break;
                case ExprUnOp::ReflClosure:
                    // *e includes iden over univ.
                    t.cols = {ColType::anything(), ColType::anything()};
                    break;
            }
            return t;
        }
        return binary(e, std::get<BinExpr>(e.node));
    }

    TypeInfo binary(Expr& e, BinExpr& b) {
        switch (b.op) {
            case ExprBinOp::Union:
            case ExprBinOp::Diff:
            case ExprBinOp::Intersect: {
                TypeInfo lt, rt;
                resolve_pair(*b.lhs, *b.rhs, lt, rt);
                const char* opname = b.op == ExprBinOp::Union      ? "+"
                                     : b.op == ExprBinOp::Diff     ? "-"
                                                                   : "&";
                if (lt.arity() != rt.arity())
                    fail(ErrorKind::Arity, e.span,
                         std::string("arity mismatch: '") + opname +
                             "' requires equal arities, got " + std::to_string(lt.arity()) +
                             " and " + std::to_string(rt.arity()));
                TypeInfo t;
                for (int i = 0; i < lt.arity(); ++i) {
                    ColType c = b.op == ExprBinOp::Union ? lt.cols[i].join(rt.cols[i])
                                : b.op == ExprBinOp::Diff ? lt.cols[i]
                                                          : lt.cols[i].meet(rt.cols[i]);
                    t.cols.push_back(c);
                }
                if (b.op == ExprBinOp::Intersect) {
                    bool feasible = true;
                    for (int i = 0; i < lt.arity(); ++i)
                        if (!lt.cols[i].is_empty() && !rt.cols[i].is_empty() &&
                            t.cols[i].is_empty())
                            feasible = false;
                    if (!feasible)
                        fail(ErrorKind::Arity, e.span,
                             "'&' of expressions over disjoint signatures");
                }
                return t;
            }
            case ExprBinOp::Product: {
                TypeInfo lt = expr(*b.lhs);
                TypeInfo rt = expr(*b.rhs);
                if (lt.arity() + rt.arity() > 12)
                    fail(ErrorKind::Arity, e.span, "product arity exceeds the supported limit");
                TypeInfo t;
                t.cols = lt.cols;
                t.cols.insert(t.cols.end(), rt.cols.begin(), rt.cols.end());
                return t;
            }
            case ExprBinOp::Join: {
                bool l_over = is_unresolved_overload(m_, env_, *b.lhs);
                bool r_over = is_unresolved_overload(m_, env_, *b.rhs);
                TypeInfo lt, rt;
                if (!l_over) {
                    lt = expr(*b.lhs);
                    Hint h;
                    h.first = lt.cols.back();
                    rt = r_over ? expr(*b.rhs, h) : expr(*b.rhs);
                } else if (!r_over) {
                    rt = expr(*b.rhs);
                    Hint h;
                    h.last = rt.cols[0];
                    lt = expr(*b.lhs, h);
                } else {
                    lt = expr(*b.lhs);  // raises the ambiguity error
                    rt = expr(*b.rhs);
                }
                if (lt.arity() + rt.arity() - 2 < 1)
                    fail(ErrorKind::Arity, e.span,
                         "arity mismatch: '.' requires resulting arity >= 1, got operands " +
                             std::to_string(lt.arity()) + " and " + std::to_string(rt.arity()));
                ColType joined = lt.cols.back().meet(rt.cols[0]);
                if (joined.is_empty() && !lt.cols.back().is_empty() && !rt.cols[0].is_empty())
                    fail(ErrorKind::Arity, e.span, "'.' joins expressions over disjoint signatures");
                TypeInfo t;
                t.cols.assign(lt.cols.begin(), lt.cols.end() - 1);
                t.cols.insert(t.cols.end(), rt.cols.begin() + 1, rt.cols.end());
                return t;
            }
            case ExprBinOp::DomRestrict: {
                TypeInfo lt = expr(*b.lhs);
                if (lt.arity() != 1)
                    fail(ErrorKind::Arity, e.span,
                         "'<:' requires a unary left operand, got arity " +
                             std::to_string(lt.arity()));
                Hint h;
                h.first = lt.cols[0];
                TypeInfo rt =
                    is_unresolved_overload(m_, env_, *b.rhs) ? expr(*b.rhs, h) : expr(*b.rhs);
                ColType c0 = lt.cols[0].meet(rt.cols[0]);
                if (c0.is_empty() && !lt.cols[0].is_empty() && !rt.cols[0].is_empty())
                    fail(ErrorKind::Arity, e.span,
                         "'<:' restricts an expression over disjoint signatures");
                TypeInfo t = rt;
                t.cols[0] = c0;
                return t;
            }
            case ExprBinOp::RangeRestrict: {
                TypeInfo rt = expr(*b.rhs);
                if (rt.arity() != 1)
                    fail(ErrorKind::Arity, e.span,
                         "':>' requires a unary right operand, got arity " +
                             std::to_string(rt.arity()));
                Hint h;
                h.last = rt.cols[0];
                TypeInfo lt =
                    is_unresolved_overload(m_, env_, *b.lhs) ? expr(*b.lhs, h) : expr(*b.lhs);
                ColType cl = lt.cols.back().meet(rt.cols[0]);
                if (cl.is_empty() && !lt.cols.back().is_empty() && !rt.cols[0].is_empty())
                    fail(ErrorKind::Arity, e.span,
                         "':>' restricts an expression over disjoint signatures");
                TypeInfo t = lt;
                t.cols.back() = cl;
                return t;
            }
        }
        fail(ErrorKind::Syntactic, e.span, "unknown operator");
    }

    TypeInfo name_ref(Expr& e, NameExpr& ne, const Hint& hint) {
        // Already resolved (arity_of may be called repeatedly on one AST).
        if (ne.target.kind != NameTarget::Kind::Unresolved) return type_of_target(ne.target);

        auto it = env_.find(ne.name);
        if (it != env_.end()) {
            ne.target.kind = NameTarget::Kind::Var;
            TypeInfo t;
            t.cols = {it->second};
            return t;
        }
        int sig = m_.sig_index(ne.name);
        if (sig >= 0) {
            if (!m_.field_candidates(ne.name).empty())
                fail(ErrorKind::Resolution, e.span,
                     "'" + ne.name + "' names both a signature and a field");
            ne.target.kind = NameTarget::Kind::Sig;
            ne.target.sig = sig;
            TypeInfo t;
            t.cols = {sig_coltype(m_, sig)};
            return t;
        }

        struct Candidate {
            NameTarget target;
            int first_top;
            int last_top;
        };
        std::vector<Candidate> cands;
        for (int fi : m_.field_candidates(ne.name)) {
            const FieldDecl& fd = m_.field(fi);
            Candidate c;
            c.target.kind = NameTarget::Kind::Field;
            c.target.field = fi;
            c.first_top = m_.sigs[static_cast<std::size_t>(fd.owner)].top;
            c.last_top = m_.sigs[static_cast<std::size_t>(fd.column_sigs.back())].top;
            cands.push_back(c);
        }
        bool ordering_name = ne.name == "next" || ne.name == "first" || ne.name == "last";
        if (ordering_name) {
            for (std::size_t k = 0; k < m_.orderings.size(); ++k) {
                Candidate c;
                c.target.kind = ne.name == "next"    ? NameTarget::Kind::OrdNext
                                : ne.name == "first" ? NameTarget::Kind::OrdFirst
                                                     : NameTarget::Kind::OrdLast;
                c.target.sig = m_.orderings[k];
                c.target.field = static_cast<int>(k);
                int top = m_.sigs[static_cast<std::size_t>(m_.orderings[k])].top;
                c.first_top = top;
                c.last_top = top;
                cands.push_back(c);
            }
        }
        if (cands.empty())
            fail(ErrorKind::Resolution, e.span, "unknown name '" + ne.name + "'");

        std::vector<Candidate> filtered;
        for (const auto& c : cands) {
            if (hint.first && !col_admits(*hint.first, c.first_top)) continue;
            if (hint.last && !col_admits(*hint.last, c.last_top)) continue;
            filtered.push_back(c);
        }
        if (filtered.empty())
            fail(ErrorKind::Arity, e.span,
                 "no declaration of '" + ne.name + "' fits this context");
        if (filtered.size() > 1)
            fail(ErrorKind::Resolution, e.span,
                 "ambiguous reference '" + ne.name + "'; disambiguate with '<:'");
        ne.target = filtered[0].target;
        return type_of_target(ne.target);
    }

    TypeInfo type_of_target(const NameTarget& t) {
        TypeInfo out;
        switch (t.kind) {
            case NameTarget::Kind::Sig:
                out.cols = {sig_coltype(m_, t.sig)};
                return out;
            case NameTarget::Kind::Field: {
                const FieldDecl& fd = m_.field(t.field);
                out.cols.push_back(sig_coltype(m_, fd.owner));
                for (int cs : fd.column_sigs) out.cols.push_back(sig_coltype(m_, cs));
                return out;
            }
            case NameTarget::Kind::OrdNext:
                out.cols = {sig_coltype(m_, t.sig), sig_coltype(m_, t.sig)};
                return out;
            case NameTarget::Kind::OrdFirst:
            case NameTarget::Kind::OrdLast:
                out.cols = {sig_coltype(m_, t.sig)};
                return out;
            case NameTarget::Kind::Var:
                // Re-resolution of an annotated var: type info is not stored,
                // treat it as any unary value.
                out.cols = {ColType::anything()};
                return out;
            case NameTarget::Kind::Unresolved: break;
        }
        out.cols = {ColType::anything()};
        return out;
    }
};

InternalEnv to_internal_env(const Model& model, const VarSigEnv& env) {
    InternalEnv out;
    for (const auto& [var, signame] : env) {
        int sig = model.sig_index(signame);
        if (sig < 0) {
            ParseError e;
            e.kind = ErrorKind::Resolution;
            e.message = "environment binds '" + var + "' to unknown signature '" +
                        signame + "'";
            throw e;
        }
        out[var] = sig_coltype(model, sig);
    }
    return out;
}

}  // namespace

ParseResult<int> arity_of(const Model& model, const VarSigEnv& env, Expr& e) {
    try {
        Checker ch(model, to_internal_env(model, env));
        TypeInfo t = ch.expr(e);
        return t.arity();
    } catch (const ParseError& err) {
        return err;
    }
}

ParseResult<TypeInfo> resolve_expr(const Model& model, const VarSigEnv& env, Expr& e) {
    try {
        Checker ch(model, to_internal_env(model, env));
        return ch.expr(e);
    } catch (const ParseError& err) {
        return err;
    }
}

ParseResult<std::monostate> resolve_formula(const Model& model, const VarSigEnv& env,
                                            Formula& f) {
    try {
        Checker ch(model, to_internal_env(model, env));
        ch.formula(f);
        return std::monostate{};
    } catch (const ParseError& err) {
        return err;
    }
}

// ---------------------------------------------------------------------------
// Model-level resolution
// ---------------------------------------------------------------------------

std::optional<ParseError> resolve_model(Model& model,
                                        const std::vector<std::string>& ordering_names) {
    try {
        if (model.sigs.size() > 64) {
            ParseError e;
            e.kind = ErrorKind::Resolution;
            e.message = "models with more than 64 signatures are not supported";
            throw e;
        }
        model.sig_by_name.clear();
        model.fields_by_name.clear();
        model.all_fields.clear();
        for (std::size_t i = 0; i < model.sigs.size(); ++i) {
            const auto& s = model.sigs[i];
            if (!model.sig_by_name.emplace(s.name, static_cast<int>(i)).second)
                fail(ErrorKind::Resolution, s.span, "duplicate signature '" + s.name + "'");
        }
        // Parents, acyclicity, top ancestors.
        for (auto& s : model.sigs) {
            if (s.kind == SigKind::TopLevel) {
                s.parent_sig = -1;
                continue;
            }
            s.parent_sig = model.sig_index(s.parent);
            if (s.parent_sig < 0)
                fail(ErrorKind::Resolution, s.span,
                     "unknown parent signature '" + s.parent + "' of '" + s.name + "'");
        }
        for (std::size_t i = 0; i < model.sigs.size(); ++i) {
            int cur = static_cast<int>(i);
            std::size_t hops = 0;
            while (model.sigs[static_cast<std::size_t>(cur)].kind != SigKind::TopLevel) {
                cur = model.sigs[static_cast<std::size_t>(cur)].parent_sig;
                if (++hops > model.sigs.size())
                    fail(ErrorKind::Resolution, model.sigs[i].span,
                         "signature hierarchy contains a cycle at '" + model.sigs[i].name +
                             "'");
            }
            model.sigs[i].top = cur;
        }
        // Fields.
        for (std::size_t i = 0; i < model.sigs.size(); ++i) {
            auto& s = model.sigs[i];
            for (std::size_t j = 0; j < s.fields.size(); ++j) {
                auto& f = s.fields[j];
                f.owner = static_cast<int>(i);
                f.column_sigs.clear();
                for (const auto& col : f.columns) {
                    int cs = model.sig_index(col);
                    if (cs < 0)
                        fail(ErrorKind::Resolution, f.span,
                             "unknown signature '" + col + "' in the declaration of field '" +
                                 f.name + "'");
                    f.column_sigs.push_back(cs);
                }
                int flat = static_cast<int>(model.all_fields.size());
                model.all_fields.push_back({static_cast<int>(i), static_cast<int>(j)});
                model.fields_by_name.emplace(f.name, flat);
                if (model.sig_by_name.count(f.name))
                    fail(ErrorKind::Resolution, f.span,
                         "field '" + f.name + "' clashes with a signature name");
            }
        }
        // Orderings.
        model.orderings.clear();
        for (const auto& name : ordering_names) {
            int sig = model.sig_index(name);
            if (sig < 0) {
                ParseError e;
                e.kind = ErrorKind::Resolution;
                e.message = "util/ordering opened on unknown signature '" + name + "'";
                throw e;
            }
            if (model.sigs[static_cast<std::size_t>(sig)].kind != SigKind::TopLevel) {
                ParseError e;
                e.kind = ErrorKind::Resolution;
                e.message = "util/ordering is only supported on top-level signatures ('" +
                            name + "')";
                throw e;
            }
            if (model.ordering_of(sig) >= 0) {
                ParseError e;
                e.kind = ErrorKind::Resolution;
                e.message = "duplicate util/ordering on '" + name + "'";
                throw e;
            }
            model.orderings.push_back(sig);
        }
        // Bodies.
        for (auto& fact : model.facts) {
            Checker ch(model, {});
            ch.formula(*fact.body);
        }
        for (auto& p : model.preds) {
            InternalEnv env;
            for (auto& param : p.params) {
                Checker ch(model, env);
                TypeInfo bt = ch.expr(*param.bound);
                if (bt.arity() != 1)
                    fail(ErrorKind::Arity, param.bound->span,
                         "parameters must range over unary expressions");
                for (const auto& v : param.vars) env[v] = bt.cols[0];
            }
            Checker ch(model, env);
            ch.formula(*p.body);
        }
        for (auto& fn : model.funs) {
            InternalEnv env;
            for (auto& param : fn.params) {
                Checker ch(model, env);
                TypeInfo bt = ch.expr(*param.bound);
                if (bt.arity() != 1)
                    fail(ErrorKind::Arity, param.bound->span,
                         "parameters must range over unary expressions");
                for (const auto& v : param.vars) env[v] = bt.cols[0];
            }
            Checker ch(model, env);
            TypeInfo rt = ch.expr(*fn.result_type);
            TypeInfo bt = ch.expr(*fn.body);
            if (rt.arity() != bt.arity())
                fail(ErrorKind::Arity, fn.body->span,
                     "function body arity " + std::to_string(bt.arity()) +
                         " does not match its declared result arity " +
                         std::to_string(rt.arity()));
        }
        for (auto& cmd : model.commands) {
            if (auto err = resolve_command(model, cmd)) throw *err;
        }
        return std::nullopt;
    } catch (const ParseError& e) {
        return e;
    }
}

std::optional<ParseError> resolve_command(const Model& model, RunCommand& cmd) {
    try {
        for (auto& s : cmd.scopes) {
            s.sig_index = model.sig_index(s.sig);
            if (s.sig_index < 0)
                fail(ErrorKind::Resolution, cmd.span,
                     "scope names unknown signature '" + s.sig + "'");
            if (model.sigs[static_cast<std::size_t>(s.sig_index)].kind != SigKind::TopLevel)
                fail(ErrorKind::Resolution, cmd.span,
                     "scope names non-top-level signature '" + s.sig + "'");
            int seen = 0;
            for (const auto& o : cmd.scopes)
                if (o.sig == s.sig) ++seen;
            if (seen > 1)
                fail(ErrorKind::Resolution, cmd.span,
                     "duplicate scope for signature '" + s.sig + "'");
        }
        Checker ch(model, {});
        ch.formula(*cmd.body);
        return std::nullopt;
    } catch (const ParseError& e) {
        return e;
    }
}

}  // namespace altest
