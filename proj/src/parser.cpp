// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#include "altest/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "altest/typecheck.hpp"

namespace altest {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Lexical: return "lexical";
        case ErrorKind::Syntactic: return "syntactic";
        case ErrorKind::Resolution: return "resolution";
        case ErrorKind::Arity: return "arity";
    }
    return "?";
}

std::string ParseError::to_string() const {
    std::ostringstream os;
    os << span.start_line << ":" << span.start_col << ": " << altest::to_string(kind)
       << ": " << message;
    return os.str();
}

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    End, Ident, Number,
    LBrace, RBrace, LBrack, RBrack, LParen, RParen,
    Comma, Colon, Bar, Slash,
    Plus, Minus, Amp, Dot, Tilde, Caret, Star,
    Eq, Arrow, DomRes, RanRes,
    Bang, AndAnd, OrOr, IffOp, ImpliesOp,
    Hash, PlusPlus, Lt, Gt,
    // keywords
    KwSig, KwAbstract, KwExtends, KwIn, KwFact, KwPred, KwFun, KwRun,
    KwFor, KwExpect, KwExactly, KwOpen, KwModule,
    KwAll, KwSome, KwNo, KwLone, KwOne, KwSet, KwDisj,
    KwNone, KwUniv, KwIden,
    KwNot, KwAnd, KwOr, KwImplies, KwIff,
    // reserved, rejected with targeted messages
    KwElse, KwLet, KwAs, KwBut, KwCheck, KwAssert, KwInt, KwVar, KwThis, KwSum,
};

struct Token {
    Tok type = Tok::End;
    std::string text;
    SourceSpan span;
};

struct RawComment {
    std::string text;  // without markers
    std::size_t start = 0;
    std::size_t end = 0;
};

const std::map<std::string, Tok>& keyword_table() {
    static const std::map<std::string, Tok> kw = {
        {"sig", Tok::KwSig},         {"abstract", Tok::KwAbstract},
        {"extends", Tok::KwExtends}, {"in", Tok::KwIn},
        {"fact", Tok::KwFact},       {"pred", Tok::KwPred},
        {"fun", Tok::KwFun},         {"run", Tok::KwRun},
        {"for", Tok::KwFor},         {"expect", Tok::KwExpect},
        {"exactly", Tok::KwExactly}, {"open", Tok::KwOpen},
        {"module", Tok::KwModule},   {"all", Tok::KwAll},
        {"some", Tok::KwSome},       {"no", Tok::KwNo},
        {"lone", Tok::KwLone},       {"one", Tok::KwOne},
        {"set", Tok::KwSet},         {"disj", Tok::KwDisj},
        {"none", Tok::KwNone},       {"univ", Tok::KwUniv},
        {"iden", Tok::KwIden},       {"not", Tok::KwNot},
        {"and", Tok::KwAnd},         {"or", Tok::KwOr},
        {"implies", Tok::KwImplies}, {"iff", Tok::KwIff},
        {"else", Tok::KwElse},       {"let", Tok::KwLet},
        {"as", Tok::KwAs},           {"but", Tok::KwBut},
        {"check", Tok::KwCheck},     {"assert", Tok::KwAssert},
        {"Int", Tok::KwInt},         {"int", Tok::KwInt},
        {"var", Tok::KwVar},         {"this", Tok::KwThis},
        {"sum", Tok::KwSum},
    };
    return kw;
}

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    // Tokenizes the whole input. Throws ParseError on lexical problems.
    std::vector<Token> run(std::vector<RawComment>* comments = nullptr) {
        std::vector<Token> out;
        while (true) {
            skip_trivia(comments);
            if (pos_ >= src_.size()) break;
            out.push_back(next_token());
        }
        Token end;
        end.type = Tok::End;
        end.span = here(0);
        out.push_back(end);
        return out;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string& msg, std::size_t from) {
        ParseError e;
        e.kind = ErrorKind::Lexical;
        e.message = msg;
        e.span = span_from(from);
        throw e;
    }

    SourceSpan here(std::size_t len) const {
        SourceSpan s;
        s.start = pos_;
        s.end = pos_ + len;
        s.start_line = s.end_line = line_;
        s.start_col = col_;
        s.end_col = col_ + static_cast<int>(len);
        return s;
    }

    SourceSpan span_from(std::size_t from) const {
        SourceSpan s;
        s.start = from;
        s.end = pos_;
        s.start_line = s.end_line = line_;
        s.start_col = s.end_col = col_;
        return s;
    }

    char cur() const { return src_[pos_]; }
    char peek(std::size_t k = 1) const {
        return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
    }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_trivia(std::vector<RawComment>* comments) {
        while (pos_ < src_.size()) {
            char c = cur();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek() == '/') {
                line_comment(2, comments);
            } else if (c == '-' && peek() == '-') {
                line_comment(2, comments);
            } else if (c == '/' && peek() == '*') {
                std::size_t start = pos_;
                advance(2);
                while (pos_ < src_.size() && !(cur() == '*' && peek() == '/')) advance();
                if (pos_ >= src_.size()) fail("unterminated block comment", start);
                advance(2);
                if (comments)
                    comments->push_back({std::string(src_.substr(start + 2, pos_ - start - 4)),
                                         start, pos_});
            } else {
                break;
            }
        }
    }

    void line_comment(std::size_t marker_len, std::vector<RawComment>* comments) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && cur() != '\n') advance();
        if (comments) {
            std::string body(src_.substr(start + marker_len, pos_ - start - marker_len));
            comments->push_back({body, start, pos_});
        }
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
    static bool ident_cont(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    Token next_token() {
        char c = cur();
        std::size_t start = pos_;
        int sl = line_, sc = col_;
        auto tok = [&](Tok t, std::size_t len) {
            Token out;
            out.type = t;
            out.text = std::string(src_.substr(start, len));
            out.span.start = start;
            out.span.end = start + len;
            out.span.start_line = sl;
            out.span.start_col = sc;
            out.span.end_line = line_;
            out.span.end_col = col_ + static_cast<int>(len);
            advance(len);
            return out;
        };

        if (ident_start(c)) {
            std::size_t len = 1;
            while (pos_ + len < src_.size() && ident_cont(src_[pos_ + len])) ++len;
            std::string word(src_.substr(pos_, len));
            auto it = keyword_table().find(word);
            return tok(it == keyword_table().end() ? Tok::Ident : it->second, len);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t len = 1;
            while (pos_ + len < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_ + len])))
                ++len;
            return tok(Tok::Number, len);
        }
        switch (c) {
            case '{': return tok(Tok::LBrace, 1);
            case '}': return tok(Tok::RBrace, 1);
            case '[': return tok(Tok::LBrack, 1);
            case ']': return tok(Tok::RBrack, 1);
            case '(': return tok(Tok::LParen, 1);
            case ')': return tok(Tok::RParen, 1);
            case ',': return tok(Tok::Comma, 1);
            case '|': return peek() == '|' ? tok(Tok::OrOr, 2) : tok(Tok::Bar, 1);
            case '&': return peek() == '&' ? tok(Tok::AndAnd, 2) : tok(Tok::Amp, 1);
            case '.': return tok(Tok::Dot, 1);
            case '~': return tok(Tok::Tilde, 1);
            case '^': return tok(Tok::Caret, 1);
            case '*': return tok(Tok::Star, 1);
            case '#': return tok(Tok::Hash, 1);
            case '/': return tok(Tok::Slash, 1);
            case '!': return tok(Tok::Bang, 1);
            case '+': return peek() == '+' ? tok(Tok::PlusPlus, 2) : tok(Tok::Plus, 1);
            case '-': return peek() == '>' ? tok(Tok::Arrow, 2) : tok(Tok::Minus, 1);
            case '=':
                if (peek() == '>') return tok(Tok::ImpliesOp, 2);
                return tok(Tok::Eq, 1);
            case '<':
                if (peek() == ':') return tok(Tok::DomRes, 2);
                if (peek() == '=' && peek(2) == '>') return tok(Tok::IffOp, 3);
                return tok(Tok::Lt, 1);
            case ':':
                if (peek() == '>') return tok(Tok::RanRes, 2);
                return tok(Tok::Colon, 1);
            case '>': return tok(Tok::Gt, 1);
            default: break;
        }
        fail("unexpected character '" + std::string(1, c) + "'", pos_);
    }
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

constexpr int kMaxDepth = 64;
constexpr std::size_t kMaxSteps = 400'000;

class Parser {
  public:
    Parser(std::string_view src) {
        Lexer lex(src);
        toks_ = lex.run(&comments_);
    }

    Model parse_model_text() {
        Model m;
        if (at(Tok::KwModule)) {
            next();
            m.module_name = expect_ident("module name");
        }
        while (at(Tok::KwOpen)) parse_open(m);
        while (!at(Tok::End)) parse_paragraph(m);
        return m;
    }

    RunCommand parse_single_command(bool require_expect) {
        RunCommand cmd = parse_run(require_expect);
        if (!at(Tok::End)) fail_here("unexpected input after run command");
        return cmd;
    }

    std::vector<NamedFormula> parse_pred_fragment_text() {
        std::vector<NamedFormula> out;
        while (!at(Tok::End)) {
            if (!at(Tok::KwPred)) fail_here("expected a predicate declaration");
            std::size_t pred_pos = cur().span.start;
            next();
            NamedFormula nf;
            nf.name = expect_ident("predicate name");
            nf.body = parse_block();
            nf.freq = freq_before(pred_pos);
            out.push_back(std::move(nf));
        }
        return out;
    }

    const std::vector<std::string>& ordering_names() const { return pending_orderings_; }

  private:
    std::vector<Token> toks_;
    std::vector<RawComment> comments_;
    std::size_t idx_ = 0;
    int depth_ = 0;
    std::size_t steps_ = 0;

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > kMaxDepth) p.fail_here("expression nesting too deep");
        }
        ~DepthGuard() { --p.depth_; }
    };

    const Token& cur() const { return toks_[idx_]; }
    const Token& la(std::size_t k) const {
        std::size_t i = std::min(idx_ + k, toks_.size() - 1);
        return toks_[i];
    }
    bool at(Tok t) const { return cur().type == t; }

    const Token& next() {
        if (++steps_ > kMaxSteps) fail_here("input too complex");
        const Token& t = toks_[idx_];
        if (t.type != Tok::End) ++idx_;
        return t;
    }

    [[noreturn]] void fail_here(const std::string& msg) const {
        ParseError e;
        e.kind = ErrorKind::Syntactic;
        e.message = msg;
        e.span = cur().span;
        throw e;
    }

    void expect(Tok t, const char* what) {
        if (!at(t)) fail_here(std::string("expected ") + what + ", found '" +
                              (cur().type == Tok::End ? "end of input" : cur().text) + "'");
        next();
    }

    std::string expect_ident(const char* what) {
        if (!at(Tok::Ident))
            fail_here(std::string("expected ") + what + ", found '" +
                      (cur().type == Tok::End ? "end of input" : cur().text) + "'");
        return next().text;
    }

    int expect_number(const char* what) {
        if (!at(Tok::Number)) fail_here(std::string("expected ") + what);
        const std::string& s = cur().text;
        if (s.size() > 6) fail_here("number out of range");
        next();
        return std::stoi(s);
    }

    std::optional<int> freq_before(std::size_t pos) const {
        // Nearest comment ending before `pos` with only whitespace between,
        // shaped like "freq: <n>".
        const RawComment* best = nullptr;
        for (const auto& c : comments_)
            if (c.end <= pos && (!best || c.end > best->end)) best = &c;
        if (!best) return std::nullopt;
        std::string t = best->text;
        std::size_t i = t.find_first_not_of(" \t");
        if (i == std::string::npos || t.compare(i, 5, "freq:") != 0) return std::nullopt;
        i += 5;
        i = t.find_first_not_of(" \t", i);
        if (i == std::string::npos) return std::nullopt;
        std::size_t j = i;
        while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
        if (j == i) return std::nullopt;
        return std::stoi(t.substr(i, j - i));
    }

    // -- model paragraphs ---------------------------------------------------

    void parse_open(Model& m) {
        expect(Tok::KwOpen, "'open'");
        std::string first = expect_ident("module path");
        if (first != "util" || !at(Tok::Slash)) fail_here("only util/ordering can be opened");
        next();
        std::string second = expect_ident("module name");
        if (second != "ordering") fail_here("only util/ordering can be opened");
        expect(Tok::LBrack, "'['");
        std::string sig = expect_ident("ordered signature name");
        expect(Tok::RBrack, "']'");
        if (at(Tok::KwAs)) fail_here("module aliases are not supported");
        // Stash the name; resolution turns it into an index.
        (void)m;
        pending_orderings_.push_back(sig);
    }

    std::vector<std::string> pending_orderings_;

    void parse_paragraph(Model& m) {
        switch (cur().type) {
            case Tok::KwAbstract:
            case Tok::KwLone:
            case Tok::KwOne:
            case Tok::KwSome:
            case Tok::KwSig:
                parse_sig(m);
                return;
            case Tok::KwFact: parse_fact(m); return;
            case Tok::KwPred: parse_pred(m); return;
            case Tok::KwFun: parse_fun(m); return;
            case Tok::KwRun: m.commands.push_back(parse_run(true)); return;
            case Tok::KwCheck:
            case Tok::KwAssert:
                fail_here("assertions and check commands are not supported");
            case Tok::KwVar: fail_here("temporal declarations are not supported");
            case Tok::KwOpen: fail_here("opens must precede all other paragraphs");
            default:
                fail_here("expected a signature, fact, pred, fun or run declaration");
        }
    }

    void parse_sig(Model& m) {
        bool is_abstract = false;
        std::optional<Mult> mult;
        while (true) {
            if (at(Tok::KwAbstract)) {
                if (is_abstract) fail_here("duplicate 'abstract'");
                is_abstract = true;
                next();
            } else if (at(Tok::KwLone) || at(Tok::KwSome) || at(Tok::KwOne)) {
                if (mult) fail_here("duplicate signature multiplicity");
                mult = cur().type == Tok::KwLone   ? Mult::Lone
                       : cur().type == Tok::KwSome ? Mult::Some
                                                   : Mult::One;
                next();
            } else {
                break;
            }
        }
        SourceSpan span = cur().span;
        expect(Tok::KwSig, "'sig'");
        std::vector<std::string> names;
        names.push_back(expect_ident("signature name"));
        while (at(Tok::Comma)) {
            next();
            names.push_back(expect_ident("signature name"));
        }
        SigKind kind = SigKind::TopLevel;
        std::string parent;
        if (at(Tok::KwExtends) || at(Tok::KwIn)) {
            kind = at(Tok::KwExtends) ? SigKind::Extension : SigKind::Subset;
            next();
            parent = expect_ident("parent signature name");
            if (at(Tok::Plus)) fail_here("subset of a union of parents is not supported");
        }
        expect(Tok::LBrace, "'{'");
        std::vector<FieldDecl> fields;
        while (!at(Tok::RBrace)) {
            parse_field_group(fields);
            if (at(Tok::Comma)) {
                next();
                continue;
            }
            break;
        }
        expect(Tok::RBrace, "'}'");
        if (at(Tok::LBrace)) fail_here("appended signature facts are not supported");

        for (const auto& n : names) {
            SigDecl s;
            s.name = n;
            s.kind = kind;
            s.parent = parent;
            s.abstract_sig = is_abstract;
            s.mult = mult;
            s.fields = fields;
            s.span = span;
            m.sigs.push_back(std::move(s));
        }
    }

    void parse_field_group(std::vector<FieldDecl>& out) {
        SourceSpan span = cur().span;
        std::vector<std::string> names;
        names.push_back(expect_ident("field name"));
        while (at(Tok::Comma)) {
            next();
            names.push_back(expect_ident("field name"));
        }
        expect(Tok::Colon, "':' in field declaration");

        std::optional<Mult> leading;
        if (at(Tok::KwSet) || at(Tok::KwLone) || at(Tok::KwSome) || at(Tok::KwOne)) {
            leading = keyword_mult(next().type);
        }
        std::vector<std::string> cols;
        cols.push_back(expect_ident("column signature"));
        std::optional<Mult> final_mult;
        while (at(Tok::Arrow)) {
            next();
            if (final_mult) fail_here("multiplicity is only supported on the final column");
            if (at(Tok::KwSet) || at(Tok::KwLone) || at(Tok::KwSome) || at(Tok::KwOne))
                final_mult = keyword_mult(next().type);
            cols.push_back(expect_ident("column signature"));
        }

        Mult mult;
        if (cols.size() == 1) {
            // Binary field: a bare bound defaults to `one` as in Alloy.
            mult = leading.value_or(Mult::One);
        } else {
            if (leading) fail_here("multiplicity is only supported on the final column");
            mult = final_mult.value_or(Mult::Set);
        }
        for (const auto& n : names) {
            FieldDecl f;
            f.name = n;
            f.columns = cols;
            f.mult = mult;
            f.span = span;
            out.push_back(std::move(f));
        }
    }

    static Mult keyword_mult(Tok t) {
        switch (t) {
            case Tok::KwSet: return Mult::Set;
            case Tok::KwLone: return Mult::Lone;
            case Tok::KwSome: return Mult::Some;
            default: return Mult::One;
        }
    }

    void parse_fact(Model& m) {
        expect(Tok::KwFact, "'fact'");
        Fact f;
        if (at(Tok::Ident)) f.name = next().text;
        f.body = parse_block();
        m.facts.push_back(std::move(f));
    }

    std::vector<PredParam> parse_params() {
        std::vector<PredParam> params;
        Tok open = cur().type;
        if (open != Tok::LBrack && open != Tok::LParen) return params;
        Tok close = open == Tok::LBrack ? Tok::RBrack : Tok::RParen;
        next();
        if (!at(close)) {
            while (true) {
                PredParam p;
                p.vars.push_back(expect_ident("parameter name"));
                while (at(Tok::Comma)) {
                    next();
                    p.vars.push_back(expect_ident("parameter name"));
                }
                expect(Tok::Colon, "':' in parameter declaration");
                if (at(Tok::KwOne)) next();  // scalar marker, the default
                if (at(Tok::KwSet) || at(Tok::KwLone) || at(Tok::KwSome))
                    fail_here("only scalar parameters are supported");
                p.bound = parse_expr();
                params.push_back(std::move(p));
                if (at(Tok::Comma)) {
                    next();
                    continue;
                }
                break;
            }
        }
        expect(close, close == Tok::RBrack ? "']'" : "')'");
        return params;
    }

    void parse_pred(Model& m) {
        expect(Tok::KwPred, "'pred'");
        PredDecl p;
        p.name = expect_ident("predicate name");
        p.params = parse_params();
        p.body = parse_block();
        m.preds.push_back(std::move(p));
    }

    void parse_fun(Model& m) {
        expect(Tok::KwFun, "'fun'");
        FunDecl f;
        f.name = expect_ident("function name");
        f.params = parse_params();
        expect(Tok::Colon, "':' before function result type");
        if (at(Tok::KwSet) || at(Tok::KwLone) || at(Tok::KwSome) || at(Tok::KwOne)) next();
        f.result_type = parse_expr();
        expect(Tok::LBrace, "'{'");
        f.body = parse_expr();
        expect(Tok::RBrace, "'}'");
        m.funs.push_back(std::move(f));
    }

    RunCommand parse_run(bool require_expect) {
        SourceSpan span = cur().span;
        expect(Tok::KwRun, "'run'");
        RunCommand cmd;
        cmd.span = span;
        if (at(Tok::Ident)) cmd.name = next().text;
        if (!at(Tok::LBrace))
            fail_here("expected '{' (run commands must carry an explicit body)");
        cmd.body = parse_block();
        if (at(Tok::KwFor)) {
            next();
            while (true) {
                ScopeEntry s;
                if (at(Tok::KwExactly)) {
                    s.exact = true;
                    next();
                }
                if (!at(Tok::Number))
                    fail_here("expected a per-signature scope ('for <n> <Sig>, ...')");
                s.bound = expect_number("scope bound");
                s.sig = expect_ident("scoped signature name");
                cmd.scopes.push_back(std::move(s));
                if (at(Tok::Comma)) {
                    next();
                    continue;
                }
                break;
            }
            if (at(Tok::KwBut)) fail_here("'but' scopes are not supported");
        }
        if (at(Tok::KwExpect)) {
            next();
            int v = expect_number("0 or 1 after 'expect'");
            if (v != 0 && v != 1) fail_here("expect must be 0 or 1");
            cmd.expect = v;
        } else if (require_expect) {
            fail_here("run command is missing its 'expect' clause");
        }
        return cmd;
    }

    // -- formulas -----------------------------------------------------------

    FormulaPtr parse_block() {
        expect(Tok::LBrace, "'{'");
        DepthGuard guard(*this);
        std::vector<FormulaPtr> fs;
        while (!at(Tok::RBrace)) {
            if (at(Tok::End)) fail_here("unterminated block");
            fs.push_back(parse_formula());
        }
        next();  // consume }
        return fold_and(fs);
    }

    FormulaPtr parse_formula() {
        DepthGuard guard(*this);
        return parse_or();
    }

    FormulaPtr parse_or() {
        FormulaPtr lhs = parse_iff();
        while (at(Tok::OrOr) || at(Tok::KwOr)) {
            next();
            lhs = make_logic(LogOp::Or, lhs, parse_iff());
        }
        return lhs;
    }

    FormulaPtr parse_iff() {
        FormulaPtr lhs = parse_implies();
        while (at(Tok::IffOp) || at(Tok::KwIff)) {
            next();
            lhs = make_logic(LogOp::Iff, lhs, parse_implies());
        }
        return lhs;
    }

    FormulaPtr parse_implies() {
        FormulaPtr lhs = parse_and();
        if (at(Tok::ImpliesOp) || at(Tok::KwImplies)) {
            next();
            FormulaPtr rhs = parse_implies();  // right associative
            if (at(Tok::KwElse)) fail_here("implies-else is not supported");
            return make_logic(LogOp::Implies, lhs, rhs);
        }
        return lhs;
    }

    FormulaPtr parse_and() {
        FormulaPtr lhs = parse_neg();
        while (at(Tok::AndAnd) || at(Tok::KwAnd)) {
            next();
            lhs = make_logic(LogOp::And, lhs, parse_neg());
        }
        return lhs;
    }

    FormulaPtr parse_neg() {
        DepthGuard guard(*this);
        if (at(Tok::Bang) || at(Tok::KwNot)) {
            next();
            return make_not(parse_neg());
        }
        return parse_atomic_formula();
    }

    bool quantifier_ahead() const {
        // After all/some/no/lone/one: [disj] ident (, [disj] ident)* ':'
        std::size_t j = idx_ + 1;
        auto t = [&](std::size_t k) { return toks_[std::min(k, toks_.size() - 1)].type; };
        if (t(j) == Tok::KwDisj) ++j;
        if (t(j) != Tok::Ident) return false;
        ++j;
        while (t(j) == Tok::Comma) {
            ++j;
            if (t(j) == Tok::KwDisj) ++j;
            if (t(j) != Tok::Ident) return false;
            ++j;
        }
        return t(j) == Tok::Colon;
    }

    FormulaPtr parse_atomic_formula() {
        DepthGuard guard(*this);
        SourceSpan span = cur().span;
        switch (cur().type) {
            case Tok::KwAll:
                return parse_quantifier(QuantKind::All, span);
            case Tok::KwSome:
            case Tok::KwNo:
            case Tok::KwLone:
            case Tok::KwOne: {
                QuantKind k = cur().type == Tok::KwSome   ? QuantKind::Some
                              : cur().type == Tok::KwNo   ? QuantKind::No
                              : cur().type == Tok::KwLone ? QuantKind::Lone
                                                          : QuantKind::One;
                if (quantifier_ahead()) return parse_quantifier(k, span);
                next();
                auto f = make_mult_test(k, parse_expr());
                f->span = span;
                return f;
            }
            case Tok::KwLet: fail_here("let bindings are not supported");
            case Tok::KwSum: fail_here("integer expressions are not supported");
            case Tok::LBrace:
                return parse_block();
            case Tok::LParen: {
                // A parenthesis can open a formula or an expression; try the
                // formula reading first and fall back on failure.
                std::size_t save = idx_;
                std::size_t save_steps = steps_;
                int save_depth = depth_;
                try {
                    next();
                    FormulaPtr f = parse_formula();
                    expect(Tok::RParen, "')'");
                    return finish_comparison_none(f);
                } catch (const ParseError&) {
                    idx_ = save;
                    steps_ = save_steps + 16;  // backtracking is not free
                    depth_ = save_depth;
                    if (steps_ > kMaxSteps) fail_here("input too complex");
                }
                return parse_comparison();
            }
            default:
                return parse_comparison();
        }
    }

    // A parenthesized formula must not be followed by comparison operators.
    FormulaPtr finish_comparison_none(FormulaPtr f) {
        if (at(Tok::KwIn) || at(Tok::Eq))
            fail_here("cannot compare formulas; expected an expression");
        return f;
    }

    FormulaPtr parse_quantifier(QuantKind kind, SourceSpan span) {
        next();  // quantifier keyword
        std::vector<QuantDecl> decls;
        while (true) {
            QuantDecl d;
            if (at(Tok::KwDisj)) {
                d.disj = true;
                next();
            }
            d.vars.push_back(expect_ident("quantified variable"));
            while (at(Tok::Comma) && la(1).type == Tok::Ident) {
                // Names before the ':' extend this declaration; a comma after
                // the bound starts the next declaration instead.
                next();
                d.vars.push_back(expect_ident("quantified variable"));
            }
            expect(Tok::Colon, "':' in quantifier declaration");
            if (at(Tok::KwOne)) next();  // scalar marker, the default
            if (at(Tok::KwSet) || at(Tok::KwLone) || at(Tok::KwSome))
                fail_here("higher-order quantification is not supported");
            d.bound = parse_expr();
            decls.push_back(std::move(d));
            if (at(Tok::Comma)) {
                next();
                continue;
            }
            break;
        }
        FormulaPtr body;
        if (at(Tok::Bar)) {
            next();
            body = parse_formula();
        } else if (at(Tok::LBrace)) {
            body = parse_block();
        } else {
            fail_here("expected '|' or '{' after quantifier declarations");
        }
        auto f = make_quant(kind, std::move(decls), std::move(body));
        f->span = span;
        return f;
    }

    FormulaPtr parse_comparison() {
        SourceSpan span = cur().span;
        ExprPtr lhs = parse_expr();
        bool negated = false;
        if (at(Tok::Bang) && (la(1).type == Tok::KwIn || la(1).type == Tok::Eq)) {
            negated = true;
            next();
        } else if (at(Tok::KwNot) && (la(1).type == Tok::KwIn || la(1).type == Tok::Eq)) {
            negated = true;
            next();
        }
        CmpOp op;
        if (at(Tok::KwIn)) {
            op = CmpOp::In;
        } else if (at(Tok::Eq)) {
            op = CmpOp::Eq;
        } else if (at(Tok::Lt) || at(Tok::Gt)) {
            fail_here("integer comparisons are not supported");
        } else {
            fail_here("expected a formula, found a bare expression");
        }
        next();
        ExprPtr rhs = parse_expr();
        FormulaPtr f = make_cmp(op, lhs, rhs);
        f->span = span;
        return negated ? make_not(f) : f;
    }

    // -- expressions ----------------------------------------------------------

    ExprPtr parse_expr() {
        DepthGuard guard(*this);
        return parse_add();
    }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_intersect();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            ExprBinOp op = at(Tok::Plus) ? ExprBinOp::Union : ExprBinOp::Diff;
            SourceSpan span = cur().span;
            next();
            lhs = make_binary(op, lhs, parse_intersect());
            lhs->span = span;
        }
        return lhs;
    }

    ExprPtr parse_intersect() {
        ExprPtr lhs = parse_arrow();
        while (at(Tok::Amp)) {
            SourceSpan span = cur().span;
            next();
            lhs = make_binary(ExprBinOp::Intersect, lhs, parse_arrow());
            lhs->span = span;
        }
        return lhs;
    }

    ExprPtr parse_arrow() {
        ExprPtr lhs = parse_ranres();
        while (at(Tok::Arrow)) {
            SourceSpan span = cur().span;
            next();
            lhs = make_binary(ExprBinOp::Product, lhs, parse_ranres());
            lhs->span = span;
        }
        return lhs;
    }

    ExprPtr parse_ranres() {
        ExprPtr lhs = parse_domres();
        while (at(Tok::RanRes)) {
            SourceSpan span = cur().span;
            next();
            lhs = make_binary(ExprBinOp::RangeRestrict, lhs, parse_domres());
            lhs->span = span;
        }
        return lhs;
    }

    ExprPtr parse_domres() {
        ExprPtr lhs = parse_join();
        while (at(Tok::DomRes)) {
            SourceSpan span = cur().span;
            next();
            lhs = make_binary(ExprBinOp::DomRestrict, lhs, parse_join());
            lhs->span = span;
        }
        return lhs;
    }

    ExprPtr parse_join() {
        ExprPtr lhs = parse_unary_expr();
        while (at(Tok::Dot)) {
            SourceSpan span = cur().span;
            next();
            lhs = make_binary(ExprBinOp::Join, lhs, parse_unary_expr());
            lhs->span = span;
        }
        return lhs;
    }

    ExprPtr parse_unary_expr() {
        DepthGuard guard(*this);
        SourceSpan span = cur().span;
        if (at(Tok::Tilde) || at(Tok::Caret) || at(Tok::Star)) {
            ExprUnOp op = at(Tok::Tilde)   ? ExprUnOp::Transpose
                          : at(Tok::Caret) ? ExprUnOp::Closure
                                           : ExprUnOp::ReflClosure;
            next();
            auto e = make_unary(op, parse_unary_expr());
            e->span = span;
            return e;
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        DepthGuard guard(*this);
        SourceSpan span = cur().span;
        switch (cur().type) {
            case Tok::Ident: {
                auto e = make_name(next().text);
                e->span = span;
                return e;
            }
            case Tok::KwNone: {
                next();
                auto e = make_const(ConstKind::None);
                e->span = span;
                return e;
            }
            case Tok::KwUniv: {
                next();
                auto e = make_const(ConstKind::Univ);
                e->span = span;
                return e;
            }
            case Tok::KwIden: {
                next();
                auto e = make_const(ConstKind::Iden);
                e->span = span;
                return e;
            }
            case Tok::LParen: {
                next();
                ExprPtr e = parse_expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Number: fail_here("integer expressions are not supported");
            case Tok::KwInt: fail_here("the Int signature is not supported");
            case Tok::Hash: fail_here("cardinality (#) is not supported");
            case Tok::PlusPlus: fail_here("override (++) is not supported");
            case Tok::KwThis: fail_here("'this' is not supported");
            case Tok::LBrace: fail_here("set comprehensions are not supported");
            default:
                fail_here("expected an expression, found '" +
                          (cur().type == Tok::End ? "end of input" : cur().text) + "'");
        }
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

ParseResult<Model> parse_model(std::string_view text) {
    try {
        Parser p(text);
        Model m = p.parse_model_text();
        if (auto err = resolve_model(m, p.ordering_names())) return *err;
        return m;
    } catch (const ParseError& e) {
        return e;
    } catch (const std::exception& e) {
        ParseError pe;
        pe.kind = ErrorKind::Syntactic;
        pe.message = std::string("internal parse failure: ") + e.what();
        return pe;
    }
}

ParseResult<RunCommand> parse_command(const Model& model, std::string_view text,
                                      bool require_expect) {
    try {
        Parser p(text);
        RunCommand cmd = p.parse_single_command(require_expect);
        if (auto err = resolve_command(model, cmd)) return *err;
        return cmd;
    } catch (const ParseError& e) {
        return e;
    } catch (const std::exception& e) {
        ParseError pe;
        pe.kind = ErrorKind::Syntactic;
        pe.message = std::string("internal parse failure: ") + e.what();
        return pe;
    }
}

ParseResult<std::vector<NamedFormula>> parse_pred_fragment(const Model& model,
                                                           std::string_view text) {
    try {
        Parser p(text);
        std::vector<NamedFormula> preds = p.parse_pred_fragment_text();
        for (auto& nf : preds) {
            VarSigEnv env;
            auto r = resolve_formula(model, env, *nf.body);
            if (!is_ok(r)) return get_error(r);
        }
        return preds;
    } catch (const ParseError& e) {
        return e;
    } catch (const std::exception& e) {
        ParseError pe;
        pe.kind = ErrorKind::Syntactic;
        pe.message = std::string("internal parse failure: ") + e.what();
        return pe;
    }
}

// ---------------------------------------------------------------------------
// Lenient extraction of run commands from response text
// ---------------------------------------------------------------------------

namespace {

struct MiniTok {
    std::string_view text;
    std::size_t start = 0;
    std::size_t end = 0;
    int depth = 0;
    bool is_word = false;
    bool is_number = false;
};

struct MiniComment {
    std::string text;
    std::size_t start = 0;
    std::size_t end = 0;
};

std::string strip_fences(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    auto is_fence = [](std::string_view line) {
        std::size_t i = line.find_first_not_of(" \t");
        return i != std::string_view::npos && line.substr(i, 3) == "```";
    };
    bool any_fence = false;
    for (const auto& l : lines)
        if (is_fence(l)) any_fence = true;
    std::string out;
    if (!any_fence) {
        out.assign(text);
        return out;
    }
    bool in_fence = false;
    for (const auto& l : lines) {
        if (is_fence(l)) {
            in_fence = !in_fence;
            continue;
        }
        if (in_fence) {
            out.append(l);
            out.push_back('\n');
        }
    }
    return out;
}

void mini_scan(std::string_view s, std::vector<MiniTok>& toks,
               std::vector<MiniComment>& comments) {
    std::size_t i = 0;
    int depth = 0;
    auto word_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)); };
    auto word_cont = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        if ((c == '/' && i + 1 < s.size() && s[i + 1] == '/') ||
            (c == '-' && i + 1 < s.size() && s[i + 1] == '-')) {
            std::size_t start = i;
            i += 2;
            while (i < s.size() && s[i] != '\n') ++i;
            std::string body(s.substr(start + 2, i - start - 2));
            comments.push_back({body, start, i});
            continue;
        }
        if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
            std::size_t start = i;
            i += 2;
            while (i + 1 < s.size() && !(s[i] == '*' && s[i + 1] == '/')) ++i;
            std::size_t body_end = std::min(i, s.size());
            i = std::min(i + 2, s.size());
            comments.push_back({std::string(s.substr(start + 2, body_end - start - 2)),
                                start, i});
            continue;
        }
        MiniTok t;
        t.start = i;
        t.depth = depth;
        if (word_start(c)) {
            std::size_t j = i + 1;
            while (j < s.size() && word_cont(s[j])) ++j;
            t.text = s.substr(i, j - i);
            t.is_word = true;
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            t.text = s.substr(i, j - i);
            t.is_number = true;
            i = j;
        } else {
            if (c == '{') ++depth;
            if (c == '}') depth = std::max(0, depth - 1);
            t.text = s.substr(i, 1);
            ++i;
        }
        t.end = i;
        toks.push_back(t);
    }
}

// Scans the structural tail of a command: the balanced block, then an
// optional for clause and expect clause. Returns the end offset.
std::size_t command_end(const std::vector<MiniTok>& toks, std::size_t k,
                        std::size_t fallback_end) {
    std::size_t j = k + 1;
    auto tok = [&](std::size_t i) -> const MiniTok* {
        return i < toks.size() ? &toks[i] : nullptr;
    };
    if (tok(j) && tok(j)->is_word) ++j;  // command name
    if (!tok(j) || tok(j)->text != "{") return fallback_end;
    int depth = 0;
    for (; j < toks.size(); ++j) {
        if (toks[j].text == "{") ++depth;
        if (toks[j].text == "}") {
            --depth;
            if (depth == 0) break;
        }
    }
    if (j >= toks.size()) return fallback_end;  // unbalanced; take the rest
    std::size_t end = toks[j].end;
    ++j;
    if (tok(j) && tok(j)->is_word && tok(j)->text == "for") {
        std::size_t probe = j + 1;
        while (true) {
            std::size_t p = probe;
            if (tok(p) && tok(p)->is_word && tok(p)->text == "exactly") ++p;
            if (!(tok(p) && tok(p)->is_number)) break;
            ++p;
            if (!(tok(p) && tok(p)->is_word)) break;
            end = tok(p)->end;
            ++p;
            probe = p;
            j = p;
            if (tok(p) && tok(p)->text == ",") {
                probe = p + 1;
                j = probe;
                continue;
            }
            break;
        }
    }
    if (tok(j) && tok(j)->is_word && tok(j)->text == "expect" && tok(j + 1) &&
        tok(j + 1)->is_number) {
        end = tok(j + 1)->end;
    }
    return end;
}

std::string trim(std::string s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<ExtractedCommand> extract_commands(std::string_view response_text) {
    std::string content = strip_fences(response_text);
    std::vector<MiniTok> toks;
    std::vector<MiniComment> comments;
    mini_scan(content, toks, comments);

    std::vector<std::size_t> run_positions;
    for (std::size_t i = 0; i < toks.size(); ++i)
        if (toks[i].is_word && toks[i].depth == 0 && toks[i].text == "run")
            run_positions.push_back(i);

    auto only_ws_between = [&](std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to && i < content.size(); ++i) {
            char c = content[i];
            if (c != ' ' && c != '\t' && c != '\r' && c != '\n') return false;
        }
        return true;
    };

    std::vector<ExtractedCommand> out;
    for (std::size_t r = 0; r < run_positions.size(); ++r) {
        std::size_t k = run_positions[r];
        std::size_t fallback = r + 1 < run_positions.size()
                                   ? toks[run_positions[r + 1]].start
                                   : content.size();
        std::size_t end = command_end(toks, k, fallback);

        ExtractedCommand cmd;
        cmd.raw = content.substr(toks[k].start, end - toks[k].start);

        // Contiguous comment block directly before the run keyword.
        std::vector<const MiniComment*> block;
        std::size_t boundary = toks[k].start;
        for (auto it = comments.rbegin(); it != comments.rend(); ++it) {
            if (it->end > boundary) continue;
            if (!only_ws_between(it->end, boundary)) break;
            block.push_back(&*it);
            boundary = it->start;
        }
        if (!block.empty()) {
            std::reverse(block.begin(), block.end());
            std::string joined;
            for (std::size_t i = 0; i < block.size(); ++i) {
                if (i) joined += "\n";
                joined += trim(block[i]->text);
            }
            cmd.comment = joined;
        }
        out.push_back(std::move(cmd));
    }
    return out;
}

}  // namespace altest
