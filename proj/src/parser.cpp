#include "parser.hpp"

#include <optional>

namespace gtlc::surface {

namespace {

using types::TypePtr;

struct Parser {
    const std::vector<Token>& toks;
    size_t pos = 0;

    explicit Parser(const std::vector<Token>& t) : toks(t) {}

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    bool at(Tok k) const { return peek().kind == k; }
    const Token& advance() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
    bool accept(Tok k) {
        if (at(k)) {
            advance();
            return true;
        }
        return false;
    }
    const Token& expect(Tok k, const char* what) {
        if (!at(k))
            fail(std::string("expected ") + what + ", found '" +
                 describe(peek()) + "'");
        return toks[pos++];
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw CompileError(CompileError::Kind::Parse, peek().span, msg);
    }
    static std::string describe(const Token& t) {
        if (t.kind == Tok::LIdent || t.kind == Tok::UIdent || t.kind == Tok::IntLit ||
            t.kind == Tok::FloatLit)
            return t.text;
        return tok_name(t.kind);
    }

    Span span_from(uint32_t begin) const {
        uint32_t end = pos > 0 ? toks[pos - 1].span.end : begin;
        return Span{begin, end};
    }

    // ---- types ----

    TypePtr parse_type() {
        uint32_t b = peek().span.begin;
        TypePtr base;
        if (accept(Tok::LParen)) {
            TypePtr first = parse_type();
            if (at(Tok::Comma)) {
                std::vector<TypePtr> params{first};
                while (accept(Tok::Comma)) params.push_back(parse_type());
                expect(Tok::RParen, "')'");
                expect(Tok::Arrow, "'->' after parameter list");
                return types::t_fun(std::move(params), parse_type());
            }
            expect(Tok::RParen, "')'");
            base = first;
        } else {
            base = parse_type_atom();
        }
        if (at(Tok::Star)) {
            std::vector<TypePtr> comps{base};
            while (accept(Tok::Star)) comps.push_back(parse_type_factor());
            base = types::t_tuple(std::move(comps));
        }
        if (accept(Tok::Arrow)) {
            (void)b;
            return types::t_fun({base}, parse_type());
        }
        return base;
    }

    // A tuple component or constructor field: arrows must be parenthesized.
    TypePtr parse_type_factor() {
        if (accept(Tok::LParen)) {
            TypePtr t = parse_type();
            expect(Tok::RParen, "')'");
            return t;
        }
        return parse_type_atom();
    }

    TypePtr parse_type_atom() {
        if (accept(Tok::Question)) return types::t_unknown();
        if (accept(Tok::Ref)) {
            expect(Tok::LBracket, "'[' after ref");
            TypePtr t = parse_type();
            expect(Tok::RBracket, "']'");
            return types::t_ref(t);
        }
        if (at(Tok::LIdent)) {
            const Token& t = advance();
            if (t.text == "int") return types::t_int();
            if (t.text == "bool") return types::t_bool();
            if (t.text == "float") return types::t_float();
            if (t.text == "unit") return types::t_unit();
            if (t.text == "vec") {
                expect(Tok::LBracket, "'[' after vec");
                TypePtr e = parse_type();
                expect(Tok::RBracket, "']'");
                return types::t_vec(e);
            }
            return types::t_named(t.text);
        }
        fail("expected a type");
    }

    // ---- expressions ----

    bool starts_open_form() const {
        switch (peek().kind) {
        case Tok::Fun:
        case Tok::Let:
        case Tok::If:
        case Tok::Match:
        case Tok::Loop:
            return true;
        default:
            return false;
        }
    }

    ExprPtr parse_expr() { return parse_seq(); }

    ExprPtr parse_seq() {
        uint32_t b = peek().span.begin;
        ExprPtr e = parse_assign();
        if (accept(Tok::Semi)) {
            ExprPtr rest = parse_seq();
            auto s = mk(K::Seq, span_from(b));
            s->kids = {e, rest};
            return s;
        }
        return e;
    }

    ExprPtr parse_assign() {
        uint32_t b = peek().span.begin;
        ExprPtr e = parse_asc();
        if (accept(Tok::Assign)) {
            ExprPtr rhs = parse_assign();
            auto a = mk(K::Assign, span_from(b));
            a->kids = {e, rhs};
            return a;
        }
        if (at(Tok::DArrow)) {
            if (e->k != K::VecGet)
                fail("'<-' is only valid after a vector access 'e.[i]'");
            advance();
            ExprPtr rhs = parse_assign();
            auto s = mk(K::VecSet, span_from(b));
            s->kids = {e->kids[0], e->kids[1], rhs};
            return s;
        }
        return e;
    }

    ExprPtr parse_asc() {
        uint32_t b = peek().span.begin;
        ExprPtr e = parse_cmp();
        while (accept(Tok::ColonColon)) {
            TypePtr t = parse_type();
            auto a = mk(K::Ascribe, span_from(b));
            a->kids = {e};
            a->ann = t;
            e = a;
        }
        return e;
    }

    std::optional<BinTag> cmp_tag() const {
        switch (peek().kind) {
        case Tok::Lt: return BinTag::LtI;
        case Tok::Le: return BinTag::LeI;
        case Tok::Gt: return BinTag::GtI;
        case Tok::Ge: return BinTag::GeI;
        case Tok::Eq: return BinTag::EqI;
        case Tok::Ne: return BinTag::NeI;
        case Tok::LtDot: return BinTag::LtF;
        case Tok::LeDot: return BinTag::LeF;
        case Tok::GtDot: return BinTag::GtF;
        case Tok::GeDot: return BinTag::GeF;
        case Tok::EqDot: return BinTag::EqF;
        case Tok::NeDot: return BinTag::NeF;
        default: return std::nullopt;
        }
    }

    ExprPtr parse_cmp() {
        uint32_t b = peek().span.begin;
        ExprPtr e = parse_add();
        if (auto tag = cmp_tag()) {
            advance();
            ExprPtr rhs = parse_add();
            auto c = mk(K::BinOp, span_from(b));
            c->bop = *tag;
            c->kids = {e, rhs};
            return c;
        }
        return e;
    }

    ExprPtr parse_add() {
        uint32_t b = peek().span.begin;
        ExprPtr e = parse_mul();
        while (true) {
            BinTag tag;
            if (at(Tok::Plus)) tag = BinTag::AddI;
            else if (at(Tok::Minus)) tag = BinTag::SubI;
            else if (at(Tok::PlusDot)) tag = BinTag::AddF;
            else if (at(Tok::MinusDot)) tag = BinTag::SubF;
            else break;
            advance();
            ExprPtr rhs = parse_mul();
            auto n = mk(K::BinOp, span_from(b));
            n->bop = tag;
            n->kids = {e, rhs};
            e = n;
        }
        return e;
    }

    ExprPtr parse_mul() {
        uint32_t b = peek().span.begin;
        ExprPtr e = parse_unary();
        while (true) {
            BinTag tag;
            if (at(Tok::Star)) tag = BinTag::MulI;
            else if (at(Tok::Slash)) tag = BinTag::DivI;
            else if (at(Tok::Percent)) tag = BinTag::ModI;
            else if (at(Tok::StarDot)) tag = BinTag::MulF;
            else if (at(Tok::SlashDot)) tag = BinTag::DivF;
            else break;
            advance();
            ExprPtr rhs = parse_unary();
            auto n = mk(K::BinOp, span_from(b));
            n->bop = tag;
            n->kids = {e, rhs};
            e = n;
        }
        return e;
    }

    ExprPtr parse_unary() {
        uint32_t b = peek().span.begin;
        if (accept(Tok::Minus)) {
            if (at(Tok::IntLit)) {
                const Token& t = advance();
                auto e = mk(K::Int, span_from(b));
                e->ival = -t.ival;
                return e;
            }
            ExprPtr sub = parse_unary();
            auto zero = mk(K::Int, Span{b, b});
            zero->ival = 0;
            auto n = mk(K::BinOp, span_from(b));
            n->bop = BinTag::SubI;
            n->kids = {zero, sub};
            return n;
        }
        if (accept(Tok::MinusDot)) {
            if (at(Tok::FloatLit)) {
                const Token& t = advance();
                auto e = mk(K::Float, span_from(b));
                e->fval = -t.fval;
                return e;
            }
            ExprPtr sub = parse_unary();
            auto zero = mk(K::Float, Span{b, b});
            zero->fval = 0.0;
            auto n = mk(K::BinOp, span_from(b));
            n->bop = BinTag::SubF;
            n->kids = {zero, sub};
            return n;
        }
        if (accept(Tok::Bang)) {
            ExprPtr sub = parse_unary();
            auto n = mk(K::Deref, span_from(b));
            n->kids = {sub};
            return n;
        }
        return parse_app();
    }

    bool starts_atom() const {
        switch (peek().kind) {
        case Tok::IntLit:
        case Tok::FloatLit:
        case Tok::True:
        case Tok::False:
        case Tok::LIdent:
        case Tok::UIdent:
        case Tok::LParen:
            return true;
        default:
            return false;
        }
    }

    ExprPtr parse_app() {
        uint32_t b = peek().span.begin;
        if (starts_open_form()) return parse_open_form();
        if (accept(Tok::Hash)) {
            const Token& idx = expect(Tok::IntLit, "tuple index");
            if (idx.ival < 0) fail("tuple projection index must be non-negative");
            ExprPtr sub = parse_postfix();
            auto p = mk(K::Proj, span_from(b));
            p->proj_index = static_cast<int>(idx.ival);
            p->kids = {sub};
            return p;
        }
        if (accept(Tok::Ref)) {
            ExprPtr sub = parse_postfix();
            auto r = mk(K::MakeRef, span_from(b));
            r->kids = {sub};
            return r;
        }
        if (accept(Tok::Vector)) {
            ExprPtr size = parse_postfix();
            ExprPtr init = parse_postfix();
            auto v = mk(K::MakeVec, span_from(b));
            v->kids = {size, init};
            return v;
        }

        ExprPtr head = parse_postfix();
        std::vector<ExprPtr> args;
        while (starts_atom()) args.push_back(parse_postfix());

        if (args.empty() && head->k != K::Construct) return head;

        // A single parenthesis-wrapped argument list spreads into the call's
        // arguments; `f ((a, b))` passes one tuple instead.
        if (args.size() == 1 && args[0]->k == K::Tuple && !args[0]->paren_tuple)
            args = args[0]->kids;

        if (head->k == K::Construct) {
            head->kids = args;
            head->span = span_from(b);
            return head;
        }
        if (head->k == K::Var) {
            PrimTag prim;
            if (lookup_prim(head->name, prim)) {
                auto p = mk(K::PrimOp, span_from(b));
                p->prim = prim;
                p->kids = args;
                return p;
            }
        }
        auto c = mk(K::Call, span_from(b));
        c->kids.push_back(head);
        for (auto& a : args) c->kids.push_back(a);
        return c;
    }

    ExprPtr parse_postfix() {
        uint32_t b = peek().span.begin;
        ExprPtr e = parse_primary();
        while (at(Tok::DotBracket)) {
            advance();
            ExprPtr idx = parse_expr();
            expect(Tok::RBracket, "']'");
            auto g = mk(K::VecGet, span_from(b));
            g->kids = {e, idx};
            e = g;
        }
        return e;
    }

    ExprPtr parse_primary() {
        uint32_t b = peek().span.begin;
        if (starts_open_form()) return parse_open_form();
        switch (peek().kind) {
        case Tok::IntLit: {
            const Token& t = advance();
            auto e = mk(K::Int, t.span);
            e->ival = t.ival;
            return e;
        }
        case Tok::FloatLit: {
            const Token& t = advance();
            auto e = mk(K::Float, t.span);
            e->fval = t.fval;
            return e;
        }
        case Tok::True: {
            const Token& t = advance();
            auto e = mk(K::Bool, t.span);
            e->bval = true;
            return e;
        }
        case Tok::False: {
            const Token& t = advance();
            auto e = mk(K::Bool, t.span);
            e->bval = false;
            return e;
        }
        case Tok::LIdent: {
            const Token& t = advance();
            auto e = mk(K::Var, t.span);
            e->name = t.text;
            return e;
        }
        case Tok::UIdent: {
            const Token& t = advance();
            auto e = mk(K::Construct, t.span);
            e->name = t.text;
            return e;
        }
        case Tok::LParen: {
            advance();
            if (accept(Tok::RParen)) return mk(K::Unit, span_from(b));
            ExprPtr first = parse_expr();
            if (at(Tok::Comma)) {
                auto t = mk(K::Tuple, Span{});
                t->kids.push_back(first);
                while (accept(Tok::Comma)) t->kids.push_back(parse_expr());
                expect(Tok::RParen, "')'");
                t->span = span_from(b);
                return t;
            }
            expect(Tok::RParen, "')'");
            if (first->k == K::Tuple) first->paren_tuple = true;
            return first;
        }
        default:
            fail(std::string("expected an expression, found '") + describe(peek()) +
                 "'");
        }
    }

    ExprPtr parse_open_form() {
        uint32_t b = peek().span.begin;
        switch (peek().kind) {
        case Tok::Fun: {
            advance();
            std::vector<Param> params;
            while (true) {
                if (at(Tok::LIdent)) {
                    const Token& t = advance();
                    params.push_back(Param{t.text, nullptr, t.span});
                } else if (at(Tok::LParen)) {
                    advance();
                    while (true) {
                        const Token& name = expect(Tok::LIdent, "parameter name");
                        TypePtr ann;
                        if (accept(Tok::Colon)) ann = parse_type();
                        params.push_back(Param{name.text, ann, name.span});
                        if (!accept(Tok::Comma)) break;
                    }
                    expect(Tok::RParen, "')'");
                } else {
                    break;
                }
            }
            if (params.empty()) fail("expected at least one parameter after fun");
            expect(Tok::Arrow, "'->'");
            ExprPtr body = parse_expr();
            auto e = mk(K::Lambda, span_from(b));
            e->params = std::move(params);
            e->kids = {body};
            return e;
        }
        case Tok::Let: {
            advance();
            bool recursive = accept(Tok::Rec);
            const Token& name = expect(Tok::LIdent, "binder name");
            TypePtr ann;
            if (accept(Tok::Colon)) ann = parse_type();
            expect(Tok::Eq, "'='");
            ExprPtr bound = parse_expr();
            expect(Tok::In, "'in'");
            ExprPtr body = parse_expr();
            auto e = mk(recursive ? K::LetRec : K::Let, span_from(b));
            e->name = name.text;
            e->ann = ann;
            e->kids = {bound, body};
            return e;
        }
        case Tok::If: {
            advance();
            ExprPtr c = parse_expr();
            expect(Tok::Then, "'then'");
            ExprPtr t = parse_expr();
            expect(Tok::Else, "'else'");
            ExprPtr f = parse_expr();
            auto e = mk(K::If, span_from(b));
            e->kids = {c, t, f};
            return e;
        }
        case Tok::Loop: {
            advance();
            const Token& var = expect(Tok::LIdent, "loop variable");
            expect(Tok::Eq, "'='");
            ExprPtr lo = parse_assign();
            expect(Tok::To, "'to'");
            ExprPtr hi = parse_assign();
            expect(Tok::Do, "'do'");
            ExprPtr body = parse_expr();
            expect(Tok::Done, "'done'");
            auto e = mk(K::Loop, span_from(b));
            e->name = var.text;
            e->kids = {lo, hi, body};
            return e;
        }
        case Tok::Match: {
            advance();
            ExprPtr scrut = parse_expr();
            expect(Tok::With, "'with'");
            accept(Tok::Bar);
            auto e = mk(K::Match, Span{});
            e->kids = {scrut};
            while (true) {
                Arm arm;
                uint32_t ab = peek().span.begin;
                arm.ctor = expect(Tok::UIdent, "constructor name").text;
                if (at(Tok::LIdent)) {
                    arm.binders.push_back(advance().text);
                } else if (accept(Tok::LParen)) {
                    while (true) {
                        arm.binders.push_back(
                            expect(Tok::LIdent, "pattern variable").text);
                        if (!accept(Tok::Comma)) break;
                    }
                    expect(Tok::RParen, "')'");
                }
                expect(Tok::Arrow, "'->'");
                arm.body = parse_expr();
                arm.span = span_from(ab);
                e->arms.push_back(std::move(arm));
                if (!accept(Tok::Bar)) break;
            }
            e->span = span_from(b);
            return e;
        }
        default:
            fail("expected an expression");
        }
    }

    VariantDecl parse_variant_decl() {
        uint32_t b = peek().span.begin;
        expect(Tok::Type, "'type'");
        VariantDecl d;
        d.name = expect(Tok::LIdent, "variant type name").text;
        expect(Tok::Eq, "'='");
        accept(Tok::Bar);
        while (true) {
            VariantDecl::Ctor c;
            uint32_t cb = peek().span.begin;
            c.name = expect(Tok::UIdent, "constructor name").text;
            if (accept(Tok::Of)) {
                c.fields.push_back(parse_type_factor());
                while (accept(Tok::Star)) c.fields.push_back(parse_type_factor());
            }
            c.span = span_from(cb);
            d.ctors.push_back(std::move(c));
            if (!accept(Tok::Bar)) break;
        }
        d.span = span_from(b);
        return d;
    }

    Program parse_program() {
        Program p;
        while (at(Tok::Type)) p.variants.push_back(parse_variant_decl());
        p.main = parse_expr();
        expect(Tok::Eof, "end of input");
        return p;
    }
};

} // namespace

Program parse_program(const std::vector<Token>& tokens) {
    Parser p(tokens);
    return p.parse_program();
}

Program parse_source(const std::string& source) {
    return parse_program(tokenize(source));
}

types::TypePtr parse_type_string(const std::string& text) {
    auto toks = tokenize(text);
    Parser p(toks);
    types::TypePtr t = p.parse_type();
    p.expect(Tok::Eof, "end of type");
    return t;
}

} // namespace gtlc::surface
