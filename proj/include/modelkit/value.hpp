#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modelkit/errors.hpp"
#include "modelkit/expr.hpp"
#include "modelkit/text.hpp"

namespace modelkit {

class Value;

struct VectorData {
    std::vector<double> components;
    bool operator==(const VectorData&) const = default;
};

struct ListData {
    std::vector<Value> items;
    bool operator==(const ListData&) const;
};

struct TupleData {
    std::vector<Value> items;
    bool operator==(const TupleData&) const;
};

struct RefData {
    std::string id;
    bool operator==(const RefData&) const = default;
};

struct ExprData {
    Expr expr;
    // Expressions compare by printed form; the tree is immutable.
    bool operator==(const ExprData& o) const { return print_expr(expr) == print_expr(o.expr); }
};

/// Immutable attribute value. Structural equality; scalars compare exactly.
class Value {
public:
    using Storage = std::variant<std::int64_t, double, std::string, bool, VectorData, ListData,
                                 TupleData, RefData, ExprData>;

    Value() : v_(std::int64_t{0}) {}

    static Value of_int(std::int64_t v) { return Value(Storage(v)); }
    static Value of_float(double v) { return Value(Storage(v)); }
    static Value of_string(std::string v) { return Value(Storage(std::move(v))); }
    static Value of_bool(bool v) { return Value(Storage(v)); }
    static Value vec(std::vector<double> comps) { return Value(Storage(VectorData{std::move(comps)})); }
    static Value list(std::vector<Value> items) { return Value(Storage(ListData{std::move(items)})); }
    static Value tuple(std::vector<Value> items) { return Value(Storage(TupleData{std::move(items)})); }
    static Value ref(std::string id) { return Value(Storage(RefData{std::move(id)})); }
    static Value of_expr(Expr e) { return Value(Storage(ExprData{std::move(e)})); }

    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_float() const { return std::holds_alternative<double>(v_); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_vec() const { return std::holds_alternative<VectorData>(v_); }
    bool is_list() const { return std::holds_alternative<ListData>(v_); }
    bool is_tuple() const { return std::holds_alternative<TupleData>(v_); }
    bool is_ref() const { return std::holds_alternative<RefData>(v_); }
    bool is_expr() const { return std::holds_alternative<ExprData>(v_); }

    std::int64_t as_int() const { return get<std::int64_t>("Int"); }
    double as_float() const { return get<double>("Float"); }
    const std::string& as_string() const { return get<std::string>("String"); }
    bool as_bool() const { return get<bool>("Bool"); }
    const std::vector<double>& as_vec() const { return get<VectorData>("Vector").components; }
    const std::vector<Value>& as_list() const { return get<ListData>("List").items; }
    const std::vector<Value>& as_tuple() const { return get<TupleData>("Tuple").items; }
    const std::string& as_ref() const { return get<RefData>("Ref").id; }
    const Expr& as_expr() const { return get<ExprData>("Expr").expr; }

    /// Int or Float widened to double; anything else is a KindMismatch.
    double as_number() const {
        if (is_int()) return static_cast<double>(std::get<std::int64_t>(v_));
        if (is_float()) return std::get<double>(v_);
        fail(Errc::kind_mismatch, "value is not numeric");
    }

    bool is_numeric() const { return is_int() || is_float(); }

    bool operator==(const Value& o) const { return v_ == o.v_; }

    const Storage& storage() const { return v_; }

private:
    explicit Value(Storage v) : v_(std::move(v)) {}

    template <typename T>
    const T& get(const char* what) const {
        if (const T* p = std::get_if<T>(&v_)) return *p;
        fail(Errc::kind_mismatch, std::string("value is not a ") + what);
    }

    Storage v_;
};

inline bool ListData::operator==(const ListData& o) const { return items == o.items; }
inline bool TupleData::operator==(const TupleData& o) const { return items == o.items; }

/// Display form used in diagrams, narratives, and the CLI. Lists print as
/// [a, b], tuples as (a, b), vectors as (x, y), references as the target id.
inline std::string value_to_text(const Value& v) {
    struct Printer {
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return number_text(d); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(const VectorData& vec) const {
            std::string out = "(";
            for (std::size_t i = 0; i < vec.components.size(); ++i) {
                if (i) out += ", ";
                out += number_text(vec.components[i]);
            }
            return out + ")";
        }
        std::string operator()(const ListData& l) const { return join(l.items, '[', ']'); }
        std::string operator()(const TupleData& t) const { return join(t.items, '(', ')'); }
        std::string operator()(const RefData& r) const { return r.id; }
        std::string operator()(const ExprData& e) const { return print_expr(e.expr); }

        static std::string join(const std::vector<Value>& items, char open, char close) {
            std::string out(1, open);
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i) out += ", ";
                out += value_to_text(items[i]);
            }
            out += close;
            return out;
        }
    };
    return std::visit(Printer{}, v.storage());
}

/// Declared type of an attribute slot. A closed, engine-owned set: values are
/// checked structurally against these at instance construction.
class AttributeKind {
public:
    enum class Tag {
        int_k,
        float_k,
        string_k,
        bool_k,
        vector_k,
        list_of,
        tuple_of,
        ref_to,
        expr_k,
        computed,
    };

    static AttributeKind int_k() { return AttributeKind(Tag::int_k); }
    static AttributeKind float_k() { return AttributeKind(Tag::float_k); }
    static AttributeKind string_k() { return AttributeKind(Tag::string_k); }
    static AttributeKind bool_k() { return AttributeKind(Tag::bool_k); }
    static AttributeKind vector_k(std::size_t dimension) {
        AttributeKind k(Tag::vector_k);
        k.dimension_ = dimension;
        return k;
    }
    static AttributeKind list_of(AttributeKind element) {
        AttributeKind k(Tag::list_of);
        k.elems_.push_back(std::move(element));
        return k;
    }
    static AttributeKind tuple_of(std::vector<AttributeKind> elements) {
        AttributeKind k(Tag::tuple_of);
        k.elems_ = std::move(elements);
        return k;
    }
    static AttributeKind ref_to(std::string concept_name) {
        AttributeKind k(Tag::ref_to);
        k.name_ = std::move(concept_name);
        return k;
    }
    static AttributeKind expr_k() { return AttributeKind(Tag::expr_k); }
    static AttributeKind computed(AttributeKind result, std::string getter_name) {
        AttributeKind k(Tag::computed);
        k.elems_.push_back(std::move(result));
        k.name_ = std::move(getter_name);
        return k;
    }

    Tag tag() const { return tag_; }
    bool is_computed() const { return tag_ == Tag::computed; }
    std::size_t dimension() const { return dimension_; }
    const AttributeKind& element() const { return elems_.front(); }
    const std::vector<AttributeKind>& elements() const { return elems_; }
    const std::string& concept_name() const { return name_; }
    const std::string& getter_name() const { return name_; }
    const AttributeKind& result() const { return elems_.front(); }

private:
    explicit AttributeKind(Tag tag) : tag_(tag) {}

    Tag tag_;
    std::size_t dimension_ = 0;
    std::vector<AttributeKind> elems_;
    std::string name_;
};

/// Display form mirroring the schema notation in type diagrams, e.g.
/// "List(Tuple(Element, Int))".
inline std::string kind_to_text(const AttributeKind& k) {
    using Tag = AttributeKind::Tag;
    switch (k.tag()) {
        case Tag::int_k: return "Int";
        case Tag::float_k: return "Float";
        case Tag::string_k: return "String";
        case Tag::bool_k: return "Bool";
        case Tag::vector_k: return "Vector(" + std::to_string(k.dimension()) + ")";
        case Tag::list_of: return "List(" + kind_to_text(k.element()) + ")";
        case Tag::tuple_of: {
            std::string out = "Tuple(";
            for (std::size_t i = 0; i < k.elements().size(); ++i) {
                if (i) out += ", ";
                out += kind_to_text(k.elements()[i]);
            }
            return out + ")";
        }
        case Tag::ref_to: return k.concept_name();
        case Tag::expr_k: return "Expr";
        case Tag::computed: return "Computed(" + kind_to_text(k.result()) + ")";
    }
    return "?";
}

}  // namespace modelkit
