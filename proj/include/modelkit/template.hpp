#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modelkit/errors.hpp"
#include "modelkit/value.hpp"

namespace modelkit {

class Model;
class ConceptType;
class ConceptInstance;

/// The modeling object a template is applied to: a concept type styled in a
/// type diagram, or an instance styled in an instance diagram or animation
/// frame. The model pointer lets template functions resolve references.
struct Target {
    const Model* model = nullptr;
    const ConceptType* type = nullptr;
    const ConceptInstance* instance = nullptr;

    static Target of_type(const Model& m, const ConceptType& t) { return Target{&m, &t, nullptr}; }
    static Target of_instance(const Model& m, const ConceptInstance& i) {
        return Target{&m, nullptr, &i};
    }
};

using Fn1 = std::function<Value(const Target&)>;
using Fn2 = std::function<Value(const Target&, double)>;

struct Template;

/// One template entry: a literal drawing value, a nested list or template, or
/// a pure function of the target (and time). The Fn1/Fn2 split encodes the
/// arity dispatch statically instead of by runtime introspection.
class TemplateValue {
public:
    using List = std::vector<TemplateValue>;
    using Nested = std::shared_ptr<const Template>;
    using Storage = std::variant<Value, List, Nested, Fn1, Fn2>;

    TemplateValue(Value v) : v_(std::move(v)) {}
    TemplateValue(List items) : v_(std::move(items)) {}
    TemplateValue(Template nested);
    TemplateValue(Fn1 fn) : v_(std::move(fn)) {}
    TemplateValue(Fn2 fn) : v_(std::move(fn)) {}

    bool is_literal() const { return std::holds_alternative<Value>(v_); }
    bool is_list() const { return std::holds_alternative<List>(v_); }
    bool is_nested() const { return std::holds_alternative<Nested>(v_); }
    bool is_fn1() const { return std::holds_alternative<Fn1>(v_); }
    bool is_fn2() const { return std::holds_alternative<Fn2>(v_); }

    const Value& literal() const { return std::get<Value>(v_); }
    const List& items() const { return std::get<List>(v_); }
    const Template& nested() const { return *std::get<Nested>(v_); }
    const Storage& storage() const { return v_; }

private:
    Storage v_;
};

/// Map of visual-property keys to template values. The core vocabulary the
/// renderer understands: text, name, corner_radius, gradient_color, origin,
/// point_list, new, stroke, fill, font_size, plus the renderer extensions
/// size, radius, arrow. Unknown keys pass through untouched.
struct Template {
    std::map<std::string, TemplateValue> entries;

    Template& set(std::string key, TemplateValue v) {
        entries.insert_or_assign(std::move(key), std::move(v));
        return *this;
    }
    Template& set(std::string key, const char* s) {
        return set(std::move(key), TemplateValue(Value::of_string(s)));
    }
    Template& set(std::string key, double number) {
        return set(std::move(key), TemplateValue(Value::of_float(number)));
    }

    const TemplateValue* find(const std::string& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
    bool empty() const { return entries.empty(); }
};

inline TemplateValue::TemplateValue(Template nested)
    : v_(std::make_shared<const Template>(std::move(nested))) {}

/// A template with every function already replaced by its result.
using ResolvedProps = Template;

namespace detail {

inline TemplateValue apply_value(const TemplateValue& v, const Target& obj,
                                 const std::optional<double>& time, const std::string& path);

inline Template apply_entries(const Template& t, const Target& obj,
                              const std::optional<double>& time, const std::string& path) {
    Template out;
    for (const auto& [key, v] : t.entries) {
        std::string sub = path.empty() ? key : path + "." + key;
        out.entries.insert_or_assign(key, apply_value(v, obj, time, sub));
    }
    return out;
}

inline TemplateValue apply_value(const TemplateValue& v, const Target& obj,
                                 const std::optional<double>& time, const std::string& path) {
    if (v.is_literal()) return v;
    if (v.is_list()) {
        TemplateValue::List out;
        out.reserve(v.items().size());
        for (std::size_t i = 0; i < v.items().size(); ++i)
            out.push_back(apply_value(v.items()[i], obj, time, path + "[" + std::to_string(i) + "]"));
        return TemplateValue(std::move(out));
    }
    if (v.is_nested()) return TemplateValue(apply_entries(v.nested(), obj, time, path));
    try {
        if (v.is_fn1()) return TemplateValue(std::get<Fn1>(v.storage())(obj));
        if (!time) fail(Errc::missing_time, "template function at '" + path + "' needs a time");
        return TemplateValue(std::get<Fn2>(v.storage())(obj, *time));
    } catch (const ModelError& e) {
        if (e.code() == Errc::missing_time) throw;
        fail(Errc::fn_failure, "template function at '" + path + "' failed: " + e.what());
    }
}

}  // namespace detail

/// Structural copy of `t` with every function replaced by its result;
/// recurses into lists and nested templates. Applying the output again is the
/// identity.
inline ResolvedProps apply_template(const Template& t, const Target& obj,
                                    std::optional<double> time = std::nullopt) {
    return detail::apply_entries(t, obj, time, "");
}

/// Key union; the overlay wins on conflicts. Nested templates replace, they
/// do not deep-merge.
inline Template merge_templates(const Template& base, const Template& overlay) {
    Template out = base;
    for (const auto& [key, v] : overlay.entries) out.entries.insert_or_assign(key, v);
    return out;
}

inline bool is_fully_resolved(const TemplateValue& v) {
    if (v.is_fn1() || v.is_fn2()) return false;
    if (v.is_list()) {
        for (const auto& item : v.items())
            if (!is_fully_resolved(item)) return false;
    }
    if (v.is_nested()) {
        for (const auto& [key, item] : v.nested().entries)
            if (!is_fully_resolved(item)) return false;
    }
    return true;
}

inline bool is_fully_resolved(const Template& t) {
    for (const auto& [key, v] : t.entries)
        if (!is_fully_resolved(v)) return false;
    return true;
}

/// Equality of the function-free subset; templates holding functions never
/// compare equal.
inline bool resolved_equal(const TemplateValue& a, const TemplateValue& b);

inline bool resolved_equal(const Template& a, const Template& b) {
    if (a.entries.size() != b.entries.size()) return false;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    for (; ia != a.entries.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (!resolved_equal(ia->second, ib->second)) return false;
    }
    return true;
}

inline bool resolved_equal(const TemplateValue& a, const TemplateValue& b) {
    if (a.is_literal() && b.is_literal()) return a.literal() == b.literal();
    if (a.is_list() && b.is_list()) {
        if (a.items().size() != b.items().size()) return false;
        for (std::size_t i = 0; i < a.items().size(); ++i)
            if (!resolved_equal(a.items()[i], b.items()[i])) return false;
        return true;
    }
    if (a.is_nested() && b.is_nested()) return resolved_equal(a.nested(), b.nested());
    return false;
}

// Accessors for resolved property maps, used by the renderer.

inline std::string props_string(const ResolvedProps& p, const std::string& key,
                                const std::string& fallback = "") {
    const TemplateValue* v = p.find(key);
    if (!v || !v->is_literal() || !v->literal().is_string()) return fallback;
    return v->literal().as_string();
}

inline double props_number(const ResolvedProps& p, const std::string& key, double fallback = 0.0) {
    const TemplateValue* v = p.find(key);
    if (!v || !v->is_literal() || !v->literal().is_numeric()) return fallback;
    return v->literal().as_number();
}

inline bool props_bool(const ResolvedProps& p, const std::string& key, bool fallback = false) {
    const TemplateValue* v = p.find(key);
    if (!v || !v->is_literal() || !v->literal().is_bool()) return fallback;
    return v->literal().as_bool();
}

/// Reads a point as a literal [x, y] list or vector value.
inline std::optional<std::pair<double, double>> props_point(const Value& v) {
    if (v.is_vec() && v.as_vec().size() == 2) return std::make_pair(v.as_vec()[0], v.as_vec()[1]);
    if ((v.is_list() || v.is_tuple())) {
        const auto& items = v.is_list() ? v.as_list() : v.as_tuple();
        if (items.size() == 2 && items[0].is_numeric() && items[1].is_numeric())
            return std::make_pair(items[0].as_number(), items[1].as_number());
    }
    return std::nullopt;
}

inline std::optional<std::pair<double, double>> props_point(const ResolvedProps& p,
                                                            const std::string& key) {
    const TemplateValue* v = p.find(key);
    if (!v || !v->is_literal()) return std::nullopt;
    return props_point(v->literal());
}

/// Reads a polyline as a literal list of [x, y] points.
inline std::vector<std::pair<double, double>> props_points(const ResolvedProps& p,
                                                           const std::string& key) {
    std::vector<std::pair<double, double>> out;
    const TemplateValue* v = p.find(key);
    if (!v) return out;
    auto from_value = [&out](const std::vector<Value>& items) {
        for (const auto& item : items) {
            if (auto pt = props_point(item)) out.push_back(*pt);
        }
    };
    if (v->is_literal() && v->literal().is_list()) {
        from_value(v->literal().as_list());
    } else if (v->is_list()) {
        for (const auto& item : v->items()) {
            if (item.is_literal()) {
                if (auto pt = props_point(item.literal())) out.push_back(*pt);
            }
        }
    }
    return out;
}

}  // namespace modelkit
