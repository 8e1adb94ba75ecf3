#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modelkit/errors.hpp"
#include "modelkit/expr.hpp"
#include "modelkit/template.hpp"
#include "modelkit/value.hpp"

namespace modelkit {

class Model;
class ConceptInstance;

/// Engine-registered pure function: the body of a concept function or of a
/// computed-attribute getter. Result must depend only on the model, the
/// receiver, and the arguments.
using NativeFn =
    std::function<Value(const Model&, const ConceptInstance&, const std::vector<Value>&)>;

/// A pure function attached to a concept type. `source_text` is the display
/// form rendered by show-method callouts; the engine cannot introspect native
/// bodies, so it is mandatory.
struct FunctionDef {
    std::string name;
    std::vector<std::string> params;
    std::variant<NativeFn, Expr> body;
    std::string source_text;
};

/// Schema node: attribute slots, pure functions, visualization templates, and
/// an optional per-instance narrative sentence pattern.
class ConceptType {
public:
    std::string name;
    std::optional<std::string> parent;
    std::vector<std::pair<std::string, AttributeKind>> attributes;
    std::vector<FunctionDef> functions;
    std::map<std::string, NativeFn> getters;  // computed-attribute getters by name
    Template class_template;
    Template instance_template;
    std::optional<std::string> narrative_template;
    /// Optional extra invariant checked at construction and by validate();
    /// returns a description of the breach, or nothing if satisfied.
    std::function<std::optional<std::string>(const Model&, const ConceptInstance&)> check;

    const FunctionDef* find_function(const std::string& fn_name) const {
        for (const FunctionDef& f : functions)
            if (f.name == fn_name) return &f;
        return nullptr;
    }
    const NativeFn* find_getter(const std::string& getter_name) const {
        auto it = getters.find(getter_name);
        return it == getters.end() ? nullptr : &it->second;
    }
};

/// Immutable individual conforming to a concept type. Ids are caller-supplied
/// and unique per model; bindings never change after construction.
class ConceptInstance {
public:
    ConceptInstance(std::string id, std::string type_name, std::map<std::string, Value> bindings)
        : id_(std::move(id)), type_name_(std::move(type_name)), bindings_(std::move(bindings)) {}

    const std::string& id() const { return id_; }
    const std::string& type_name() const { return type_name_; }
    const std::map<std::string, Value>& bindings() const { return bindings_; }

    const Value* find_binding(const std::string& name) const {
        auto it = bindings_.find(name);
        return it == bindings_.end() ? nullptr : &it->second;
    }

private:
    std::string id_;
    std::string type_name_;
    std::map<std::string, Value> bindings_;
};

// Display directives collected on a model and consumed by the renderer.

struct ShowMethod {
    std::string instance_id;
    std::string function_name;
};

struct ShowEval {
    std::string instance_id;
    std::string function_name;
    std::vector<Value> args;
};

struct ShowGraph {
    std::string instance_id;
    std::vector<std::string> function_names;
    double lo = 0.0;
    double hi = 1.0;
};

struct AnimateDirective {
    std::string instance_id;
    double t0 = 0.0;
    double t1 = 1.0;
    std::vector<Template> templates;
};

using DisplayDirective = std::variant<ShowMethod, ShowEval, ShowGraph, AnimateDirective>;

/// A registry of concept types plus the instances and display directives
/// built against them. Extended by value: registration operations return a
/// new model and never mutate their input.
class Model {
public:
    const std::vector<ConceptType>& types() const { return types_; }
    const std::vector<ConceptInstance>& instances() const { return instances_; }
    const std::vector<DisplayDirective>& directives() const { return directives_; }

    const ConceptType* find_type(const std::string& name) const {
        auto it = type_index_.find(name);
        return it == type_index_.end() ? nullptr : &types_[it->second];
    }
    const ConceptInstance* find_instance(const std::string& id) const {
        auto it = instance_index_.find(id);
        return it == instance_index_.end() ? nullptr : &instances_[it->second];
    }

    const ConceptType& type_of(const ConceptInstance& inst) const {
        const ConceptType* t = find_type(inst.type_name());
        if (!t) fail(Errc::unknown_type, "instance '" + inst.id() + "' has unregistered type '" +
                                             inst.type_name() + "'");
        return *t;
    }

    friend Model register_type(Model m, ConceptType t);
    friend Model add_instance(Model m, ConceptInstance inst);
    friend Model add_directive(Model m, DisplayDirective d);

private:
    std::vector<ConceptType> types_;
    std::map<std::string, std::size_t> type_index_;
    std::vector<ConceptInstance> instances_;
    std::map<std::string, std::size_t> instance_index_;
    std::vector<DisplayDirective> directives_;
};

/// Walks the parent chain from `name` up to the root. The chain is acyclic by
/// construction (register_type requires the parent to exist already).
inline std::vector<const ConceptType*> type_chain(const Model& m, const std::string& name) {
    std::vector<const ConceptType*> chain;
    const ConceptType* t = m.find_type(name);
    while (t) {
        chain.push_back(t);
        t = t->parent ? m.find_type(*t->parent) : nullptr;
    }
    return chain;
}

/// True if `name` equals `ancestor` or inherits from it.
inline bool is_subtype_of(const Model& m, const std::string& name, const std::string& ancestor) {
    for (const ConceptType* t : type_chain(m, name))
        if (t->name == ancestor) return true;
    return false;
}

/// The full attribute list a renderer sees: inherited attributes first, each
/// name exactly once, with subclass redefinitions replacing in place.
inline std::vector<std::pair<std::string, AttributeKind>> reflected_attributes(
    const Model& m, const std::string& type_name) {
    std::vector<std::pair<std::string, AttributeKind>> out;
    std::vector<const ConceptType*> chain = type_chain(m, type_name);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        for (const auto& attr : (*it)->attributes) {
            bool replaced = false;
            for (auto& existing : out) {
                if (existing.first == attr.first) {
                    existing.second = attr.second;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) out.push_back(attr);
        }
    }
    return out;
}

/// Function lookup walks the subclass chain outward-in, so a subclass
/// definition shadows its ancestor's.
inline const FunctionDef* find_function(const Model& m, const std::string& type_name,
                                        const std::string& fn_name) {
    for (const ConceptType* t : type_chain(m, type_name))
        if (const FunctionDef* f = t->find_function(fn_name)) return f;
    return nullptr;
}

inline const NativeFn* find_getter(const Model& m, const std::string& type_name,
                                   const std::string& getter_name) {
    for (const ConceptType* t : type_chain(m, type_name))
        if (const NativeFn* g = t->find_getter(getter_name)) return g;
    return nullptr;
}

namespace detail {

inline void check_type_shape(const Model& m, const ConceptType& t) {
    // Own attribute names must be unique.
    for (std::size_t i = 0; i < t.attributes.size(); ++i)
        for (std::size_t j = i + 1; j < t.attributes.size(); ++j)
            if (t.attributes[i].first == t.attributes[j].first)
                fail(Errc::duplicate_attribute,
                     "attribute '" + t.attributes[i].first + "' declared twice on '" + t.name + "'");

    // Redefinition of an inherited attribute: a stored slot may become
    // computed, never the reverse; stored-over-stored is a duplicate.
    std::vector<std::pair<std::string, AttributeKind>> inherited =
        t.parent ? reflected_attributes(m, *t.parent)
                 : std::vector<std::pair<std::string, AttributeKind>>{};
    for (const auto& [name, kind] : t.attributes) {
        for (const auto& [base_name, base_kind] : inherited) {
            if (base_name != name) continue;
            if (base_kind.is_computed())
                fail(Errc::duplicate_attribute, "computed attribute '" + name + "' of '" +
                                                    *t.parent + "' cannot be redefined by '" +
                                                    t.name + "'");
            if (!kind.is_computed())
                fail(Errc::duplicate_attribute, "stored attribute '" + name +
                                                    "' is already declared on an ancestor of '" +
                                                    t.name + "'");
        }
    }

    // Kind well-formedness: references resolve (the new type itself may be
    // the target) and computed getters are registered on the type or an
    // ancestor.
    std::function<void(const AttributeKind&, const std::string&)> walk =
        [&](const AttributeKind& k, const std::string& attr) {
            using Tag = AttributeKind::Tag;
            switch (k.tag()) {
                case Tag::list_of:
                    walk(k.element(), attr);
                    break;
                case Tag::tuple_of:
                    for (const AttributeKind& e : k.elements()) walk(e, attr);
                    break;
                case Tag::ref_to:
                    if (k.concept_name() != t.name && !m.find_type(k.concept_name()))
                        fail(Errc::unknown_type, "attribute '" + attr + "' of '" + t.name +
                                                     "' references unknown type '" +
                                                     k.concept_name() + "'");
                    break;
                case Tag::computed: {
                    const bool own = t.getters.count(k.getter_name()) > 0;
                    const bool inherited_getter =
                        t.parent && find_getter(m, *t.parent, k.getter_name());
                    if (!own && !inherited_getter)
                        fail(Errc::unknown_function, "computed attribute '" + attr + "' of '" +
                                                         t.name + "' names unregistered getter '" +
                                                         k.getter_name() + "'");
                    break;
                }
                default:
                    break;
            }
        };
    for (const auto& [name, kind] : t.attributes) walk(kind, name);

    for (const FunctionDef& f : t.functions)
        if (f.source_text.empty())
            fail(Errc::invariant, "function '" + t.name + "." + f.name + "' has empty source text");
}

}  // namespace detail

inline Model register_type(Model m, ConceptType t) {
    if (m.find_type(t.name)) fail(Errc::duplicate_type, "type '" + t.name + "' already registered");
    if (t.parent && !m.find_type(*t.parent))
        fail(Errc::unknown_parent, "parent '" + *t.parent + "' of '" + t.name + "' not registered");
    detail::check_type_shape(m, t);
    m.type_index_.emplace(t.name, m.types_.size());
    m.types_.push_back(std::move(t));
    return m;
}

/// One validation finding. Violations are data: validate() reports them,
/// new_instance() raises the corresponding error instead.
struct Violation {
    Errc code;
    std::string instance_id;
    std::string attribute;
    std::string message;
};

namespace detail {

inline void check_value_kind(const Model& m, const AttributeKind& kind, const Value& v,
                             const std::string& instance_id, const std::string& path,
                             std::vector<Violation>& out) {
    using Tag = AttributeKind::Tag;
    auto mismatch = [&](const std::string& what) {
        out.push_back({Errc::kind_mismatch, instance_id, path,
                       path + ": expected " + kind_to_text(kind) + ", got " + what});
    };
    switch (kind.tag()) {
        case Tag::int_k:
            if (!v.is_int()) mismatch(value_to_text(v));
            break;
        case Tag::float_k:
            if (!v.is_numeric()) mismatch(value_to_text(v));  // Int widens to Float
            break;
        case Tag::string_k:
            if (!v.is_string()) mismatch(value_to_text(v));
            break;
        case Tag::bool_k:
            if (!v.is_bool()) mismatch(value_to_text(v));
            break;
        case Tag::vector_k:
            if (!v.is_vec() || v.as_vec().size() != kind.dimension()) mismatch(value_to_text(v));
            break;
        case Tag::expr_k:
            if (!v.is_expr()) mismatch(value_to_text(v));
            break;
        case Tag::list_of:
            if (!v.is_list()) {
                mismatch(value_to_text(v));
            } else {
                for (std::size_t i = 0; i < v.as_list().size(); ++i)
                    check_value_kind(m, kind.element(), v.as_list()[i], instance_id,
                                     path + "[" + std::to_string(i) + "]", out);
            }
            break;
        case Tag::tuple_of:
            if (!v.is_tuple() || v.as_tuple().size() != kind.elements().size()) {
                mismatch(value_to_text(v));
            } else {
                for (std::size_t i = 0; i < v.as_tuple().size(); ++i)
                    check_value_kind(m, kind.elements()[i], v.as_tuple()[i], instance_id,
                                     path + "[" + std::to_string(i) + "]", out);
            }
            break;
        case Tag::ref_to: {
            if (!v.is_ref()) {
                mismatch(value_to_text(v));
                break;
            }
            const ConceptInstance* target = m.find_instance(v.as_ref());
            if (!target) {
                out.push_back({Errc::dangling_reference, instance_id, path,
                               path + ": reference to missing instance '" + v.as_ref() + "'"});
            } else if (!is_subtype_of(m, target->type_name(), kind.concept_name())) {
                mismatch("reference to '" + v.as_ref() + "' of type " + target->type_name());
            }
            break;
        }
        case Tag::computed:
            // Computed slots have no stored value; nothing to check.
            break;
    }
}

inline void check_instance(const Model& m, const ConceptInstance& inst,
                           std::vector<Violation>& out) {
    const ConceptType* t = m.find_type(inst.type_name());
    if (!t) {
        out.push_back({Errc::unknown_type, inst.id(), "",
                       "type '" + inst.type_name() + "' is not registered"});
        return;
    }
    std::vector<std::pair<std::string, AttributeKind>> attrs =
        reflected_attributes(m, inst.type_name());

    for (const auto& [name, kind] : attrs) {
        const Value* bound = inst.find_binding(name);
        if (kind.is_computed()) {
            if (bound)
                out.push_back({Errc::unknown_attribute, inst.id(), name,
                               "computed attribute '" + name + "' cannot be bound"});
            continue;
        }
        if (!bound) {
            out.push_back({Errc::missing_attribute, inst.id(), name,
                           "missing binding for attribute '" + name + "'"});
            continue;
        }
        check_value_kind(m, kind, *bound, inst.id(), name, out);
    }

    for (const auto& [name, value] : inst.bindings()) {
        bool declared = false;
        for (const auto& [attr_name, kind] : attrs)
            if (attr_name == name) declared = true;
        if (!declared)
            out.push_back({Errc::unknown_attribute, inst.id(), name,
                           "no attribute '" + name + "' on type '" + inst.type_name() + "'"});
    }

    if (out.empty()) {
        for (const ConceptType* ct : type_chain(m, inst.type_name())) {
            if (!ct->check) continue;
            if (std::optional<std::string> breach = ct->check(m, inst)) {
                out.push_back({Errc::invariant, inst.id(), "", *breach});
                break;
            }
        }
    }
}

}  // namespace detail

/// Builds a validated immutable instance against the model. Raises the error
/// any later validate() would have reported; does not insert (see
/// add_instance).
inline ConceptInstance new_instance(const Model& m, std::string id, std::string type_name,
                                    std::map<std::string, Value> bindings) {
    if (!m.find_type(type_name)) fail(Errc::unknown_type, "type '" + type_name + "' is not registered");
    ConceptInstance inst(std::move(id), std::move(type_name), std::move(bindings));
    std::vector<Violation> violations;
    detail::check_instance(m, inst, violations);
    if (!violations.empty()) fail(violations.front().code, violations.front().message);
    return inst;
}

inline Model add_instance(Model m, ConceptInstance inst) {
    if (m.find_instance(inst.id()))
        fail(Errc::duplicate_instance, "instance id '" + inst.id() + "' already in model");
    m.instance_index_.emplace(inst.id(), m.instances_.size());
    m.instances_.push_back(std::move(inst));
    return m;
}

inline Model add_directive(Model m, DisplayDirective d) {
    m.directives_.push_back(std::move(d));
    return m;
}

/// Convenience for model builders: validate-and-insert in one step.
inline Model with_instance(Model m, std::string id, std::string type_name,
                           std::map<std::string, Value> bindings) {
    ConceptInstance inst = new_instance(m, std::move(id), std::move(type_name), std::move(bindings));
    return add_instance(std::move(m), std::move(inst));
}

/// Reports every kind or reference-integrity breach in the model as data.
/// Empty result means every instance conforms to its type.
inline std::vector<Violation> validate(const Model& m) {
    std::vector<Violation> out;
    for (const ConceptInstance& inst : m.instances()) detail::check_instance(m, inst, out);
    return out;
}

/// Calls a pure function defined on the instance's type (or an ancestor).
inline Value invoke(const Model& m, const ConceptInstance& inst, const std::string& fn_name,
                    const std::vector<Value>& args) {
    const FunctionDef* f = find_function(m, inst.type_name(), fn_name);
    if (!f)
        fail(Errc::unknown_function,
             "no function '" + fn_name + "' on type '" + inst.type_name() + "'");
    if (args.size() != f->params.size())
        fail(Errc::arity_mismatch, fn_name + " expects " + std::to_string(f->params.size()) +
                                       " argument(s), got " + std::to_string(args.size()));
    if (const NativeFn* native = std::get_if<NativeFn>(&f->body)) return (*native)(m, inst, args);

    // Expression body: parameters bind by name to the expression variables.
    const Expr& body = std::get<Expr>(f->body);
    ExprEnv env;
    for (std::size_t i = 0; i < f->params.size(); ++i) {
        double v = args[i].as_number();
        if (f->params[i] == "x") env.x = v;
        if (f->params[i] == "t") env.t = v;
    }
    return Value::of_float(eval_expr(body, env));
}

/// Reads a stored attribute's binding or evaluates a computed attribute's
/// getter. Pure: repeated reads return equal values.
inline Value get_attribute(const Model& m, const ConceptInstance& inst, const std::string& name) {
    for (const auto& [attr_name, kind] : reflected_attributes(m, inst.type_name())) {
        if (attr_name != name) continue;
        if (!kind.is_computed()) {
            const Value* bound = inst.find_binding(name);
            if (!bound)
                fail(Errc::missing_attribute, "attribute '" + name + "' of '" + inst.id() +
                                                  "' has no binding");
            return *bound;
        }
        const NativeFn* getter = find_getter(m, inst.type_name(), kind.getter_name());
        if (!getter)
            fail(Errc::unknown_function, "getter '" + kind.getter_name() + "' not registered");
        return (*getter)(m, inst, {});
    }
    fail(Errc::unknown_attribute,
         "no attribute '" + name + "' on type '" + inst.type_name() + "'");
}

}  // namespace modelkit
