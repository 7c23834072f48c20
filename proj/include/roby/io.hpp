#ifndef ROBY_IO_HPP
#define ROBY_IO_HPP

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "free_algebra.hpp"
#include "line_geometry.hpp"
#include "parse.hpp"
#include "pipeline.hpp"
#include "poly_matrix.hpp"
#include "polynomial.hpp"
#include "roby_module.hpp"

// YAML input files. Polynomials are strings in the polynomial grammar of
// parse.hpp; matrices are lists of rows.

namespace roby::io
{

inline constexpr const char *module_schema = "roby-module/1";
inline constexpr const char *recipe_schema = "roby-build/1";
inline constexpr const char *pipeline_schema = "roby-pipeline/1";
inline constexpr const char *linemodule_schema = "p1-module/1";

inline YAML::Node load_file(const std::string &path)
{
    try {
        return YAML::LoadFile(path);
    } catch (const YAML::BadFile &) {
        throw input_error("cannot read " + path);
    } catch (const YAML::Exception &e) {
        throw input_error(path + ": " + e.what());
    }
}

inline YAML::Node load_string(const std::string &text)
{
    try {
        return YAML::Load(text);
    } catch (const YAML::Exception &e) {
        throw input_error(std::string("YAML: ") + e.what());
    }
}

inline std::string schema_of(const YAML::Node &n)
{
    return n["schema"] ? n["schema"].as<std::string>() : std::string();
}

namespace detail
{

template <class T>
T get(const YAML::Node &n, const std::string &what)
{
    if (!n) {
        throw input_error("missing field '" + what + "'");
    }
    try {
        return n.as<T>();
    } catch (const YAML::Exception &) {
        throw input_error("field '" + what + "' has the wrong type");
    }
}

inline const YAML::Node require(const YAML::Node &n, const std::string &key)
{
    if (!n.IsMap() || !n[key]) {
        throw input_error("missing field '" + key + "'");
    }
    return n[key];
}

} // namespace detail

// ---------------------------------------------------------------------------
// Scalars, polynomials, matrices.

inline Poly read_poly(const YAML::Node &n, const std::string &what = "polynomial")
{
    return parse_poly(detail::get<std::string>(n, what));
}

inline YAML::Node write_poly(const Poly &p)
{
    return YAML::Node(p.to_string());
}

inline PolyMatrix read_matrix(const YAML::Node &n, const std::string &what = "matrix")
{
    if (!n || !n.IsSequence()) {
        throw input_error("field '" + what + "' must be a list of rows");
    }
    const std::size_t rows = n.size();
    const std::size_t cols = rows ? n[0].size() : 0;
    PolyMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!n[r].IsSequence() || n[r].size() != cols) {
            throw input_error("field '" + what + "' has a ragged row");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = read_poly(n[r][c], what);
        }
    }
    return m;
}

inline YAML::Node write_matrix(const PolyMatrix &m)
{
    YAML::Node rows(YAML::NodeType::Sequence);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        YAML::Node row(YAML::NodeType::Sequence);
        row.SetStyle(YAML::EmitterStyle::Flow);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c).to_string());
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<var_id> read_vars(const YAML::Node &n, const std::string &what)
{
    std::vector<var_id> out;
    for (const auto &s : detail::get<std::vector<std::string>>(n, what)) {
        if (!is_valid_var_name(s)) {
            throw input_error("'" + s + "' is not a valid variable name");
        }
        out.push_back(var(s));
    }
    return out;
}

inline std::map<var_id, Poly> read_bindings(const YAML::Node &n)
{
    std::map<var_id, Poly> out;
    if (!n) {
        return out;
    }
    if (!n.IsMap()) {
        throw input_error("bindings must be a map name -> polynomial");
    }
    for (const auto &kv : n) {
        const auto name = kv.first.as<std::string>();
        if (!is_valid_var_name(name)) {
            throw input_error("'" + name + "' is not a valid variable name");
        }
        out[var(name)] = read_poly(kv.second, name);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Algebras.

/// Accepts {monogenic: p, z: name, dual_prefix: G}, {split: d, dual_prefix: x}
/// or an explicit {basis, dual, degrees?, unit?, constants: [[i, j, k, c], ..]}
/// with basis names as indices.
inline FreeAlgebra read_algebra(const YAML::Node &n)
{
    if (!n || !n.IsMap()) {
        throw input_error("algebra must be a map");
    }
    if (n["monogenic"]) {
        return monogenic_algebra(read_poly(n["monogenic"], "monogenic"),
                                 n["z"] ? n["z"].as<std::string>() : std::string("z"),
                                 n["dual_prefix"] ? n["dual_prefix"].as<std::string>() : std::string("G"));
    }
    if (n["split"]) {
        return split_algebra(detail::get<std::size_t>(n["split"], "split"),
                             n["dual_prefix"] ? n["dual_prefix"].as<std::string>() : std::string("x"));
    }
    FreeAlgebra::spec s;
    s.basis = detail::get<std::vector<std::string>>(n["basis"], "basis");
    s.dual = detail::get<std::vector<std::string>>(n["dual"], "dual");
    if (s.dual.size() != s.basis.size()) {
        throw input_error("need one dual variable per basis element");
    }
    for (const auto &d : s.dual) {
        if (!is_valid_var_name(d)) {
            throw input_error("'" + d + "' is not a valid variable name");
        }
    }
    if (n["degrees"]) {
        s.degrees = detail::get<std::vector<int>>(n["degrees"], "degrees");
    }
    if (n["unit"]) {
        for (const auto &u : n["unit"]) {
            s.unit.push_back(read_poly(u, "unit"));
        }
    }
    auto index = [&](const YAML::Node &e) {
        const auto name = e.as<std::string>();
        for (std::size_t i = 0; i < s.basis.size(); ++i) {
            if (s.basis[i] == name) {
                return i;
            }
        }
        throw input_error("unknown basis element '" + name + "'");
    };
    for (const auto &c : detail::require(n, "constants")) {
        if (!c.IsSequence() || c.size() != 4) {
            throw input_error("structure constants are [gamma_i, gamma_j, gamma_k, value]");
        }
        s.constants[{index(c[0]), index(c[1]), index(c[2])}] = read_poly(c[3], "constant");
    }
    return FreeAlgebra(std::move(s));
}

inline YAML::Node write_algebra(const FreeAlgebra &a)
{
    YAML::Node n;
    n["basis"] = a.basis();
    std::vector<std::string> dual;
    for (var_id v : a.dual()) {
        dual.push_back(var_name(v));
    }
    n["dual"] = dual;
    if (a.graded()) {
        n["degrees"] = a.degrees();
    }
    if (!a.unit_is_first()) {
        YAML::Node u(YAML::NodeType::Sequence);
        for (const auto &p : a.unit()) {
            u.push_back(p.to_string());
        }
        n["unit"] = u;
    }
    YAML::Node cs(YAML::NodeType::Sequence);
    for (std::size_t i = 0; i < a.rank(); ++i) {
        for (std::size_t j = i; j < a.rank(); ++j) {
            for (std::size_t k = 0; k < a.rank(); ++k) {
                if (!a.c(i, j, k).is_zero()) {
                    YAML::Node e(YAML::NodeType::Sequence);
                    e.SetStyle(YAML::EmitterStyle::Flow);
                    e.push_back(a.basis()[i]);
                    e.push_back(a.basis()[j]);
                    e.push_back(a.basis()[k]);
                    e.push_back(a.c(i, j, k).to_string());
                    cs.push_back(e);
                }
            }
        }
    }
    n["constants"] = cs;
    return n;
}

// ---------------------------------------------------------------------------
// Roby modules.

/// schema: roby-module/1
/// degree, grading, slots, t (optional), actions: {slot: matrix, T: matrix},
/// target: {form: poly} or {charpoly: algebra map} or {charpoly: poly, rank}.
inline GradedRobyModule read_module(const YAML::Node &n)
{
    if (schema_of(n) != module_schema) {
        throw input_error(std::string("expected schema ") + module_schema);
    }
    GradedRobyModule m;
    m.degree = detail::get<unsigned>(n["degree"], "degree");
    m.grading = detail::get<std::vector<unsigned>>(n["grading"], "grading");
    m.slots = read_vars(n["slots"], "slots");
    if (n["t"]) {
        m.t = var(n["t"].as<std::string>());
    }
    const YAML::Node acts = detail::require(n, "actions");
    for (var_id s : m.slots) {
        const std::string name = var_name(s);
        m.actions.push_back(acts[name] ? read_matrix(acts[name], "actions." + name) : PolyMatrix(m.dim(), m.dim()));
    }
    for (const auto &kv : acts) {
        const auto key = kv.first.as<std::string>();
        if (key != "T" && std::find(m.slots.begin(), m.slots.end(), var(key)) == m.slots.end()) {
            throw input_error("action for unknown slot '" + key + "'");
        }
    }
    if (acts["T"]) {
        m.t_action = read_matrix(acts["T"], "actions.T");
    }
    const YAML::Node tgt = detail::require(n, "target");
    if (tgt["form"]) {
        HomForm f{read_poly(tgt["form"], "target.form"), m.slots, m.degree};
        if (m.t_action) {
            f.args.push_back(m.t);
        }
        if (!f.is_valid()) {
            throw input_error("target form is not homogeneous of degree " + std::to_string(m.degree));
        }
        m.target = std::move(f);
    } else if (tgt["charpoly"]) {
        CharPoly c;
        if (tgt["charpoly"].IsMap()) {
            c = char_poly(read_algebra(tgt["charpoly"]));
        } else {
            c.poly = read_poly(tgt["charpoly"], "target.charpoly");
            c.rank = m.slots.size();
            c.dual = m.slots;
            c.t = m.t;
        }
        if (c.dual != m.slots || c.t != m.t) {
            throw input_error("charpoly target variables do not match the module slots");
        }
        if (!c.is_monic()) {
            throw input_error("charpoly target is not monic of degree " + std::to_string(c.rank) + " in t");
        }
        m.target = std::move(c);
    } else {
        throw input_error("target needs 'form' or 'charpoly'");
    }
    m.factors = n["factors"] ? detail::get<std::vector<std::size_t>>(n["factors"], "factors")
                             : std::vector<std::size_t>{m.dim()};
    m.check_shape();
    return m;
}

inline YAML::Node write_module(const GradedRobyModule &m)
{
    YAML::Node n;
    n["schema"] = module_schema;
    n["degree"] = m.degree;
    YAML::Node g(m.grading);
    g.SetStyle(YAML::EmitterStyle::Flow);
    n["grading"] = g;
    std::vector<std::string> slots;
    for (var_id v : m.slots) {
        slots.push_back(var_name(v));
    }
    YAML::Node sl(slots);
    sl.SetStyle(YAML::EmitterStyle::Flow);
    n["slots"] = sl;
    n["t"] = var_name(m.t);
    YAML::Node f(m.factors);
    f.SetStyle(YAML::EmitterStyle::Flow);
    n["factors"] = f;
    for (std::size_t i = 0; i < m.actions.size(); ++i) {
        n["actions"][slots[i]] = write_matrix(m.actions[i]);
    }
    if (m.t_action) {
        n["actions"]["T"] = write_matrix(*m.t_action);
    }
    if (m.charpoly()) {
        n["target"]["charpoly"] = m.target_poly().to_string();
    } else {
        n["target"]["form"] = m.target_poly().to_string();
    }
    return n;
}

inline std::string emit(const YAML::Node &n)
{
    YAML::Emitter out;
    out << n;
    return std::string(out.c_str()) + "\n";
}

inline CycScalar read_scalar(const YAML::Node &n, const std::string &what)
{
    const Poly p = read_poly(n, what);
    if (!p.is_constant()) {
        throw input_error("field '" + what + "' must be a constant");
    }
    return p.constant_term();
}

/// schema: roby-build/1, build: one of
///   monomial          {form, args}
///   monomial-charpoly {rank, dual, t_exponent, coefficients, dual_indices}
///   split             {rank, dual_prefix?}
///   zero              {degree, slots, t_slot: bool}
///   tensor            {factors: [recipe, ..], xi?}   (left to right)
///   module            {module: roby-module body}
inline GradedRobyModule build_module(const YAML::Node &n)
{
    const std::string kind = detail::get<std::string>(n["build"], "build");
    if (kind == "monomial") {
        HomForm f;
        f.poly = read_poly(n["form"], "form");
        f.args = read_vars(n["args"], "args");
        f.degree = static_cast<unsigned>(f.poly.is_zero() ? 0 : f.poly.degree_in(f.args));
        return monomial_roby(f);
    }
    if (kind == "monomial-charpoly") {
        MonomialSpec s;
        s.t_exponent = detail::get<unsigned>(n["t_exponent"], "t_exponent");
        for (const auto &c : detail::require(n, "coefficients")) {
            s.coefficients.push_back(read_poly(c, "coefficients"));
        }
        s.dual_indices = detail::get<std::vector<std::size_t>>(n["dual_indices"], "dual_indices");
        const auto dual = read_vars(n["dual"], "dual");
        return monomial_charpoly_roby(s, dual.size(), dual);
    }
    if (kind == "split") {
        return split_roby(detail::get<std::size_t>(n["rank"], "rank"),
                          n["dual_prefix"] ? n["dual_prefix"].as<std::string>() : std::string("x"));
    }
    if (kind == "zero") {
        return zero_roby_module(detail::get<unsigned>(n["degree"], "degree"), read_vars(n["slots"], "slots"),
                                n["t_slot"] && n["t_slot"].as<bool>());
    }
    if (kind == "tensor") {
        const YAML::Node fs = detail::require(n, "factors");
        if (!fs.IsSequence() || fs.size() == 0) {
            throw input_error("tensor needs a nonempty factor list");
        }
        GradedRobyModule acc = build_module(fs[0]);
        const CycScalar xi = n["xi"] ? read_scalar(n["xi"], "xi") : make_root(acc.degree);
        for (std::size_t i = 1; i < fs.size(); ++i) {
            acc = twisted_tensor(acc, build_module(fs[i]), xi);
        }
        return acc;
    }
    if (kind == "module") {
        return read_module(detail::require(n, "module"));
    }
    throw input_error("unknown build kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Graded modules on the line.

/// schema: p1-module/1, generators: [deg, ..], relation_degrees: [..],
/// relations: matrix (generators x relations), x?, y?
inline GradedModuleP1 read_line_module(const YAML::Node &n)
{
    GradedModuleP1 m;
    m.generator_degrees = detail::get<std::vector<int>>(n["generators"], "generators");
    if (n["x"]) {
        m.x = var(n["x"].as<std::string>());
    }
    if (n["y"]) {
        m.y = var(n["y"].as<std::string>());
    }
    if (n["relation_degrees"]) {
        m.relation_degrees = detail::get<std::vector<int>>(n["relation_degrees"], "relation_degrees");
    }
    if (n["relations"] && n["relations"].size() > 0) {
        m.relations = read_matrix(n["relations"], "relations");
    } else {
        m.relations = PolyMatrix(m.generator_degrees.size(), m.relation_degrees.size());
    }
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// Pipeline specs.

struct PipelineFile {
    PipelineInput input;
    std::string seed_kind;
    std::optional<std::string> report_path, module_path;
};

/// Seeds: {kind: matrix-factorization, factors: [f, g]}, {kind: split,
/// embedding: [[..] per gamma_j]}, {kind: induced, algebra?, action: [matrix
/// per basis element of B], embedding: [[[..]]]}, {kind: module, module: ..}.
inline GradedRobyModule read_seed(const YAML::Node &n, const FreeAlgebra &a_line)
{
    const std::string kind = detail::get<std::string>(n["kind"], "seed.kind");
    if (kind == "matrix-factorization") {
        Poly f = a_line.c(1, 1, 0), g(1);
        if (n["factors"]) {
            const YAML::Node fs = n["factors"];
            if (!fs.IsSequence() || fs.size() != 2) {
                throw input_error("seed.factors must be [f, g]");
            }
            f = read_poly(fs[0], "seed.factors");
            g = read_poly(fs[1], "seed.factors");
        }
        return matrix_factorization_seed(a_line, f, g);
    }
    if (kind == "split") {
        std::vector<std::vector<Poly>> image;
        for (const auto &row : detail::require(n, "embedding")) {
            std::vector<Poly> r;
            for (const auto &c : row) {
                r.push_back(read_poly(c, "seed.embedding"));
            }
            image.push_back(std::move(r));
        }
        return split_seed(a_line, image);
    }
    if (kind == "induced") {
        const FreeAlgebra b = n["algebra"] ? read_algebra(n["algebra"]) : a_line;
        ModuleAction w{b, {}};
        for (const auto &m : detail::require(n, "action")) {
            w.matrices.push_back(read_matrix(m, "seed.action"));
        }
        SplitEmbedding emb;
        for (const auto &gj : detail::require(n, "embedding")) {
            std::vector<std::vector<Poly>> comps;
            for (const auto &ei : gj) {
                std::vector<Poly> cs;
                for (const auto &c : ei) {
                    cs.push_back(read_poly(c, "seed.embedding"));
                }
                comps.push_back(std::move(cs));
            }
            emb.push_back(std::move(comps));
        }
        return induce_roby(a_line, split_roby(a_line.rank()), w, emb);
    }
    if (kind == "module") {
        return build_module(detail::require(n, "module"));
    }
    throw input_error("unknown seed kind '" + kind + "'");
}

inline PipelineFile read_pipeline(const YAML::Node &n)
{
    if (schema_of(n) != pipeline_schema) {
        throw input_error(std::string("expected schema ") + pipeline_schema);
    }
    PipelineFile p;
    p.input.algebra = read_algebra(detail::require(n, "algebra"));
    if (n["base"]) {
        if (n["base"]["x"]) {
            p.input.x = var(n["base"]["x"].as<std::string>());
        }
        if (n["base"]["y"]) {
            p.input.y = var(n["base"]["y"].as<std::string>());
        }
    }
    p.input.line = read_bindings(n["line"]);
    const FreeAlgebra a_line = p.input.algebra.substituted(p.input.line);
    const YAML::Node seed = detail::require(n, "seed");
    p.seed_kind = detail::get<std::string>(seed["kind"], "seed.kind");
    p.input.seed = read_seed(seed, a_line);
    if (n["output"]) {
        if (n["output"]["report"]) {
            p.report_path = n["output"]["report"].as<std::string>();
        }
        if (n["output"]["module"]) {
            p.module_path = n["output"]["module"].as<std::string>();
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Config: field_order_cap, degree_padding, output_dir.

struct Config {
    unsigned field_order_cap = 360;
    int degree_padding = 0;
    std::string output_dir;
};

inline Config read_config(const std::string &path)
{
    const YAML::Node n = load_file(path);
    Config c;
    if (n["field_order_cap"]) {
        c.field_order_cap = detail::get<unsigned>(n["field_order_cap"], "field_order_cap");
        if (c.field_order_cap < 1) {
            throw input_error("field_order_cap must be positive");
        }
    }
    if (n["degree_padding"]) {
        c.degree_padding = detail::get<int>(n["degree_padding"], "degree_padding");
        if (c.degree_padding < 0) {
            throw input_error("degree_padding must be nonnegative");
        }
    }
    if (n["output_dir"]) {
        c.output_dir = n["output_dir"].as<std::string>();
    }
    return c;
}

inline void apply(const Config &c)
{
    field_order_cap().store(c.field_order_cap);
    degree_window_padding().store(c.degree_padding);
}

} // namespace roby::io

#endif // ROBY_IO_HPP
