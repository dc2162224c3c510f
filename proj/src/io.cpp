#include "hochkit/io.hpp"

#include <fstream>

#include "hochkit/errors.hpp"

namespace hochkit::io {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw ValidationError(what);
}

const Json& member(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        bad(where + ": missing \"" + key + "\"");
    return j.at(key);
}

Scalar scalar(const Field& f, const Json& j, const std::string& where)
{
    if (!j.is_string() && !j.is_number_integer())
        bad(where + ": scalars must be strings such as \"1/2\" or integers");
    std::string text = j.is_string() ? j.get<std::string>() : std::to_string(j.get<long long>());
    try {
        return f.parse(text);
    } catch (const std::invalid_argument& e) {
        bad(where + ": " + e.what());
    }
}

std::vector<Scalar> dense(const Field& f, const Json& j, std::size_t n, const std::string& where)
{
    if (!j.is_array() || j.size() != n)
        bad(where + ": expected a vector of length " + std::to_string(n));
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(scalar(f, j[i], where));
    return v;
}

int integer(const Json& j, const std::string& where)
{
    if (!j.is_number_integer())
        bad(where + ": expected an integer");
    return j.get<int>();
}

std::string text(const Json& j, const std::string& where)
{
    if (!j.is_string())
        bad(where + ": expected a string");
    return j.get<std::string>();
}

Field field_of(const Json& j)
{
    const Json& f = member(j, "field", "algebra");
    try {
        if (f.is_string())
            return parse_field(f.get<std::string>());
        if (f.is_object() && f.contains("Fp") && f["Fp"].is_number_unsigned())
            return Field::prime(f["Fp"].get<std::uint32_t>());
    } catch (const std::invalid_argument& e) {
        bad(std::string("algebra field: ") + e.what());
    }
    bad("algebra field: expected \"Q\" or {\"Fp\": <prime>}");
}

} // namespace

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        bad("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        bad(path + ": invalid JSON (" + e.what() + ")");
    }
}

void write_text_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << contents << '\n';
    if (!out)
        throw std::runtime_error("cannot write " + path);
}

GradedAlgebra algebra_from_json(const Json& j, const std::optional<Field>& override)
{
    AlgebraSpec spec;
    spec.field = override ? *override : field_of(j);
    const Json& basis = member(j, "basis", "algebra");
    if (!basis.is_array() || basis.empty())
        bad("algebra: \"basis\" must be a nonempty array");
    for (const Json& b : basis)
        spec.basis.push_back({text(member(b, "name", "basis element"), "basis name"),
                              integer(member(b, "degree", "basis element"), "basis degree")});
    std::size_t n = spec.basis.size();
    spec.unit = dense(spec.field, member(j, "unit", "algebra"), n, "unit");
    const Json& table = member(j, "table", "algebra");
    if (!table.is_array() || table.size() != n)
        bad("algebra: \"table\" must have one row per basis element");
    spec.table.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!table[i].is_array() || table[i].size() != n)
            bad("algebra: table row " + std::to_string(i) + " must have one entry per basis element");
        for (std::size_t k = 0; k < n; ++k)
            spec.table[i].push_back(dense(spec.field, table[i][k], n, "table[" + std::to_string(i) + "][" +
                                                                           std::to_string(k) + "]"));
    }
    const Json& comm = member(j, "commutative", "algebra");
    if (!comm.is_boolean())
        bad("algebra: \"commutative\" must be a boolean");
    spec.commutative = comm.get<bool>();
    return make_algebra(spec);
}

GradedAlgebra load_algebra(const std::string& path, const std::optional<Field>& override)
{
    return algebra_from_json(read_json_file(path), override);
}

OrderedJson algebra_to_json(const GradedAlgebra& a)
{
    AlgebraSpec s = a.spec();
    OrderedJson j;
    if (s.field.is_rational())
        j["field"] = "Q";
    else
        j["field"] = {{"Fp", s.field.characteristic()}};
    j["basis"] = OrderedJson::array();
    for (const BasisElement& b : s.basis)
        j["basis"].push_back({{"name", b.name}, {"degree", b.degree}});
    auto vec = [](const std::vector<Scalar>& v) {
        OrderedJson out = OrderedJson::array();
        for (const Scalar& x : v)
            out.push_back(x.str());
        return out;
    };
    j["unit"] = vec(s.unit);
    j["table"] = OrderedJson::array();
    for (const auto& row : s.table) {
        OrderedJson r = OrderedJson::array();
        for (const auto& entry : row)
            r.push_back(vec(entry));
        j["table"].push_back(r);
    }
    j["commutative"] = s.commutative;
    return j;
}

SimplicialSet space_from_json(const Json& j)
{
    const Json& cells = member(j, "cells", "space");
    if (!cells.is_array())
        bad("space: \"cells\" must be an array");
    std::vector<CellSpec> specs;
    for (const Json& c : cells) {
        CellSpec s;
        s.dim = integer(member(c, "dim", "cell"), "cell dim");
        s.name = text(member(c, "name", "cell"), "cell name");
        if (c.contains("faces")) {
            if (!c["faces"].is_array())
                bad("cell " + s.name + ": \"faces\" must be an array");
            for (const Json& f : c["faces"]) {
                FaceSpec face;
                face.base = text(member(f, "base", "face of " + s.name), "face base");
                if (f.contains("word")) {
                    if (!f["word"].is_array())
                        bad("face of " + s.name + ": \"word\" must be an array");
                    for (const Json& w : f["word"])
                        face.word.push_back(integer(w, "degeneracy index"));
                }
                s.faces.push_back(std::move(face));
            }
        }
        specs.push_back(std::move(s));
    }
    return SimplicialSet::from_cells(specs);
}

SimplicialSet resolve_space(const std::string& descriptor)
{
    const std::string ext = ".json";
    if (descriptor.size() > ext.size() && descriptor.compare(descriptor.size() - ext.size(), ext.size(), ext) == 0)
        return space_from_json(read_json_file(descriptor));
    return spaces::builtin(descriptor);
}

Poset poset_from_json(const Json& j)
{
    const Json& objects = member(j, "objects", "poset");
    if (!objects.is_array())
        bad("poset: \"objects\" must be an array");
    std::vector<PosetObject> objs;
    std::map<std::string, std::size_t> index;
    for (const Json& o : objects) {
        PosetObject p;
        p.name = text(member(o, "name", "poset object"), "object name");
        if (o.contains("components")) {
            p.components = integer(o["components"], "components");
            if (p.components < 1)
                bad("poset object " + p.name + ": components must be positive");
        }
        index[p.name] = objs.size();
        objs.push_back(std::move(p));
    }
    std::vector<PosetRelation> rels;
    const Json& relations = j.contains("relations") ? j["relations"] : Json::array();
    if (!relations.is_array())
        bad("poset: \"relations\" must be an array");
    auto lookup = [&](const Json& n) {
        std::string name = text(n, "relation endpoint");
        auto it = index.find(name);
        if (it == index.end())
            bad("poset: unknown object '" + name + "' in a relation");
        return it->second;
    };
    for (const Json& r : relations) {
        if (!r.is_array() || r.size() < 2 || r.size() > 3)
            bad("poset: a relation is [lower, upper] or [lower, upper, component map]");
        PosetRelation rel{lookup(r[0]), lookup(r[1]), std::nullopt};
        if (r.size() == 3) {
            if (!r[2].is_array())
                bad("poset: component map must be an array of integers");
            std::vector<std::size_t> phi;
            for (const Json& k : r[2]) {
                int v = integer(k, "component index");
                if (v < 0)
                    bad("poset: component indices are nonnegative");
                phi.push_back(std::size_t(v));
            }
            rel.components = std::move(phi);
        }
        rels.push_back(std::move(rel));
    }
    return Poset(std::move(objs), rels);
}

LeftModule module_from_json(const Json& j, const GradedAlgebra& a)
{
    if (j.is_string() && j.get<std::string>() == "regular")
        return regular_left(a);
    LeftModule m{a.field(), {}, {}};
    const Json& degrees = member(j, "degrees", "module");
    if (!degrees.is_array())
        bad("module: \"degrees\" must be an array");
    for (const Json& d : degrees)
        m.degrees.push_back(integer(d, "module degree"));
    const Json& action = member(j, "action", "module");
    if (!action.is_array() || action.size() != a.dim() * m.dim())
        bad("module: \"action\" needs dim A × dim M = " + std::to_string(a.dim() * m.dim()) + " entries");
    for (std::size_t k = 0; k < action.size(); ++k)
        m.action.push_back(to_sparse(dense(a.field(), action[k], m.dim(), "action[" + std::to_string(k) + "]")));
    m.validate(a);
    return m;
}

LeftModule resolve_module(const std::string& spec, const GradedAlgebra& a)
{
    if (spec == "regular")
        return regular_left(a);
    return module_from_json(read_json_file(spec), a);
}

AlgebraMap map_from_json(const Json& j, const GradedAlgebra& source, const GradedAlgebra& target)
{
    const Json& images = member(j, "images", "algebra map");
    if (!images.is_array() || images.size() != source.dim())
        bad("algebra map: \"images\" needs one vector per source basis element");
    AlgebraMap f{source, target, {}};
    for (std::size_t i = 0; i < images.size(); ++i)
        f.images.push_back(to_sparse(dense(target.field(), images[i], target.dim(), "images[" + std::to_string(i) + "]")));
    f.validate();
    return f;
}

} // namespace hochkit::io
