#include "hochkit/simplicial.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "hochkit/errors.hpp"

namespace hochkit {

namespace {

std::string join_word(const std::vector<int>& w)
{
    std::string out = "[";
    for (std::size_t k = 0; k < w.size(); ++k)
        out += (k ? "," : "") + std::to_string(w[k]);
    return out + "]";
}

} // namespace

SimplicialSet SimplicialSet::from_cells(const std::vector<CellSpec>& specs)
{
    SimplicialSet x;
    // Cells are ordered by dimension, then by declaration order.
    std::vector<std::size_t> order(specs.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return specs[a].dim < specs[b].dim; });

    for (std::size_t k : order) {
        const CellSpec& c = specs[k];
        if (c.dim < 0 || c.dim > kMaxLevel)
            throw ValidationError("cell " + c.name + ": dimension out of range");
        if (c.name.empty())
            throw ValidationError("cell with empty name");
        if (!x.names_.emplace(c.name, static_cast<std::uint32_t>(x.cells_.size())).second)
            throw ValidationError("duplicate cell name " + c.name);
        x.cells_.push_back({c.name, c.dim, {}});
    }
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const CellSpec& c = specs[order[pos]];
        std::size_t expected = c.dim == 0 ? 0 : std::size_t(c.dim) + 1;
        if (c.faces.size() != expected)
            throw ValidationError("cell " + c.name + " of dimension " + std::to_string(c.dim) + " needs " +
                                  std::to_string(expected) + " faces, got " + std::to_string(c.faces.size()));
        for (std::size_t i = 0; i < c.faces.size(); ++i) {
            auto base = x.find_cell(c.faces[i].base);
            if (!base)
                throw ValidationError("cell " + c.name + ": unknown face base " + c.faces[i].base);
            Simplex s = x.apply_word(*base, c.faces[i].word);
            if (x.level(s) != c.dim - 1)
                throw ValidationError("cell " + c.name + ": face d_" + std::to_string(i) + " lands at level " +
                                      std::to_string(x.level(s)) + ", expected " + std::to_string(c.dim - 1));
            x.cells_[pos].faces.push_back(s);
        }
    }
    for (std::uint32_t id = 0; id < x.cells_.size(); ++id) {
        const Cell& c = x.cells_[id];
        Simplex s{id, 0};
        for (int j = 1; c.dim >= 2 && j <= c.dim; ++j)
            for (int i = 0; i < j; ++i)
                if (x.face(x.face(s, j), i) != x.face(x.face(s, i), j - 1))
                    throw ValidationError("simplicial identity d_" + std::to_string(i) + " d_" + std::to_string(j) +
                                          " = d_" + std::to_string(j - 1) + " d_" + std::to_string(i) +
                                          " fails on cell " + c.name);
    }
    return x;
}

std::optional<std::uint32_t> SimplicialSet::find_cell(const std::string& name) const
{
    auto it = names_.find(name);
    if (it == names_.end())
        return std::nullopt;
    return it->second;
}

int SimplicialSet::top_dim() const
{
    int d = -1;
    for (const auto& c : cells_)
        d = std::max(d, c.dim);
    return d;
}

int SimplicialSet::level(const Simplex& s) const
{
    return cells_.at(s.base).dim + std::popcount(s.degeneracies);
}

std::vector<int> SimplicialSet::surjection(const Simplex& s) const
{
    int n = level(s);
    std::vector<int> eta(std::size_t(n) + 1, 0);
    for (int j = 0; j < n; ++j)
        eta[j + 1] = eta[j] + (((s.degeneracies >> j) & 1u) ? 0 : 1);
    return eta;
}

Simplex SimplicialSet::from_surjection(std::uint32_t base, const std::vector<int>& eta)
{
    std::uint32_t mask = 0;
    for (std::size_t j = 0; j + 1 < eta.size(); ++j)
        if (eta[j] == eta[j + 1])
            mask |= (1u << j);
    return {base, mask};
}

Simplex SimplicialSet::face(const Simplex& s, int i) const
{
    int n = level(s);
    if (n < 1 || i < 0 || i > n)
        throw std::out_of_range("face index d_" + std::to_string(i) + " out of range at level " + std::to_string(n));
    std::vector<int> eta = surjection(s);
    std::vector<int> g;
    g.reserve(n);
    for (int j = 0; j <= n; ++j)
        if (j != i)
            g.push_back(eta[j]);
    // η∘δ_i misses a value c exactly when η^{-1}(c) = {i}.
    bool left_same = i > 0 && eta[i - 1] == eta[i];
    bool right_same = i < n && eta[i + 1] == eta[i];
    if (left_same || right_same)
        return from_surjection(s.base, g);
    int c = eta[i];
    for (int& v : g)
        if (v > c)
            --v;
    const Simplex& y = cells_[s.base].faces[c];
    std::vector<int> mu = surjection(y);
    for (int& v : g)
        v = mu[v];
    return from_surjection(y.base, g);
}

Simplex SimplicialSet::degeneracy(const Simplex& s, int j) const
{
    int n = level(s);
    if (j < 0 || j > n)
        throw std::out_of_range("degeneracy index s_" + std::to_string(j) + " out of range at level " +
                                std::to_string(n));
    if (n + 1 > kMaxLevel)
        throw std::out_of_range("simplicial level limit exceeded");
    std::vector<int> eta = surjection(s);
    std::vector<int> out(std::size_t(n) + 2);
    for (int k = 0; k <= n + 1; ++k)
        out[k] = eta[k <= j ? k : k - 1];
    return from_surjection(s.base, out);
}

Simplex SimplicialSet::apply_word(std::uint32_t base, const std::vector<int>& word) const
{
    Simplex s{base, 0};
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        int lvl = level(s);
        if (*it < 0 || *it > lvl)
            throw ValidationError("degeneracy word " + join_word(word) + " on " + cells_[base].name +
                                  " uses s_" + std::to_string(*it) + " at level " + std::to_string(lvl));
        s = degeneracy(s, *it);
    }
    return s;
}

std::vector<int> SimplicialSet::word(const Simplex& s)
{
    std::vector<int> w;
    for (int j = 31; j >= 0; --j)
        if ((s.degeneracies >> j) & 1u)
            w.push_back(j);
    return w;
}

std::vector<Simplex> SimplicialSet::level_simplices(int n) const
{
    if (n < 0 || n > kMaxLevel)
        throw std::out_of_range("level out of range");
    std::vector<Simplex> out;
    for (std::uint32_t id = 0; id < cells_.size(); ++id) {
        int k = n - cells_[id].dim;
        if (k < 0)
            continue;
        std::vector<Simplex> group;
        // all k-subsets of {0..n-1}
        std::vector<int> comb(k);
        for (int t = 0; t < k; ++t)
            comb[t] = t;
        while (true) {
            std::uint32_t mask = 0;
            for (int v : comb)
                mask |= 1u << v;
            group.push_back({id, mask});
            int t = k - 1;
            while (t >= 0 && comb[t] == n - k + t)
                --t;
            if (t < 0)
                break;
            ++comb[t];
            for (int u = t + 1; u < k; ++u)
                comb[u] = comb[u - 1] + 1;
        }
        std::sort(group.begin(), group.end(), [](const Simplex& a, const Simplex& b) { return word(a) < word(b); });
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

std::optional<std::string> SimplicialSet::check_identities(int max_level) const
{
    for (int n = 2; n <= max_level; ++n)
        for (const Simplex& s : level_simplices(n))
            for (int j = 1; j <= n; ++j)
                for (int i = 0; i < j; ++i)
                    if (face(face(s, j), i) != face(face(s, i), j - 1))
                        return "d_" + std::to_string(i) + " d_" + std::to_string(j) + " != d_" +
                               std::to_string(j - 1) + " d_" + std::to_string(i) + " on " + describe(s);
    return std::nullopt;
}

std::string SimplicialSet::describe(const Simplex& s) const
{
    std::string out;
    for (int j : word(s))
        out += "s" + std::to_string(j) + " ";
    return out + cells_.at(s.base).name;
}

LevelIndex::LevelIndex(const SimplicialSet& x, int n) : level_(n), simplices_(x.level_simplices(n))
{
    index_.reserve(simplices_.size());
    for (std::size_t k = 0; k < simplices_.size(); ++k)
        index_.emplace(key(simplices_[k]), k);
}

std::size_t LevelIndex::position(const Simplex& s) const
{
    auto it = index_.find(key(s));
    if (it == index_.end())
        throw std::out_of_range("simplex not at level " + std::to_string(level_));
    return it->second;
}

SimplicialMap::SimplicialMap(SimplicialSet source, SimplicialSet target, std::vector<Simplex> cell_images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(cell_images))
{
    if (images_.size() != source_.cells().size())
        throw ValidationError("simplicial map: one image per nondegenerate cell required");
    for (std::uint32_t id = 0; id < images_.size(); ++id) {
        const Cell& c = source_.cell(id);
        if (images_[id].base >= target_.cells().size() || target_.level(images_[id]) != c.dim)
            throw ValidationError("simplicial map: image of " + c.name + " is not at level " + std::to_string(c.dim));
    }
    for (std::uint32_t id = 0; id < images_.size(); ++id) {
        const Cell& c = source_.cell(id);
        for (int i = 0; i < static_cast<int>(c.faces.size()); ++i)
            if (apply(c.faces[i]) != target_.face(images_[id], i))
                throw ValidationError("simplicial map does not commute with d_" + std::to_string(i) + " on " +
                                      c.name);
    }
}

Simplex SimplicialMap::apply(const Simplex& s) const
{
    const Simplex& y = images_.at(s.base);
    std::vector<int> eta = source_.surjection(s);
    std::vector<int> mu = target_.surjection(y);
    for (int& v : eta)
        v = mu[v];
    return SimplicialSet::from_surjection(y.base, eta);
}

std::vector<std::size_t> SimplicialMap::level_map(int n) const
{
    LevelIndex src(source_, n), tgt(target_, n);
    std::vector<std::size_t> out;
    out.reserve(src.size());
    for (const Simplex& s : src.simplices())
        out.push_back(tgt.position(apply(s)));
    return out;
}

bool SimplicialMap::check(int max_level) const
{
    for (int n = 0; n <= max_level; ++n)
        for (const Simplex& s : source_.level_simplices(n)) {
            Simplex fs = apply(s);
            if (target_.level(fs) != n)
                return false;
            for (int i = 0; n > 0 && i <= n; ++i)
                if (apply(source_.face(s, i)) != target_.face(fs, i))
                    return false;
            for (int j = 0; j <= n && n + 1 <= max_level; ++j)
                if (apply(source_.degeneracy(s, j)) != target_.degeneracy(fs, j))
                    return false;
        }
    return true;
}

namespace spaces {

SimplicialSet point()
{
    return SimplicialSet::from_cells({{0, "v", {}}});
}

SimplicialSet interval()
{
    return simplex(1);
}

SimplicialSet circle_min()
{
    return SimplicialSet::from_cells({{0, "v", {}}, {1, "e", {{"v", {}}, {"v", {}}}}});
}

SimplicialSet sphere_min(int d)
{
    if (d < 1)
        throw std::invalid_argument("sphere_min: dimension must be at least 1");
    if (d > kMaxLevel)
        throw std::invalid_argument("sphere_min: dimension too large");
    std::vector<int> word;
    for (int j = d - 2; j >= 0; --j)
        word.push_back(j);
    std::vector<FaceSpec> faces(std::size_t(d) + 1, FaceSpec{"v", word});
    return SimplicialSet::from_cells({{0, "v", {}}, {d, "c", faces}});
}

namespace {

std::string subset_name(unsigned mask)
{
    std::string s;
    for (int v = 0; v < 32; ++v)
        if ((mask >> v) & 1u)
            s += (s.empty() ? "" : ".") + std::to_string(v);
    return s;
}

SimplicialSet simplex_like(int n, bool include_top)
{
    if (n < 0 || n > 12)
        throw std::invalid_argument("simplex: dimension out of range");
    std::vector<CellSpec> cells;
    unsigned full = (1u << (n + 1)) - 1;
    for (unsigned mask = 1; mask <= full; ++mask) {
        if (mask == full && !include_top)
            continue;
        int dim = std::popcount(mask) - 1;
        CellSpec c{dim, subset_name(mask), {}};
        if (dim > 0) {
            for (int v = 0; v < 32; ++v)
                if ((mask >> v) & 1u)
                    c.faces.push_back({subset_name(mask & ~(1u << v)), {}});
        }
        cells.push_back(c);
    }
    return SimplicialSet::from_cells(cells);
}

} // namespace

SimplicialSet simplex(int n)
{
    return simplex_like(n, true);
}

SimplicialSet boundary(int n)
{
    if (n < 1)
        throw std::invalid_argument("boundary: dimension must be at least 1");
    return simplex_like(n, false);
}

SimplicialSet circle_subdiv(int m)
{
    if (m < 3)
        throw std::invalid_argument("circle_subdiv: need at least 3 edges, got " + std::to_string(m));
    std::vector<CellSpec> cells;
    for (int i = 0; i < m; ++i)
        cells.push_back({0, "v" + std::to_string(i), {}});
    for (int i = 0; i < m; ++i)
        cells.push_back({1, "e" + std::to_string(i), {{"v" + std::to_string((i + 1) % m), {}}, {"v" + std::to_string(i), {}}}});
    return SimplicialSet::from_cells(cells);
}

SimplicialSet disjoint_union(const SimplicialSet& x, const SimplicialSet& y)
{
    std::vector<CellSpec> cells;
    auto add = [&](const SimplicialSet& s, const std::string& prefix) {
        for (const Cell& c : s.cells()) {
            CellSpec spec{c.dim, prefix + c.name, {}};
            for (const Simplex& f : c.faces)
                spec.faces.push_back({prefix + s.cell(f.base).name, SimplicialSet::word(f)});
            cells.push_back(spec);
        }
    };
    add(x, "0:");
    add(y, "1:");
    return SimplicialSet::from_cells(cells);
}

namespace {

int parse_int(const std::string& s, const std::string& descriptor)
{
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6)
        throw std::invalid_argument("bad space descriptor \"" + descriptor + "\"");
    return std::stoi(s);
}

} // namespace

SimplicialSet builtin(const std::string& descriptor)
{
    const std::string& d = descriptor;
    if (d.rfind("union:", 0) == 0) {
        std::string rest = d.substr(6);
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t plus = rest.find('+', start);
            parts.push_back(rest.substr(start, plus - start));
            if (plus == std::string::npos)
                break;
            start = plus + 1;
        }
        if (parts.size() < 2)
            throw std::invalid_argument("union needs at least two summands: \"" + d + "\"");
        SimplicialSet acc = builtin(parts[0]);
        for (std::size_t k = 1; k < parts.size(); ++k)
            acc = disjoint_union(acc, builtin(parts[k]));
        return acc;
    }
    if (d == "point" || d == "pt")
        return point();
    if (d == "interval")
        return interval();
    if (d == "circle:min" || d == "circle")
        return circle_min();
    auto colon = d.find(':');
    if (colon != std::string::npos) {
        std::string head = d.substr(0, colon), arg = d.substr(colon + 1);
        if (head == "circle")
            return circle_subdiv(parse_int(arg, d));
        if (head == "sphere")
            return sphere_min(parse_int(arg, d));
        if (head == "simplex")
            return simplex(parse_int(arg, d));
        if (head == "boundary")
            return boundary(parse_int(arg, d));
    }
    throw std::invalid_argument("unknown space descriptor \"" + d + "\"");
}

} // namespace spaces

SimplicialMap fold_map(const SimplicialSet& x)
{
    SimplicialSet two = spaces::disjoint_union(x, x);
    std::vector<Simplex> images;
    // disjoint_union sorts by dimension, so look cells up by name.
    for (const Cell& c : two.cells()) {
        std::string plain = c.name.substr(2);
        images.push_back({*x.find_cell(plain), 0});
    }
    return SimplicialMap(two, x, images);
}

SimplicialMap collapse_to_point(const SimplicialSet& x)
{
    SimplicialSet pt = spaces::point();
    std::vector<Simplex> images;
    for (const Cell& c : x.cells())
        images.push_back(SimplicialSet::from_surjection(0, std::vector<int>(std::size_t(c.dim) + 1, 0)));
    return SimplicialMap(x, pt, images);
}

} // namespace hochkit
