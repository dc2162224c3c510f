#include "hochkit/colim.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>

#include "hochkit/errors.hpp"

namespace hochkit {

// -------------------------------------------------------------------- posets

Poset::Poset(std::vector<PosetObject> objects, const std::vector<PosetRelation>& relations)
    : objects_(std::move(objects))
{
    const std::size_t n = objects_.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            if (objects_[x].name == objects_[y].name)
                throw ValidationError("poset: duplicate object name '" + objects_[x].name + "'");
    leq_.assign(n, std::vector<bool>(n, false));
    for (std::size_t x = 0; x < n; ++x)
        leq_[x][x] = true;
    for (const PosetRelation& r : relations) {
        if (r.lower >= n || r.upper >= n)
            throw ValidationError("poset: relation refers to a missing object");
        leq_[r.lower][r.upper] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t x = 0; x < n; ++x)
            if (leq_[x][k])
                for (std::size_t y = 0; y < n; ++y)
                    if (leq_[k][y])
                        leq_[x][y] = true;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            if (leq_[x][y] && leq_[y][x])
                throw ValidationError("poset: antisymmetry fails for '" + objects_[x].name + "' and '" +
                                      objects_[y].name + "'");

    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (!less(x, y))
                continue;
            bool cover = true;
            for (std::size_t z = 0; z < n && cover; ++z)
                cover = !(less(x, z) && less(z, y));
            if (cover)
                covers_.emplace_back(x, y);
        }

    // longest[x]: longest chain starting at x; objects sorted so that a
    // strict upper bound is processed first
    std::vector<std::size_t> order(n);
    for (std::size_t x = 0; x < n; ++x)
        order[x] = x;
    auto ups = [&](std::size_t x) {
        std::size_t c = 0;
        for (std::size_t y = 0; y < n; ++y)
            c += less(x, y);
        return c;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ups(a) < ups(b); });
    std::vector<int> longest(n, 0);
    for (std::size_t x : order)
        for (std::size_t y = 0; y < n; ++y)
            if (less(x, y))
                longest[x] = std::max(longest[x], longest[y] + 1);
    for (int l : longest)
        height_ = std::max(height_, l);

    labeled_ = n > 0 && std::all_of(objects_.begin(), objects_.end(), [](const PosetObject& o) { return o.components > 0; });
    if (!labeled_) {
        for (const PosetRelation& r : relations)
            if (r.components)
                throw ValidationError("poset: component maps need every object labeled");
        return;
    }

    auto describe = [&](std::size_t x, std::size_t y) { return "'" + objects_[x].name + "' < '" + objects_[y].name + "'"; };
    for (const PosetRelation& r : relations) {
        if (!r.components)
            continue;
        if (!less(r.lower, r.upper))
            throw ValidationError("poset: component map on a non-strict pair");
        const auto& phi = *r.components;
        if (phi.size() != std::size_t(objects_[r.lower].components))
            throw ValidationError("poset: component map of " + describe(r.lower, r.upper) + " has the wrong length");
        for (std::size_t j : phi)
            if (j >= std::size_t(objects_[r.upper].components))
                throw ValidationError("poset: component map of " + describe(r.lower, r.upper) + " is out of range");
        auto [it, fresh] = component_maps_.emplace(std::make_pair(r.lower, r.upper), phi);
        if (!fresh && it->second != phi)
            throw ValidationError("poset: conflicting component maps for " + describe(r.lower, r.upper));
    }
    for (auto [x, y] : covers_) {
        if (component_maps_.count({x, y}))
            continue;
        std::size_t cx = objects_[x].components, cy = objects_[y].components;
        if (cy == 1)
            component_maps_[{x, y}] = std::vector<std::size_t>(cx, 0);
        else if (cx == cy) {
            std::vector<std::size_t> id(cx);
            for (std::size_t i = 0; i < cx; ++i)
                id[i] = i;
            component_maps_[{x, y}] = id;
        } else
            throw ValidationError("poset: component map of " + describe(x, y) + " is ambiguous and must be given");
    }
    // fill longer pairs by composing through any intermediate object
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                if (!less(x, y) || component_maps_.count({x, y}))
                    continue;
                for (std::size_t z = 0; z < n; ++z) {
                    auto a = component_maps_.find({x, z});
                    auto b = component_maps_.find({z, y});
                    if (a == component_maps_.end() || b == component_maps_.end())
                        continue;
                    std::vector<std::size_t> phi;
                    for (std::size_t i : a->second)
                        phi.push_back(b->second[i]);
                    component_maps_[{x, y}] = phi;
                    grew = true;
                    break;
                }
            }
    }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                if (!less(x, y) || !less(y, z))
                    continue;
                const auto& a = component_maps_.at({x, y});
                const auto& b = component_maps_.at({y, z});
                const auto& c = component_maps_.at({x, z});
                for (std::size_t i = 0; i < a.size(); ++i)
                    if (b[a[i]] != c[i])
                        throw ValidationError("poset: component maps do not compose on '" + objects_[x].name + "' < '" +
                                              objects_[y].name + "' < '" + objects_[z].name + "'");
            }
}

std::optional<std::size_t> Poset::find(const std::string& name) const
{
    for (std::size_t x = 0; x < objects_.size(); ++x)
        if (objects_[x].name == name)
            return x;
    return std::nullopt;
}

const std::vector<std::size_t>& Poset::component_map(std::size_t x, std::size_t y) const
{
    if (!labeled_)
        throw ValidationError("poset is not labeled by components");
    auto it = component_maps_.find({x, y});
    if (it == component_maps_.end())
        throw ValidationError("component_map: not a strict pair");
    return it->second;
}

std::vector<std::vector<std::size_t>> Poset::chains(int p) const
{
    std::vector<std::vector<std::size_t>> out;
    if (p < 0)
        return out;
    std::vector<std::size_t> cur;
    std::function<void()> extend = [&]() {
        if (int(cur.size()) == p + 1) {
            out.push_back(cur);
            return;
        }
        for (std::size_t y = 0; y < size(); ++y)
            if (cur.empty() || less(cur.back(), y)) {
                cur.push_back(y);
                extend();
                cur.pop_back();
            }
    };
    extend();
    return out;
}

// ------------------------------------------------------------------ functors

const SparseMatrix& PosetFunctor::map(std::size_t x, std::size_t y) const
{
    auto it = maps.find({x, y});
    if (it == maps.end())
        throw ValidationError("functor: no map for the pair (" + std::to_string(x) + ", " + std::to_string(y) + ")");
    return it->second;
}

namespace {

std::string triple(const Poset& p, std::size_t x, std::size_t y, std::size_t z)
{
    return "'" + p.object(x).name + "' < '" + p.object(y).name + "' < '" + p.object(z).name + "'";
}

std::string pair_name(const Poset& p, std::size_t x, std::size_t y)
{
    return "'" + p.object(x).name + "' < '" + p.object(y).name + "'";
}

bool same_matrix(const SparseMatrix& a, const SparseMatrix& b)
{
    return a.rows == b.rows && a.columns == b.columns;
}

} // namespace

void PosetFunctor::validate(const Poset& p) const
{
    if (degrees.size() != p.size())
        throw ValidationError("functor: expected " + std::to_string(p.size()) + " objects");
    for (const auto& [key, m] : maps)
        if (!p.less(key.first, key.second))
            throw ValidationError("functor: map on a non-strict pair");
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < p.size(); ++y) {
            if (!p.less(x, y))
                continue;
            const SparseMatrix& m = map(x, y);
            if (m.rows != dim(y) || m.cols() != dim(x))
                throw ValidationError("functor: map of " + pair_name(p, x, y) + " has the wrong shape");
            for (std::size_t j = 0; j < dim(x); ++j)
                for (const Term& t : m.columns[j])
                    if (t.index >= dim(y) || degrees[y][t.index] != degrees[x][j])
                        throw ValidationError("functor: map of " + pair_name(p, x, y) + " does not preserve degree");
        }
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < p.size(); ++y)
            for (std::size_t z = 0; z < p.size(); ++z)
                if (p.less(x, y) && p.less(y, z) && !same_matrix(compose(map(y, z), map(x, y)), map(x, z)))
                    throw ValidationError("functor: functoriality fails on " + triple(p, x, y, z));
}

PosetFunctor constant_functor(const Poset& p, const Field& f)
{
    PosetFunctor out{f, std::vector<std::vector<int>>(p.size(), std::vector<int>{0}), {}};
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < p.size(); ++y)
            if (p.less(x, y)) {
                SparseMatrix m(1, 1);
                m.columns[0] = SparseVec::unit(0, f.one());
                out.maps[{x, y}] = m;
            }
    return out;
}

PosetFunctor zero_functor(const Poset& p, const Field& f)
{
    PosetFunctor out{f, std::vector<std::vector<int>>(p.size()), {}};
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < p.size(); ++y)
            if (p.less(x, y))
                out.maps[{x, y}] = SparseMatrix(0, 0);
    return out;
}

void ChainFunctor::validate(const Poset& p) const
{
    if (values.size() != p.size())
        throw ValidationError("chain functor: expected " + std::to_string(p.size()) + " objects");
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (values[x].field != field)
            throw ValidationError("chain functor: value at '" + p.object(x).name + "' has another field");
        if (auto err = values[x].check())
            throw ValidationError("chain functor: value at '" + p.object(x).name + "': " + *err);
    }
    auto level_map = [&](std::size_t x, std::size_t y) -> const std::vector<SparseMatrix>& {
        auto it = maps.find({x, y});
        if (it == maps.end())
            throw ValidationError("chain functor: no map for " + pair_name(p, x, y));
        return it->second;
    };
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < p.size(); ++y) {
            if (!p.less(x, y))
                continue;
            const ChainComplex& cx = values[x];
            const ChainComplex& cy = values[y];
            const auto& f = level_map(x, y);
            int top = std::min(cx.top(), cy.top());
            if (int(f.size()) < top + 1)
                throw ValidationError("chain functor: map of " + pair_name(p, x, y) + " is missing levels");
            for (int q = 0; q <= top; ++q) {
                if (f[q].rows != cy.dim(q) || f[q].cols() != cx.dim(q))
                    throw ValidationError("chain functor: map of " + pair_name(p, x, y) + " has the wrong shape");
                for (std::size_t j = 0; j < cx.dim(q); ++j)
                    for (const Term& t : f[q].columns[j])
                        if (cy.internal[q][t.index] != cx.internal[q][j])
                            throw ValidationError("chain functor: map of " + pair_name(p, x, y) +
                                                  " does not preserve degree");
                if (q > 0 && !same_matrix(compose(cy.d[q], f[q]), compose(f[q - 1], cx.d[q])))
                    throw ValidationError("chain functor: map of " + pair_name(p, x, y) + " is not a chain map");
            }
        }
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < p.size(); ++y)
            for (std::size_t z = 0; z < p.size(); ++z) {
                if (!p.less(x, y) || !p.less(y, z))
                    continue;
                int top = std::min({values[x].top(), values[y].top(), values[z].top()});
                for (int q = 0; q <= top; ++q)
                    if (!same_matrix(compose(level_map(y, z)[q], level_map(x, y)[q]), level_map(x, z)[q]))
                        throw ValidationError("chain functor: functoriality fails on " + triple(p, x, y, z));
            }
}

// ----------------------------------------------------------- tensor powers

namespace {

/// Basis of B^{⊗k} at levels 0..top: per level, compositions of the level
/// into k parts in lexicographic order, each followed by its row-major block.
class TensorBasis {
public:
    TensorBasis(const ChainComplex& b, std::size_t k, int top) : b_(&b), k_(k)
    {
        levels_.resize(std::size_t(top) + 1);
        for (int q = 0; q <= top; ++q) {
            std::vector<int> parts;
            std::function<void(int)> rec = [&](int left) {
                if (parts.size() == k_) {
                    if (left == 0)
                        add_block(q, parts);
                    return;
                }
                for (int l = 0; l <= left; ++l) {
                    parts.push_back(l);
                    rec(left - l);
                    parts.pop_back();
                }
            };
            rec(q);
        }
    }

    std::size_t size(int q) const { return levels_[q].total; }
    int top() const { return int(levels_.size()) - 1; }

    std::size_t encode(const std::vector<int>& parts, const std::vector<std::size_t>& idx) const
    {
        int q = 0;
        for (int l : parts)
            q += l;
        const Level& lv = levels_[q];
        const Block& blk = lv.blocks[lv.lookup.at(parts)];
        std::size_t pos = 0;
        for (std::size_t i = 0; i < k_; ++i)
            pos = pos * b_->dim(parts[i]) + idx[i];
        return blk.offset + pos;
    }

    void decode(int q, std::size_t g, std::vector<int>& parts, std::vector<std::size_t>& idx) const
    {
        const Level& lv = levels_[q];
        auto it = std::upper_bound(lv.blocks.begin(), lv.blocks.end(), g,
                                   [](std::size_t v, const Block& b) { return v < b.offset; });
        const Block& blk = *(it - 1);
        parts = blk.parts;
        idx.assign(k_, 0);
        std::size_t pos = g - blk.offset;
        for (std::size_t i = k_; i-- > 0;) {
            std::size_t d = b_->dim(parts[i]);
            idx[i] = pos % d;
            pos /= d;
        }
    }

    ChainComplex complex() const
    {
        ChainComplex c;
        c.field = b_->field;
        const Field& f = c.field;
        c.s_valid = b_->complete() ? top() : std::min(top(), b_->s_valid);
        std::vector<int> parts;
        std::vector<std::size_t> idx;
        for (int q = 0; q <= top(); ++q) {
            std::vector<int> degs(size(q));
            SparseMatrix d(q == 0 ? 0 : size(q - 1), size(q));
            for (std::size_t g = 0; g < size(q); ++g) {
                decode(q, g, parts, idx);
                int t = 0;
                for (std::size_t i = 0; i < k_; ++i)
                    t += b_->internal[parts[i]][idx[i]];
                degs[g] = t;
                if (q == 0)
                    continue;
                Accumulator acc;
                int parity = 0;
                for (std::size_t i = 0; i < k_; ++i) {
                    int l = parts[i];
                    if (l > 0) {
                        Scalar sign = parity % 2 ? -f.one() : f.one();
                        std::vector<int> np = parts;
                        --np[i];
                        std::vector<std::size_t> ni = idx;
                        for (const Term& term : b_->d[l].columns[idx[i]]) {
                            ni[i] = term.index;
                            acc.add(encode(np, ni), sign * term.coeff);
                        }
                    }
                    parity += l + b_->internal[l][idx[i]];
                }
                d.columns[g] = acc.finish();
            }
            c.internal.push_back(std::move(degs));
            c.d.push_back(std::move(d));
        }
        return c;
    }

private:
    struct Block {
        std::vector<int> parts;
        std::size_t offset = 0;
    };
    struct Level {
        std::vector<Block> blocks;
        std::map<std::vector<int>, std::size_t> lookup;
        std::size_t total = 0;
    };

    void add_block(int q, const std::vector<int>& parts)
    {
        std::size_t n = 1;
        for (int l : parts)
            n *= b_->dim(l);
        if (n == 0)
            return;
        Level& lv = levels_[q];
        lv.lookup[parts] = lv.blocks.size();
        lv.blocks.push_back({parts, lv.total});
        lv.total += n;
    }

    const ChainComplex* b_;
    std::size_t k_;
    std::vector<Level> levels_;
};

/// Map B^{⊗k} → B^{⊗k'} at level q that multiplies the factors sent to the
/// same target component (in source order) and inserts units elsewhere. The
/// Koszul sign counts odd pairs the stable regrouping moves past each other.
SparseMatrix merge_map(const DGAlgebra& b, const TensorBasis& src, const TensorBasis& dst,
                       const std::vector<std::size_t>& phi, std::size_t k_target, int q)
{
    const Field& f = b.complex.field;
    SparseMatrix m(dst.size(q), src.size(q));
    std::vector<int> parts;
    std::vector<std::size_t> idx;
    for (std::size_t g = 0; g < src.size(q); ++g) {
        src.decode(q, g, parts, idx);
        int odd_swaps = 0;
        for (std::size_t i = 0; i < phi.size(); ++i)
            for (std::size_t j = i + 1; j < phi.size(); ++j)
                if (phi[i] > phi[j])
                    odd_swaps += b.parity(parts[i], idx[i]) * b.parity(parts[j], idx[j]);
        std::vector<int> out_levels(k_target, 0);
        std::vector<SparseVec> out_vecs(k_target, b.unit);
        std::vector<bool> started(k_target, false);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            std::size_t j = phi[i];
            SparseVec e = SparseVec::unit(idx[i], f.one());
            if (!started[j]) {
                out_vecs[j] = e;
                out_levels[j] = parts[i];
                started[j] = true;
            } else {
                out_vecs[j] = b.multiply(out_levels[j], out_vecs[j], parts[i], e);
                out_levels[j] += parts[i];
            }
        }
        Accumulator acc;
        std::vector<std::size_t> oi(k_target);
        Scalar base = odd_swaps % 2 ? -f.one() : f.one();
        std::function<void(std::size_t, Scalar)> expand = [&](std::size_t j, Scalar c) {
            if (j == k_target) {
                acc.add(dst.encode(out_levels, oi), c);
                return;
            }
            for (const Term& t : out_vecs[j]) {
                oi[j] = t.index;
                expand(j + 1, c * t.coeff);
            }
        };
        expand(0, base);
        m.columns[g] = acc.finish();
    }
    return m;
}

ChainFunctor component_functor(const DGAlgebra& b, const Poset& p)
{
    if (!p.labeled())
        throw ValidationError("component functor: poset objects need component counts");
    if (!b.commutative)
        throw ValidationError("component functor: the algebra must be graded-commutative");
    int top = b.top();
    std::vector<TensorBasis> bases;
    ChainFunctor out;
    out.field = b.complex.field;
    for (std::size_t x = 0; x < p.size(); ++x) {
        bases.emplace_back(b.complex, std::size_t(p.object(x).components), top);
        out.values.push_back(bases.back().complex());
    }
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < p.size(); ++y) {
            if (!p.less(x, y))
                continue;
            std::vector<SparseMatrix> levels;
            for (int q = 0; q <= top; ++q)
                levels.push_back(merge_map(b, bases[x], bases[y], p.component_map(x, y),
                                           std::size_t(p.object(y).components), q));
            out.maps[{x, y}] = std::move(levels);
        }
    return out;
}

} // namespace

PosetFunctor arc_functor(const GradedAlgebra& a, const Poset& p)
{
    if (!a.commutative())
        throw ValidationError("arc_functor: the algebra must be graded-commutative");
    ChainFunctor c = component_functor(dg_from_algebra(a), p);
    PosetFunctor out{a.field(), {}, {}};
    for (const ChainComplex& v : c.values)
        out.degrees.push_back(v.internal[0]);
    for (auto& [key, levels] : c.maps)
        out.maps[key] = std::move(levels[0]);
    out.validate(p);
    return out;
}

ChainFunctor loday_functor(const GradedAlgebra& a, const Poset& p, const SimplicialSet& x, int top)
{
    if (!a.commutative())
        throw ValidationError("loday_functor: the algebra must be graded-commutative");
    ChainFunctor c = component_functor(dg_loday(unit_adapted(a).algebra, x, top), p);
    c.validate(p);
    return c;
}

// --------------------------------------------------------------------- nerve

DoubleComplex nerve_double_complex(const Poset& p, const ChainFunctor& f)
{
    f.validate(p);
    const Field& field = f.field;
    int q_top = 0;
    bool complete = true;
    int bound = 0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        q_top = x == 0 ? f.values[x].top() : std::min(q_top, f.values[x].top());
        if (!f.values[x].complete()) {
            bound = complete ? f.values[x].s_valid : std::min(bound, f.values[x].s_valid);
            complete = false;
        }
    }
    int p_top = p.size() == 0 ? 0 : p.height();

    std::vector<std::vector<std::vector<std::size_t>>> chains(std::size_t(p_top) + 1);
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> chain_id(std::size_t(p_top) + 1);
    for (int k = 0; k <= p_top; ++k) {
        chains[k] = p.chains(k);
        for (std::size_t i = 0; i < chains[k].size(); ++i)
            chain_id[k][chains[k][i]] = i;
    }
    // offsets[k][q][i]: first generator of chain i in column k, row q
    std::vector<std::vector<std::vector<std::size_t>>> offsets(std::size_t(p_top) + 1);
    std::vector<std::vector<std::vector<int>>> internal(std::size_t(p_top) + 1);
    for (int k = 0; k <= p_top; ++k)
        for (int q = 0; q <= q_top; ++q) {
            std::vector<std::size_t> off;
            std::vector<int> degs;
            for (const auto& c : chains[k]) {
                off.push_back(degs.size());
                const auto& v = f.values[c[0]].internal[q];
                degs.insert(degs.end(), v.begin(), v.end());
            }
            offsets[k].push_back(std::move(off));
            internal[k].push_back(std::move(degs));
        }

    DoubleComplex dc = make_double(field, internal, complete ? p_top + q_top : bound);
    Scalar one = field.one(), minus = -field.one();
    for (int k = 0; k <= p_top; ++k)
        for (int q = 0; q <= q_top; ++q) {
            for (std::size_t ci = 0; ci < chains[k].size(); ++ci) {
                const auto& c = chains[k][ci];
                const ChainComplex& v = f.values[c[0]];
                std::size_t base = offsets[k][q][ci];
                for (std::size_t g = 0; g < v.dim(q); ++g) {
                    if (k > 0) {
                        Accumulator acc;
                        std::vector<std::size_t> tail(c.begin() + 1, c.end());
                        std::size_t t0 = offsets[k - 1][q][chain_id[k - 1].at(tail)];
                        for (const Term& t : f.maps.at({c[0], c[1]})[q].columns[g])
                            acc.add(t0 + t.index, t.coeff);
                        for (int i = 1; i <= k; ++i) {
                            std::vector<std::size_t> face = c;
                            face.erase(face.begin() + i);
                            acc.add(offsets[k - 1][q][chain_id[k - 1].at(face)] + g, i % 2 ? minus : one);
                        }
                        dc.dh[k][q].columns[base + g] = acc.finish();
                    }
                    if (q > 0) {
                        Accumulator acc;
                        for (const Term& t : v.d[q].columns[g])
                            acc.add(offsets[k][q - 1][ci] + t.index, k % 2 ? -t.coeff : t.coeff);
                        dc.dv[k][q].columns[base + g] = acc.finish();
                    }
                }
            }
        }
    return dc;
}

namespace {

ChainFunctor as_chain_functor(const PosetFunctor& f)
{
    ChainFunctor c;
    c.field = f.field;
    for (const auto& degs : f.degrees) {
        ChainComplex v;
        v.field = f.field;
        v.internal = {degs};
        v.d = {SparseMatrix(0, degs.size())};
        v.s_valid = 0;
        c.values.push_back(std::move(v));
    }
    for (const auto& [key, m] : f.maps)
        c.maps[key] = {m};
    return c;
}

} // namespace

ChainComplex nerve_complex(const Poset& p, const PosetFunctor& f)
{
    f.validate(p);
    return total_complex(nerve_double_complex(p, as_chain_functor(f)));
}

BettiTable poset_homology(const Poset& p, const PosetFunctor& f, int s_max)
{
    if (s_max > p.height())
        throw TruncationError("poset_homology: s_max exceeds the longest chain length " + std::to_string(p.height()));
    return homology(nerve_complex(p, f), s_max, "poset");
}

EdgeMap edge_map(const Poset& p, const PosetFunctor& f, std::size_t x0)
{
    if (x0 >= p.size())
        throw std::invalid_argument("edge_map: object is not in the poset");
    if (p.labeled() && p.object(x0).components != 1)
        throw std::invalid_argument("edge_map: '" + p.object(x0).name + "' is not a single component");
    ChainComplex c = nerve_complex(p, f);
    HomologyLevel h0(c, 0);
    // chains of length 0 are the objects in index order
    std::size_t offset = 0;
    for (std::size_t x = 0; x < x0; ++x)
        offset += f.dim(x);
    EdgeMap out;
    out.map = SparseMatrix(h0.dim(), f.dim(x0));
    for (std::size_t j = 0; j < f.dim(x0); ++j)
        out.map.columns[j] = h0.coordinates(SparseVec::unit(offset + j, f.field.one()));
    std::size_t r = rank_of(f.field, out.map.columns);
    out.iso = r == f.dim(x0) && r == h0.dim();
    out.collapses = out.iso;
    if (out.iso) {
        BettiTable b = homology(c, p.height());
        for (int s = 1; s <= p.height(); ++s)
            out.collapses = out.collapses && b.total(s) == 0;
    }
    return out;
}

// ------------------------------------------------------------ circle covers

Poset cyclic_cech_poset(int m)
{
    if (m < 2)
        throw std::invalid_argument("cyclic_cech_poset: need at least two arcs");
    // cell 2i = v_i, cell 2i+1 = e_i (from v_i to v_{i+1})
    const std::size_t cells = 2 * std::size_t(m);
    auto cell_name = [](std::size_t c) { return (c % 2 ? "e" : "v") + std::to_string(c / 2); };
    auto neighbours = [&](std::size_t c) {
        return std::array<std::size_t, 2>{(c + cells - 1) % cells, (c + 1) % cells};
    };

    struct Open {
        std::vector<bool> cells;
        std::vector<std::size_t> component; // per cell, SIZE_MAX outside
        int count = 0;
        std::size_t size = 0;
    };
    std::vector<Open> opens;
    const std::size_t edge_sets = std::size_t(1) << m;
    for (std::size_t es = 1; es < edge_sets; ++es) {
        // vertices allowed only when both incident edges are present
        std::vector<std::size_t> allowed;
        for (int i = 0; i < m; ++i)
            if ((es >> i & 1) && (es >> ((i + m - 1) % m) & 1))
                allowed.push_back(std::size_t(i));
        for (std::size_t vs = 0; vs < (std::size_t(1) << allowed.size()); ++vs) {
            Open o;
            o.cells.assign(cells, false);
            for (int i = 0; i < m; ++i)
                if (es >> i & 1)
                    o.cells[2 * std::size_t(i) + 1] = true;
            for (std::size_t k = 0; k < allowed.size(); ++k)
                if (vs >> k & 1)
                    o.cells[2 * allowed[k]] = true;
            o.size = std::size_t(std::count(o.cells.begin(), o.cells.end(), true));
            if (o.size == cells)
                continue;
            o.component.assign(cells, SIZE_MAX);
            for (std::size_t c = 0; c < cells; ++c) {
                if (!o.cells[c] || o.component[c] != SIZE_MAX)
                    continue;
                std::vector<std::size_t> stack{c};
                o.component[c] = std::size_t(o.count);
                while (!stack.empty()) {
                    std::size_t u = stack.back();
                    stack.pop_back();
                    for (std::size_t w : neighbours(u))
                        if (o.cells[w] && o.component[w] == SIZE_MAX) {
                            o.component[w] = std::size_t(o.count);
                            stack.push_back(w);
                        }
                }
                ++o.count;
            }
            opens.push_back(std::move(o));
        }
    }
    std::sort(opens.begin(), opens.end(), [](const Open& a, const Open& b) {
        if (a.size != b.size)
            return a.size < b.size;
        return a.cells > b.cells; // earlier cells first
    });

    std::vector<PosetObject> objects;
    for (const Open& o : opens) {
        std::string name;
        for (std::size_t i = 0; i < std::size_t(m); ++i)
            for (std::size_t c : {2 * i, 2 * i + 1})
                if (o.cells[c])
                    name += (name.empty() ? "" : "+") + cell_name(c);
        objects.push_back({name, o.count});
    }
    std::vector<PosetRelation> relations;
    for (std::size_t x = 0; x < opens.size(); ++x)
        for (std::size_t y = 0; y < opens.size(); ++y) {
            if (x == y)
                continue;
            bool inside = true;
            for (std::size_t c = 0; c < cells && inside; ++c)
                inside = !opens[x].cells[c] || opens[y].cells[c];
            if (!inside)
                continue;
            std::vector<std::size_t> phi(std::size_t(opens[x].count));
            for (std::size_t c = 0; c < cells; ++c)
                if (opens[x].cells[c])
                    phi[opens[x].component[c]] = opens[y].component[c];
            relations.push_back({x, y, phi});
        }
    return Poset(std::move(objects), relations);
}

} // namespace hochkit
