#include "hochkit/chains.hpp"

#include <algorithm>
#include <climits>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hochkit/errors.hpp"

namespace hochkit {

namespace {

constexpr int kUnbounded = INT_MAX / 4;

int known_through(const ChainComplex& c)
{
    return c.complete() ? kUnbounded : c.s_valid;
}

} // namespace

std::optional<std::string> ChainComplex::check() const
{
    if (d.size() != internal.size())
        return "differential count differs from level count";
    for (int s = 0; s <= top(); ++s) {
        const SparseMatrix& m = d[s];
        if (m.cols() != dim(s) || m.rows != dim(s - 1))
            return "d_" + std::to_string(s) + " has the wrong shape";
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (const Term& t : m.columns[j])
                if (t.index >= m.rows || internal[s - 1][t.index] != internal[s][j])
                    return "d_" + std::to_string(s) + " changes internal degree at generator " + std::to_string(j);
        if (s >= 1)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!d[s - 1].apply(m.columns[j]).empty())
                    return "d_" + std::to_string(s - 1) + " d_" + std::to_string(s) + " != 0 at generator " +
                           std::to_string(j);
    }
    return std::nullopt;
}

ChainComplex make_complex(Field field, std::vector<SparseMatrix> d, int s_valid)
{
    ChainComplex c;
    c.field = field;
    for (std::size_t s = 0; s < d.size(); ++s) {
        c.internal.emplace_back(d[s].cols(), 0);
        if (s > 0 && d[s].rows != d[s - 1].cols())
            throw std::invalid_argument("make_complex: d_" + std::to_string(s) + " row count mismatch");
    }
    if (!d.empty() && d[0].rows != 0)
        throw std::invalid_argument("make_complex: d_0 must have no rows");
    c.d = std::move(d);
    c.s_valid = s_valid;
    return c;
}

// ---------------------------------------------------------------- Betti tables

std::size_t BettiTable::at(int s, int t) const
{
    auto it = entries.find({s, t});
    return it == entries.end() ? 0 : it->second;
}

std::size_t BettiTable::total(int s) const
{
    std::size_t n = 0;
    for (const auto& [key, v] : entries)
        if (key.first == s)
            n += v;
    return n;
}

std::optional<std::pair<int, int>> BettiTable::first_mismatch(const BettiTable& other, int window) const
{
    std::set<std::pair<int, int>> keys;
    for (const auto& [k, v] : entries)
        if (k.first <= window)
            keys.insert(k);
    for (const auto& [k, v] : other.entries)
        if (k.first <= window)
            keys.insert(k);
    for (const auto& k : keys)
        if (at(k.first, k.second) != other.at(k.first, k.second))
            return k;
    return std::nullopt;
}

bool BettiTable::agrees(const BettiTable& other, int window) const
{
    return !first_mismatch(other, window).has_value();
}

BettiTable BettiTable::truncated(int window) const
{
    BettiTable out{provenance, std::min(s_valid, window), {}};
    for (const auto& [k, v] : entries)
        if (k.first <= window)
            out.entries.emplace(k, v);
    return out;
}

std::string BettiTable::to_json() const
{
    nlohmann::ordered_json j;
    j["provenance"] = provenance;
    j["s_valid"] = s_valid;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& [k, v] : entries)
        j["entries"].push_back({{"s", k.first}, {"t", k.second}, {"dim", v}});
    return j.dump(2);
}

std::string BettiTable::to_text() const
{
    std::set<int> ts;
    for (const auto& [k, v] : entries)
        ts.insert(k.second);
    if (ts.empty())
        ts.insert(0);
    std::ostringstream os;
    os << "provenance: " << (provenance.empty() ? "-" : provenance) << "   s_valid: " << s_valid << "\n";
    os << std::setw(4) << "s\\t";
    for (int t : ts)
        os << std::setw(7) << t;
    os << "\n";
    for (int s = 0; s <= s_valid; ++s) {
        os << std::setw(4) << s;
        for (int t : ts)
            os << std::setw(7) << at(s, t);
        os << "\n";
    }
    return os.str();
}

BettiTable convolve(const BettiTable& a, const BettiTable& b, std::optional<int> s_valid)
{
    BettiTable out{"convolution", s_valid.value_or(std::min(a.s_valid, b.s_valid)), {}};
    for (const auto& [ka, va] : a.entries)
        for (const auto& [kb, vb] : b.entries) {
            int s = ka.first + kb.first;
            if (s <= out.s_valid)
                out.entries[{s, ka.second + kb.second}] += va * vb;
        }
    return out;
}

// ---------------------------------------------------------------- homology

BettiTable homology(const ChainComplex& c, int s_max, const std::string& provenance)
{
    if (s_max < 0)
        throw std::invalid_argument("homology: s_max must be nonnegative");
    if (s_max > c.s_valid)
        throw TruncationError("homology requested through s=" + std::to_string(s_max) +
                              " but the complex is only valid through s=" + std::to_string(c.s_valid));
    // rank[s][t] of d_s restricted to internal degree t
    std::vector<std::map<int, std::size_t>> rank(std::size_t(s_max) + 2);
    for (int s = 1; s <= s_max + 1 && s <= c.top(); ++s) {
        std::map<int, std::vector<SparseVec>> by_t;
        for (std::size_t j = 0; j < c.dim(s); ++j)
            if (!c.d[s].columns[j].empty())
                by_t[c.internal[s][j]].push_back(c.d[s].columns[j]);
        for (auto& [t, cols] : by_t) {
            // rank d_s <= dim ker d_{s-1} in the same internal degree
            std::size_t below = 0;
            for (int u : c.internal[s - 1])
                below += u == t;
            std::size_t cap = below - (rank[s - 1].count(t) ? rank[s - 1][t] : 0);
            rank[s][t] = rank_of(c.field, std::move(cols), cap);
        }
    }
    BettiTable out{provenance, s_max, {}};
    for (int s = 0; s <= s_max; ++s) {
        std::map<int, std::size_t> count;
        for (int t : c.internal.at(s))
            ++count[t];
        for (auto [t, n] : count) {
            std::size_t r_in = rank[s].count(t) ? rank[s][t] : 0;
            std::size_t r_out = rank[s + 1].count(t) ? rank[s + 1][t] : 0;
            std::size_t h = n - r_in - r_out;
            if (h)
                out.entries[{s, t}] = h;
        }
    }
    return out;
}

HomologyLevel::HomologyLevel(const ChainComplex& c, int s)
    : c_(&c), s_(s), boundaries_(c.field), classes_(c.field, true)
{
    if (s < 0 || s > c.s_valid)
        throw TruncationError("homology level " + std::to_string(s) + " outside the valid range");
    if (s + 1 <= c.top())
        for (const auto& col : c.d[s + 1].columns) {
            boundaries_.add(col);
            classes_.add(col);
            ++boundary_generators_;
        }
    for (const SparseVec& z : kernel_of(c.field, c.d[s].columns)) {
        std::size_t id = classes_.generator_count();
        if (classes_.add(z)) {
            basis_.push_back(z);
            basis_ids_.push_back(id);
        }
    }
}

bool HomologyLevel::is_cycle(const SparseVec& v) const
{
    return c_->d[s_].apply(v).empty();
}

bool HomologyLevel::is_boundary(const SparseVec& v) const
{
    return boundaries_.contains(v);
}

SparseVec HomologyLevel::coordinates(const SparseVec& cycle) const
{
    if (!is_cycle(cycle))
        throw std::invalid_argument("coordinates: input is not a cycle");
    Echelon::Tracked red = classes_.reduce_tracked(cycle);
    if (!red.remainder.empty())
        throw std::logic_error("coordinates: cycle not in the span of boundaries and basis");
    Accumulator acc;
    for (const Term& t : red.combination)
        if (t.index >= boundary_generators_) {
            auto it = std::lower_bound(basis_ids_.begin(), basis_ids_.end(), t.index);
            if (it == basis_ids_.end() || *it != t.index)
                throw std::logic_error("coordinates: dependent generator in combination");
            acc.add(std::size_t(it - basis_ids_.begin()), t.coeff);
        }
    return acc.finish();
}

// ---------------------------------------------------------------- maps and cones

std::optional<std::string> ChainMap::check() const
{
    if (!source || !target)
        return "chain map without source or target";
    if (source->field != target->field)
        return "chain map between complexes over different fields";
    std::size_t n = std::min(source->internal.size(), target->internal.size());
    if (levels.size() < n)
        return "chain map defines too few levels";
    for (std::size_t s = 0; s < n; ++s) {
        const SparseMatrix& f = levels[s];
        if (f.cols() != source->dim(int(s)) || f.rows != target->dim(int(s)))
            return "chain map level " + std::to_string(s) + " has the wrong shape";
        for (std::size_t j = 0; j < f.cols(); ++j)
            for (const Term& t : f.columns[j])
                if (target->internal[s][t.index] != source->internal[s][j])
                    return "chain map changes internal degree at level " + std::to_string(s);
        if (s >= 1)
            for (std::size_t j = 0; j < f.cols(); ++j) {
                SparseVec lhs = target->d[s].apply(f.columns[j]);
                SparseVec rhs = levels[s - 1].apply(source->d[s].columns[j]);
                if (lhs != rhs)
                    return "chain map does not commute with d at level " + std::to_string(s);
            }
    }
    return std::nullopt;
}

ChainComplex mapping_cone(const ChainMap& f)
{
    const ChainComplex& c = *f.source;
    const ChainComplex& d = *f.target;
    int top = std::min({c.top() + 1, d.complete() ? kUnbounded : d.top(), static_cast<int>(f.levels.size())});
    ChainComplex out;
    out.field = d.field;
    for (int n = 0; n <= top; ++n) {
        std::vector<int> gens;
        if (n >= 1)
            gens = c.internal[n - 1];
        if (n <= d.top())
            gens.insert(gens.end(), d.internal[n].begin(), d.internal[n].end());
        out.internal.push_back(std::move(gens));
    }
    for (int n = 0; n <= top; ++n) {
        std::size_t cn1 = c.dim(n - 1);
        std::size_t cn2 = c.dim(n - 2);
        SparseMatrix m(out.dim(n - 1), out.dim(n));
        if (n >= 1) {
            for (std::size_t k = 0; k < cn1; ++k) {
                Accumulator acc;
                if (n >= 2)
                    for (const Term& t : c.d[n - 1].columns[k])
                        acc.add(t.index, -t.coeff);
                for (const Term& t : f.levels[n - 1].columns[k])
                    acc.add(cn2 + t.index, t.coeff);
                m.columns[k] = acc.finish();
            }
            for (std::size_t k = 0; k < d.dim(n); ++k) {
                Accumulator acc;
                for (const Term& t : d.d[n].columns[k])
                    acc.add(cn2 + t.index, t.coeff);
                m.columns[cn1 + k] = acc.finish();
            }
        }
        out.d.push_back(std::move(m));
    }
    bool complete = c.complete() && d.complete() && top == std::max(c.top() + 1, d.top());
    int sv = std::min(c.complete() ? kUnbounded : c.s_valid + 1, d.complete() ? kUnbounded : d.s_valid);
    out.s_valid = complete ? top : std::min(sv, top - 1);
    return out;
}

bool is_quasi_iso(const ChainMap& f, int s_max)
{
    if (auto err = f.check())
        throw std::invalid_argument("is_quasi_iso: " + *err);
    if (s_max > f.source->s_valid || s_max > f.target->s_valid)
        throw TruncationError("is_quasi_iso: s_max beyond a validity bound");
    ChainComplex cone = mapping_cone(f);
    return homology(cone, s_max).entries.empty();
}

ChainComplex tensor_complexes(const ChainComplex& c, const ChainComplex& d)
{
    if (c.field != d.field)
        throw std::invalid_argument("tensor_complexes: field mismatch");
    int sum = c.top() + d.top();
    int sv = std::min(known_through(c), known_through(d));
    int top = std::min(sum, sv == kUnbounded ? sum : sv + 1);
    ChainComplex out;
    out.field = c.field;
    // offsets[n][a] = start of block C_a ⊗ D_{n-a} inside level n
    std::vector<std::vector<std::size_t>> offsets(std::size_t(top) + 1);
    for (int n = 0; n <= top; ++n) {
        std::vector<int> gens;
        offsets[n].assign(std::size_t(n) + 1, 0);
        for (int a = 0; a <= n; ++a) {
            offsets[n][a] = gens.size();
            int b = n - a;
            for (std::size_t i = 0; i < c.dim(a); ++i)
                for (std::size_t j = 0; j < d.dim(b); ++j)
                    gens.push_back(c.internal[a][i] + d.internal[b][j]);
        }
        out.internal.push_back(std::move(gens));
    }
    Scalar one = c.field.one();
    for (int n = 0; n <= top; ++n) {
        SparseMatrix m(out.dim(n - 1), out.dim(n));
        if (n >= 1)
            for (int a = 0; a <= n; ++a) {
                int b = n - a;
                std::size_t db = d.dim(b);
                Scalar sign = (a % 2) ? -one : one;
                for (std::size_t i = 0; i < c.dim(a); ++i)
                    for (std::size_t j = 0; j < db; ++j) {
                        Accumulator acc;
                        if (a >= 1)
                            for (const Term& t : c.d[a].columns[i])
                                acc.add(offsets[n - 1][a - 1] + t.index * db + j, t.coeff);
                        if (b >= 1) {
                            std::size_t db1 = d.dim(b - 1);
                            for (const Term& t : d.d[b].columns[j])
                                acc.add(offsets[n - 1][a] + i * db1 + t.index, sign * t.coeff);
                        }
                        m.columns[offsets[n][a] + i * db + j] = acc.finish();
                    }
            }
        out.d.push_back(std::move(m));
    }
    out.s_valid = sv == kUnbounded ? top : std::min(sv, top);
    return out;
}

Quotient quotient_complex(const ChainComplex& c, const std::vector<std::vector<SparseVec>>& gens)
{
    int top = c.top();
    std::vector<Echelon> sub;
    sub.reserve(std::size_t(top) + 1);
    for (int n = 0; n <= top; ++n) {
        // Sparsest first keeps fill-in down.
        std::vector<const SparseVec*> order;
        if (std::size_t(n) < gens.size())
            for (const auto& g : gens[n])
                order.push_back(&g);
        std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->nnz() < b->nnz(); });
        Echelon e(c.field);
        for (auto* g : order)
            e.add(*g);
        sub.push_back(std::move(e));
    }
    for (int n = 1; n <= top && std::size_t(n) < gens.size(); ++n)
        for (const auto& g : gens[n])
            if (!sub[n - 1].contains(c.d[n].apply(g)))
                throw std::logic_error("quotient_complex: generators do not span a subcomplex at level " +
                                       std::to_string(n));
    Quotient q;
    q.complex.field = c.field;
    q.complex.s_valid = c.s_valid;
    auto& position = q.position;
    position.resize(std::size_t(top) + 1);
    for (int n = 0; n <= top; ++n) {
        std::vector<std::size_t> kept;
        std::vector<int> internal;
        position[n].assign(c.dim(n), SIZE_MAX);
        for (std::size_t k = 0; k < c.dim(n); ++k)
            if (!sub[n].is_pivot(k)) {
                position[n][k] = kept.size();
                kept.push_back(k);
                internal.push_back(c.internal[n][k]);
            }
        q.kept.push_back(std::move(kept));
        q.complex.internal.push_back(std::move(internal));
    }
    for (int n = 0; n <= top; ++n) {
        SparseMatrix m(q.complex.dim(n - 1), q.complex.dim(n));
        if (n >= 1)
            for (std::size_t i = 0; i < q.kept[n].size(); ++i) {
                SparseVec v = sub[n - 1].reduce(c.d[n].columns[q.kept[n][i]]);
                std::vector<Term> terms;
                terms.reserve(v.nnz());
                for (const Term& t : v)
                    terms.push_back({position[n - 1][t.index], t.coeff});
                m.columns[i] = SparseVec::from_terms(std::move(terms));
            }
        q.complex.d.push_back(std::move(m));
    }
    q.subspaces = std::move(sub);
    return q;
}

SparseVec Quotient::project(int n, const SparseVec& v) const
{
    SparseVec r = subspaces.at(n).reduce(v);
    std::vector<Term> terms;
    terms.reserve(r.nnz());
    for (const Term& t : r)
        terms.push_back({position[n].at(t.index), t.coeff});
    return SparseVec::from_terms(std::move(terms));
}

SparseVec Quotient::lift(int n, const SparseVec& v) const
{
    std::vector<Term> terms;
    terms.reserve(v.nnz());
    for (const Term& t : v)
        terms.push_back({kept.at(n).at(t.index), t.coeff});
    return SparseVec::from_terms(std::move(terms));
}

// ---------------------------------------------------------------- double complexes

std::size_t DoubleComplex::dim(int p, int q) const
{
    if (p < 0 || q < 0 || p > p_top || q > q_top)
        return 0;
    return internal[p][q].size();
}

DoubleComplex make_double(Field field, const std::vector<std::vector<std::vector<int>>>& internal, int s_valid)
{
    DoubleComplex dc;
    dc.field = field;
    dc.p_top = static_cast<int>(internal.size()) - 1;
    dc.q_top = internal.empty() ? -1 : static_cast<int>(internal[0].size()) - 1;
    for (const auto& col : internal)
        if (static_cast<int>(col.size()) != dc.q_top + 1)
            throw std::invalid_argument("make_double: ragged columns");
    dc.internal = internal;
    dc.dh.assign(internal.size(), {});
    dc.dv.assign(internal.size(), {});
    for (int p = 0; p <= dc.p_top; ++p)
        for (int q = 0; q <= dc.q_top; ++q) {
            dc.dh[p].emplace_back(dc.dim(p - 1, q), dc.dim(p, q));
            dc.dv[p].emplace_back(dc.dim(p, q - 1), dc.dim(p, q));
        }
    dc.s_valid = s_valid;
    return dc;
}

std::optional<std::string> DoubleComplex::check() const
{
    auto where = [](int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; };
    for (int p = 0; p <= p_top; ++p)
        for (int q = 0; q <= q_top; ++q) {
            const SparseMatrix& h = dh[p][q];
            const SparseMatrix& v = dv[p][q];
            if (h.cols() != dim(p, q) || h.rows != dim(p - 1, q) || v.cols() != dim(p, q) || v.rows != dim(p, q - 1))
                return "differential shape mismatch at " + where(p, q);
            for (std::size_t j = 0; j < dim(p, q); ++j) {
                int t = internal[p][q][j];
                for (const Term& x : h.columns[j])
                    if (internal[p - 1][q][x.index] != t)
                        return "horizontal map changes internal degree at " + where(p, q);
                for (const Term& x : v.columns[j])
                    if (internal[p][q - 1][x.index] != t)
                        return "vertical map changes internal degree at " + where(p, q);
                if (p >= 2 && !dh[p - 1][q].apply(h.columns[j]).empty())
                    return "dh dh != 0 at " + where(p, q);
                if (q >= 2 && !dv[p][q - 1].apply(v.columns[j]).empty())
                    return "dv dv != 0 at " + where(p, q);
                if (p >= 1 && q >= 1) {
                    SparseVec a = dv[p - 1][q].apply(h.columns[j]);
                    a.axpy(field.one(), dh[p][q - 1].apply(v.columns[j]));
                    if (!a.empty())
                        return "dh dv + dv dh != 0 at " + where(p, q);
                }
            }
        }
    return std::nullopt;
}

namespace {

/// Offsets of the blocks D_{p,n-p} inside Tot_n (p ascending).
struct TotalLayout {
    std::vector<std::vector<std::size_t>> offset; // offset[n][p], SIZE_MAX when absent
    std::vector<std::size_t> size;

    explicit TotalLayout(const DoubleComplex& dc)
    {
        int top = dc.p_top + dc.q_top;
        for (int n = 0; n <= top; ++n) {
            std::vector<std::size_t> off(std::size_t(dc.p_top) + 1, SIZE_MAX);
            std::size_t at = 0;
            for (int p = 0; p <= dc.p_top; ++p) {
                int q = n - p;
                if (q < 0 || q > dc.q_top)
                    continue;
                off[p] = at;
                at += dc.dim(p, q);
            }
            offset.push_back(std::move(off));
            size.push_back(at);
        }
    }
};

} // namespace

ChainComplex total_complex(const DoubleComplex& dc)
{
    TotalLayout lay(dc);
    int top = dc.p_top + dc.q_top;
    ChainComplex out;
    out.field = dc.field;
    for (int n = 0; n <= top; ++n) {
        std::vector<int> gens;
        for (int p = 0; p <= dc.p_top; ++p) {
            int q = n - p;
            if (q >= 0 && q <= dc.q_top)
                gens.insert(gens.end(), dc.internal[p][q].begin(), dc.internal[p][q].end());
        }
        out.internal.push_back(std::move(gens));
    }
    for (int n = 0; n <= top; ++n) {
        SparseMatrix m(n >= 1 ? lay.size[n - 1] : 0, lay.size[n]);
        if (n >= 1)
            for (int p = 0; p <= dc.p_top; ++p) {
                int q = n - p;
                if (q < 0 || q > dc.q_top)
                    continue;
                for (std::size_t j = 0; j < dc.dim(p, q); ++j) {
                    Accumulator acc;
                    if (p >= 1)
                        for (const Term& t : dc.dh[p][q].columns[j])
                            acc.add(lay.offset[n - 1][p - 1] + t.index, t.coeff);
                    if (q >= 1)
                        for (const Term& t : dc.dv[p][q].columns[j])
                            acc.add(lay.offset[n - 1][p] + t.index, t.coeff);
                    m.columns[lay.offset[n][p] + j] = acc.finish();
                }
            }
        out.d.push_back(std::move(m));
    }
    out.s_valid = std::min(dc.s_valid, top);
    return out;
}

// ---------------------------------------------------------------- spectral sequence

std::size_t SpectralSequencePage::at(int p, int q) const
{
    std::size_t n = 0;
    for (const auto& [k, v] : dims)
        if (k[0] == p && k[1] == q)
            n += v;
    return n;
}

std::size_t SpectralSequencePage::total(int n) const
{
    std::size_t s = 0;
    for (const auto& [k, v] : dims)
        if (k[0] + k[1] == n)
            s += v;
    return s;
}

namespace {

/**
 * Filtration bookkeeping for one total degree and one internal degree.
 *
 * Tot indices are re-ordered so that higher columns come first; an echelon
 * in that order has each row's pivot in its highest column, hence
 * dim(V ∩ F_j) = #rows whose pivot lies in a column <= j.
 */
struct FiltrationData {
    int p_top = 0;
    // per total degree n: generators with this internal degree, as Tot indices, and their columns
    std::vector<std::vector<std::size_t>> gens;
    std::vector<std::vector<int>> column;
    // forder[n][tot index] = position in the high-column-first order (SIZE_MAX when other t)
    std::vector<std::unordered_map<std::size_t, std::size_t>> forder;
    std::vector<std::vector<int>> fcolumn; // column of each filtration-ordered coordinate
    // beta[n][k+1][j+1] = dim(d(F_k Tot_n) ∩ F_j Tot_{n-1})
    std::vector<std::vector<std::vector<std::size_t>>> beta;
    // fdim[n][p+1] = dim F_p Tot_n
    std::vector<std::vector<std::size_t>> fdim;

    std::size_t b(int n, int k, int j) const
    {
        if (n < 1 || n >= static_cast<int>(beta.size()))
            return 0;
        k = std::clamp(k, -1, p_top);
        j = std::clamp(j, -1, p_top);
        return beta[n][k + 1][j + 1];
    }
    std::size_t f(int n, int p) const
    {
        if (n < 0 || n >= static_cast<int>(fdim.size()))
            return 0;
        return fdim[n][std::clamp(p, -1, p_top) + 1];
    }
    std::size_t z(int n, int r, int p) const
    {
        return f(n, p) - b(n, p, p_top) + b(n, p, p - r);
    }
    std::size_t e(int n, int r, int p) const
    {
        return z(n, r, p) - z(n, r - 1, p - 1) - (b(n + 1, p + r - 1, p) - b(n + 1, p + r - 1, p - 1));
    }
};

SparseVec to_filtration(const SparseVec& v, const std::unordered_map<std::size_t, std::size_t>& order)
{
    std::vector<Term> terms;
    terms.reserve(v.nnz());
    for (const Term& t : v)
        terms.push_back({order.at(t.index), t.coeff});
    return SparseVec::from_terms(std::move(terms));
}

FiltrationData filtration_data(const DoubleComplex& dc, const ChainComplex& tot, const TotalLayout& lay, int t,
                               int n_max)
{
    FiltrationData fd;
    fd.p_top = dc.p_top;
    int levels = std::min(n_max + 1, tot.top()) + 1;
    for (int n = 0; n < levels; ++n) {
        std::vector<std::size_t> g;
        std::vector<int> col;
        for (int p = 0; p <= dc.p_top; ++p) {
            int q = n - p;
            if (q < 0 || q > dc.q_top)
                continue;
            for (std::size_t k = 0; k < dc.dim(p, q); ++k)
                if (dc.internal[p][q][k] == t) {
                    g.push_back(lay.offset[n][p] + k);
                    col.push_back(p);
                }
        }
        // high-column-first order
        std::vector<std::size_t> idx(g.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return col[a] > col[b]; });
        std::unordered_map<std::size_t, std::size_t> order;
        std::vector<int> fcol(g.size());
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
            order[g[idx[pos]]] = pos;
            fcol[pos] = col[idx[pos]];
        }
        std::vector<std::size_t> fdim(std::size_t(dc.p_top) + 2, 0);
        for (int c : col)
            for (int p = c; p <= dc.p_top; ++p)
                ++fdim[p + 1];
        fd.gens.push_back(std::move(g));
        fd.column.push_back(std::move(col));
        fd.forder.push_back(std::move(order));
        fd.fcolumn.push_back(std::move(fcol));
        fd.fdim.push_back(std::move(fdim));
    }
    fd.beta.assign(std::size_t(levels), {});
    for (int n = 0; n < levels; ++n) {
        std::size_t w = std::size_t(dc.p_top) + 2;
        fd.beta[n].assign(w, std::vector<std::size_t>(w, 0));
        if (n == 0)
            continue;
        Echelon e(tot.field);
        for (int k = 0; k <= dc.p_top; ++k) {
            for (std::size_t i = 0; i < fd.gens[n].size(); ++i)
                if (fd.column[n][i] == k)
                    e.add(to_filtration(tot.d[n].columns[fd.gens[n][i]], fd.forder[n - 1]));
            std::vector<std::size_t> hist(w, 0);
            for (std::size_t piv : e.pivots())
                ++hist[fd.fcolumn[n - 1][piv] + 1];
            std::size_t run = 0;
            for (std::size_t j = 0; j < w; ++j) {
                run += hist[j];
                fd.beta[n][k + 1][j] = run;
            }
        }
    }
    return fd;
}

/// Representatives of E^r_p at total degree n (one internal degree), in Tot coordinates.
struct PageCell {
    std::vector<SparseVec> reps;
    std::unique_ptr<Echelon> classes; // denominator generators then reps, tracked
    std::size_t denominator_generators = 0;
    std::vector<std::size_t> rep_ids;
};

/// Basis of Z^r_p(n) = {x ∈ F_p : dx ∈ F_{p-r}} in Tot coordinates.
std::vector<SparseVec> z_basis(const ChainComplex& tot, const FiltrationData& fd, int n, int r, int p)
{
    if (n < 0 || n >= static_cast<int>(fd.gens.size()))
        return {};
    std::vector<std::size_t> src;
    for (std::size_t i = 0; i < fd.gens[n].size(); ++i)
        if (fd.column[n][i] <= p)
            src.push_back(fd.gens[n][i]);
    std::vector<SparseVec> projected;
    for (std::size_t g : src) {
        if (n == 0) {
            projected.emplace_back();
            continue;
        }
        std::vector<Term> keep;
        for (const Term& t : tot.d[n].columns[g])
            if (fd.fcolumn[n - 1][fd.forder[n - 1].at(t.index)] > p - r)
                keep.push_back(t);
        projected.push_back(SparseVec::from_terms(std::move(keep)));
    }
    std::vector<SparseVec> out;
    for (const SparseVec& k : kernel_of(tot.field, projected)) {
        std::vector<Term> terms;
        for (const Term& t : k)
            terms.push_back({src[t.index], t.coeff});
        out.push_back(SparseVec::from_terms(std::move(terms)));
    }
    return out;
}

PageCell page_cell(const ChainComplex& tot, const FiltrationData& fd, int n, int r, int p)
{
    PageCell cell;
    cell.classes = std::make_unique<Echelon>(tot.field, true);
    auto add_den = [&](const SparseVec& v) {
        cell.classes->add(v);
        ++cell.denominator_generators;
    };
    for (const SparseVec& v : z_basis(tot, fd, n, r - 1, p - 1))
        add_den(v);
    if (n + 1 <= tot.top())
        for (const SparseVec& v : z_basis(tot, fd, n + 1, r - 1, p + r - 1))
            add_den(tot.d[n + 1].apply(v));
    for (const SparseVec& v : z_basis(tot, fd, n, r, p)) {
        std::size_t id = cell.classes->generator_count();
        if (cell.classes->add(v)) {
            cell.reps.push_back(v);
            cell.rep_ids.push_back(id);
        }
    }
    return cell;
}

SparseVec page_coordinates(const PageCell& cell, const SparseVec& v)
{
    Echelon::Tracked red = cell.classes->reduce_tracked(v);
    if (!red.remainder.empty())
        throw std::logic_error("sseq: d_r image outside the target page");
    Accumulator acc;
    for (const Term& t : red.combination)
        if (t.index >= cell.denominator_generators) {
            auto it = std::lower_bound(cell.rep_ids.begin(), cell.rep_ids.end(), t.index);
            acc.add(std::size_t(it - cell.rep_ids.begin()), t.coeff);
        }
    return acc.finish();
}

} // namespace

std::vector<SpectralSequencePage> sseq_pages(const DoubleComplex& dc, const SseqOptions& options)
{
    ChainComplex tot = total_complex(dc);
    TotalLayout lay(dc);
    int n_max = tot.s_valid;
    std::set<int> ts;
    for (const auto& col : dc.internal)
        for (const auto& cell : col)
            ts.insert(cell.begin(), cell.end());
    std::map<int, FiltrationData> data;
    for (int t : ts)
        data.emplace(t, filtration_data(dc, tot, lay, t, n_max));

    int r_inf = dc.p_top + 1;
    std::vector<int> rs;
    for (int r = 0; r <= options.r_max; ++r)
        rs.push_back(r);
    rs.push_back(r_inf);

    std::vector<SpectralSequencePage> pages;
    for (std::size_t idx = 0; idx < rs.size(); ++idx) {
        int r = rs[idx];
        SpectralSequencePage page;
        page.r = idx + 1 == rs.size() ? -1 : r;
        for (const auto& [t, fd] : data)
            for (int n = 0; n <= n_max; ++n)
                for (int p = 0; p <= std::min(n, dc.p_top); ++p) {
                    if (n - p > dc.q_top)
                        continue;
                    std::size_t e = fd.e(n, r, p);
                    if (e)
                        page.dims[{p, n - p, t}] = e;
                }
        if (options.explicit_differentials && page.r >= 0) {
            for (const auto& [t, fd] : data)
                for (int n = 1; n <= n_max; ++n)
                    for (int p = r; p <= std::min(n, dc.p_top); ++p) {
                        if (n - p > dc.q_top)
                            continue;
                        PageCell src = page_cell(tot, fd, n, r, p);
                        if (src.reps.empty())
                            continue;
                        PageCell dst = page_cell(tot, fd, n - 1, r, p - r);
                        SparseMatrix m(dst.reps.size(), src.reps.size());
                        for (std::size_t k = 0; k < src.reps.size(); ++k)
                            m.columns[k] = dst.reps.empty() ? SparseVec()
                                                            : page_coordinates(dst, tot.d[n].apply(src.reps[k]));
                        page.differentials.push_back({p, n - p, t, std::move(m)});
                    }
        }
        pages.push_back(std::move(page));
    }
    return pages;
}

bool sseq_converges(const DoubleComplex& dc, const std::vector<SpectralSequencePage>& pages)
{
    if (pages.empty() || pages.back().r != -1)
        throw std::invalid_argument("sseq_converges: the last page must be E^infinity");
    ChainComplex tot = total_complex(dc);
    BettiTable h = homology(tot, tot.s_valid);
    const SpectralSequencePage& inf = pages.back();
    for (int n = 0; n <= tot.s_valid; ++n)
        if (inf.total(n) != h.total(n))
            return false;
    return true;
}

} // namespace hochkit
