#include "hochkit/glue.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "hochkit/errors.hpp"
#include "hochkit/loday.hpp"

namespace hochkit {

namespace {

const SparseVec kZero;

Scalar sign_of(const Field& f, bool negative)
{
    return negative ? -f.one() : f.one();
}

/// table[q1][q2] with one slot per basis pair, for q1 + q2 <= top.
template <class Fn>
std::vector<std::vector<std::vector<SparseVec>>> tabulate(int top_a, const ChainComplex& a, int top_b,
                                                          const ChainComplex& b, int top_sum, Fn&& fn)
{
    std::vector<std::vector<std::vector<SparseVec>>> t(std::size_t(top_a) + 1);
    for (int q1 = 0; q1 <= top_a; ++q1) {
        t[q1].resize(std::size_t(top_b) + 1);
        for (int q2 = 0; q2 <= top_b && q1 + q2 <= top_sum; ++q2) {
            t[q1][q2].resize(a.dim(q1) * b.dim(q2));
            for (std::size_t i = 0; i < a.dim(q1); ++i)
                for (std::size_t j = 0; j < b.dim(q2); ++j)
                    t[q1][q2][i * b.dim(q2) + j] = fn(q1, i, q2, j);
        }
    }
    return t;
}

ChainComplex single_level(const Field& f, std::vector<int> degrees)
{
    ChainComplex c;
    c.field = f;
    c.d.emplace_back(0, degrees.size());
    c.internal.push_back(std::move(degrees));
    c.s_valid = 0;
    return c;
}

std::vector<int> degrees_of(const GradedAlgebra& a)
{
    std::vector<int> out;
    for (std::size_t i = 0; i < a.dim(); ++i)
        out.push_back(a.degree(i));
    return out;
}

/// Applies d at level q of c to a vector.
SparseVec boundary(const ChainComplex& c, int q, const SparseVec& v)
{
    if (q <= 0 || v.empty())
        return {};
    return c.d[q].apply(v);
}

std::string at(int q, std::size_t i)
{
    return "(" + std::to_string(q) + "," + std::to_string(i) + ")";
}

} // namespace

// ---------------------------------------------------------------- DG algebras

const SparseVec& DGAlgebra::product(int q1, std::size_t i, int q2, std::size_t j) const
{
    if (q1 + q2 > top()) {
        if (complex.complete())
            return kZero;
        throw TruncationError("DG product lands at level " + std::to_string(q1 + q2) + " beyond the stored range");
    }
    return table[q1][q2][i * dim(q2) + j];
}

SparseVec DGAlgebra::multiply(int q1, const SparseVec& x, int q2, const SparseVec& y) const
{
    Accumulator acc;
    for (const Term& s : x)
        for (const Term& t : y)
            acc.add(product(q1, s.index, q2, t.index), s.coeff * t.coeff);
    return acc.finish();
}

std::optional<std::string> DGAlgebra::check() const
{
    if (auto err = complex.check())
        return err;
    const Field& f = complex.field;
    int n = top();
    for (int q = 0; q <= n; ++q)
        for (std::size_t i = 0; i < dim(q); ++i) {
            SparseVec e = SparseVec::unit(i, f.one());
            if (multiply(0, unit, q, e) != e || multiply(q, e, 0, unit) != e)
                return "unit does not act as identity on " + at(q, i);
        }
    for (int q1 = 0; q1 <= n; ++q1)
        for (int q2 = 0; q1 + q2 <= n; ++q2)
            for (std::size_t i = 0; i < dim(q1); ++i)
                for (std::size_t j = 0; j < dim(q2); ++j) {
                    SparseVec x = SparseVec::unit(i, f.one()), y = SparseVec::unit(j, f.one());
                    const SparseVec& xy = product(q1, i, q2, j);
                    for (const Term& t : xy)
                        if (complex.internal[q1 + q2][t.index] != complex.internal[q1][i] + complex.internal[q2][j])
                            return "product " + at(q1, i) + at(q2, j) + " is not homogeneous";
                    SparseVec lhs = boundary(complex, q1 + q2, xy);
                    SparseVec rhs = q1 > 0 ? multiply(q1 - 1, boundary(complex, q1, x), q2, y) : SparseVec();
                    if (q2 > 0)
                        rhs.axpy(sign_of(f, parity(q1, i) % 2 != 0), multiply(q1, x, q2 - 1, boundary(complex, q2, y)));
                    if (lhs != rhs)
                        return "Leibniz rule fails on " + at(q1, i) + "·" + at(q2, j);
                    if (commutative) {
                        bool neg = (parity(q1, i) * parity(q2, j)) % 2 != 0;
                        if (xy != product(q2, j, q1, i).scaled(sign_of(f, neg)))
                            return "graded commutativity fails on " + at(q1, i) + "·" + at(q2, j);
                    }
                    for (int q3 = 0; q1 + q2 + q3 <= n; ++q3)
                        for (std::size_t k = 0; k < dim(q3); ++k) {
                            SparseVec z = SparseVec::unit(k, f.one());
                            if (multiply(q1 + q2, xy, q3, z) != multiply(q1, x, q2 + q3, product(q2, j, q3, k)))
                                return "associativity fails on " + at(q1, i) + at(q2, j) + at(q3, k);
                        }
                }
    return std::nullopt;
}

DGAlgebra dg_from_algebra(const GradedAlgebra& a)
{
    DGAlgebra b;
    b.complex = single_level(a.field(), degrees_of(a));
    b.table = {{std::vector<SparseVec>(a.dim() * a.dim())}};
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            b.table[0][0][i * a.dim() + j] = a.product(i, j);
    b.unit = a.unit();
    b.commutative = a.commutative();
    return b;
}

namespace {

struct LodayModel {
    DGAlgebra dg;
    /// Augmentation B_0 → A induced by X → pt.
    std::vector<SparseVec> eps;
};

LodayModel loday_model(const GradedAlgebra& a, const SimplicialSet& x, int top)
{
    if (top < 1)
        throw std::invalid_argument("dg_loday: top must be at least 1");
    LodayComplex l = loday_complex(a, x, top);
    Quotient q = normalize(l);
    LodayModel out;
    DGAlgebra& b = out.dg;
    b.complex = q.complex;
    b.commutative = true;
    auto fn = [&](int q1, std::size_t i, int q2, std::size_t j) {
        SparseVec u = q.lift(q1, SparseVec::unit(i, a.field().one()));
        SparseVec v = q.lift(q2, SparseVec::unit(j, a.field().one()));
        return q.project(q1 + q2, shuffle_chain(a, x, q1, u, q2, v));
    };
    b.table = tabulate(top, b.complex, top, b.complex, top, fn);
    std::size_t m = LevelIndex(x, 0).size();
    b.unit = q.project(0, pushforward(a, {}, {}, m));
    TensorPower tp(a, m);
    std::vector<std::size_t> to_point(m, 0);
    for (std::size_t i = 0; i < b.dim(0); ++i)
        out.eps.push_back(pushforward(a, tp, q.lift(0, SparseVec::unit(i, a.field().one())), to_point, 1));
    return out;
}

} // namespace

DGAlgebra dg_loday(const GradedAlgebra& a, const SimplicialSet& x, int top)
{
    return loday_model(a, x, top).dg;
}

// ---------------------------------------------------------------- DG modules

const SparseVec& DGModule::act(int qb, std::size_t b, int qm, std::size_t m) const
{
    if (qm > top() || qb >= int(action.size()))
        throw std::out_of_range("DGModule::act: level out of range");
    if (qb + qm > top()) {
        if (complex.complete())
            return kZero;
        throw TruncationError("DG action lands at level " + std::to_string(qb + qm) + " beyond the stored range");
    }
    return action[qb][qm][b * dim(qm) + m];
}

std::optional<std::string> DGModule::check(const DGAlgebra& b) const
{
    if (auto err = complex.check())
        return err;
    const Field& f = complex.field;
    if (f != b.complex.field)
        return "module and algebra live over different fields";
    bool left = side == Side::left;
    // highest levels where both sides of an identity are defined
    int bt = std::min<int>(b.top(), int(action.size()) - 1);
    auto act_vec = [&](int qb, const SparseVec& x, int qm, const SparseVec& m) {
        Accumulator acc;
        for (const Term& s : x)
            for (const Term& t : m)
                acc.add(act(qb, s.index, qm, t.index), s.coeff * t.coeff);
        return acc.finish();
    };
    auto in_range = [&](int q) { return q <= top() || complex.complete(); };
    for (int qm = 0; qm <= top(); ++qm)
        for (std::size_t m = 0; m < dim(qm); ++m) {
            SparseVec e = SparseVec::unit(m, f.one());
            if (act_vec(0, b.unit, qm, e) != e)
                return "unit does not act as identity on " + at(qm, m);
        }
    for (int qb = 0; qb <= bt; ++qb)
        for (int qm = 0; qm <= top() && in_range(qb + qm); ++qm)
            for (std::size_t i = 0; i < b.dim(qb); ++i)
                for (std::size_t m = 0; m < dim(qm); ++m) {
                    SparseVec x = SparseVec::unit(i, f.one()), y = SparseVec::unit(m, f.one());
                    const SparseVec& xm = act(qb, i, qm, m);
                    for (const Term& t : xm)
                        if (complex.internal[qb + qm][t.index] != b.complex.internal[qb][i] + complex.internal[qm][m])
                            return "action " + at(qb, i) + "·" + at(qm, m) + " is not homogeneous";
                    // Leibniz with the factors in their written order
                    SparseVec lhs = qb + qm <= top() ? boundary(complex, qb + qm, xm) : SparseVec();
                    SparseVec db = qb > 0 ? act_vec(qb - 1, boundary(b.complex, qb, x), qm, y) : SparseVec();
                    SparseVec dm = qm > 0 ? act_vec(qb, x, qm - 1, boundary(complex, qm, y)) : SparseVec();
                    int first = left ? b.parity(qb, i) : parity(qm, m);
                    SparseVec rhs = left ? db : dm;
                    rhs.axpy(sign_of(f, first % 2 != 0), left ? dm : db);
                    if (lhs != rhs)
                        return "Leibniz rule fails on " + at(qb, i) + " acting on " + at(qm, m);
                    for (int qc = 0; qb + qc <= bt && in_range(qb + qc + qm); ++qc)
                        for (std::size_t k = 0; k < b.dim(qc); ++k) {
                            // left: (x z) m = x (z m); right: m (x z) = (m x) z
                            SparseVec z = SparseVec::unit(k, f.one());
                            SparseVec one = act_vec(qb + qc, b.product(qb, i, qc, k), qm, y);
                            SparseVec two = left ? act_vec(qb, x, qc + qm, act_vec(qc, z, qm, y))
                                                 : act_vec(qc, z, qb + qm, xm);
                            if (one != two)
                                return "action is not associative on " + at(qb, i) + at(qc, k) + at(qm, m);
                        }
                }
    return std::nullopt;
}

DGModule regular_module(const DGAlgebra& b, Side side)
{
    DGModule m;
    m.complex = b.complex;
    m.side = side;
    auto fn = [&](int qb, std::size_t i, int qm, std::size_t j) {
        return side == Side::left ? b.product(qb, i, qm, j) : b.product(qm, j, qb, i);
    };
    m.action = tabulate(b.top(), b.complex, b.top(), b.complex, b.top(), fn);
    return m;
}

DGModule augmentation_module(const DGAlgebra& b, const GradedAlgebra& a, const std::vector<SparseVec>& eps,
                             Side side)
{
    if (eps.size() != b.dim(0))
        throw ValidationError("augmentation needs one image per level-0 generator");
    DGModule m;
    m.complex = single_level(a.field(), degrees_of(a));
    m.side = side;
    auto fn = [&](int qb, std::size_t i, int, std::size_t j) {
        if (qb > 0)
            return SparseVec();
        SparseVec e = SparseVec::unit(j, a.field().one());
        return side == Side::left ? a.multiply(eps[i], e) : a.multiply(e, eps[i]);
    };
    m.action = tabulate(b.top(), b.complex, 0, m.complex, b.top(), fn);
    return m;
}

// ---------------------------------------------------------------- two-sided bar

namespace {

/// Generators of one column (p, q): blocks of fixed factor levels, each a
/// big-endian product of the factor bases.
class BarColumn {
public:
    BarColumn(const std::vector<const ChainComplex*>& factors, int q) : factors_(factors)
    {
        std::vector<int> levels(factors.size(), 0);
        enumerate(0, q, levels);
    }

    std::size_t size() const { return size_; }

    BarGenerator decode(std::size_t index) const
    {
        auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
        std::size_t b = std::size_t(it - offsets_.begin()) - 1;
        BarGenerator g{blocks_[b], std::vector<std::size_t>(factors_.size())};
        std::size_t rest = index - offsets_[b];
        for (std::size_t k = factors_.size(); k-- > 0;) {
            std::size_t d = factors_[k]->dim(g.levels[k]);
            g.indices[k] = rest % d;
            rest /= d;
        }
        return g;
    }

    std::size_t encode(const BarGenerator& g) const
    {
        auto it = lookup_.find(g.levels);
        if (it == lookup_.end())
            throw std::logic_error("bar generator outside its column");
        std::size_t idx = 0;
        for (std::size_t k = 0; k < factors_.size(); ++k)
            idx = idx * factors_[k]->dim(g.levels[k]) + g.indices[k];
        return offsets_[it->second] + idx;
    }

    int internal(const BarGenerator& g) const
    {
        int t = 0;
        for (std::size_t k = 0; k < factors_.size(); ++k)
            t += factors_[k]->internal[g.levels[k]][g.indices[k]];
        return t;
    }

private:
    void enumerate(std::size_t k, int remaining, std::vector<int>& levels)
    {
        if (k + 1 == factors_.size()) {
            levels[k] = remaining;
            std::size_t n = 1;
            for (std::size_t j = 0; j < levels.size(); ++j)
                n *= factors_[j]->dim(levels[j]);
            if (n == 0)
                return;
            lookup_[levels] = blocks_.size();
            blocks_.push_back(levels);
            offsets_.push_back(size_);
            size_ += n;
            return;
        }
        for (int l = 0; l <= remaining; ++l) {
            if (factors_[k]->dim(l) == 0)
                continue;
            levels[k] = l;
            enumerate(k + 1, remaining - l, levels);
        }
    }

    std::vector<const ChainComplex*> factors_;
    std::vector<std::vector<int>> blocks_;
    std::vector<std::size_t> offsets_;
    std::map<std::vector<int>, std::size_t> lookup_;
    std::size_t size_ = 0;
};

std::vector<const ChainComplex*> bar_factors(const DGModule& m, const DGAlgebra& b, const DGModule& n, int p)
{
    std::vector<const ChainComplex*> f{&m.complex};
    for (int i = 0; i < p; ++i)
        f.push_back(&b.complex);
    f.push_back(&n.complex);
    return f;
}

void require(const std::optional<std::string>& err, const std::string& what)
{
    if (err)
        throw ValidationError(what + ": " + *err);
}

} // namespace

std::vector<BarGenerator> bar_generators(const DGModule& m, const DGAlgebra& b, const DGModule& n, int p, int q)
{
    BarColumn col(bar_factors(m, b, n, p), q);
    std::vector<BarGenerator> out;
    for (std::size_t i = 0; i < col.size(); ++i)
        out.push_back(col.decode(i));
    return out;
}

DoubleComplex two_sided_bar(const DGModule& m, const DGAlgebra& b, const DGModule& n, int p_max)
{
    if (p_max < 1)
        throw std::invalid_argument("two_sided_bar: p_max must be at least 1");
    if (m.side != Side::right || n.side != Side::left)
        throw ValidationError("two_sided_bar: expects a right module on the left and a left module on the right");
    require(b.check(), "bar algebra");
    require(m.check(b), "right module");
    require(n.check(b), "left module");
    const Field& f = b.complex.field;

    // rows: bounded by every incomplete input; complete inputs contribute their full range
    int q_top = m.top() + p_max * b.top() + n.top();
    int s_valid = p_max - 1;
    for (const ChainComplex* c : {&m.complex, &b.complex, &n.complex})
        if (!c->complete()) {
            q_top = std::min(q_top, c->top());
            s_valid = std::min(s_valid, c->s_valid);
        }

    std::vector<std::vector<BarColumn>> cols(std::size_t(p_max) + 1);
    std::vector<std::vector<std::vector<int>>> internal(std::size_t(p_max) + 1);
    for (int p = 0; p <= p_max; ++p) {
        auto factors = bar_factors(m, b, n, p);
        for (int q = 0; q <= q_top; ++q) {
            cols[p].emplace_back(factors, q);
            std::vector<int> t;
            for (std::size_t i = 0; i < cols[p][q].size(); ++i)
                t.push_back(cols[p][q].internal(cols[p][q].decode(i)));
            internal[p].push_back(std::move(t));
        }
    }
    DoubleComplex dc = make_double(f, internal, s_valid);

    for (int p = 0; p <= p_max; ++p)
        for (int q = 0; q <= q_top; ++q) {
            const BarColumn& here = cols[p][q];
            for (std::size_t idx = 0; idx < here.size(); ++idx) {
                BarGenerator g = here.decode(idx);
                std::size_t last = std::size_t(p) + 1;
                // horizontal: Σ (-1)^i d_i, each merging factors i and i+1
                if (p >= 1) {
                    Accumulator acc;
                    for (int i = 0; i <= p; ++i) {
                        std::size_t k = std::size_t(i);
                        const SparseVec* merged;
                        if (i == 0)
                            merged = &m.act(g.levels[1], g.indices[1], g.levels[0], g.indices[0]);
                        else if (i == p)
                            merged = &n.act(g.levels[k], g.indices[k], g.levels[last], g.indices[last]);
                        else
                            merged = &b.product(g.levels[k], g.indices[k], g.levels[k + 1], g.indices[k + 1]);
                        if (merged->empty())
                            continue;
                        // i == p merges into the N factor, which keeps position k afterwards
                        BarGenerator h = g;
                        int level = g.levels[k] + g.levels[k + 1];
                        h.levels.erase(h.levels.begin() + long(k) + 1);
                        h.indices.erase(h.indices.begin() + long(k) + 1);
                        h.levels[k] = level;
                        Scalar s = sign_of(f, i % 2 != 0);
                        for (const Term& t : *merged) {
                            h.indices[k] = t.index;
                            acc.add(cols[p - 1][q].encode(h), s * t.coeff);
                        }
                    }
                    dc.dh[p][q].columns[idx] = acc.finish();
                }
                // vertical: tensor differential, stored with the (-1)^p twist
                if (q >= 1) {
                    Accumulator acc;
                    int passed = 0;
                    auto factors = bar_factors(m, b, n, p);
                    for (std::size_t k = 0; k < factors.size(); ++k) {
                        const ChainComplex& c = *factors[k];
                        int l = g.levels[k];
                        if (l > 0) {
                            const SparseVec& dcol = c.d[l].columns[g.indices[k]];
                            if (!dcol.empty()) {
                                BarGenerator h = g;
                                h.levels[k] = l - 1;
                                Scalar s = sign_of(f, (passed + p) % 2 != 0);
                                for (const Term& t : dcol) {
                                    h.indices[k] = t.index;
                                    acc.add(cols[p][q - 1].encode(h), s * t.coeff);
                                }
                            }
                        }
                        passed += l + c.internal[l][g.indices[k]];
                    }
                    dc.dv[p][q].columns[idx] = acc.finish();
                }
            }
        }
    return dc;
}

DoubleComplex hochschild_bar(const GradedAlgebra& a, int p_max)
{
    if (!a.commutative())
        throw ValidationError("hochschild_bar: the algebra must be graded-commutative");
    DGAlgebra b = dg_from_algebra(tensor_algebras(a, a));
    std::vector<SparseVec> mult;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            mult.push_back(a.product(i, j));
    return two_sided_bar(augmentation_module(b, a, mult, Side::right), b, augmentation_module(b, a, mult, Side::left),
                         p_max);
}

DoubleComplex suspension_bar(const GradedAlgebra& a0, int d, int s_max)
{
    if (d < 1)
        throw std::invalid_argument("hh_via_suspension: d must be at least 1");
    if (s_max < 0)
        throw std::invalid_argument("hh_via_suspension: s_max must be nonnegative");
    if (!a0.commutative())
        throw ValidationError("hh_via_suspension: the algebra must be graded-commutative");
    GradedAlgebra a = unit_adapted(a0).algebra;
    SimplicialSet equator = d == 1 ? spaces::disjoint_union(spaces::point(), spaces::point()) : spaces::sphere_min(d - 1);
    int top = s_max + 1;
    LodayModel model = loday_model(a, equator, top);
    return two_sided_bar(augmentation_module(model.dg, a, model.eps, Side::right), model.dg,
                         augmentation_module(model.dg, a, model.eps, Side::left), s_max + 1);
}

BettiTable hh_via_suspension(const GradedAlgebra& a, int d, int s_max)
{
    DoubleComplex dc = suspension_bar(a, d, s_max);
    return homology(total_complex(dc), s_max, "bar-suspension");
}

// ---------------------------------------------------------------- modules without differential

void LeftModule::validate(const GradedAlgebra& a) const
{
    std::size_t n = dim();
    if (field != a.field())
        throw ValidationError("module and algebra live over different fields");
    if (action.size() != a.dim() * n)
        throw ValidationError("module action table has " + std::to_string(action.size()) + " entries, expected " +
                              std::to_string(a.dim() * n));
    auto act = [&](const SparseVec& x, const SparseVec& m) {
        Accumulator acc;
        for (const Term& s : x)
            for (const Term& t : m)
                acc.add(action[s.index * n + t.index], s.coeff * t.coeff);
        return acc.finish();
    };
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t m = 0; m < n; ++m)
            for (const Term& t : action[i * n + m]) {
                if (t.index >= n)
                    throw ValidationError("module action index out of range");
                if (degrees[t.index] != a.degree(i) + degrees[m])
                    throw ValidationError("action " + a.name(i) + "·m" + std::to_string(m) + " is not homogeneous");
            }
    for (std::size_t m = 0; m < n; ++m)
        if (act(a.unit(), SparseVec::unit(m, field.one())) != SparseVec::unit(m, field.one()))
            throw ValidationError("unit does not act as identity on m" + std::to_string(m));
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            for (std::size_t m = 0; m < n; ++m)
                if (act(a.product(i, j), SparseVec::unit(m, field.one())) != act(SparseVec::unit(i, field.one()), action[j * n + m]))
                    throw ValidationError("action is not associative on (" + a.name(i) + "," + a.name(j) + ",m" +
                                          std::to_string(m) + ")");
}

LeftModule regular_left(const GradedAlgebra& a)
{
    LeftModule m{a.field(), degrees_of(a), {}};
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            m.action.push_back(a.product(i, j));
    return m;
}

LeftModule restrict(const AlgebraMap& f, const LeftModule& m)
{
    LeftModule out{m.field, m.degrees, {}};
    std::size_t n = m.dim();
    for (std::size_t i = 0; i < f.source.dim(); ++i)
        for (std::size_t k = 0; k < n; ++k) {
            Accumulator acc;
            for (const Term& t : f.images[i])
                acc.add(m.action[t.index * n + k], t.coeff);
            out.action.push_back(acc.finish());
        }
    return out;
}

Bimodule regular_bimodule(const GradedAlgebra& a)
{
    Bimodule m{a.field(), degrees_of(a), {}, {}};
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            m.left.push_back(a.product(i, j));
            m.right.push_back(a.product(i, j));
        }
    return m;
}

LeftModule enveloping_module(const GradedAlgebra& a, const Bimodule& m)
{
    std::size_t n = m.dim(), d = a.dim();
    if (m.left.size() != d * n || m.right.size() != n * d)
        throw ValidationError("bimodule action tables have the wrong size");
    LeftModule out{m.field, m.degrees, {}};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                // (e_i ⊗ e_j) · m_k = ± e_i (m_k e_j)
                bool neg = (a.degree(j) % 2 != 0) && (m.degrees[k] % 2 != 0);
                Accumulator acc;
                for (const Term& t : m.right[k * d + j])
                    acc.add(m.left[i * n + t.index], sign_of(m.field, neg) * t.coeff);
                out.action.push_back(acc.finish());
            }
    return out;
}

// ---------------------------------------------------------------- cobar

std::optional<std::string> CobarComplex::check() const
{
    for (int k = 0; k < n_max; ++k) {
        const SparseMatrix& d = delta[k];
        if (d.cols() != dim(k) || d.rows != dim(k + 1))
            return "delta shape mismatch at n=" + std::to_string(k);
        for (std::size_t j = 0; j < d.cols(); ++j) {
            for (const Term& t : d.columns[j])
                if (internal[k + 1][t.index] != internal[k][j])
                    return "delta changes the internal degree at n=" + std::to_string(k);
            if (k + 1 < n_max && !delta[k + 1].apply(d.columns[j]).empty())
                return "delta∘delta != 0 at n=" + std::to_string(k);
        }
    }
    return std::nullopt;
}

CobarComplex cobar_complex(const LeftModule& m, const GradedAlgebra& a, const LeftModule& n, int n_max)
{
    if (n_max < 1)
        throw std::invalid_argument("cobar: n_max must be at least 1");
    m.validate(a);
    n.validate(a);
    const Field& f = a.field();
    std::size_t da = a.dim(), dm = m.dim(), dn = n.dim();
    CobarComplex c;
    c.field = f;
    c.n_max = n_max;
    // source size S_k = da^k · dm
    std::vector<std::size_t> src(std::size_t(n_max) + 1);
    std::vector<std::vector<int>> src_degree(std::size_t(n_max) + 1);
    for (int k = 0; k <= n_max; ++k) {
        std::size_t s = dm;
        for (int i = 0; i < k; ++i) {
            if (s > kMaxLevelSize / (da * std::max<std::size_t>(dn, 1)))
                throw std::length_error("cobar: level " + std::to_string(k) + " too large");
            s *= da;
        }
        src[k] = s;
        // degree of x = (a_1 … a_k, m): big-endian, m last
        std::vector<int> deg(s);
        for (std::size_t x = 0; x < s; ++x) {
            int t = m.degrees[x % dm];
            for (std::size_t rest = x / dm; rest; rest /= da)
                t += a.degree(rest % da);
            deg[x] = t;
        }
        std::vector<int> maps(s * dn);
        for (std::size_t x = 0; x < s; ++x)
            for (std::size_t y = 0; y < dn; ++y)
                maps[x * dn + y] = n.degrees[y] - deg[x];
        c.internal.push_back(std::move(maps));
        src_degree[k] = std::move(deg);
    }
    for (int k = 0; k < n_max; ++k) {
        std::size_t s0 = src[k], s1 = src[k + 1];
        std::vector<std::vector<Term>> cols(s0 * dn);
        std::size_t lead = s1 / da; // weight of a_1 in x'
        for (std::size_t x1 = 0; x1 < s1; ++x1) {
            // digits a_1 … a_{k+1}, then m
            std::vector<std::size_t> dig(std::size_t(k) + 1);
            std::size_t mi = x1 % dm;
            std::size_t rest = x1 / dm;
            for (int i = k; i >= 0; --i) {
                dig[i] = rest % da;
                rest /= da;
            }
            auto encode = [&](const std::vector<std::size_t>& as, std::size_t mm) {
                std::size_t x = 0;
                for (std::size_t v : as)
                    x = x * da + v;
                return x * dm + mm;
            };
            // first term: a_1 φ(a_2 … m)
            {
                std::size_t x = x1 - dig[0] * lead;
                for (std::size_t y = 0; y < dn; ++y) {
                    int phi = n.degrees[y] - src_degree[k][x];
                    bool neg = (a.degree(dig[0]) % 2 != 0) && (phi % 2 != 0);
                    for (const Term& t : n.action[dig[0] * dn + y])
                        cols[x * dn + y].push_back({x1 * dn + t.index, sign_of(f, neg) * t.coeff});
                }
            }
            // inner terms: φ(… a_i a_{i+1} …)
            for (int i = 1; i <= k; ++i) {
                const SparseVec& prod = a.product(dig[i - 1], dig[i]);
                Scalar s = sign_of(f, i % 2 != 0);
                for (const Term& t : prod) {
                    std::vector<std::size_t> as;
                    for (int j = 0; j <= k; ++j) {
                        if (j == i)
                            continue;
                        as.push_back(j == i - 1 ? t.index : dig[j]);
                    }
                    std::size_t x = encode(as, mi);
                    for (std::size_t y = 0; y < dn; ++y)
                        cols[x * dn + y].push_back({x1 * dn + y, s * t.coeff});
                }
            }
            // last term: φ(a_1 … a_k ⊗ a_{k+1} m)
            {
                Scalar s = sign_of(f, (k + 1) % 2 != 0);
                std::vector<std::size_t> as(dig.begin(), dig.end() - 1);
                for (const Term& t : m.action[dig[k] * dm + mi]) {
                    std::size_t x = encode(as, t.index);
                    for (std::size_t y = 0; y < dn; ++y)
                        cols[x * dn + y].push_back({x1 * dn + y, s * t.coeff});
                }
            }
        }
        SparseMatrix d(s1 * dn, s0 * dn);
        for (std::size_t j = 0; j < cols.size(); ++j)
            d.columns[j] = SparseVec::from_terms(std::move(cols[j]));
        c.delta.push_back(std::move(d));
    }
    return c;
}

BettiTable cohomology(const CobarComplex& c, const std::string& provenance)
{
    // rank[n][t] of delta^n on internal degree t
    std::vector<std::map<int, std::size_t>> rank(std::size_t(c.n_max));
    std::vector<std::map<int, std::size_t>> count(std::size_t(c.n_max) + 1);
    for (int n = 0; n <= c.n_max; ++n)
        for (int t : c.internal[n])
            ++count[n][t];
    for (int n = 0; n < c.n_max; ++n) {
        std::map<int, std::vector<SparseVec>> by_t;
        for (std::size_t j = 0; j < c.dim(n); ++j)
            if (!c.delta[n].columns[j].empty())
                by_t[c.internal[n][j]].push_back(c.delta[n].columns[j]);
        for (auto& [t, cols] : by_t) {
            std::size_t below = n > 0 && rank[n - 1].count(t) ? rank[n - 1][t] : 0;
            rank[n][t] = rank_of(c.field, std::move(cols), count[n][t] - below);
        }
    }
    BettiTable out{provenance, c.n_max - 1, {}};
    for (int n = 0; n < c.n_max; ++n)
        for (auto [t, dim] : count[n]) {
            std::size_t out_rank = rank[n].count(t) ? rank[n][t] : 0;
            std::size_t in_rank = n > 0 && rank[n - 1].count(t) ? rank[n - 1][t] : 0;
            std::size_t h = dim - out_rank - in_rank;
            if (h)
                out.entries[{n, t}] = h;
        }
    return out;
}

BettiTable cobar(const LeftModule& m, const GradedAlgebra& a, const LeftModule& n, int n_max)
{
    return cohomology(cobar_complex(m, a, n, n_max), "cobar");
}

BettiTable hochschild_cohomology(const GradedAlgebra& a, const Bimodule& m, int n_max)
{
    GradedAlgebra env = tensor_algebras(a, opposite(a));
    LeftModule source = enveloping_module(a, regular_bimodule(a));
    LeftModule target = enveloping_module(a, m);
    return cohomology(cobar_complex(source, env, target, n_max), "hochschild-cohomology");
}

} // namespace hochkit
