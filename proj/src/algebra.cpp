#include "hochkit/algebra.hpp"

#include <map>
#include <stdexcept>

#include "hochkit/errors.hpp"

namespace hochkit {

namespace {

Scalar sign(const Field& f, bool negative)
{
    return negative ? -f.one() : f.one();
}

void validate(const GradedAlgebra& a)
{
    const std::size_t n = a.dim();
    const Field& f = a.field();
    auto nm = [&](std::size_t i) { return a.name(i); };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& t : a.product(i, j)) {
                if (t.index >= n)
                    throw ValidationError("structure constant index out of range at (" + nm(i) + "," + nm(j) + ")");
                if (a.degree(t.index) != a.degree(i) + a.degree(j))
                    throw ValidationError("degree additivity violated at (" + nm(i) + "," + nm(j) + ")");
            }

    int ud = 0;
    if (a.unit().empty() || !a.homogeneous(a.unit(), &ud) || ud != 0)
        throw ValidationError("missing unit: unit vector must be nonzero and of degree 0");
    for (std::size_t i = 0; i < n; ++i) {
        SparseVec e = SparseVec::unit(i, f.one());
        if (a.multiply(a.unit(), e) != e)
            throw ValidationError("missing unit: 1·" + nm(i) + " != " + nm(i));
        if (a.multiply(e, a.unit()) != e)
            throw ValidationError("missing unit: " + nm(i) + "·1 != " + nm(i));
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const SparseVec& ij = a.product(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                SparseVec left = a.multiply(ij, SparseVec::unit(k, f.one()));
                SparseVec right = a.multiply(SparseVec::unit(i, f.one()), a.product(j, k));
                if (left != right)
                    throw ValidationError("associativity violated at (" + nm(i) + "," + nm(j) + "," + nm(k) + ")");
            }
        }

    if (a.commutative()) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                bool neg = a.odd(i) && a.odd(j);
                if (a.product(i, j) != a.product(j, i).scaled(sign(f, neg)))
                    throw ValidationError("graded commutativity violated at (" + nm(i) + "," + nm(j) + ")");
            }
    }
}

} // namespace

SparseVec to_sparse(const std::vector<Scalar>& dense)
{
    std::vector<Term> terms;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (!dense[i].is_zero())
            terms.push_back({i, dense[i]});
    return SparseVec::from_terms(std::move(terms));
}

std::vector<Scalar> to_dense(const Field& f, const SparseVec& v, std::size_t dim)
{
    std::vector<Scalar> out(dim, f.zero());
    for (const auto& t : v) {
        if (t.index >= dim)
            throw std::out_of_range("to_dense: index out of range");
        out[t.index] = t.coeff;
    }
    return out;
}

SparseVec GradedAlgebra::multiply(const SparseVec& u, const SparseVec& v) const
{
    Accumulator acc;
    for (const auto& x : u) {
        if (x.index >= dim())
            throw std::invalid_argument("multiply: vector index out of range");
        for (const auto& y : v) {
            if (y.index >= dim())
                throw std::invalid_argument("multiply: vector index out of range");
            acc.add(product(x.index, y.index), x.coeff * y.coeff);
        }
    }
    return acc.finish();
}

std::vector<Scalar> GradedAlgebra::multiply(const std::vector<Scalar>& u, const std::vector<Scalar>& v) const
{
    if (u.size() != dim() || v.size() != dim())
        throw std::invalid_argument("multiply: dimension mismatch (algebra has dimension " + std::to_string(dim()) +
                                    ", got " + std::to_string(u.size()) + " and " + std::to_string(v.size()) + ")");
    return to_dense(field_, multiply(to_sparse(u), to_sparse(v)), dim());
}

bool GradedAlgebra::homogeneous(const SparseVec& v, int* degree) const
{
    if (v.empty()) {
        if (degree)
            *degree = 0;
        return true;
    }
    int d = basis_[v.leading().index].degree;
    for (const auto& t : v)
        if (basis_[t.index].degree != d)
            return false;
    if (degree)
        *degree = d;
    return true;
}

bool GradedAlgebra::concentrated_in_degree_zero() const
{
    for (const auto& b : basis_)
        if (b.degree != 0)
            return false;
    return true;
}

std::vector<std::pair<int, std::size_t>> GradedAlgebra::degree_profile() const
{
    std::map<int, std::size_t> m;
    for (const auto& b : basis_)
        ++m[b.degree];
    return {m.begin(), m.end()};
}

AlgebraSpec GradedAlgebra::spec() const
{
    AlgebraSpec s;
    s.field = field_;
    s.basis = basis_;
    s.unit = to_dense(field_, unit_, dim());
    s.commutative = commutative_;
    s.table.resize(dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            s.table[i].push_back(to_dense(field_, product(i, j), dim()));
    return s;
}

GradedAlgebra from_structure(Field field, std::vector<BasisElement> basis, SparseVec unit,
                             std::vector<SparseVec> table, bool commutative)
{
    if (basis.empty())
        throw ValidationError("algebra must have at least one basis element");
    if (table.size() != basis.size() * basis.size())
        throw ValidationError("structure table must be dim x dim");
    for (const auto& t : unit)
        if (t.index >= basis.size())
            throw ValidationError("unit vector index out of range");
    GradedAlgebra a;
    a.field_ = field;
    a.basis_ = std::move(basis);
    a.unit_ = std::move(unit);
    a.table_ = std::move(table);
    a.commutative_ = commutative;
    for (const auto& v : a.table_)
        for (const auto& t : v)
            if (t.coeff.field() != field)
                throw ValidationError("structure constant over the wrong field");
    validate(a);
    return a;
}

GradedAlgebra make_algebra(const AlgebraSpec& spec)
{
    const std::size_t n = spec.basis.size();
    if (spec.unit.size() != n)
        throw ValidationError("unit vector has length " + std::to_string(spec.unit.size()) + ", expected " +
                              std::to_string(n));
    if (spec.table.size() != n)
        throw ValidationError("structure table has " + std::to_string(spec.table.size()) + " rows, expected " +
                              std::to_string(n));
    std::vector<SparseVec> table;
    table.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.table[i].size() != n)
            throw ValidationError("structure table row " + spec.basis[i].name + " has wrong length");
        for (std::size_t j = 0; j < n; ++j) {
            if (spec.table[i][j].size() != n)
                throw ValidationError("product (" + spec.basis[i].name + "," + spec.basis[j].name +
                                      ") has wrong length");
            table.push_back(to_sparse(spec.table[i][j]));
        }
    }
    return from_structure(spec.field, spec.basis, to_sparse(spec.unit), std::move(table), spec.commutative);
}

GradedAlgebra tensor_algebras(const GradedAlgebra& a, const GradedAlgebra& b)
{
    if (a.field() != b.field())
        throw std::invalid_argument("tensor_algebras: field mismatch (" + a.field().name() + " vs " +
                                    b.field().name() + ")");
    const Field& f = a.field();
    const std::size_t na = a.dim(), nb = b.dim();
    std::vector<BasisElement> basis;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            basis.push_back({a.name(i) + "⊗" + b.name(j), a.degree(i) + b.degree(j)});

    auto pair_vec = [&](const SparseVec& u, const SparseVec& v) {
        Accumulator acc;
        for (const auto& x : u)
            for (const auto& y : v)
                acc.add(x.index * nb + y.index, x.coeff * y.coeff);
        return acc.finish();
    };

    std::vector<SparseVec> table(na * nb * na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t k = 0; k < na; ++k)
                for (std::size_t l = 0; l < nb; ++l) {
                    bool neg = b.odd(j) && a.odd(k);
                    SparseVec v = pair_vec(a.product(i, k), b.product(j, l));
                    if (neg)
                        v.scale(-f.one());
                    table[(i * nb + j) * (na * nb) + (k * nb + l)] = std::move(v);
                }
    return from_structure(f, std::move(basis), pair_vec(a.unit(), b.unit()), std::move(table),
                          a.commutative() && b.commutative());
}

GradedAlgebra opposite(const GradedAlgebra& a)
{
    const std::size_t n = a.dim();
    std::vector<SparseVec> table(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            table[i * n + j] = a.product(j, i).scaled(sign(a.field(), a.odd(i) && a.odd(j)));
    std::vector<BasisElement> basis = a.basis();
    for (auto& b : basis)
        b.name += "°";
    return from_structure(a.field(), std::move(basis), a.unit(), std::move(table), a.commutative());
}

std::vector<std::vector<Scalar>> trace_form(const GradedAlgebra& a)
{
    const std::size_t n = a.dim();
    const Field& f = a.field();
    // tr(L_{e_k}) = Σ_l c_{kl}^l
    std::vector<Scalar> tr(n, f.zero());
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            if (const Scalar* c = a.product(k, l).find(l))
                tr[k] += *c;
    std::vector<std::vector<Scalar>> form(n, std::vector<Scalar>(n, f.zero()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& t : a.product(i, j))
                form[i][j] += t.coeff * tr[t.index];
    return form;
}

bool is_etale(const GradedAlgebra& a)
{
    if (!a.commutative())
        throw std::invalid_argument("is_etale: algebra must be commutative");
    if (!a.concentrated_in_degree_zero())
        throw std::invalid_argument("is_etale: algebra must be concentrated in internal degree 0");
    auto form = trace_form(a);
    std::vector<SparseVec> rows;
    for (const auto& r : form)
        rows.push_back(to_sparse(r));
    return rank_of(a.field(), std::move(rows)) == a.dim();
}

std::vector<SparseVec> center(const GradedAlgebra& a)
{
    const std::size_t n = a.dim();
    const Field& f = a.field();
    std::vector<SparseVec> result;
    for (auto [deg, count] : a.degree_profile()) {
        (void)count;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (a.degree(i) == deg)
                members.push_back(i);
        // column for z = e_i: stacked (e_i e_u - (-1)^{|i||u|} e_u e_i) over u
        std::vector<SparseVec> columns;
        for (std::size_t i : members) {
            Accumulator acc;
            for (std::size_t u = 0; u < n; ++u) {
                bool neg = (deg % 2 != 0) && a.odd(u);
                for (const auto& t : a.product(i, u))
                    acc.add(u * n + t.index, t.coeff);
                for (const auto& t : a.product(u, i))
                    acc.add(u * n + t.index, neg ? t.coeff : -t.coeff);
            }
            columns.push_back(acc.finish());
        }
        for (const auto& k : kernel_of(f, columns)) {
            Accumulator z;
            for (const auto& t : k)
                z.add(members[t.index], t.coeff);
            result.push_back(z.finish());
        }
    }
    return result;
}

SparseVec AlgebraMap::apply(const SparseVec& v) const
{
    Accumulator acc;
    for (const auto& t : v) {
        if (t.index >= images.size())
            throw std::invalid_argument("algebra map: index out of range");
        acc.add(images[t.index], t.coeff);
    }
    return acc.finish();
}

void AlgebraMap::validate() const
{
    if (source.field() != target.field())
        throw ValidationError("algebra map: field mismatch");
    if (images.size() != source.dim())
        throw ValidationError("algebra map: expected " + std::to_string(source.dim()) + " images, got " +
                              std::to_string(images.size()));
    for (std::size_t i = 0; i < source.dim(); ++i) {
        int d = 0;
        for (const auto& t : images[i])
            if (t.index >= target.dim())
                throw ValidationError("algebra map: image index out of range");
        if (!target.homogeneous(images[i], &d) || (!images[i].empty() && d != source.degree(i)))
            throw ValidationError("algebra map: degree not preserved at " + source.name(i));
    }
    if (apply(source.unit()) != target.unit())
        throw ValidationError("algebra map: unit not preserved");
    for (std::size_t i = 0; i < source.dim(); ++i)
        for (std::size_t j = 0; j < source.dim(); ++j)
            if (apply(source.product(i, j)) != target.multiply(images[i], images[j]))
                throw ValidationError("algebra map: product not preserved at (" + source.name(i) + "," +
                                      source.name(j) + ")");
}

namespace algebras {

GradedAlgebra ground(Field f)
{
    return from_structure(f, {{"1", 0}}, SparseVec::unit(0, f.one()), {SparseVec::unit(0, f.one())}, true);
}

GradedAlgebra truncated_polynomial(Field f, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("truncated_polynomial: n must be positive");
    std::vector<BasisElement> basis;
    for (std::size_t i = 0; i < n; ++i)
        basis.push_back({i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i)), 0});
    std::vector<SparseVec> table(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i + j < n)
                table[i * n + j] = SparseVec::unit(i + j, f.one());
    return from_structure(f, std::move(basis), SparseVec::unit(0, f.one()), std::move(table), true);
}

GradedAlgebra dual_numbers(Field f)
{
    return truncated_polynomial(f, 2);
}

GradedAlgebra product_of_fields(Field f, std::size_t n)
{
    std::vector<BasisElement> basis;
    Accumulator unit;
    for (std::size_t i = 0; i < n; ++i) {
        basis.push_back({"e" + std::to_string(i + 1), 0});
        unit.add(i, f.one());
    }
    std::vector<SparseVec> table(n * n);
    for (std::size_t i = 0; i < n; ++i)
        table[i * n + i] = SparseVec::unit(i, f.one());
    return from_structure(f, std::move(basis), unit.finish(), std::move(table), true);
}

GradedAlgebra exterior(Field f, int degree)
{
    if (degree % 2 == 0)
        throw std::invalid_argument("exterior: generator degree must be odd");
    std::vector<SparseVec> table(4);
    table[0] = SparseVec::unit(0, f.one());
    table[1] = SparseVec::unit(1, f.one());
    table[2] = SparseVec::unit(1, f.one());
    return from_structure(f, {{"1", 0}, {"x", degree}}, SparseVec::unit(0, f.one()), std::move(table), true);
}

GradedAlgebra matrices(Field f, std::size_t n)
{
    // E_ij E_kl = δ_jk E_il; index of E_ij is i*n + j
    std::vector<BasisElement> basis;
    Accumulator unit;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            basis.push_back({"E" + std::to_string(i + 1) + std::to_string(j + 1), 0});
    for (std::size_t i = 0; i < n; ++i)
        unit.add(i * n + i, f.one());
    const std::size_t d = n * n;
    std::vector<SparseVec> table(d * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l)
                table[(i * n + j) * d + (j * n + l)] = SparseVec::unit(i * n + l, f.one());
    return from_structure(f, std::move(basis), unit.finish(), std::move(table), n == 1);
}

GradedAlgebra f4_over_f2()
{
    Field f = Field::prime(2);
    // basis 1, x with x^2 = x + 1
    std::vector<SparseVec> table(4);
    table[0] = SparseVec::unit(0, f.one());
    table[1] = SparseVec::unit(1, f.one());
    table[2] = SparseVec::unit(1, f.one());
    table[3] = SparseVec::from_terms({{0, f.one()}, {1, f.one()}});
    return from_structure(f, {{"1", 0}, {"x", 0}}, SparseVec::unit(0, f.one()), std::move(table), true);
}

} // namespace algebras

SparseVec UnitAdapted::apply(const SparseVec& v) const
{
    Accumulator acc;
    for (const Term& t : v)
        acc.add(forward[t.index], t.coeff);
    return acc.finish();
}

UnitAdapted unit_adapted(const GradedAlgebra& a)
{
    const Field& f = a.field();
    const SparseVec& u = a.unit();
    std::size_t k = u.leading().index;
    std::size_t n = a.dim();
    UnitAdapted out;
    out.forward.resize(n);
    // e_k = (f_k - Σ_{i≠k} u_i f_i) / u_k
    Scalar inv = u.leading().coeff.inverse();
    for (std::size_t i = 0; i < n; ++i)
        out.forward[i] = SparseVec::unit(i, f.one());
    Accumulator ek;
    ek.add(k, inv);
    for (const Term& t : u)
        if (t.index != k)
            ek.add(t.index, -(t.coeff * inv));
    out.forward[k] = ek.finish();
    if (u.nnz() == 1 && u.leading().coeff.is_one()) {
        out.algebra = a;
        return out;
    }
    auto old_coords = [&](std::size_t i) { return i == k ? u : SparseVec::unit(i, f.one()); };
    std::vector<BasisElement> basis = a.basis();
    basis[k] = {"1", 0};
    std::vector<SparseVec> table(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            table[i * n + j] = out.apply(a.multiply(old_coords(i), old_coords(j)));
    out.algebra = from_structure(f, std::move(basis), SparseVec::unit(k, f.one()), std::move(table), a.commutative());
    return out;
}

AlgebraMap unit_adapted(const AlgebraMap& m)
{
    UnitAdapted src = unit_adapted(m.source), dst = unit_adapted(m.target);
    std::size_t k = m.source.unit().leading().index;
    AlgebraMap out{src.algebra, dst.algebra, {}};
    for (std::size_t i = 0; i < m.source.dim(); ++i)
        out.images.push_back(dst.apply(i == k ? m.apply(m.source.unit()) : m.images[i]));
    return out;
}

} // namespace hochkit
