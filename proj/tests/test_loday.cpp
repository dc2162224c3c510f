#include "doctest.h"

#include "hochkit/errors.hpp"
#include "hochkit/loday.hpp"
#include "oracles.hpp"

using namespace hochkit;

namespace {

Field Q = Field::rationals();

std::size_t ipow(std::size_t b, std::size_t e)
{
    std::size_t r = 1;
    while (e--)
        r *= b;
    return r;
}

std::vector<GradedAlgebra> commutative_corpus()
{
    return {algebras::ground(Q),        algebras::dual_numbers(Q), algebras::product_of_fields(Q, 2),
            algebras::product_of_fields(Q, 3), algebras::exterior(Q, 1), algebras::f4_over_f2()};
}

/// Position of each circle_min simplex in the cyclic bar tuple: the number of
/// zeros of its surjection onto [1], or 0 for the degenerate basepoint.
std::vector<std::size_t> cyclic_slot(const SimplicialSet& x, int n)
{
    std::vector<std::size_t> slot;
    for (const Simplex& s : x.level_simplices(n)) {
        if (x.cell(s.base).dim == 0) {
            slot.push_back(0);
            continue;
        }
        std::size_t zeros = 0;
        for (int v : x.surjection(s))
            zeros += v == 0;
        slot.push_back(zeros);
    }
    return slot;
}

/// Signed permutation matrix: Loday basis at level n → cyclic bar basis.
SparseMatrix identification(const GradedAlgebra& a, const SimplicialSet& x, int n)
{
    auto slot = cyclic_slot(x, n);
    TensorPower tp(a, slot.size());
    SparseMatrix p(tp.size(), tp.size());
    for (std::size_t idx = 0; idx < tp.size(); ++idx) {
        auto dig = tp.digits(idx);
        std::vector<std::uint32_t> out(dig.size());
        bool neg = false;
        for (std::size_t k = 0; k < dig.size(); ++k) {
            out[slot[k]] = dig[k];
            for (std::size_t l = k + 1; l < dig.size(); ++l)
                if (slot[l] < slot[k] && a.odd(dig[k]) && a.odd(dig[l]))
                    neg = !neg;
        }
        p.columns[idx] = SparseVec::unit(tp.index(out), neg ? -a.field().one() : a.field().one());
    }
    return p;
}

/// HH of k[x]/x² over Q from the 2-periodic resolution of A over A⊗A:
/// A ← A ← A ← … with maps 0 (odd n) and multiplication by 2x (even n).
std::size_t dual_numbers_periodic(int s)
{
    // d_n : A → A in the basis (1, x)
    auto d = [](int n) -> std::vector<std::vector<mpq_class>> {
        if (n <= 0 || n % 2 == 1)
            return {{0, 0}, {0, 0}};
        return {{0, 0}, {2, 0}};
    };
    std::size_t kernel = 2 - oracle::dense_rank(d(s));
    return kernel - oracle::dense_rank(d(s + 1));
}

std::vector<std::vector<mpq_class>> dense(const SparseMatrix& m)
{
    std::vector<std::vector<mpq_class>> out(m.rows, std::vector<mpq_class>(m.cols(), 0));
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (const Term& t : m.columns[j])
            out[t.index][j] = t.coeff.to_rational();
    return out;
}

SimplicialMap subdivision_collapse()
{
    SimplicialSet src = spaces::circle_subdiv(3), dst = spaces::circle_min();
    Simplex base{0, 0}, sigma{1, 0}, degenerate{0, 1};
    std::vector<Simplex> images;
    for (const Cell& c : src.cells())
        images.push_back(c.dim == 0 ? base : (c.name == "e0" ? sigma : degenerate));
    return SimplicialMap(src, dst, images);
}

} // namespace

TEST_CASE("pushforward multiplies colliding factors and inserts units")
{
    GradedAlgebra a = algebras::dual_numbers(Q);
    // x ⊗ x ⊗ 1 under [0,1,2] → [0,0,1]: x·x ⊗ 1 = 0
    CHECK(pushforward(a, {1, 1, 0}, {0, 0, 1}, 2).empty());
    // x ⊗ 1 into three factors [0] → [2]: 1 ⊗ 1 ⊗ x
    SparseVec v = pushforward(a, {1}, {2}, 3);
    CHECK(v == SparseVec::unit(TensorPower(a, 3).index({0, 0, 1}), Q.one()));
}

TEST_CASE("pushforward applies the Koszul sign of the reordering")
{
    GradedAlgebra e = algebras::exterior(Q, 1);
    // x ⊗ x swapped: one odd transposition
    CHECK(pushforward(e, {1, 1}, {1, 0}, 2) == SparseVec::unit(3, -Q.one()));
    // x ⊗ 1 swapped: no sign
    CHECK(pushforward(e, {1, 0}, {1, 0}, 2) == SparseVec::unit(1, Q.one()));
}

TEST_CASE("tensor power indexing is big-endian")
{
    GradedAlgebra a = algebras::product_of_fields(Q, 3);
    TensorPower tp(a, 4);
    CHECK(tp.size() == 81);
    for (std::size_t i : {0ul, 1ul, 17ul, 80ul})
        CHECK(tp.index(tp.digits(i)) == i);
    CHECK(tp.digits(5) == std::vector<std::uint32_t>{0, 0, 1, 2});
    CHECK_THROWS_AS(TensorPower(a, 40), std::length_error);
}

TEST_CASE("Loday levels have (dim A)^{|X_n|} generators and d² = 0")
{
    for (const GradedAlgebra& a : commutative_corpus()) {
        SimplicialSet x = spaces::circle_min();
        LodayComplex l = loday_complex(a, x, 4);
        CHECK(l.tensor.s_valid == 3);
        for (int n = 0; n <= 4; ++n)
            CHECK(l.tensor.dim(n) == ipow(a.dim(), std::size_t(n) + 1));
        CHECK_FALSE(l.tensor.check());
    }
    LodayComplex pt = loday_complex(algebras::ground(Q), spaces::circle_min(), 5);
    for (int n = 0; n <= 5; ++n)
        CHECK(pt.tensor.dim(n) == 1);
    CHECK(hh(algebras::ground(Q), spaces::circle_min(), 4).entries == std::map<std::pair<int, int>, std::size_t>{{{0, 0}, 1}});
}

TEST_CASE("Loday differential on circle_min is the cyclic bar differential")
{
    for (const GradedAlgebra& a : {algebras::dual_numbers(Q), algebras::exterior(Q, 1), algebras::exterior(Q, 3)}) {
        SimplicialSet x = spaces::circle_min();
        LodayComplex l = loday_complex(a, x, 4);
        ChainComplex bar = cyclic_bar_oracle(a, 4);
        for (int n = 1; n <= 4; ++n) {
            SparseMatrix lhs = compose(bar.d[n], identification(a, x, n));
            SparseMatrix rhs = compose(identification(a, x, n - 1), l.tensor.d[n]);
            INFO("n = " << n);
            CHECK(dense(lhs) == dense(rhs));
        }
    }
}

TEST_CASE("cyclic bar oracle basics")
{
    ChainComplex c = cyclic_bar_oracle(algebras::ground(Q), 5);
    CHECK_FALSE(c.check());
    BettiTable b = homology(c, 4, "oracle");
    CHECK(b.total(0) == 1);
    for (int s = 1; s <= 4; ++s)
        CHECK(b.total(s) == 0);
    CHECK_THROWS_AS(homology(c, 5), TruncationError);
}

TEST_CASE("H_0 of the matrix algebra is the trace quotient")
{
    GradedAlgebra m2 = algebras::matrices(Q, 2);
    BettiTable b = oracle_hh(m2, 1);
    // oracle: dim A - rank span{ab - ba}
    std::vector<std::vector<mpq_class>> commutators;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            SparseVec c = m2.product(i, j);
            c.axpy(-Q.one(), m2.product(j, i));
            std::vector<mpq_class> row(4, 0);
            for (const Term& t : c)
                row[t.index] = t.coeff.to_rational();
            commutators.push_back(row);
        }
    CHECK(b.total(0) == 4 - oracle::dense_rank(commutators));
    CHECK(b.total(0) == 1);
    CHECK(b.total(1) == 0);
}

TEST_CASE("oracle agreement on the commutative corpus")
{
    for (const GradedAlgebra& a : commutative_corpus()) {
        BettiTable loday = hh(a, spaces::circle_min(), 4);
        BettiTable oracle = oracle_hh(a, 4);
        CHECK(loday.provenance == "loday");
        CHECK(oracle.provenance == "oracle");
        CHECK(loday.agrees(oracle, 4));
    }
}

TEST_CASE("dual numbers profile matches the periodic resolution")
{
    BettiTable b = hh(algebras::dual_numbers(Q), spaces::circle_min(), 4);
    std::vector<std::size_t> profile;
    for (int s = 0; s <= 4; ++s) {
        CHECK(b.total(s) == dual_numbers_periodic(s));
        CHECK(b.at(s, 0) == b.total(s));
        profile.push_back(b.total(s));
    }
    CHECK(profile == std::vector<std::size_t>{2, 1, 1, 1, 1});
}

TEST_CASE("normalization keeps homology and shrinks levels")
{
    for (const GradedAlgebra& a : {algebras::dual_numbers(Q), algebras::product_of_fields(Q, 2)}) {
        LodayComplex l = loday_complex(a, spaces::circle_min(), 4);
        Quotient q = normalize(l);
        CHECK_FALSE(q.complex.check());
        CHECK(homology(q.complex, 3).agrees(homology(l.tensor, 3), 3));
        for (int n = 1; n <= 4; ++n)
            CHECK(q.complex.dim(n) < l.tensor.dim(n));
    }
    LodayComplex ground = loday_complex(algebras::ground(Q), spaces::circle_min(), 4);
    Quotient qg = normalize(ground);
    CHECK(qg.complex.dim(0) == 1);
    for (int n = 1; n <= 4; ++n)
        CHECK(qg.complex.dim(n) == 0);
}

TEST_CASE("normalization is the identity without degeneracies in range")
{
    // level 0 of any X has no degenerate part
    LodayComplex l = loday_complex(algebras::dual_numbers(Q), spaces::point(), 1);
    Quotient q = normalize(l);
    CHECK(q.complex.dim(0) == l.tensor.dim(0));
    CHECK(degenerate_span(algebras::dual_numbers(Q), spaces::circle_min(), 0).empty());
}

TEST_CASE("HH over a point is A")
{
    for (const GradedAlgebra& a : commutative_corpus()) {
        BettiTable b = hh(a, spaces::point(), 3);
        std::map<int, std::size_t> by_degree;
        for (std::size_t i = 0; i < a.dim(); ++i)
            ++by_degree[a.degree(i)];
        for (auto [t, n] : by_degree)
            CHECK(b.at(0, t) == n);
        for (int s = 1; s <= 3; ++s)
            CHECK(b.total(s) == 0);
    }
}

TEST_CASE("model independence of the circle")
{
    for (const GradedAlgebra& a : {algebras::dual_numbers(Q), algebras::exterior(Q, 1), algebras::product_of_fields(Q, 2)}) {
        BettiTable base = hh(a, spaces::circle_min(), 3);
        CHECK(hh(a, spaces::circle_subdiv(3), 3).agrees(base, 3));
        CHECK(hh(a, spaces::circle_subdiv(4), 3).agrees(base, 3));
    }
}

TEST_CASE("Künneth for disjoint unions")
{
    GradedAlgebra dual = algebras::dual_numbers(Q);
    BettiTable lhs = hh(dual, spaces::disjoint_union(spaces::circle_min(), spaces::point()), 3);
    CHECK(lhs.agrees(convolve(hh(dual, spaces::circle_min(), 3), hh(dual, spaces::point(), 3)), 3));

    GradedAlgebra qq = algebras::product_of_fields(Q, 2);
    BettiTable rhs = hh(qq, spaces::disjoint_union(spaces::circle_min(), spaces::circle_min()), 2);
    BettiTable circle = hh(qq, spaces::circle_min(), 2);
    CHECK(rhs.agrees(convolve(circle, circle), 2));
}

TEST_CASE("étale algebras have HH concentrated in degree 0")
{
    for (const GradedAlgebra& a : {algebras::product_of_fields(Q, 2), algebras::product_of_fields(Q, 3), algebras::f4_over_f2()}) {
        REQUIRE(is_etale(a));
        BettiTable s1 = hh(a, spaces::sphere_min(1), 3);
        BettiTable s2 = hh(a, spaces::sphere_min(2), 2);
        CHECK(s1.at(0, 0) == a.dim());
        CHECK(s2.at(0, 0) == a.dim());
        for (int s = 1; s <= 3; ++s)
            CHECK(s1.total(s) == 0);
        for (int s = 1; s <= 2; ++s)
            CHECK(s2.total(s) == 0);
    }
}

TEST_CASE("non-étale algebras see higher spheres")
{
    BettiTable b = hh(algebras::dual_numbers(Q), spaces::sphere_min(2), 2);
    CHECK(b.total(0) == 2);
    CHECK(b.total(1) == 0);
    CHECK(b.total(2) > 0);
}

TEST_CASE("relative Loday complex over an étale base")
{
    GradedAlgebra dual = algebras::dual_numbers(Q);
    GradedAlgebra a = algebras::product_of_fields(Q, 2);
    // A = dual × dual as e1·dual ⊕ e2·dual; basis (e1, x e1, e2, x e2)
    GradedAlgebra prod = tensor_algebras(a, dual);
    GradedAlgebra t = algebras::product_of_fields(Q, 2);
    AlgebraMap structure{t, prod, {SparseVec::unit(0, Q.one()) , SparseVec::unit(2, Q.one())}};
    structure.validate();
    FreenessReport fr = check_free(structure);
    CHECK(fr.free);
    CHECK(fr.rank == 2);

    LodayComplex rel = loday_complex(prod, spaces::circle_min(), 4, structure);
    REQUIRE(rel.relative);
    for (int n = 0; n <= 4; ++n) {
        // T-rank 2^{n+1}, so Q-dimension 2 · 2^{n+1}
        CHECK(rel.complex().dim(n) == ipow(2, std::size_t(n) + 2));
    }
    CHECK_FALSE(rel.complex().check());
    CHECK(hh(prod, spaces::circle_min(), 3, structure).agrees(hh(prod, spaces::circle_min(), 3), 3));
}

TEST_CASE("relative Loday complex refuses non-free modules")
{
    // Q³ over Q×Q via e1 ↦ e1, e2 ↦ e2 + e3: dim 3 is not a multiple of 2
    GradedAlgebra target = algebras::product_of_fields(Q, 3);
    GradedAlgebra t = algebras::product_of_fields(Q, 2);
    AlgebraMap structure{t, target, {SparseVec::unit(0, Q.one()), SparseVec::from_terms({{1, Q.one()}, {2, Q.one()}})}};
    structure.validate();
    CHECK_FALSE(check_free(structure).free);
    CHECK_THROWS_AS(loday_complex(target, spaces::circle_min(), 3, structure), ValidationError);
}

TEST_CASE("Loday construction errors")
{
    CHECK_THROWS_AS(loday_complex(algebras::matrices(Q, 2), spaces::circle_min(), 3), ValidationError);
    CHECK_THROWS_AS(loday_complex(algebras::dual_numbers(Q), spaces::circle_min(), 0), std::invalid_argument);
    CHECK_THROWS_AS(hh(algebras::dual_numbers(Q), spaces::circle_min(), -1), std::invalid_argument);
}

TEST_CASE("induced maps commute with d")
{
    GradedAlgebra dual = algebras::dual_numbers(Q);
    SimplicialSet x = spaces::circle_min();
    SimplicialMap id(x, x, {Simplex{0, 0}, Simplex{1, 0}});
    ChainMap f = induced_map(id, dual, 3);
    CHECK_FALSE(f.check());
    for (int n = 0; n <= 3; ++n)
        for (std::size_t j = 0; j < f.levels[n].cols(); ++j)
            CHECK(f.levels[n].columns[j] == SparseVec::unit(j, Q.one()));

    ChainMap fold = induced_map(fold_map(spaces::point()), dual, 2);
    CHECK_FALSE(fold.check());
    // H_0: A ⊗ A → A is the multiplication
    TensorPower two(dual, 2);
    for (std::size_t idx = 0; idx < two.size(); ++idx) {
        auto dig = two.digits(idx);
        CHECK(fold.levels[0].columns[idx] == dual.product(dig[0], dig[1]));
    }
}

TEST_CASE("collapsing the subdivided circle is a quasi-isomorphism")
{
    SimplicialMap c = subdivision_collapse();
    CHECK(c.check(3));
    ChainMap f = induced_normalized_map(c, algebras::dual_numbers(Q), 4);
    CHECK_FALSE(f.check());
    CHECK(is_quasi_iso(f, 3));
}

TEST_CASE("shuffle product: unit, H_0 product, odd square")
{
    GradedAlgebra qq = algebras::product_of_fields(Q, 2);
    LodayHomology h(qq, spaces::circle_min(), 3);
    REQUIRE(h.level(0).dim() == 2);
    SparseVec one = h.unit_cycle();
    for (const SparseVec& z : h.level(0).basis()) {
        CHECK(shuffle_product(h, 0, one, 0, z) == h.level(0).coordinates(z));
    }
    // e1 · e1 = e1 and e1 · e2 = 0 on H_0 = A
    SparseVec e1 = h.project(0, SparseVec::unit(0, Q.one()));
    SparseVec e2 = h.project(0, SparseVec::unit(1, Q.one()));
    CHECK(shuffle_product(h, 0, e1, 0, e1) == h.level(0).coordinates(e1));
    CHECK(shuffle_product(h, 0, e1, 0, e2).empty());

    LodayHomology d(algebras::dual_numbers(Q), spaces::circle_min(), 4);
    REQUIRE(d.level(1).dim() == 1);
    SparseVec z = d.level(1).basis()[0];
    CHECK(shuffle_product(d, 1, z, 1, z).empty());
    CHECK(shuffle_product(d, 0, d.unit_cycle(), 1, z) == d.level(1).coordinates(z));
    CHECK(shuffle_product(d, 1, z, 0, d.unit_cycle()) == d.level(1).coordinates(z));
}

TEST_CASE("shuffle product is graded-commutative and associative")
{
    for (const GradedAlgebra& a : {algebras::dual_numbers(Q), algebras::exterior(Q, 1)}) {
        LodayHomology h(a, spaces::circle_min(), 4);
        auto classes = [&](int s) {
            std::vector<std::pair<int, SparseVec>> out;
            for (const SparseVec& z : h.level(s).basis()) {
                int t = 0;
                LodayComplex const& l = h.loday();
                SparseVec abs = h.lift(s, z);
                t = TensorPower(l.algebra, LevelIndex(l.space, s).size()).degree(abs.leading().index);
                out.push_back({t, z});
            }
            return out;
        };
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; p + q <= 3; ++q)
                for (auto [t1, z1] : classes(p))
                    for (auto [t2, z2] : classes(q)) {
                        SparseVec ab = shuffle_product(h, p, z1, q, z2);
                        SparseVec ba = shuffle_product(h, q, z2, p, z1);
                        bool odd = ((p + t1) * (q + t2)) % 2 != 0;
                        CHECK(ab == (odd ? ba.scaled(-Q.one()) : ba));
                    }
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; p + q <= 3; ++q)
                for (int r = 0; p + q + r <= 3; ++r)
                    for (auto [t1, z1] : classes(p))
                        for (auto [t2, z2] : classes(q))
                            for (auto [t3, z3] : classes(r)) {
                                auto rep = [&](int s, const SparseVec& coords) {
                                    SparseVec v;
                                    for (const Term& c : coords)
                                        v.axpy(c.coeff, h.level(s).basis()[c.index]);
                                    return v;
                                };
                                SparseVec left = shuffle_product(h, p + q, rep(p + q, shuffle_product(h, p, z1, q, z2)), r, z3);
                                SparseVec right = shuffle_product(h, p, z1, q + r, rep(q + r, shuffle_product(h, q, z2, r, z3)));
                                CHECK(left == right);
                            }
    }
}

TEST_CASE("shuffle product sends boundaries to boundaries")
{
    GradedAlgebra a = algebras::dual_numbers(Q);
    LodayHomology h(a, spaces::circle_min(), 4);
    const ChainComplex& c = h.complex();
    SparseVec z = h.level(1).basis()[0];
    for (std::size_t j = 0; j < c.dim(2); ++j) {
        SparseVec b = c.d[2].apply(SparseVec::unit(j, Q.one()));
        if (b.empty())
            continue;
        CHECK(shuffle_product(h, 1, b, 1, z).empty());
        CHECK(shuffle_product(h, 1, b, 0, h.unit_cycle()).empty());
    }
    CHECK_THROWS_AS(shuffle_product(h, 2, z, 2, z), TruncationError);
}
