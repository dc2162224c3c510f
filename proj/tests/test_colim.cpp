#include "doctest.h"

#include <sstream>

#include "hochkit/colim.hpp"
#include "hochkit/errors.hpp"
#include "hochkit/loday.hpp"
#include "oracles.hpp"

using namespace hochkit;

namespace {

Field Q = Field::rationals();

std::vector<GradedAlgebra> commutative_corpus()
{
    return {algebras::ground(Q),        algebras::dual_numbers(Q), algebras::product_of_fields(Q, 2),
            algebras::product_of_fields(Q, 3), algebras::exterior(Q, 1), algebras::f4_over_f2()};
}

SparseMatrix identity(std::size_t n, const Field& f)
{
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.columns[i] = SparseVec::unit(i, f.one());
    return m;
}

/// Σ_p (-1)^p Σ_{x_0<…<x_p} dim F(x_0), counting chains straight from leq.
long chain_euler_characteristic(const Poset& p, const PosetFunctor& f)
{
    long chi = 0;
    std::vector<std::size_t> chain;
    std::function<void()> walk = [&]() {
        long sign = chain.size() % 2 ? 1 : -1;
        chi += sign * long(f.dim(chain.front()));
        for (std::size_t y = 0; y < p.size(); ++y)
            if (y != chain.back() && p.leq(chain.back(), y)) {
                chain.push_back(y);
                walk();
                chain.pop_back();
            }
    };
    for (std::size_t x = 0; x < p.size(); ++x) {
        chain = {x};
        walk();
    }
    return chi;
}

long homology_euler_characteristic(const BettiTable& b)
{
    long chi = 0;
    for (const auto& [key, n] : b.entries)
        chi += key.first % 2 ? -long(n) : long(n);
    return chi;
}

/// Cells named in an object of cyclic_cech_poset: "v0+e0+e1" → {0, 1, 3}.
std::vector<std::size_t> cells_of(const std::string& name)
{
    std::vector<std::size_t> out;
    std::stringstream in(name);
    std::string part;
    while (std::getline(in, part, '+'))
        out.push_back(2 * std::stoul(part.substr(1)) + (part[0] == 'e'));
    return out;
}

/// Components of a proper subset of the 2m-cycle of cells = maximal runs.
int cyclic_runs(const std::vector<std::size_t>& cells, std::size_t m)
{
    std::vector<bool> in(2 * m, false);
    for (std::size_t c : cells)
        in[c] = true;
    int runs = 0;
    for (std::size_t c = 0; c < 2 * m; ++c)
        runs += in[c] && !in[(c + 2 * m - 1) % (2 * m)];
    return runs;
}

std::size_t named(const Poset& p, const std::string& name)
{
    auto x = p.find(name);
    REQUIRE(x.has_value());
    return *x;
}

} // namespace

TEST_CASE("poset closure, covers and height")
{
    Poset p({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}}, {{0, 1, {}}, {1, 2, {}}, {0, 3, {}}});
    CHECK(p.leq(0, 2));
    CHECK_FALSE(p.leq(2, 0));
    CHECK_FALSE(p.leq(3, 2));
    CHECK(p.covers() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 3}, {1, 2}});
    CHECK(p.height() == 2);
    CHECK(p.chains(2) == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
    CHECK(p.chains(1).size() == 4);
    CHECK_FALSE(p.labeled());
    CHECK(*p.find("c") == 2);
    CHECK_FALSE(p.find("z"));

    CHECK_THROWS_AS(Poset({{"a", 0}, {"b", 0}}, {{0, 1, {}}, {1, 0, {}}}), ValidationError);
    CHECK_THROWS_AS(Poset({{"a", 0}, {"a", 0}}, {}), ValidationError);
    CHECK_THROWS_AS(Poset({{"a", 0}}, {{0, 3, {}}}), ValidationError);
}

TEST_CASE("component maps default, compose and are checked")
{
    Poset p({{"x", 1}, {"y", 2}, {"z", 1}}, {{0, 1, std::vector<std::size_t>{1}}, {1, 2, {}}});
    CHECK(p.component_map(0, 1) == std::vector<std::size_t>{1});
    CHECK(p.component_map(1, 2) == std::vector<std::size_t>{0, 0});
    CHECK(p.component_map(0, 2) == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(p.component_map(2, 0), ValidationError);
    // 1 → 2 components with no map given
    CHECK_THROWS_AS(Poset({{"x", 1}, {"y", 2}}, {{0, 1, {}}}), ValidationError);
    CHECK_THROWS_AS(Poset({{"x", 1}, {"y", 2}}, {{0, 1, std::vector<std::size_t>{2}}}), ValidationError);
    // inconsistent: x ↦ 1 in y, but the direct map x → w disagrees with y → w
    CHECK_THROWS_AS(Poset({{"x", 1}, {"y", 2}, {"w", 2}},
                          {{0, 1, std::vector<std::size_t>{1}}, {1, 2, std::vector<std::size_t>{0, 1}},
                           {0, 2, std::vector<std::size_t>{0}}}),
                    ValidationError);
}

TEST_CASE("nerve of a single object and of an arrow")
{
    Poset one({{"pt", 1}}, {});
    GradedAlgebra a = algebras::dual_numbers(Q);
    BettiTable b = poset_homology(one, arc_functor(a, one), 0);
    CHECK(b.provenance == "poset");
    CHECK(b.entries == std::map<std::pair<int, int>, std::size_t>{{{0, 0}, 2}});
    EdgeMap e = edge_map(one, arc_functor(a, one), 0);
    CHECK(e.iso);
    CHECK(e.collapses);
    CHECK(e.map.columns == identity(2, Q).columns);

    Poset arrow({{"x", 0}, {"y", 0}}, {{0, 1, {}}});
    ChainComplex c = nerve_complex(arrow, constant_functor(arrow, Q));
    CHECK(c.complete());
    CHECK(c.s_valid == 1);
    CHECK(homology(c, 1).entries == std::map<std::pair<int, int>, std::size_t>{{{0, 0}, 1}});
}

TEST_CASE("span with projections: elimination against a dense oracle")
{
    // y > x < z, F(x) = Q², F(y) = F(z) = Q, the two coordinate projections
    Poset p({{"x", 0}, {"y", 0}, {"z", 0}}, {{0, 1, {}}, {0, 2, {}}});
    PosetFunctor f{Q, {{0, 0}, {0}, {0}}, {}};
    SparseMatrix p1(1, 2), p2(1, 2);
    p1.columns[0] = SparseVec::unit(0, Q.one());
    p2.columns[1] = SparseVec::unit(0, Q.one());
    f.maps[{0, 1}] = p1;
    f.maps[{0, 2}] = p2;
    BettiTable b = poset_homology(p, f, 1);
    CHECK(homology_euler_characteristic(b) == 0);
    CHECK(chain_euler_characteristic(p, f) == 0);

    // level 0 = x1 x2 y z, level 1 = (x<y)e1 (x<y)e2 (x<z)e1 (x<z)e2
    oracle::Dense d = {{-1, 0, -1, 0}, {0, -1, 0, -1}, {1, 0, 0, 0}, {0, 0, 0, 1}};
    std::size_t r = oracle::dense_rank(d);
    CHECK(b.total(0) == 4 - r);
    CHECK(b.total(1) == 4 - r);
    CHECK(b.total(0) == 0);
}

TEST_CASE("functoriality violations name the triple")
{
    Poset p({{"a", 0}, {"b", 0}, {"c", 0}}, {{0, 1, {}}, {1, 2, {}}});
    PosetFunctor f = constant_functor(p, Q);
    f.maps[{0, 2}].columns[0] = SparseVec::unit(0, Q.from_int(2));
    try {
        f.validate(p);
        FAIL("expected a functoriality error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("'a' < 'b' < 'c'") != std::string::npos);
    }
    CHECK_THROWS_AS(nerve_complex(p, f), ValidationError);

    PosetFunctor shifted = constant_functor(p, Q);
    shifted.degrees[2] = {1};
    CHECK_THROWS_AS(shifted.validate(p), ValidationError);
    PosetFunctor missing = constant_functor(p, Q);
    missing.maps.erase({0, 2});
    CHECK_THROWS_AS(missing.validate(p), ValidationError);
}

TEST_CASE("zero functor and truncation")
{
    Poset p = cyclic_cech_poset(3);
    BettiTable b = poset_homology(p, zero_functor(p, Q), p.height());
    CHECK(b.entries.empty());
    CHECK_THROWS_AS(poset_homology(p, zero_functor(p, Q), p.height() + 1), TruncationError);
}

TEST_CASE("arc cover of the circle with two arcs")
{
    Poset p = cyclic_cech_poset(2);
    REQUIRE(p.size() == 5);
    CHECK(p.height() == 2);
    CHECK(p.labeled());
    std::size_t v1 = named(p, "e0"), v2 = named(p, "e1"), w = named(p, "e0+e1");
    std::size_t u1 = named(p, "v0+e0+e1"), u2 = named(p, "e0+v1+e1");
    CHECK(p.object(w).components == 2);
    for (std::size_t v : {v1, v2}) {
        CHECK(p.less(v, w));
        for (std::size_t u : {u1, u2})
            CHECK(p.less(v, u));
    }
    for (std::size_t u : {u1, u2}) {
        CHECK(p.less(w, u));
        CHECK(p.object(u).components == 1);
    }
    CHECK_FALSE(p.leq(u1, u2));
    CHECK_FALSE(p.leq(v1, v2));
    CHECK_THROWS_AS(cyclic_cech_poset(1), std::invalid_argument);
}

TEST_CASE("arc covers: labels are interval counts and the order is inclusion")
{
    for (std::size_t m : {2u, 3u, 4u}) {
        Poset p = cyclic_cech_poset(int(m));
        for (std::size_t x = 0; x < p.size(); ++x) {
            auto cx = cells_of(p.object(x).name);
            CHECK(cx.size() < 2 * m);
            CHECK(p.object(x).components == cyclic_runs(cx, m));
            for (std::size_t c : cx)
                if (c % 2 == 0) {
                    // a vertex comes with both incident edges (open subset)
                    CHECK(std::count(cx.begin(), cx.end(), c + 1) == 1);
                    CHECK(std::count(cx.begin(), cx.end(), (c + 2 * m - 1) % (2 * m)) == 1);
                }
            for (std::size_t y = 0; y < p.size(); ++y) {
                auto cy = cells_of(p.object(y).name);
                bool inside = std::all_of(cx.begin(), cx.end(), [&](std::size_t c) {
                                  return std::find(cy.begin(), cy.end(), c) != cy.end();
                              });
                CHECK(p.leq(x, y) == inside);
            }
        }
    }
    CHECK(cyclic_cech_poset(3).size() == 16);
}

TEST_CASE("constant coefficients on arc covers")
{
    // e0+…+e_{m-1} lies below every vertex star and above every edge, and
    // every object contains an edge: each order complex is a cone
    for (int m : {2, 3}) {
        Poset p = cyclic_cech_poset(m);
        PosetFunctor f = constant_functor(p, Q);
        BettiTable b = poset_homology(p, f, p.height());
        CHECK(b.entries == std::map<std::pair<int, int>, std::size_t>{{{0, 0}, 1}});
        CHECK(chain_euler_characteristic(p, f) == 1);
    }
}

TEST_CASE("arc functor: unit insertion, merging and Koszul signs")
{
    Poset p = cyclic_cech_poset(2);
    GradedAlgebra a = algebras::dual_numbers(Q); // basis 1, x
    PosetFunctor f = arc_functor(a, p);
    std::size_t v1 = named(p, "e0"), w = named(p, "e0+e1"), u1 = named(p, "v0+e0+e1");
    CHECK(f.dim(v1) == 2);
    CHECK(f.dim(w) == 4);
    // a ↦ a ⊗ 1: x ↦ x⊗1 = index 2
    CHECK(f.map(v1, w).columns[1] == SparseVec::unit(2, Q.one()));
    // a⊗b ↦ ab: x⊗x ↦ 0, x⊗1 ↦ x
    CHECK(f.map(w, u1).columns[3].empty());
    CHECK(f.map(w, u1).columns[2] == SparseVec::unit(1, Q.one()));

    // in the square, e1 + e3 sits inside (v0+e0+e3) ⊔ e1 with its two
    // components swapped; for Λ(x) the odd pair x⊗x picks up a sign
    Poset sq = cyclic_cech_poset(4);
    GradedAlgebra ext = algebras::exterior(Q, 1);
    PosetFunctor g = arc_functor(ext, sq);
    std::size_t from = named(sq, "e1+e3"), to = named(sq, "v0+e0+e1+e3");
    REQUIRE(sq.component_map(from, to) == std::vector<std::size_t>{1, 0});
    CHECK(g.map(from, to).columns[3] == SparseVec::unit(3, -Q.one()));
    CHECK(g.map(from, to).columns[1] == SparseVec::unit(2, Q.one()));

    CHECK_THROWS_AS(arc_functor(algebras::matrices(Q, 2), p), ValidationError);
    Poset unlabeled({{"a", 0}}, {});
    CHECK_THROWS_AS(arc_functor(a, unlabeled), ValidationError);
}

TEST_CASE("Euler characteristic of arc-cover homology")
{
    for (int m : {2, 3, 4})
        for (const GradedAlgebra& a : commutative_corpus()) {
            Poset p = cyclic_cech_poset(m);
            PosetFunctor f = arc_functor(a, p);
            BettiTable b = poset_homology(p, f, p.height());
            CHECK(homology_euler_characteristic(b) == chain_euler_characteristic(p, f));
        }
    // two arcs: 4d + d² - (6d + 2d²) + 4d = 2d - d²
    Poset p = cyclic_cech_poset(2);
    for (const GradedAlgebra& a : commutative_corpus()) {
        long d = long(a.dim());
        CHECK(chain_euler_characteristic(p, arc_functor(a, p)) == 2 * d - d * d);
    }
}

TEST_CASE("m arcs reproduce Hochschild homology through s = m - 2")
{
    for (int m : {2, 3, 4}) {
        Poset p = cyclic_cech_poset(m);
        for (const GradedAlgebra& a : commutative_corpus()) {
            PosetFunctor f = arc_functor(a, p);
            BettiTable b = poset_homology(p, f, m - 1);
            CHECK(b.agrees(hh(a, spaces::circle_min(), m - 2), m - 2));
            CHECK(b.total(0) == a.dim());
            CHECK(edge_map(p, f, named(p, "e0")).iso);
        }
    }
    // the window is sharp for Q³ at m = 3
    Poset p3 = cyclic_cech_poset(3);
    GradedAlgebra q3 = algebras::product_of_fields(Q, 3);
    CHECK(poset_homology(p3, arc_functor(q3, p3), 2).total(2) == 6);
    CHECK_FALSE(edge_map(p3, arc_functor(q3, p3), named(p3, "e0")).collapses);
    GradedAlgebra qxq = algebras::product_of_fields(Q, 2);
    CHECK(edge_map(p3, arc_functor(qxq, p3), named(p3, "e0")).collapses);
}

TEST_CASE("two arcs: the surplus in H_1")
{
    Poset p = cyclic_cech_poset(2);
    for (const GradedAlgebra& a : commutative_corpus()) {
        if (!a.concentrated_in_degree_zero() || a.dim() == 1)
            continue;
        PosetFunctor f = arc_functor(a, p);
        BettiTable b = poset_homology(p, f, 2);
        // χ = 2d - d² < d forces H_1 ≠ 0 although H_0 = A
        std::size_t d = a.dim();
        CHECK(b.total(0) == d);
        CHECK(b.total(1) == b.total(2) + d * d - d);
        CHECK_FALSE(b.agrees(hh(a, spaces::circle_min(), 1), 1));
        CHECK_FALSE(edge_map(p, f, named(p, "e0")).collapses);
    }
    CHECK(poset_homology(p, arc_functor(algebras::product_of_fields(Q, 2), p), 1).total(1) == 2);
    GradedAlgebra ext = algebras::exterior(Q, 1);
    CHECK(poset_homology(p, arc_functor(ext, p), 1).agrees(hh(ext, spaces::circle_min(), 1), 1));
}

TEST_CASE("edge map errors")
{
    Poset p = cyclic_cech_poset(2);
    PosetFunctor f = arc_functor(algebras::dual_numbers(Q), p);
    CHECK_THROWS_AS(edge_map(p, f, p.size()), std::invalid_argument);
    CHECK_THROWS_AS(edge_map(p, f, named(p, "e0+e1")), std::invalid_argument);
}

TEST_CASE("Loday-valued coefficients: chain maps and convergence")
{
    for (int m : {2, 3})
        for (const GradedAlgebra& a : {algebras::dual_numbers(Q), algebras::product_of_fields(Q, 2), algebras::exterior(Q, 1)}) {
            Poset p = cyclic_cech_poset(m);
            ChainFunctor f = loday_functor(a, p, spaces::circle_min(), 3);
            CHECK_NOTHROW(f.validate(p));
            DoubleComplex dc = nerve_double_complex(p, f);
            CHECK_FALSE(dc.check());
            CHECK(dc.s_valid == 2);
            CHECK(sseq_converges(dc, sseq_pages(dc)));
        }
    // column 0 of a single object is the Loday complex itself
    Poset one({{"pt", 1}}, {});
    GradedAlgebra a = algebras::dual_numbers(Q);
    DoubleComplex dc = nerve_double_complex(one, loday_functor(a, one, spaces::circle_min(), 3));
    CHECK(homology(total_complex(dc), 2).agrees(hh(a, spaces::circle_min(), 2), 2));
}
