#include "doctest.h"

#include "hochkit/scalar.hpp"
#include "hochkit/sparse.hpp"

using namespace hochkit;

TEST_CASE("rational arithmetic is exact and canonical")
{
    Field q = Field::rationals();
    Scalar a = q.parse("6/-4");
    CHECK(a.str() == "-3/2");
    CHECK((a * a.inverse()).is_one());
    CHECK((q.parse("1/3") + q.parse("2/3")).is_one());
    CHECK(q.parse("0/5").str() == "0");
    CHECK_THROWS(q.parse("1/0"));
}

TEST_CASE("prime field residues and Fermat")
{
    Field f = Field::prime(7);
    for (long v = 0; v < 7; ++v) {
        Scalar x = f.from_int(v);
        CHECK(x.pow(7) == x);
    }
    CHECK(f.from_int(-1).str() == "6");
    CHECK(f.parse("1/3").str() == "5");
    CHECK_THROWS(f.parse("1/7"));
    CHECK_THROWS(Field::prime(8));
    Field big = Field::prime(2147483647u);
    Scalar y = big.from_int(2147483646);
    CHECK((y * y).is_one());
}

TEST_CASE("field descriptors")
{
    CHECK(parse_field("Q").is_rational());
    CHECK(parse_field("Fp:5").characteristic() == 5);
    CHECK(parse_field("F2").characteristic() == 2);
    CHECK_THROWS(parse_field("Fp:9"));
}

TEST_CASE("mixing fields is rejected")
{
    CHECK_THROWS(Field::prime(3).one() + Field::rationals().one());
}

TEST_CASE("echelon rank, reduction and kernel")
{
    Field q = Field::rationals();
    auto v = [&](std::vector<long> xs) {
        std::vector<Term> t;
        for (std::size_t i = 0; i < xs.size(); ++i)
            t.push_back({i, q.from_int(xs[i])});
        return SparseVec::from_terms(t);
    };
    Echelon e(q, true);
    CHECK(e.add(v({1, 2, 3})));
    CHECK(e.add(v({0, 1, 1})));
    CHECK_FALSE(e.add(v({2, 5, 7})));
    CHECK(e.rank() == 2);
    REQUIRE(e.relations().size() == 1);
    // proportional to 2·g0 + g1 - g2
    const SparseVec& rel = e.relations()[0];
    Scalar c = *rel.find(1);
    CHECK(*rel.find(0) == c * q.from_int(2));
    CHECK(*rel.find(2) == -c);
    SparseVec r = e.reduce(v({5, 0, 0}));
    CHECK(r.nnz() == 1);
    CHECK(r.leading().index == 2);
    CHECK(rank_of(q, {v({1, 1}), v({2, 2}), v({0, 0})}) == 1);
    CHECK(kernel_of(q, {v({1, 0}), v({0, 1}), v({1, 1})}).size() == 1);
}

TEST_CASE("rank_of is exact when the rank drops modulo the working prime")
{
    Field q = Field::rationals();
    // det = 2^31 - 1 vanishes mod 2^31 - 1 but not over Q
    auto col = [&](long a, long b) { return SparseVec::from_terms({{0, q.from_int(a)}, {1, q.from_int(b)}}); };
    std::vector<SparseVec> m{col(1, 0), col(0, 2147483647L)};
    CHECK(rank_of(q, m) == 2);
    CHECK(rank_of(q, m, 1) == 1);
    // denominators divisible by the prime skip the modular pass
    std::vector<SparseVec> frac{SparseVec::unit(0, q.from_rational(mpq_class(1, 2147483647L))), col(1, 1)};
    CHECK(rank_of(q, frac) == 2);
    Field f3 = Field::prime(3);
    CHECK(rank_of(f3, {SparseVec::from_terms({{0, f3.from_int(1)}, {1, f3.from_int(1)}}),
                       SparseVec::from_terms({{0, f3.from_int(2)}, {1, f3.from_int(2)}})}) == 1);
}
