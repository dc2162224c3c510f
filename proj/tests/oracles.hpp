// Independent reference computations for tests. Nothing here calls into the
// library's elimination code: ranks use a plain dense mpq Gaussian sweep.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<mpq_class>>; // row-major

inline std::size_t dense_rank(Dense m)
{
    std::size_t rank = 0;
    std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0)
            ++piv;
        if (piv == m.size())
            continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][c] == 0)
                continue;
            mpq_class f = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k)
                m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

/// Rank over F_p of an integer matrix.
inline std::size_t dense_rank_mod(std::vector<std::vector<long>> m, long p)
{
    auto md = [p](long v) { return ((v % p) + p) % p; };
    auto inv = [&](long a) {
        long r = 1, b = md(a), e = p - 2;
        while (e) {
            if (e & 1)
                r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    std::size_t rank = 0;
    std::size_t cols = m.empty() ? 0 : m[0].size();
    for (auto& row : m)
        for (auto& v : row)
            v = md(v);
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0)
            ++piv;
        if (piv == m.size())
            continue;
        std::swap(m[piv], m[rank]);
        long iv = inv(m[rank][c]);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][c] == 0)
                continue;
            long f = m[r][c] * iv % p;
            for (std::size_t k = c; k < cols; ++k)
                m[r][k] = md(m[r][k] - f * m[rank][k]);
        }
        ++rank;
    }
    return rank;
}

} // namespace oracle
