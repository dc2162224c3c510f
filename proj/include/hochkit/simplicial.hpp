/**
 * Finite simplicial sets stored by their nondegenerate cells.
 *
 * A simplex is kept in Eilenberg–Zilber canonical form s_{i_1}…s_{i_k} x
 * (i_1 > … > i_k, x nondegenerate). Equivalently it is the pullback of x
 * along a monotone surjection η : [n] → [dim x]; bit j of `degeneracies`
 * is set exactly when η(j) = η(j+1). Faces and degeneracies are computed by
 * composing these surjections with coface/codegeneracy maps, which is the
 * rewriting of d_i s_j by the simplicial identities.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hochkit {

struct Simplex {
    std::uint32_t base = 0;         // index of the nondegenerate cell
    std::uint32_t degeneracies = 0; // bit j set  <=>  η(j) = η(j+1)

    friend bool operator==(const Simplex& a, const Simplex& b)
    {
        return a.base == b.base && a.degeneracies == b.degeneracies;
    }
    friend bool operator!=(const Simplex& a, const Simplex& b) { return !(a == b); }
};

struct Cell {
    std::string name;
    int dim = 0;
    std::vector<Simplex> faces; // d_0 … d_dim, each at level dim-1
};

/// Face entry of a cell description: base cell name and degeneracy word
/// [i_1, …, i_k] meaning s_{i_1} … s_{i_k} base.
struct FaceSpec {
    std::string base;
    std::vector<int> word;
};

struct CellSpec {
    int dim = 0;
    std::string name;
    std::vector<FaceSpec> faces;
};

inline constexpr int kMaxLevel = 30;

class SimplicialSet {
public:
    SimplicialSet() = default;

    /// Validates face data and the simplicial identities on every cell.
    static SimplicialSet from_cells(const std::vector<CellSpec>& cells);

    const std::vector<Cell>& cells() const { return cells_; }
    const Cell& cell(std::uint32_t i) const { return cells_[i]; }
    std::optional<std::uint32_t> find_cell(const std::string& name) const;
    int top_dim() const;

    /// Level of a simplex: dim(base) + number of degeneracies.
    int level(const Simplex& s) const;

    /// Monotone surjection η : [n] → [dim base].
    std::vector<int> surjection(const Simplex& s) const;
    /// Canonical simplex for base pulled back along surjection η.
    static Simplex from_surjection(std::uint32_t base, const std::vector<int>& eta);

    Simplex face(const Simplex& s, int i) const;
    Simplex degeneracy(const Simplex& s, int j) const;
    /// s_{i_1} … s_{i_k} base (applied right to left); validates indices.
    Simplex apply_word(std::uint32_t base, const std::vector<int>& word) const;
    /// Canonical word i_1 > … > i_k.
    static std::vector<int> word(const Simplex& s);

    /// All simplices at level n: by base (cell order), then by word lexicographically.
    std::vector<Simplex> level_simplices(int n) const;

    /// Checks d_i d_j = d_{j-1} d_i (i < j) on every simplex up to max_level.
    /// Returns a description of the first violation, if any.
    std::optional<std::string> check_identities(int max_level) const;

    std::string describe(const Simplex& s) const;

private:
    std::vector<Cell> cells_;
    std::unordered_map<std::string, std::uint32_t> names_;
};

/// level_simplices(n) together with a reverse lookup.
class LevelIndex {
public:
    LevelIndex(const SimplicialSet& x, int n);

    int level() const { return level_; }
    const std::vector<Simplex>& simplices() const { return simplices_; }
    std::size_t size() const { return simplices_.size(); }
    /// Throws std::out_of_range when s is not at this level.
    std::size_t position(const Simplex& s) const;

private:
    static std::uint64_t key(const Simplex& s) { return (std::uint64_t(s.base) << 32) | s.degeneracies; }

    int level_;
    std::vector<Simplex> simplices_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Map given on nondegenerate cells (image at the same level, canonical form).
class SimplicialMap {
public:
    SimplicialMap() = default;
    /// Validates that faces commute; throws ValidationError otherwise.
    SimplicialMap(SimplicialSet source, SimplicialSet target, std::vector<Simplex> cell_images);

    const SimplicialSet& source() const { return source_; }
    const SimplicialSet& target() const { return target_; }
    Simplex apply(const Simplex& s) const;

    /// Index map X_n → Y_n on the level orders.
    std::vector<std::size_t> level_map(int n) const;

    /// Levelwise verification of face and degeneracy compatibility up to max_level.
    bool check(int max_level) const;

private:
    SimplicialSet source_;
    SimplicialSet target_;
    std::vector<Simplex> images_;
};

namespace spaces {
SimplicialSet point();
SimplicialSet interval();
SimplicialSet circle_min();
SimplicialSet sphere_min(int d);
SimplicialSet simplex(int n);
SimplicialSet boundary(int n);
SimplicialSet circle_subdiv(int m);
SimplicialSet disjoint_union(const SimplicialSet& x, const SimplicialSet& y);
/// Parses "point", "interval", "circle:min", "circle:<m>", "sphere:<d>",
/// "simplex:<n>", "boundary:<n>", "union:<spec>+<spec>…".
SimplicialSet builtin(const std::string& descriptor);
} // namespace spaces

/// The fold X ⊔ X → X.
SimplicialMap fold_map(const SimplicialSet& x);

/// X → pt.
SimplicialMap collapse_to_point(const SimplicialSet& x);

} // namespace hochkit
