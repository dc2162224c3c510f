#include "hochkit/cli.hpp"

#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hochkit/colim.hpp"
#include "hochkit/errors.hpp"
#include "hochkit/glue.hpp"
#include "hochkit/io.hpp"
#include "hochkit/loday.hpp"

namespace hochkit::cli {

using nlohmann::ordered_json;

// ---------------------------------------------------------------- comparison

ComparisonReport compare_tables(BettiTable left, BettiTable right, int requested_window)
{
    ComparisonReport r;
    r.window = std::min({requested_window, left.s_valid, right.s_valid});
    r.first_mismatch = left.first_mismatch(right, r.window);
    r.agree = !r.first_mismatch;
    r.left = std::move(left);
    r.right = std::move(right);
    return r;
}

std::string ComparisonReport::to_json() const
{
    ordered_json j;
    j["left"] = ordered_json::parse(left.to_json());
    j["right"] = ordered_json::parse(right.to_json());
    j["window"] = window;
    j["verdict"] = agree ? "agree" : "disagree";
    if (first_mismatch)
        j["first_mismatch"] = {{"s", first_mismatch->first},
                               {"t", first_mismatch->second},
                               {"left", left.at(first_mismatch->first, first_mismatch->second)},
                               {"right", right.at(first_mismatch->first, first_mismatch->second)}};
    else
        j["first_mismatch"] = nullptr;
    return j.dump(2);
}

std::string ComparisonReport::to_text() const
{
    std::ostringstream os;
    os << left.truncated(window).to_text() << right.truncated(window).to_text();
    os << "window: s <= " << window << "\nverdict: " << (agree ? "agree" : "disagree") << "\n";
    if (first_mismatch)
        os << "first mismatch at (s, t) = (" << first_mismatch->first << ", " << first_mismatch->second
           << "): " << left.at(first_mismatch->first, first_mismatch->second) << " vs "
           << right.at(first_mismatch->first, first_mismatch->second) << "\n";
    return os.str();
}

namespace {

// ------------------------------------------------------------------ helpers

struct Context {
    const RunSpec& spec;
    std::ostream& out;
    std::optional<Field> field;

    GradedAlgebra algebra() const
    {
        if (spec.algebra.empty())
            throw std::invalid_argument("--algebra is required");
        return io::load_algebra(spec.algebra, field);
    }

    /// Human text unless --json; JSON on stdout with --json; artifact with --out.
    void emit(const std::string& text, const std::string& json) const
    {
        if (spec.json)
            out << json << "\n";
        else
            out << text;
        if (!spec.out.empty())
            io::write_text_file(spec.out, json);
    }
};

SimplicialSet sphere_model(int d)
{
    if (d < 1)
        throw std::invalid_argument("--sphere must be at least 1");
    return d == 1 ? spaces::circle_min() : spaces::sphere_min(d);
}

Poset poset_of(const RunSpec& spec)
{
    if (!spec.poset.empty())
        return io::poset_from_json(io::read_json_file(spec.poset));
    return cyclic_cech_poset(spec.arcs);
}

int p_max_of(const RunSpec& spec)
{
    return spec.p_max >= 0 ? spec.p_max : spec.s_max + 1;
}

std::optional<AlgebraMap> base_of(const Context& c, const GradedAlgebra& a)
{
    if (c.spec.base.empty() != c.spec.base_map.empty())
        throw std::invalid_argument("--base and --base-map go together");
    if (c.spec.base.empty())
        return std::nullopt;
    GradedAlgebra t = io::load_algebra(c.spec.base, c.field);
    return io::map_from_json(io::read_json_file(c.spec.base_map), t, a);
}

/// One of the homology pipelines, by name.
BettiTable pipeline(const Context& c, const std::string& name, const GradedAlgebra& a)
{
    const RunSpec& s = c.spec;
    if (name == "loday")
        return hh(a, io::resolve_space(s.space), s.s_max, base_of(c, a));
    if (name == "oracle")
        return oracle_hh(a, s.s_max);
    if (name == "bar") {
        BettiTable b = homology(total_complex(hochschild_bar(a, p_max_of(s))), s.s_max, "bar");
        return b;
    }
    if (name == "suspension")
        return hh_via_suspension(a, s.sphere, s.s_max);
    if (name == "poset") {
        Poset p = poset_of(s);
        return poset_homology(p, arc_functor(a, p), std::min(s.s_max, p.height()));
    }
    throw std::invalid_argument("unknown pipeline '" + name + "' (loday, oracle, bar, suspension, poset)");
}

std::string yes(bool b)
{
    return b ? "true" : "false";
}

// -------------------------------------------------------------- subcommands

int cmd_table(const Context& c, const BettiTable& b)
{
    c.emit(b.to_text(), b.to_json());
    return ok;
}

int cmd_poset_hh(const Context& c)
{
    const RunSpec& s = c.spec;
    Poset p = poset_of(s);
    PosetFunctor f = s.algebra.empty() ? constant_functor(p, c.field.value_or(Field::rationals()))
                                       : arc_functor(c.algebra(), p);
    int s_max = std::min(s.s_max, p.height());
    BettiTable b = poset_homology(p, f, s_max);
    ordered_json j = ordered_json::parse(b.to_json());
    std::string text = b.to_text();
    if (!s.edge.empty()) {
        auto x0 = p.find(s.edge);
        if (!x0)
            throw std::invalid_argument("--edge: no object named '" + s.edge + "'");
        EdgeMap e = edge_map(p, f, *x0);
        j["edge_map"] = {{"object", s.edge}, {"iso", e.iso}, {"collapses", e.collapses}};
        text += "edge map at " + s.edge + ": iso onto H_0: " + yes(e.iso) + "; collapse: " + yes(e.collapses) + "\n";
    }
    c.emit(text, j.dump(2));
    return ok;
}

int cmd_sseq(const Context& c)
{
    const RunSpec& s = c.spec;
    GradedAlgebra a = c.algebra();
    DoubleComplex dc;
    if (s.source == "bar")
        dc = hochschild_bar(a, p_max_of(s));
    else if (s.source == "suspension")
        dc = suspension_bar(a, s.sphere, s.s_max);
    else if (s.source == "poset") {
        Poset p = poset_of(s);
        dc = nerve_double_complex(p, loday_functor(a, p, io::resolve_space(s.space), s.s_max + 1));
    } else
        throw std::invalid_argument("--source must be bar, suspension or poset");
    if (auto err = dc.check())
        throw ValidationError("double complex: " + *err);
    SseqOptions options;
    options.r_max = s.r_max;
    std::vector<SpectralSequencePage> pages = sseq_pages(dc, options);
    bool converges = sseq_converges(dc, pages);

    ordered_json j;
    j["source"] = s.source;
    j["s_valid"] = dc.s_valid;
    j["pages"] = ordered_json::array();
    std::ostringstream text;
    text << "source: " << s.source << "   s_valid: " << dc.s_valid << "\n";
    for (const SpectralSequencePage& page : pages) {
        ordered_json pj;
        pj["r"] = page.r < 0 ? ordered_json("infinity") : ordered_json(page.r);
        pj["entries"] = ordered_json::array();
        for (const auto& [key, dim] : page.dims)
            pj["entries"].push_back({{"p", key[0]}, {"q", key[1]}, {"t", key[2]}, {"dim", dim}});
        j["pages"].push_back(pj);

        text << (page.r < 0 ? std::string("E^inf") : "E^" + std::to_string(page.r)) << "  (rows q, columns p)\n";
        int p_hi = 0, q_hi = 0;
        for (const auto& [key, dim] : page.dims) {
            p_hi = std::max(p_hi, key[0]);
            q_hi = std::max(q_hi, key[1]);
        }
        text << std::setw(4) << "q\\p";
        for (int p = 0; p <= p_hi; ++p)
            text << std::setw(7) << p;
        text << "\n";
        for (int q = 0; q <= q_hi; ++q) {
            text << std::setw(4) << q;
            for (int p = 0; p <= p_hi; ++p)
                text << std::setw(7) << page.at(p, q);
            text << "\n";
        }
    }
    j["converges"] = converges;
    text << "converges: " << yes(converges) << "\n";
    c.emit(text.str(), j.dump(2));
    return ok;
}

int cmd_etale_check(const Context& c)
{
    const RunSpec& s = c.spec;
    GradedAlgebra a = c.algebra();
    bool degree_zero = a.concentrated_in_degree_zero();
    bool etale = a.commutative() && degree_zero && is_etale(a);
    BettiTable b = hh(a, sphere_model(s.sphere), s.s_max);
    BettiTable expect{b.provenance, b.s_valid, {}};
    for (const auto& [t, n] : a.degree_profile())
        expect.entries[{0, t}] = n;
    bool iso = b.agrees(expect, b.s_valid);
    std::string label = "HH^{S^" + std::to_string(s.sphere) + "} ≅ A";
    ordered_json j;
    j["etale"] = etale;
    j["sphere"] = s.sphere;
    j["concentrated"] = iso;
    j["table"] = ordered_json::parse(b.to_json());
    std::string text = b.to_text() + "étale: " + yes(etale) + "; " + label + ": " + yes(iso) + "\n";
    c.emit(text, j.dump(2));
    return ok;
}

int cmd_compare(const Context& c)
{
    const RunSpec& s = c.spec;
    if (s.left.empty() || s.right.empty())
        throw std::invalid_argument("--left and --right are required");
    GradedAlgebra a = c.algebra();
    ComparisonReport r = compare_tables(pipeline(c, s.left, a), pipeline(c, s.right, a), s.s_max);
    c.emit(r.to_text(), r.to_json());
    return r.agree ? ok : mismatch;
}

int cmd_validate(const Context& c)
{
    const RunSpec& s = c.spec;
    ordered_json j = ordered_json::object();
    std::ostringstream text;
    bool any = false;
    std::optional<GradedAlgebra> a;
    if (!s.algebra.empty()) {
        a = c.algebra();
        bool etale = a->commutative() && a->concentrated_in_degree_zero() && is_etale(*a);
        j["algebra"] = {{"path", s.algebra}, {"dim", a->dim()}, {"commutative", a->commutative()}, {"etale", etale}};
        text << "algebra " << s.algebra << ": valid (dim " << a->dim() << ", commutative " << yes(a->commutative())
             << ", étale " << yes(etale) << ")\n";
        any = true;
    }
    if (!s.base.empty() || !s.base_map.empty()) {
        if (!a)
            throw std::invalid_argument("--base needs --algebra");
        AlgebraMap f = *base_of(c, *a);
        FreenessReport free = check_free(f);
        j["base"] = {{"path", s.base}, {"map", s.base_map}, {"free", free.free}, {"rank", free.rank}};
        text << "base map " << s.base_map << ": valid (free " << yes(free.free) << ", rank " << free.rank << ")\n";
        any = true;
    }
    if (!s.poset.empty()) {
        Poset p = poset_of(s);
        j["poset"] = {{"path", s.poset}, {"objects", p.size()}, {"height", p.height()}};
        text << "poset " << s.poset << ": valid (" << p.size() << " objects, height " << p.height() << ")\n";
        if (a && p.labeled()) {
            arc_functor(*a, p);
            text << "arc functor: functorial\n";
        }
        any = true;
    }
    if (!s.left.empty() || !s.right.empty()) {
        if (!a)
            throw std::invalid_argument("--left/--right modules need --algebra");
        for (const std::string& m : {s.left, s.right})
            if (!m.empty()) {
                LeftModule mod = io::resolve_module(m, *a);
                j["modules"].push_back({{"path", m}, {"dim", mod.dim()}});
                text << "module " << m << ": valid (dim " << mod.dim() << ")\n";
            }
        any = true;
    }
    if (s.space != "circle:min" || !any) {
        SimplicialSet x = io::resolve_space(s.space);
        j["space"] = {{"descriptor", s.space}, {"cells", x.cells().size()}, {"top_dim", x.top_dim()}};
        text << "space " << s.space << ": valid (" << x.cells().size() << " cells)\n";
    }
    c.emit(text.str(), j.dump(2));
    return ok;
}

int dispatch(const RunSpec& s, std::ostream& out)
{
    Context c{s, out, s.field.empty() ? std::nullopt : std::optional<Field>(parse_field(s.field))};
    if (s.s_max < 0 || s.n_max < 1 || s.arcs < 2 || s.r_max < 0)
        throw std::invalid_argument("bounds must be positive (--smax >= 0, --nmax >= 1, --arcs >= 2)");
    const std::string& cmd = s.command;
    if (cmd == "hh")
        return cmd_table(c, pipeline(c, "loday", c.algebra()));
    if (cmd == "hh-bar")
        return cmd_table(c, pipeline(c, "suspension", c.algebra()));
    if (cmd == "oracle-hh")
        return cmd_table(c, pipeline(c, "oracle", c.algebra()));
    if (cmd == "cohomology") {
        GradedAlgebra a = c.algebra();
        return cmd_table(c, hochschild_cohomology(a, regular_bimodule(a), s.n_max));
    }
    if (cmd == "rhom") {
        GradedAlgebra a = c.algebra();
        LeftModule m = io::resolve_module(s.left.empty() ? "regular" : s.left, a);
        LeftModule n = io::resolve_module(s.right.empty() ? "regular" : s.right, a);
        return cmd_table(c, cobar(m, a, n, s.n_max));
    }
    if (cmd == "poset-hh")
        return cmd_poset_hh(c);
    if (cmd == "sseq")
        return cmd_sseq(c);
    if (cmd == "etale-check")
        return cmd_etale_check(c);
    if (cmd == "compare")
        return cmd_compare(c);
    if (cmd == "validate")
        return cmd_validate(c);
    throw std::invalid_argument("unknown command " + cmd);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunSpec spec;
    CLI::App app{"Exact higher Hochschild homology of finite-dimensional algebras", "hochkit"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--field", spec.field, "Override the field: Q or Fp:<p>");
        sub->add_option("--out", spec.out, "Write the JSON artifact here");
        sub->add_flag("--json", spec.json, "Print JSON instead of the table");
    };
    auto algebra = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--algebra", spec.algebra, "Algebra JSON file")->check(CLI::ExistingFile);
        if (required)
            o->required();
    };
    auto smax = [&](CLI::App* sub) { sub->add_option("--smax", spec.s_max, "Largest homological degree"); };

    CLI::App* hh_cmd = app.add_subcommand("hh", "HH^X(A) from the Loday construction");
    algebra(hh_cmd, true);
    hh_cmd->add_option("--space", spec.space, "Builtin descriptor or simplicial set JSON file");
    hh_cmd->add_option("--base", spec.base, "Base algebra T (relative homology)")->check(CLI::ExistingFile);
    hh_cmd->add_option("--base-map", spec.base_map, "Structure map T -> A as {\"images\": ...}")
        ->check(CLI::ExistingFile);
    smax(hh_cmd);

    CLI::App* bar_cmd = app.add_subcommand("hh-bar", "HH^{S^d}(A) by the suspension bar recursion");
    algebra(bar_cmd, true);
    bar_cmd->add_option("--sphere", spec.sphere, "Sphere dimension d >= 1");
    smax(bar_cmd);

    CLI::App* oracle_cmd = app.add_subcommand("oracle-hh", "HH(A) from the cyclic bar complex");
    algebra(oracle_cmd, true);
    smax(oracle_cmd);

    CLI::App* coh_cmd = app.add_subcommand("cohomology", "Hochschild cohomology HH^*(A, A)");
    algebra(coh_cmd, true);
    coh_cmd->add_option("--nmax", spec.n_max, "Cochain degrees computed (cohomology through nmax - 1)");

    CLI::App* rhom_cmd = app.add_subcommand("rhom", "Ext_A(M, N) from the cobar complex");
    algebra(rhom_cmd, true);
    rhom_cmd->add_option("--left", spec.left, "Module M: JSON file or 'regular'");
    rhom_cmd->add_option("--right", spec.right, "Module N: JSON file or 'regular'");
    rhom_cmd->add_option("--nmax", spec.n_max, "Cochain degrees computed");

    CLI::App* poset_cmd = app.add_subcommand("poset-hh", "Homology of a poset with arc-functor coefficients");
    algebra(poset_cmd, false);
    poset_cmd->add_option("--poset", spec.poset, "Poset JSON file")->check(CLI::ExistingFile);
    poset_cmd->add_option("--arcs", spec.arcs, "Arc cover of the circle with m arcs (when no --poset)");
    poset_cmd->add_option("--edge", spec.edge, "Report the edge map at this object");
    smax(poset_cmd);

    CLI::App* sseq_cmd = app.add_subcommand("sseq", "Spectral sequence pages of a double complex");
    algebra(sseq_cmd, true);
    sseq_cmd->add_option("--source", spec.source, "bar | suspension | poset");
    sseq_cmd->add_option("--sphere", spec.sphere, "Sphere dimension for --source suspension");
    sseq_cmd->add_option("--pmax", spec.p_max, "Bar columns for --source bar (default smax + 1)");
    sseq_cmd->add_option("--poset", spec.poset, "Poset JSON file for --source poset")->check(CLI::ExistingFile);
    sseq_cmd->add_option("--arcs", spec.arcs, "Arc cover for --source poset");
    sseq_cmd->add_option("--space", spec.space, "Space of the Loday coefficients for --source poset");
    sseq_cmd->add_option("--rmax", spec.r_max, "Last finite page");
    smax(sseq_cmd);

    CLI::App* etale_cmd = app.add_subcommand("etale-check", "Is A étale and HH^{S^d}(A) = A?");
    algebra(etale_cmd, true);
    etale_cmd->add_option("--sphere", spec.sphere, "Sphere dimension d >= 1");
    smax(etale_cmd);

    CLI::App* cmp_cmd = app.add_subcommand("compare", "Compare two pipelines entrywise");
    algebra(cmp_cmd, true);
    cmp_cmd->add_option("--left", spec.left, "loday | oracle | bar | suspension | poset")->required();
    cmp_cmd->add_option("--right", spec.right, "loday | oracle | bar | suspension | poset")->required();
    cmp_cmd->add_option("--space", spec.space, "Space for the loday pipeline");
    cmp_cmd->add_option("--sphere", spec.sphere, "Sphere dimension for the suspension pipeline");
    cmp_cmd->add_option("--arcs", spec.arcs, "Arc cover for the poset pipeline");
    cmp_cmd->add_option("--poset", spec.poset, "Poset file for the poset pipeline")->check(CLI::ExistingFile);
    cmp_cmd->add_option("--base", spec.base, "Base algebra for the loday pipeline")->check(CLI::ExistingFile);
    cmp_cmd->add_option("--base-map", spec.base_map, "Structure map for the loday pipeline")->check(CLI::ExistingFile);
    smax(cmp_cmd);

    CLI::App* val_cmd = app.add_subcommand("validate", "Validate input files");
    algebra(val_cmd, false);
    val_cmd->add_option("--space", spec.space, "Builtin descriptor or simplicial set JSON file");
    val_cmd->add_option("--poset", spec.poset, "Poset JSON file")->check(CLI::ExistingFile);
    val_cmd->add_option("--module", spec.left, "Left module JSON file (with --algebra)");
    val_cmd->add_option("--base", spec.base, "Base algebra")->check(CLI::ExistingFile);
    val_cmd->add_option("--base-map", spec.base_map, "Structure map")->check(CLI::ExistingFile);

    for (CLI::App* sub : app.get_subcommands({}))
        common(sub);

    std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(reversed.begin(), reversed.end());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }
    for (CLI::App* sub : app.get_subcommands())
        spec.command = sub->get_name();

    try {
        return dispatch(spec, out);
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return invalid;
    } catch (const TruncationError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    }
}

} // namespace hochkit::cli
