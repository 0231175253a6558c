#include "coco/cli.hpp"

#include "coco/algebra.hpp"
#include "coco/analysis.hpp"
#include "coco/constructors.hpp"
#include "coco/feasibility.hpp"
#include "coco/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace coco::cli {

namespace {

using nlohmann::json;

constexpr const char *version_string = "coco 1.0.0";

class IoFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string &path)
{
    try {
        return read_text_file(path);
    } catch (const std::exception &e) {
        throw IoFailure(e.what());
    }
}

void write_output(const std::string &path, const std::string &text)
{
    try {
        write_text_file(path, text);
    } catch (const std::exception &e) {
        throw IoFailure(e.what());
    }
}

Scheme load_scheme(const std::string &path)
{
    return scheme_from_text(read_input(path));
}

template <class T>
std::string braces(const std::vector<T> &v)
{
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    return out + "}";
}

std::vector<std::size_t> parse_list(const std::string &text)
{
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &pos);
        } catch (const std::exception &) {
            throw CLI::ValidationError("list", "'" + tok + "' is not a non-negative integer");
        }
        if (pos != tok.size())
            throw CLI::ValidationError("list", "'" + tok + "' is not a non-negative integer");
        out.push_back(v);
    }
    return out;
}

json idempotents_json(const IdempotentDecomposition &dec)
{
    json out;
    out["center_dimension"] = dec.center_dimension;
    out["attempts"] = dec.attempts;
    out["principal_index"] = dec.principal_index;
    const auto &r = dec.residuals;
    out["residuals"] = {{"idempotency", r.idempotency},       {"orthogonality", r.orthogonality},
                        {"centrality", r.centrality},         {"completeness", r.completeness},
                        {"trace_integrality", r.trace_integrality}, {"rank_gap", r.rank_gap}};
    out["idempotents"] = json::array();
    for (std::size_t i = 0; i < dec.size(); ++i) {
        const auto &p = dec.idempotents[i];
        out["idempotents"].push_back({{"index", i},
                                      {"m", p.multiplicity},
                                      {"n", p.degree},
                                      {"support", p.support},
                                      {"principal", i == dec.principal_index}});
    }
    return out;
}

void dump_matrices(const IdempotentDecomposition &dec, const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoFailure("cannot create " + dir.string() + ": " + ec.message());
    for (std::size_t i = 0; i < dec.size(); ++i) {
        const auto &m = dec.idempotents[i].matrix;
        std::ostringstream text;
        text << std::setprecision(17);
        text << "rows=" << m.rows() << " cols=" << m.cols() << '\n';
        for (Eigen::Index a = 0; a < m.rows(); ++a) {
            for (Eigen::Index b = 0; b < m.cols(); ++b)
                text << (b ? " " : "") << m(a, b).real() << ',' << m(a, b).imag();
            text << '\n';
        }
        write_output((dir / ("P" + std::to_string(i) + ".txt")).string(), text.str());
    }
}

json verdict_json(const FilterVerdict &v)
{
    json out;
    out["status"] = v.status == VerdictStatus::Eliminated ? "eliminated" : "survives";
    out["rule"] = v.rule ? json(rule_name(*v.rule)) : json(nullptr);
    out["trace"] = v.trace;
    return out;
}

json profile_json(const DegreeProfile &p)
{
    return {{"m", p.m}, {"r", p.r}, {"d_x", p.d_x}, {"d_xy", p.d_xy}};
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Coherent configuration toolkit: verification, adjacency algebra, balance analysis and "
                 "parameter feasibility."};
    app.name("coco");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", version_string);

    AlgebraOptions alg;
    app.add_option("--seed", alg.seed, "seed for the generic central element")->capture_default_str();
    app.add_option("--eigencluster-tol", alg.eigencluster_tol, "eigenvalue clustering gap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--rank-tol", alg.rank_tol, "relative rank threshold")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--idempotency-tol", alg.idempotency_tol, "residual bound for the idempotents")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::string input;

    auto *verify = app.add_subcommand("verify", "check the coherent configuration axioms");
    verify->add_option("file", input, "color matrix (.cc)")->required();

    auto *info = app.add_subcommand("info", "print the combinatorial profile");
    info->add_option("file", input, "color matrix (.cc)")->required();
    bool info_json = false;
    info->add_flag("--json", info_json);

    auto *idem = app.add_subcommand("idempotents", "central primitive idempotents of the adjacency algebra");
    idem->add_option("file", input, "color matrix (.cc)")->required();
    bool idem_json = false;
    std::string dump_dir;
    idem->add_flag("--json", idem_json);
    idem->add_option("--dump-matrices", dump_dir, "write P<i>.txt with re,im entries into this directory");

    auto *check = app.add_subcommand("check", "check the balance theorems on an instance");
    check->add_option("file", input, "color matrix (.cc)")->required();
    std::string theorem = "all";
    check->add_option("--theorem", theorem,
                      "1: balance characterization, 2: one or two idempotents, 3: reduced fiber bound")
        ->check(CLI::IsMember({"1", "2", "3", "all"}))
        ->capture_default_str();

    auto *construct = app.add_subcommand("construct", "build a scheme and write it as a color matrix");
    construct->require_subcommand(1);
    std::string output;
    std::size_t trivial_n = 0;
    std::string second;
    std::string fibers_text;
    std::string fixture;
    auto add_out = [&](CLI::App *sub) { sub->add_option("-o,--output", output, "output .cc file")->required(); };
    auto *c_trivial = construct->add_subcommand("trivial", "trivial scheme on n points");
    c_trivial->add_option("n", trivial_n)->required()->check(CLI::PositiveNumber);
    auto *c_tensor = construct->add_subcommand("tensor", "tensor product");
    c_tensor->add_option("a", input)->required();
    c_tensor->add_option("b", second)->required();
    auto *c_restrict = construct->add_subcommand("restrict", "restriction to a set of fibers");
    c_restrict->add_option("a", input)->required();
    c_restrict->add_option("--fibers", fibers_text, "comma-separated fiber indices")->required();
    auto *c_dsum = construct->add_subcommand("dsum", "internal direct sum");
    c_dsum->add_option("a", input)->required();
    c_dsum->add_option("b", second)->required();
    auto *c_design = construct->add_subcommand("design", "scheme of a symmetric design");
    c_design->add_option("incidence", input)->required();
    auto *c_orbit = construct->add_subcommand("two-orbit", "2-orbit scheme of a permutation group");
    c_orbit->add_option("generators", input)->required();
    auto *c_fixture = construct->add_subcommand("fixture", "bundled fixture");
    c_fixture->add_option("name", fixture)->required()->check(CLI::IsMember(fixture_names()));
    for (auto *sub : {c_trivial, c_tensor, c_restrict, c_dsum, c_design, c_orbit, c_fixture})
        add_out(sub);

    auto *filter = app.add_subcommand("filter", "apply the elimination rules to degree profiles");
    std::size_t fm = 0, fr = 0;
    std::string catalog_path, rules_text, dx_text, dxy_text;
    bool filter_json = false, no_overlap = false, no_stabilizer = false;
    std::size_t budget = CspOptions{}.node_budget;
    filter->add_option("--m", fm, "fiber size")->required()->check(CLI::PositiveNumber);
    filter->add_option("--r", fr, "relations per fiber pair")->required()->check(CLI::PositiveNumber);
    filter->add_option("--catalog", catalog_path, "known homogeneous d_X multisets");
    filter->add_option("--rules", rules_text, "comma-separated rule names, in order");
    filter->add_option("--dx", dx_text, "only this d_X, comma-separated");
    filter->add_option("--dxy", dxy_text, "only this d_XY, comma-separated");
    filter->add_option("--node-budget", budget, "search nodes per case")->capture_default_str();
    filter->add_flag("--no-overlap", no_overlap, "drop the overlap side constraint");
    filter->add_flag("--no-stabilizer", no_stabilizer, "drop the stabilizer side constraint");
    filter->add_flag("--json", filter_json);

    auto *table = app.add_subcommand("table", "run the filter over r in 2..5, m in 4..m-max");
    std::size_t m_max = 11;
    table->add_option("--m-max", m_max)->check(CLI::Range(4, 16))->capture_default_str();
    table->add_option("--catalog", catalog_path, "known homogeneous d_X multisets");
    bool table_json = false;
    table->add_flag("--json", table_json);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return UsageOrIo;
    }

    try {
        if (*verify) {
            const auto s = load_scheme(input);
            out << "ok: " << s.point_count() << " points, " << s.fiber_count() << " fibers, " << s.relation_count()
                << " relations\n";
            return Ok;
        }

        if (*info) {
            const auto s = load_scheme(input);
            const auto p = profile(s);
            const auto split = find_direct_sum_split(s);
            std::vector<std::size_t> sizes;
            for (const auto &f : s.fibers())
                sizes.push_back(f.size());
            if (info_json) {
                json j{{"points", s.point_count()},
                       {"relations", s.relation_count()},
                       {"fibers", p.n},
                       {"fiber_sizes", sizes},
                       {"balanced", p.is_balanced},
                       {"r", p.r ? json(*p.r) : json(nullptr)},
                       {"half_homogeneous", p.is_half_homogeneous},
                       {"m", p.m ? json(*p.m) : json(nullptr)},
                       {"reduced", p.is_reduced},
                       {"p_valenced_primes", p.p_valenced_primes},
                       {"all_degrees_one", p.all_degrees_one},
                       {"e_c_classes", p.e_c_classes},
                       {"thin_relations", p.thin_relations.size()},
                       {"direct_sum_components", split.components}};
                out << j.dump(2) << '\n';
                return Ok;
            }
            out << "points: " << s.point_count() << '\n';
            out << "relations: " << s.relation_count() << '\n';
            out << "fibers: " << p.n << '\n';
            out << "fiber sizes: " << braces(sizes) << '\n';
            out << "balanced: " << yes_no(p.is_balanced) << '\n';
            out << "r: " << (p.r ? std::to_string(*p.r) : "-") << '\n';
            out << "half-homogeneous: " << yes_no(p.is_half_homogeneous) << '\n';
            out << "m: " << (p.m ? std::to_string(*p.m) : "-") << '\n';
            out << "reduced: " << yes_no(p.is_reduced) << '\n';
            out << "p-valenced primes: "
                << (p.all_degrees_one ? std::string("all") : braces(p.p_valenced_primes)) << '\n';
            out << "E_C classes:";
            for (const auto &c : p.e_c_classes)
                out << ' ' << braces(c);
            out << '\n';
            out << "thin relations: " << p.thin_relations.size() << '\n';
            out << "direct-sum components:";
            for (const auto &c : split.components)
                out << ' ' << braces(c);
            out << '\n';
            return Ok;
        }

        if (*idem) {
            const auto s = load_scheme(input);
            const auto dec = central_primitive_idempotents(s, alg);
            if (! dump_dir.empty())
                dump_matrices(dec, dump_dir);
            if (idem_json) {
                out << idempotents_json(dec).dump(2) << '\n';
                return Ok;
            }
            for (std::size_t i = 0; i < dec.size(); ++i) {
                const auto &p = dec.idempotents[i];
                out << 'P' << i << ": m=" << p.multiplicity << " n=" << p.degree << " supp=" << braces(p.support)
                    << " principal=" << (i == dec.principal_index ? "true" : "false") << '\n';
            }
            const auto &r = dec.residuals;
            err << "center dimension " << dec.center_dimension << ", attempts " << dec.attempts
                << ", residuals: idempotency " << r.idempotency << ", orthogonality " << r.orthogonality
                << ", centrality " << r.centrality << ", trace integrality " << r.trace_integrality << '\n';
            return Ok;
        }

        if (*check) {
            const auto s = load_scheme(input);
            bool consistent = true;
            std::optional<IdempotentDecomposition> dec;
            auto need_dec = [&]() -> const IdempotentDecomposition & {
                if (! dec)
                    dec = central_primitive_idempotents(s, alg);
                return *dec;
            };
            auto report = [&](const char *number, const char *title, const TheoremCheck &c) {
                out << "theorem " << number << " (" << title << "): " << to_string(c.verdict) << '\n';
                for (const auto &d : c.details)
                    out << "  " << d << '\n';
                if (c.bipartition)
                    out << "  bipartition: " << braces(c.bipartition->first) << " | " << braces(c.bipartition->second)
                        << '\n';
                if (! c.consistent) {
                    consistent = false;
                    err << "inconsistency in theorem " << number << '\n';
                }
            };
            if (theorem == "1" || theorem == "all")
                report("1", "balance characterization", check_balance_characterization(s, need_dec(), alg));
            if (theorem == "2" || theorem == "all")
                report("2", "one or two idempotents", check_small_idempotent_count(s, need_dec()));
            if (theorem == "3" || theorem == "all")
                report("3", "reduced fiber bound", check_reduced_fiber_bound(s));
            return consistent ? Ok : Inconsistent;
        }

        if (*construct) {
            std::optional<Scheme> s;
            if (*c_trivial)
                s = trivial_scheme(trivial_n);
            else if (*c_tensor)
                s = tensor_product(load_scheme(input), load_scheme(second));
            else if (*c_restrict) {
                const auto a = load_scheme(input);
                std::vector<FiberIndex> fibers;
                for (auto f : parse_list(fibers_text))
                    fibers.push_back(static_cast<FiberIndex>(f));
                s = restriction(a, fibers);
            } else if (*c_dsum)
                s = internal_direct_sum(load_scheme(input), load_scheme(second));
            else if (*c_design)
                s = design_scheme(parse_design(read_input(input)));
            else if (*c_orbit)
                s = two_orbit_scheme(parse_permutations(read_input(input)));
            else
                s = load_fixture(fixture);
            write_output(output, format_color_matrix(*s));
            err << "wrote " << output << ": " << s->point_count() << " points, " << s->relation_count()
                << " relations\n";
            return Ok;
        }

        std::optional<Catalog> catalog;
        if (! catalog_path.empty()) {
            try {
                catalog = parse_catalog(read_input(catalog_path));
            } catch (const ParseError &e) {
                throw IoFailure(catalog_path + ": " + e.what());
            }
        }

        if (*filter) {
            FilterOptions opts;
            if (! rules_text.empty()) {
                opts.rules.clear();
                std::stringstream in(rules_text);
                std::string name;
                while (std::getline(in, name, ',')) {
                    auto rule = parse_rule(name);
                    if (! rule || *rule == Rule::Catalog) {
                        err << "unknown rule '" << name << "'\n";
                        return UsageOrIo;
                    }
                    opts.rules.push_back(*rule);
                }
            }
            opts.csp.overlap = ! no_overlap;
            opts.csp.stabilizer = ! no_stabilizer;
            opts.csp.node_budget = budget;
            opts.csp.catalog = catalog ? &*catalog : nullptr;

            std::vector<DegreeProfile> profiles;
            if (! dx_text.empty() || ! dxy_text.empty()) {
                DegreeProfile p{fm, fr, parse_list(dx_text), parse_list(dxy_text)};
                std::sort(p.d_x.begin(), p.d_x.end());
                std::sort(p.d_xy.begin(), p.d_xy.end());
                if (! is_valid(p)) {
                    err << "invalid profile " << to_string(p) << '\n';
                    return UsageOrIo;
                }
                profiles.push_back(std::move(p));
            } else {
                // catalog exclusions are reported rather than skipped
                profiles = enumerate_profiles(fm, fr);
            }

            json j = json::array();
            for (const auto &p : profiles) {
                const auto v = apply_rules(p, opts);
                if (filter_json) {
                    auto row = profile_json(p);
                    row.update(verdict_json(v));
                    j.push_back(std::move(row));
                    continue;
                }
                out << to_string(p) << ": ";
                if (v.status == VerdictStatus::Eliminated)
                    out << "eliminated by " << rule_name(*v.rule) << '\n';
                else
                    out << "survives" << (catalog ? "" : " (unverified d_X)") << '\n';
                for (const auto &t : v.trace)
                    out << "  " << t << '\n';
            }
            if (filter_json)
                out << j.dump(2) << '\n';
            return Ok;
        }

        if (*table) {
            const auto report = table_report(m_max, catalog ? &*catalog : nullptr);
            if (table_json) {
                json rows = json::array();
                for (const auto &row : report.rows) {
                    auto r = profile_json(row.profile);
                    r.update(verdict_json(row.verdict));
                    r["labels"] = row.labels;
                    rows.push_back(std::move(r));
                }
                out << json{{"m_max", report.m_max}, {"catalog_supplied", report.catalog_supplied}, {"rows", rows}}.dump(2)
                    << '\n';
            } else {
                out << format_table(report);
            }
            return Ok;
        }
    } catch (const IoFailure &e) {
        err << "error: " << e.what() << '\n';
        return UsageOrIo;
    } catch (const CLI::ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return UsageOrIo;
    } catch (const VerificationError &e) {
        err << "verification failed: " << e.what() << '\n';
        return InputInvalid;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << '\n';
        return InputInvalid;
    } catch (const ConstructionError &e) {
        err << "construction failed: " << e.what() << '\n';
        return InputInvalid;
    } catch (const NotBalanced &e) {
        err << "error: " << e.what() << '\n';
        return InputInvalid;
    } catch (const AlgebraError &e) {
        err << "algebra: " << e.what() << '\n';
        return Inconsistent;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return UsageOrIo;
    }
    return UsageOrIo;
}

int run(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace coco::cli
