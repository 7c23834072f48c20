// Command-line front end: characteristic polynomials, Roby module build and
// verification, characteristic morphisms, the line-to-cover pipeline and the
// quadric-surface numerology.
//
// Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roby/io.hpp"
#include "roby/line_geometry.hpp"
#include "roby/pipeline.hpp"
#include "roby/report.hpp"
#include "roby/surface_numerics.hpp"

namespace
{

using namespace roby;
using clock_type = std::chrono::steady_clock;

struct Globals {
    std::string config_path;
    std::string format = "text";
    bool no_timing = false;
    io::Config config;
};

std::string resolve(const Globals &g, const std::string &path)
{
    if (g.config.output_dir.empty() || std::filesystem::path(path).is_absolute()) {
        return path;
    }
    return (std::filesystem::path(g.config.output_dir) / path).string();
}

void write_text(const std::string &path, const std::string &text)
{
    std::ofstream out(path);
    if (!out) {
        throw input_error("cannot write " + path);
    }
    out << text;
}

double ms_since(clock_type::time_point t0)
{
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

int emit(const Globals &g, Report &r, clock_type::time_point t0, const std::string &out_path = {})
{
    r.set_elapsed_ms(ms_since(t0));
    const std::string doc = r.render(g.format, !g.no_timing);
    if (out_path.empty()) {
        std::cout << doc;
    } else {
        write_text(resolve(g, out_path), doc);
    }
    return r.passed() ? 0 : 1;
}

std::map<var_id, Poly> parse_bindings(const std::vector<std::string> &items)
{
    std::map<var_id, Poly> out;
    for (const auto &b : items) {
        const auto eq = b.find('=');
        if (eq == std::string::npos) {
            throw input_error("binding '" + b + "' is not of the form name=polynomial");
        }
        const std::string name = b.substr(0, eq);
        if (!is_valid_var_name(name)) {
            throw input_error("'" + name + "' is not a valid variable name");
        }
        out[var(name)] = parse_poly(b.substr(eq + 1));
    }
    return out;
}

// ---------------------------------------------------------------------------

struct CharpolyOpts {
    std::string algebra_file, monogenic;
    std::size_t split = 0;
    std::vector<std::string> bind;
    bool cayley_hamilton = false;
};

FreeAlgebra algebra_from(const std::string &file, const std::string &monogenic, std::size_t split)
{
    const int given = !file.empty() + !monogenic.empty() + (split > 0);
    if (given != 1) {
        throw input_error("give exactly one of --algebra, --monogenic, --split");
    }
    if (!file.empty()) {
        const YAML::Node n = io::load_file(file);
        return io::read_algebra(n["algebra"] ? n["algebra"] : n);
    }
    if (!monogenic.empty()) {
        return monogenic_algebra(parse_poly(monogenic));
    }
    return split_algebra(split);
}

int run_charpoly(const Globals &g, const CharpolyOpts &o)
{
    const auto t0 = clock_type::now();
    const FreeAlgebra a = algebra_from(o.algebra_file, o.monogenic, o.split);
    CharPoly chi = char_poly(a);
    Report r("charpoly");
    r.input("rank", a.rank());
    r.info("chi", chi.poly.to_string());
    if (!o.bind.empty()) {
        chi = restrict_char_poly(chi, parse_bindings(o.bind));
        r.info("chi_restricted", chi.poly.to_string());
    }
    r.check("monic", chi.is_monic());
    if (o.cayley_hamilton) {
        const CayleyHamiltonReport ch = cayley_hamilton_check(a);
        std::optional<EntryFailure> f;
        if (!ch.passed && ch.offending_entry) {
            f = EntryFailure{"cayley-hamilton", ch.offending_entry->first, ch.offending_entry->second, "0",
                             ch.offending_value.to_string()};
        }
        r.check("cayley-hamilton", ch.passed, f);
    }
    return emit(g, r, t0);
}

int run_build(const Globals &, const std::string &recipe, const std::string &out)
{
    const YAML::Node n = io::load_file(recipe);
    if (io::schema_of(n) != io::recipe_schema) {
        throw input_error(std::string("expected schema ") + io::recipe_schema);
    }
    const std::string text = io::emit(io::write_module(io::build_module(n)));
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
    }
    return 0;
}

GradedRobyModule module_from_file(const std::string &path)
{
    const YAML::Node n = io::load_file(path);
    if (io::schema_of(n) == io::recipe_schema) {
        return io::build_module(n);
    }
    return io::read_module(n);
}

int run_verify(const Globals &g, const std::string &path, const std::string &out)
{
    const auto t0 = clock_type::now();
    const GradedRobyModule m = module_from_file(path);
    Report r = module_report(m, verify_roby(m));
    r.input("file", std::filesystem::path(path).filename().string());
    return emit(g, r, t0, out);
}

int run_charmor(const Globals &g, const std::string &path, const std::string &algebra_file,
                const std::string &filtration)
{
    const auto t0 = clock_type::now();
    const GradedRobyModule m = module_from_file(path);
    std::optional<FreeAlgebra> a;
    if (!algebra_file.empty()) {
        const YAML::Node n = io::load_file(algebra_file);
        a = io::read_algebra(n["algebra"] ? n["algebra"] : n);
    }
    const CharMorphism c = char_morphism(m, a);
    const CharMorphismReport rep = verify_char_morphism(c);
    std::optional<FilteredReport> fr;
    if (!filtration.empty()) {
        if (!a) {
            throw input_error("--filtration needs --algebra");
        }
        Filtration f;
        std::stringstream ss(filtration);
        for (std::string item; std::getline(ss, item, ',');) {
            try {
                f.level.push_back(std::stoi(item));
            } catch (const std::exception &) {
                throw input_error("filtration levels must be integers, got '" + item + "'");
            }
        }
        fr = verify_filtered_pseudo(c, f);
    }
    Report r = char_morphism_report(c, rep, fr);
    r.input("file", std::filesystem::path(path).filename().string());
    return emit(g, r, t0);
}

int run_pipeline_cmd(const Globals &g, const std::string &path, const std::string &out, const std::string &module_out)
{
    const auto t0 = clock_type::now();
    const io::PipelineFile p = io::read_pipeline(io::load_file(path));
    const PipelineResult res = run_pipeline(p.input);
    Report r = pipeline_report(p.input, res);
    r.input("file", std::filesystem::path(path).filename().string());
    r.input("seed_kind", p.seed_kind);
    const std::string mod_path = !module_out.empty() ? module_out : p.module_path.value_or("");
    if (!mod_path.empty()) {
        write_text(resolve(g, mod_path), io::emit(io::write_module(res.assembly)));
    }
    return emit(g, r, t0, !out.empty() ? out : p.report_path.value_or(""));
}

int run_report(const Globals &g, const std::string &path)
{
    const YAML::Node n = io::load_file(path);
    const std::string schema = io::schema_of(n);
    if (schema == io::pipeline_schema) {
        return run_pipeline_cmd(g, path, "", "");
    }
    if (schema == io::module_schema || schema == io::recipe_schema) {
        return run_verify(g, path, "");
    }
    throw input_error("cannot report on schema '" + schema + "'");
}

// ---------------------------------------------------------------------------

int run_cohom_bundle(const Globals &g, long a, long b)
{
    const Cohomology c = p1xp1_cohomology(a, b);
    if (g.format == "json") {
        nlohmann::ordered_json j{{"a", a}, {"b", b}, {"h0", c.h0}, {"h1", c.h1}, {"h2", c.h2}, {"euler", c.euler()}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "O(" << a << ", " << b << "): h0 = " << c.h0 << ", h1 = " << c.h1 << ", h2 = " << c.h2
                  << ", chi = " << c.euler() << "\n";
    }
    return 0;
}

int run_cohom_table(const Globals &g, long s)
{
    const auto t = quadric_h1_table(s);
    bool ok = true;
    for (const auto &[k, v] : t) {
        ok = ok && v == quadric_h1_closed_form(s, k);
    }
    if (g.format == "json") {
        nlohmann::ordered_json j{{"s", s}, {"matches_closed_form", ok}, {"rows", nlohmann::ordered_json::array()}};
        for (const auto &[k, v] : t) {
            j["rows"].push_back({{"k", k}, {"h1", v}, {"closed_form", quadric_h1_closed_form(s, k)}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "h1(E_" << s << "(-" << s << " + k)) on O(k, " << 1 - 2 * s << " + k)\n";
        std::cout << std::setw(6) << "k" << std::setw(8) << "h1" << std::setw(14) << "(k+1)(2s-k-2)" << "\n";
        for (const auto &[k, v] : t) {
            std::cout << std::setw(6) << k << std::setw(8) << v << std::setw(14) << quadric_h1_closed_form(s, k)
                      << "\n";
        }
        std::cout << "closed form: " << (ok ? "PASS" : "FAIL") << "\n";
    }
    return ok ? 0 : 1;
}

int run_cohom_classify(const Globals &g, long a, long b)
{
    const UlrichClass c = quadric_delta_ulrich_test(a, b);
    const Cohomology h = p1xp1_cohomology(a, b);
    if (g.format == "json") {
        std::cout << nlohmann::ordered_json{{"a", a}, {"b", b}, {"class", to_string(c)}, {"h0", h.h0}}.dump(2)
                  << "\n";
    } else {
        std::cout << "O(" << a << ", " << b << ") on the quadric: " << to_string(c) << " (h0 = " << h.h0
                  << ", restriction to a conic O(" << a + b << "))\n";
    }
    return 0;
}

int run_cohom_wlp(const Globals &g, long a, long b, long radius)
{
    const auto seq = quadric_h1_twists(a, b, -radius, radius);
    const WlpReport w = wlp_check(seq);
    if (g.format == "json") {
        nlohmann::ordered_json j{{"a", a},
                                 {"b", b},
                                 {"increasing_below", w.increasing_below},
                                 {"decreasing_above", w.decreasing_above},
                                 {"peak_at_minus_one_or_two", w.peak_at_minus_one_or_two},
                                 {"sequence", nlohmann::ordered_json::object()}};
        for (const auto &[i, v] : seq) {
            j["sequence"][std::to_string(i)] = v;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << std::setw(6) << "i" << std::setw(8) << "h1" << "\n";
        for (const auto &[i, v] : seq) {
            std::cout << std::setw(6) << i << std::setw(8) << v << "\n";
        }
        std::cout << "h1(E(i)) <= h1(E(i+1)) for i <= -2: " << (w.increasing_below ? "PASS" : "FAIL") << "\n"
                  << "h1(E(i)) >= h1(E(i+1)) for i >= -2: " << (w.decreasing_above ? "PASS" : "FAIL") << "\n"
                  << "peak at -1 or -2: " << (w.peak_at_minus_one_or_two ? "PASS" : "FAIL") << "\n";
    }
    return w.passed() ? 0 : 1;
}

int run_cohom_splitting(const Globals &g, const std::string &path, int curve_degree)
{
    const GradedModuleP1 m = io::read_line_module(io::load_file(path));
    const SplittingType st = splitting_type(m);
    const bool line_ulrich = is_ulrich_over_line(st);
    std::optional<bool> curve;
    if (curve_degree > 0) {
        curve = is_ulrich_on_embedded_curve(st, curve_degree);
    }
    if (g.format == "json") {
        nlohmann::ordered_json j{{"splitting_type", st.twists}, {"ulrich_over_line", line_ulrich}};
        if (curve) {
            j["curve_degree"] = curve_degree;
            j["ulrich_on_curve"] = *curve;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "splitting type " << st.to_string() << "\n"
                  << "Ulrich over the line: " << (line_ulrich ? "yes" : "no") << "\n";
        if (curve) {
            std::cout << "Ulrich on the degree-" << curve_degree << " rational curve: " << (*curve ? "yes" : "no")
                      << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

int run_monad(const Globals &g, long r, long d, long m)
{
    const MonadShape s = monad_shape({r, d, m});
    if (g.format == "json") {
        std::cout << nlohmann::ordered_json{{"left", s.left}, {"middle", s.middle}, {"right", s.right}, {"euler", s.euler}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "0 -> O(-1)^" << s.left << " -> O^" << s.middle << " -> O(1)^" << s.right << " -> 0, chi = "
                  << s.euler << "\n";
    }
    return 0;
}

int run_ec(const Globals &g, long chi, long re, long rf)
{
    const long v = ec_tensor(chi, re, rf);
    if (g.format == "json") {
        std::cout << nlohmann::ordered_json{{"chi", v}}.dump(2) << "\n";
    } else {
        std::cout << "chi(E (x) F) = " << v << "\n";
    }
    return 0;
}

int run_beta(const Globals &g, const std::string &beta0_text, long steps, bool csv)
{
    const rational beta0 = CycScalar::parse_rational(beta0_text);
    const auto seq = beta_sequence(beta0, steps);
    bool ok = true;
    for (long m = 0; m <= steps; ++m) {
        ok = ok && seq[m] == beta_closed_form(beta0, m);
    }
    if (g.format == "json") {
        nlohmann::ordered_json j{{"beta0", beta0.get_str()}, {"closed_form_holds", ok}, {"beta", nlohmann::ordered_json::array()}};
        for (const auto &b : seq) {
            j["beta"].push_back(b.get_str());
        }
        std::cout << j.dump(2) << "\n";
    } else if (csv) {
        std::cout << "m,beta_m,closed_form\n";
        for (long m = 0; m <= steps; ++m) {
            std::cout << m << "," << seq[m].get_str() << "," << beta_closed_form(beta0, m).get_str() << "\n";
        }
    } else {
        std::cout << std::setw(4) << "m" << "  " << std::setw(24) << "beta_m" << "\n";
        for (long m = 0; m <= steps; ++m) {
            std::cout << std::setw(4) << m << "  " << std::setw(24) << seq[m].get_str() << "\n";
        }
        std::cout << "beta_m = 1 - (1 - beta_0)/4^m: " << (ok ? "PASS" : "FAIL") << "\n";
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Roby modules, characteristic morphisms and delta-Ulrich numerology"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "YAML config (field_order_cap, degree_padding, output_dir)")
        ->check(CLI::ExistingFile);
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--no-timing", g.no_timing, "omit the timing field from reports");

    std::function<int()> action;

    CharpolyOpts cp;
    auto *charpoly = app.add_subcommand("charpoly", "characteristic polynomial of a free algebra");
    charpoly->add_option("--algebra", cp.algebra_file, "algebra YAML file");
    charpoly->add_option("--monogenic", cp.monogenic, "monic polynomial in z");
    charpoly->add_option("--split", cp.split, "rank of the split algebra");
    charpoly->add_option("--bind", cp.bind, "restriction bindings name=poly");
    charpoly->add_flag("--cayley-hamilton", cp.cayley_hamilton, "check chi(rho(a), a) = 0");
    charpoly->callback([&] { action = [&] { return run_charpoly(g, cp); }; });

    auto *roby_cmd = app.add_subcommand("roby", "build or verify Roby modules");
    roby_cmd->require_subcommand(1);
    std::string recipe, build_out;
    auto *build = roby_cmd->add_subcommand("build", "build a module from a recipe");
    build->add_option("recipe", recipe, "roby-build/1 file")->required();
    build->add_option("-o,--output", build_out, "write the module here");
    build->callback([&] { action = [&] { return run_build(g, recipe, resolve(g, build_out.empty() ? "" : build_out)); }; });
    std::string verify_path, verify_out;
    auto *verify = roby_cmd->add_subcommand("verify", "verify a stored module");
    verify->add_option("module", verify_path, "roby-module/1 or roby-build/1 file")->required();
    verify->add_option("-o,--output", verify_out, "write the report here");
    verify->callback([&] { action = [&] { return run_verify(g, verify_path, verify_out); }; });

    std::string cm_path, cm_algebra, cm_filtration;
    auto *charmor = app.add_subcommand("charmor", "extract and verify the characteristic morphism of a module");
    charmor->add_option("module", cm_path, "module file with a charpoly target")->required();
    charmor->add_option("--algebra", cm_algebra, "source algebra file (enables algebra-morphism checks)");
    charmor->add_option("--filtration", cm_filtration, "comma-separated level per basis vector of W");
    charmor->callback([&] { action = [&] { return run_charmor(g, cm_path, cm_algebra, cm_filtration); }; });

    std::string pl_path, pl_out, pl_module;
    auto *pipeline = app.add_subcommand("pipeline", "build a characteristic morphism from a seed over a line");
    pipeline->add_option("file", pl_path, "roby-pipeline/1 file")->required();
    pipeline->add_option("-o,--output", pl_out, "write the report here");
    pipeline->add_option("--module-out", pl_module, "write the assembled module here");
    pipeline->callback([&] { action = [&] { return run_pipeline_cmd(g, pl_path, pl_out, pl_module); }; });

    auto *cohom = app.add_subcommand("cohom", "line bundles on P1 x P1 and bundles on P1");
    cohom->require_subcommand(1);
    long ca = 0, cb = 0, cs = 2, radius = 6;
    auto *bundle = cohom->add_subcommand("bundle", "h^i(O(a, b))");
    bundle->add_option("a", ca)->required();
    bundle->add_option("b", cb)->required();
    bundle->callback([&] { action = [&] { return run_cohom_bundle(g, ca, cb); }; });
    auto *table = cohom->add_subcommand("table", "h1(E_s(-s + k)) scan");
    table->add_option("s", cs)->required();
    table->callback([&] { action = [&] { return run_cohom_table(g, cs); }; });
    auto *classify = cohom->add_subcommand("classify", "delta-Ulrich test for O(a, b)");
    classify->add_option("a", ca)->required();
    classify->add_option("b", cb)->required();
    classify->callback([&] { action = [&] { return run_cohom_classify(g, ca, cb); }; });
    auto *wlp = cohom->add_subcommand("wlp", "h1 twist sequence inequalities for O(a, b)");
    wlp->add_option("a", ca)->required();
    wlp->add_option("b", cb)->required();
    wlp->add_option("--radius", radius, "twist window [-radius, radius]");
    wlp->callback([&] { action = [&] { return run_cohom_wlp(g, ca, cb, radius); }; });
    std::string split_path;
    int curve_degree = 0;
    auto *splitting = cohom->add_subcommand("splitting", "splitting type of a graded module on P1");
    splitting->add_option("module", split_path, "p1-module/1 file")->required();
    splitting->add_option("--curve-degree", curve_degree, "also test Ulrich on a rational curve of this degree");
    splitting->callback([&] { action = [&] { return run_cohom_splitting(g, split_path, curve_degree); }; });

    auto *numerology = app.add_subcommand("numerology", "monad shapes and Euler-characteristic recursions");
    numerology->require_subcommand(1);
    long nr = 1, nd = 1, nm = 0, nchi = 0, nre = 1, nrf = 1, nsteps = 10;
    std::string nbeta0 = "0";
    bool csv = false;
    auto *monad = numerology->add_subcommand("monad", "monad ranks (m, rd + 2m, m)");
    monad->add_option("r", nr)->required();
    monad->add_option("d", nd)->required();
    monad->add_option("m", nm)->required();
    monad->callback([&] { action = [&] { return run_monad(g, nr, nd, nm); }; });
    auto *ec = numerology->add_subcommand("ec", "chi(E (x) F) = rF (chiE + 3 rE)");
    ec->add_option("chi", nchi)->required()->allow_extra_args(false);
    ec->add_option("rE", nre)->required();
    ec->add_option("rF", nrf)->required();
    ec->callback([&] { action = [&] { return run_ec(g, nchi, nre, nrf); }; });
    auto *beta = numerology->add_subcommand("beta", "beta_m = beta_{m-1}/4 + 3/4");
    beta->add_option("beta0", nbeta0)->required();
    beta->add_option("M", nsteps);
    beta->add_flag("--csv", csv, "comma-separated exact rows");
    beta->callback([&] { action = [&] { return run_beta(g, nbeta0, nsteps, csv); }; });

    std::string report_path;
    auto *report = app.add_subcommand("report", "report on a stored module or pipeline file");
    report->add_option("file", report_path)->required();
    report->callback([&] { action = [&] { return run_report(g, report_path); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!g.config_path.empty()) {
            g.config = io::read_config(g.config_path);
            io::apply(g.config);
        }
        return action ? action() : 2;
    } catch (const verification_error &e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const input_error &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const zero_division_error &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const incompatible_fields_error &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
}
