#ifndef ROBY_REPORT_HPP
#define ROBY_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipeline.hpp"
#include "roby_module.hpp"

namespace roby
{

/// A structured verification report: input echo, one entry per check,
/// dimensions, overall result and a timing field that is not part of the
/// deterministic content. Rendered as JSON or as plain text.
class Report
{
public:
    static constexpr int schema_version = 1;

    explicit Report(std::string kind)
    {
        doc_["schema_version"] = schema_version;
        doc_["kind"] = std::move(kind);
        doc_["inputs"] = nlohmann::ordered_json::object();
        doc_["checks"] = nlohmann::ordered_json::array();
        doc_["dimensions"] = nlohmann::ordered_json::object();
    }

    void input(const std::string &key, nlohmann::ordered_json value)
    {
        doc_["inputs"][key] = std::move(value);
    }
    void dimension(const std::string &key, nlohmann::ordered_json value)
    {
        doc_["dimensions"][key] = std::move(value);
    }
    void info(const std::string &key, nlohmann::ordered_json value)
    {
        doc_["info"][key] = std::move(value);
    }

    void check(const std::string &name, bool ok, const std::optional<EntryFailure> &failure = std::nullopt,
               const std::string &detail = {})
    {
        nlohmann::ordered_json c;
        c["name"] = name;
        c["status"] = ok ? "pass" : "fail";
        if (!detail.empty()) {
            c["detail"] = detail;
        }
        if (!ok && failure) {
            c["entry"] = {{"check", failure->check},
                          {"row", failure->row},
                          {"col", failure->col},
                          {"expected", failure->expected},
                          {"actual", failure->actual}};
        }
        doc_["checks"].push_back(std::move(c));
    }
    void skipped(const std::string &name, const std::string &why)
    {
        doc_["checks"].push_back({{"name", name}, {"status", "skipped"}, {"detail", why}});
    }

    bool passed() const
    {
        for (const auto &c : doc_["checks"]) {
            if (c["status"] != "pass") {
                return false;
            }
        }
        return true;
    }

    void set_elapsed_ms(double ms)
    {
        elapsed_ms_ = ms;
    }

    nlohmann::ordered_json json(bool with_timing = true) const
    {
        nlohmann::ordered_json d = doc_;
        d["result"] = passed() ? "pass" : "fail";
        if (with_timing && elapsed_ms_) {
            d["timing"] = {{"elapsed_ms", static_cast<long long>(*elapsed_ms_)}};
        }
        return d;
    }

    std::string text(bool with_timing = true) const
    {
        const auto d = json(with_timing);
        std::string s = d["kind"].get<std::string>() + " report (schema " + std::to_string(schema_version) + ")\n";
        auto scalar = [](const nlohmann::ordered_json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        for (const char *section : {"inputs", "dimensions", "info"}) {
            if (!d.contains(section) || d[section].empty()) {
                continue;
            }
            s += std::string(section) + ":\n";
            for (const auto &[k, v] : d[section].items()) {
                s += "  " + k + ": " + scalar(v) + "\n";
            }
        }
        s += "checks:\n";
        for (const auto &c : d["checks"]) {
            const std::string st = c["status"].get<std::string>();
            s += "  [" + std::string(st == "pass" ? "PASS" : st == "fail" ? "FAIL" : "SKIP") + "] "
                 + c["name"].get<std::string>();
            if (c.contains("detail")) {
                s += "  " + c["detail"].get<std::string>();
            }
            s += "\n";
            if (c.contains("entry")) {
                const auto &e = c["entry"];
                s += "         first offending entry (" + e["row"].dump() + ", " + e["col"].dump() + ") in "
                     + e["check"].get<std::string>() + ": expected " + e["expected"].get<std::string>() + ", got "
                     + e["actual"].get<std::string>() + "\n";
            }
        }
        s += "result: " + std::string(d["result"] == "pass" ? "PASS" : "FAIL") + "\n";
        if (d.contains("timing")) {
            s += "timing: " + d["timing"]["elapsed_ms"].dump() + " ms\n";
        }
        return s;
    }

    std::string render(const std::string &format, bool with_timing = true) const
    {
        return format == "json" ? json(with_timing).dump(2) + "\n" : text(with_timing);
    }

private:
    nlohmann::ordered_json doc_;
    std::optional<double> elapsed_ms_;
};

inline void add_roby_checks(Report &r, const RobyReport &rep, const std::string &prefix = "")
{
    auto only = [&](const std::string &tag) -> std::optional<EntryFailure> {
        if (rep.failure && rep.failure->check.rfind(tag, 0) == 0) {
            return rep.failure;
        }
        return std::nullopt;
    };
    r.check(prefix + "graded", rep.graded, only("graded"));
    r.check(prefix + "fresh-arguments", rep.fresh_arguments, only("fresh"));
    r.check(prefix + "roby-identity", rep.identity, only("roby-identity"));
    r.check(prefix + "T^d = I", rep.t_power_identity, only("T^d"));
}

inline Report module_report(const GradedRobyModule &m, const RobyReport &rep)
{
    Report r("roby-verify");
    r.input("degree", m.degree);
    r.input("slots", [&] {
        std::vector<std::string> s;
        for (var_id v : m.slots) {
            s.push_back(var_name(v));
        }
        return s;
    }());
    r.input("t_slot", m.has_t_slot());
    r.input("target", m.target_poly().to_string());
    r.input("target_kind", m.charpoly() ? "charpoly" : "form");
    r.dimension("dimW", m.dim());
    r.dimension("factors", m.factors);
    add_roby_checks(r, rep);
    return r;
}

inline Report char_morphism_report(const CharMorphism &c, const CharMorphismReport &rep,
                                   const std::optional<FilteredReport> &filtered = std::nullopt)
{
    Report r("charmor");
    r.input("chi", c.chi.poly.to_string());
    r.dimension("dimW", c.dim());
    r.dimension("rank", c.matrices.size());
    for (std::size_t i = 0; i < c.matrices.size(); ++i) {
        r.info("C(" + (c.source ? c.source->basis()[i] : std::to_string(i)) + ")", c.matrices[i].to_string());
    }
    r.check("chi(C(a), a) = 0", rep.characteristic, rep.failure);
    if (rep.algebra_morphism) {
        // Informational: a characteristic morphism need not be multiplicative.
        r.info("unit", rep.algebra_morphism->unit);
        r.info("multiplicative", rep.algebra_morphism->multiplicative);
    }
    if (filtered) {
        r.check("filtered:preserves-flags", filtered->preserves_flags, filtered->failure);
        r.check("filtered:graded-quotients-are-algebra-morphisms", filtered->graded_morphism, filtered->failure);
    }
    return r;
}

inline Report pipeline_report(const PipelineInput &in, const PipelineResult &res)
{
    Report r("pipeline");
    r.input("algebra_rank", in.algebra.rank());
    r.input("chi", res.chi.poly.to_string());
    {
        std::string line;
        for (const auto &[v, p] : in.line) {
            line += (line.empty() ? "" : ", ") + var_name(v) + " -> " + p.to_string();
        }
        r.input("line", line);
    }
    r.input("chi_line", res.chi_line.poly.to_string());
    r.input("xi", res.xi.to_string());
    r.input("smooth_section", "assumed, not checked");
    r.dimension("seed", res.seed_dim);
    r.dimension("monomials", res.monomials.size());
    r.dimension("dimW", res.assembly.dim());
    for (std::size_t j = 0; j < res.monomials.size(); ++j) {
        const auto &m = res.monomials[j];
        std::string s = "t^" + std::to_string(m.t_exponent);
        for (std::size_t k = 0; k < m.coefficients.size(); ++k) {
            s += " (" + m.coefficients[k].to_string() + ")*" + var_name(res.chi.dual[m.dual_indices[k]]);
        }
        r.info("monomial " + std::to_string(j + 1), s);
    }
    if (res.ungraded) {
        r.info("degree_bookkeeping", "ungraded mode");
    } else {
        for (const auto &e : res.degree_bookkeeping) {
            r.info("degree " + std::to_string(e.monomial + 1) + "." + std::to_string(e.factor + 1),
                   e.coefficient + ": "
                       + (e.coefficient_degree ? std::to_string(*e.coefficient_degree) : std::string("inhomogeneous"))
                       + " vs gamma degree " + std::to_string(e.gamma_degree) + (e.matches() ? "" : " (mismatch)"));
        }
    }
    r.check("seed-validation", true, std::nullopt, "target equals restricted chi; Roby identity holds");
    if (res.roby) {
        add_roby_checks(r, *res.roby, "assembly:");
        r.check("assembly:target = chi", res.target_is_chi);
    }
    if (res.charmor) {
        r.check("chi(C(a), a) = 0", res.charmor->characteristic, res.charmor->failure);
    } else {
        r.skipped("chi(C(a), a) = 0", "aborted at " + res.aborted.value_or("?"));
    }
    if (res.filtered) {
        r.check("line:preserves-flags", res.filtered->preserves_flags, res.filtered->failure);
        r.check("line:graded-quotients-are-algebra-morphisms", res.filtered->graded_morphism, res.filtered->failure);
    } else {
        r.skipped("line:filtered-pseudomorphism", "aborted at " + res.aborted.value_or("?"));
    }
    if (res.quotients_match_seed) {
        r.check("line:graded-quotients-equal-seed", *res.quotients_match_seed, std::nullopt,
                res.quotient_mismatch.value_or(""));
    } else {
        r.skipped("line:graded-quotients-equal-seed", "aborted at " + res.aborted.value_or("?"));
    }
    if (res.splitting) {
        r.check("line:splitting-type-trivial", is_ulrich_over_line(*res.splitting), std::nullopt,
                res.splitting->to_string());
    } else {
        r.skipped("line:splitting-type-trivial", "aborted at " + res.aborted.value_or("?"));
    }
    return r;
}

} // namespace roby

#endif // ROBY_REPORT_HPP
