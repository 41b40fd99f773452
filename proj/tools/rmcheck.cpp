#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmk/criteria.hpp"
#include "rmk/ringquery.hpp"
#include "rmk/sweep.hpp"
#include "rmk/version.hpp"
#include "rmk/witness.hpp"

using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_not_decided = 10;
constexpr int exit_not_found = 11;

struct Output {
    bool as_json = false;
    std::string out_path;

    void emit(const std::string& text, const json& report) const {
        const std::string payload = as_json ? report.dump(2) + "\n" : text;
        if (out_path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream f(out_path);
            if (!f) throw std::runtime_error("cannot write " + out_path);
            f << payload;
        }
    }
};

std::string echo_command(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

json base_report(const std::string& command) {
    json j;
    j["tool"] = {{"name", rmk::tool_name}, {"version", rmk::tool_version}};
    j["command"] = command;
    j["results"] = json::array();
    j["warnings"] = json::array();
    return j;
}

json certificate_json(const rmk::MembershipCertificate& c, const rmk::IdealBasis* basis) {
    json j;
    j["member"] = c.member;
    j["slice_degree"] = c.slice_degree;
    j["slice_dimension"] = c.slice_dimension;
    j["ideal_rank"] = c.ideal_rank;
    json combo = json::array();
    for (const auto& gm : c.combination) {
        json g;
        g["generator"] = gm.generator;
        json mus = json::array();
        if (basis) {
            for (const auto& mu : gm.multipliers)
                mus.push_back(rmk::to_string(mu, *basis->algebra()));
        }
        g["multipliers"] = mus;
        combo.push_back(g);
    }
    j["combination"] = combo;
    return j;
}

struct RangeArg {
    rmk::Range r;
};

// "A..B" or a single value
rmk::Range parse_range(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            long v = std::stol(s);
            return {v, v};
        }
        long lo = std::stol(s.substr(0, dots));
        long hi = std::stol(s.substr(dots + 2));
        if (hi < lo) throw std::out_of_range("empty");
        return {lo, hi};
    } catch (const std::exception&) {
        throw std::invalid_argument("expected a value N or a range A..B, got '" + s + "'");
    }
}

int default_jobs() {
    if (const char* env = std::getenv("RMCHECK_JOBS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // library default
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

json frame_json(const rmk::FrameSearchResult& r) {
    json j;
    j["type"] = "frame-witness";
    j["success"] = r.found;
    j["restarts_used"] = r.restarts_used;
    j["residual_inf"] = r.residual_inf;
    j["residual"] = r.residual;
    json rows = json::array();
    for (std::size_t i = 0; i < r.frame.vectors.rows; ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < r.frame.vectors.cols; ++c)
            row.push_back(r.frame.vectors(i, c));
        rows.push_back(row);
    }
    j["frame"] = rows;
    j["gram_error"] = r.frame.vectors.rows ? r.frame.gram_error() : 0.0;
    return j;
}

json equipart_json(const rmk::EquipartSearchResult& r) {
    json j;
    j["type"] = "equipart-witness";
    j["success"] = r.found;
    j["restarts_used"] = r.restarts_used;
    j["worst_deviation"] = r.worst_deviation;
    j["offsets_mode"] = r.offsets_mode;
    json rows = json::array();
    for (std::size_t i = 0; i < r.arrangement.normals.rows; ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < r.arrangement.normals.cols; ++c)
            row.push_back(r.arrangement.normals(i, c));
        rows.push_back(row);
    }
    j["normals"] = rows;
    j["offsets"] = r.arrangement.offsets;
    j["masses"] = r.masses;
    j["orthogonality_error"] =
        r.arrangement.normals.rows ? r.arrangement.orthogonality_error() : 0.0;
    return j;
}

rmk::SampledMeasure make_measure(const std::string& spec, int n, std::uint64_t seed,
                                 std::size_t index) {
    if (spec.rfind("gauss:", 0) == 0) {
        long count = std::stol(spec.substr(6));
        return rmk::gaussian_cloud(n, count, seed * 1000003ULL + index);
    }
    std::ifstream f(spec);
    if (!f) throw std::invalid_argument("cannot open measure file: " + spec);
    return rmk::load_measure(f, n);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Admissibility criteria and numeric witnesses for frame and "
                 "hyperplane mass-partition problems"};
    app.set_version_flag("--version", std::string(rmk::tool_version));
    app.require_subcommand(1);

    Output out;
    app.add_flag("--json", out.as_json, "emit a JSON run report instead of text");
    app.add_option("--out", out.out_path, "write the report to a file");

    // ---- check ----------------------------------------------------------
    auto* check = app.add_subcommand("check", "decide one instance");
    check->require_subcommand(1);

    int c_n = 0, c_k = 0, c_l = 0;
    long c_m = 0;
    bool c_orth = false;
    std::string c_variant = "odd-sym";

    auto* ck_rat = check->add_subcommand("rattray", "pair criterion for k-frames");
    ck_rat->add_option("--n", c_n)->required();
    ck_rat->add_option("--m", c_m)->required();
    ck_rat->add_option("--k", c_k)->required();
    ck_rat->add_option("--variant", c_variant)->check(CLI::IsMember({"odd", "odd-sym"}));
    ck_rat->add_flag("--orth", c_orth, "orthonormal frames (Stiefel index ideal)");

    auto* ck_r2 = check->add_subcommand("rattray2", "improved 2-frame criterion");
    ck_r2->add_option("--n", c_n)->required();
    ck_r2->add_option("--m", c_m)->required();

    auto* ck_r3 = check->add_subcommand("rattray3", "3-frame criterion over the 2-Sylow group");
    ck_r3->add_option("--n", c_n)->required();
    ck_r3->add_option("--m", c_m)->required();

    auto* ck_mak = check->add_subcommand("makeev", "hyperplane equipartition criterion");
    ck_mak->add_option("--n", c_n)->required();
    ck_mak->add_option("--m", c_m)->required();
    ck_mak->add_option("--k", c_k)->required();
    ck_mak->add_option("--l", c_l)->required();
    ck_mak->add_flag("--orth", c_orth, "mutually orthogonal hyperplanes");

    // ---- table ----------------------------------------------------------
    auto* table = app.add_subcommand("table", "sweep a grid and emit a table");
    std::string t_problem = "rattray", t_variant = "odd-sym", t_format = "table";
    std::string t_n, t_m, t_k, t_l;
    bool t_orth = false;
    int t_jobs = default_jobs();
    long t_cap = 0;
    table->add_option("--problem", t_problem)->check(CLI::IsMember({"rattray", "makeev"}));
    table->add_option("--n", t_n, "range N or A..B")->required();
    table->add_option("--m", t_m, "range")->required();
    table->add_option("--k", t_k, "range")->required();
    table->add_option("--l", t_l, "range (makeev)");
    table->add_option("--variant", t_variant)->check(CLI::IsMember({"odd", "odd-sym"}));
    table->add_flag("--orth", t_orth);
    table->add_option("--format", t_format)->check(CLI::IsMember({"table", "csv", "json"}));
    table->add_option("--jobs", t_jobs, "worker threads (env RMCHECK_JOBS)");
    table->add_option("--degree-cap", t_cap, "test-element degree cap");

    // ---- ring -----------------------------------------------------------
    auto* ring = app.add_subcommand("ring", "print characteristic classes");
    ring->require_subcommand(1);
    int r_k = 2, r_l = 0;
    long r_m = 1;
    bool r_doubled = false, r_orth = false;
    std::string r_component = "total";

    auto* rg_dual = ring->add_subcommand("dual", "dual class of prod (1+t_i)");
    rg_dual->add_option("--k", r_k)->required();
    rg_dual->add_option("--l", r_l)->required();

    auto* rg_er = ring->add_subcommand("euler-rattray", "pair-product Euler class");
    rg_er->add_option("--k", r_k)->required();
    rg_er->add_option("--m", r_m)->required();
    rg_er->add_flag("--doubled", r_doubled, "square the product");

    auto* rg_em = ring->add_subcommand("euler-makeev", "weight-filtered Euler class");
    rg_em->add_option("--k", r_k)->required();
    rg_em->add_option("--l", r_l)->required();
    rg_em->add_option("--m", r_m)->required();
    rg_em->add_flag("--orth", r_orth, "divide by t1...tk");

    auto* rg_d8 = ring->add_subcommand("d8", "square-group classes");
    rg_d8->add_option("--component", r_component)
        ->check(CLI::IsMember({"r2-total", "plane-total", "euler", "dual"}))
        ->required();
    rg_d8->add_option("--m", r_m);
    rg_d8->add_option("--l", r_l);

    auto* rg_w3 = ring->add_subcommand("w3", "3-frame 2-Sylow classes");
    rg_w3->add_option("--component", r_component)
        ->check(CLI::IsMember({"total", "euler", "test", "dual"}))
        ->required();
    rg_w3->add_option("--m", r_m);
    rg_w3->add_option("--l", r_l);

    // ---- witness --------------------------------------------------------
    auto* witness = app.add_subcommand("witness", "numeric witness search");
    witness->require_subcommand(1);
    int w_n = 3, w_k = 2, w_l = 2, w_restarts = 0, w_mods = 2;
    long w_m = 1;
    std::uint64_t w_seed = 1;
    double w_tol = 0.0;
    bool w_orth = false, w_free_offsets = false;
    std::vector<std::string> w_measures;

    auto* wt_frame = witness->add_subcommand("frame", "orthonormal frame annihilating odd "
                                                      "symmetric functions");
    wt_frame->add_option("--n", w_n)->required();
    wt_frame->add_option("--k", w_k)->required();
    wt_frame->add_option("--m", w_m, "number of random functions")->required();
    wt_frame->add_option("--seed", w_seed)->required();
    wt_frame->add_option("--tol", w_tol, "residual tolerance (default 1e-8)");
    wt_frame->add_option("--restarts", w_restarts, "restart budget (default 200)");
    wt_frame->add_option("--mods", w_mods, "modulation terms per function (default 2)");

    auto* wt_eq = witness->add_subcommand("equipart", "hyperplane equipartition of sampled "
                                                      "measures");
    wt_eq->add_option("--n", w_n)->required();
    wt_eq->add_option("--k", w_k)->required();
    wt_eq->add_option("--l", w_l)->required();
    wt_eq->add_flag("--orth", w_orth);
    wt_eq->add_flag("--free-offsets", w_free_offsets,
                    "search offsets freely instead of halving the first measure");
    wt_eq->add_option("--measure", w_measures, "gauss:N or a point file (repeatable)")
        ->required();
    wt_eq->add_option("--seed", w_seed)->required();
    wt_eq->add_option("--tol", w_tol, "orthant mass tolerance (default 5e-3)");
    wt_eq->add_option("--restarts", w_restarts, "restart budget (default 12)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    json report = base_report(echo_command(argc, argv));

    try {
        // ------------------------------------------------------ check ----
        if (check->parsed()) {
            rmk::Verdict v;
            json res;
            res["type"] = "verdict";
            const rmk::IdealBasis* cert_basis = nullptr;
            rmk::AlgebraPtr alg;
            std::optional<rmk::IdealBasis> basis_holder;

            if (ck_rat->parsed()) {
                auto variant =
                    c_variant == "odd" ? rmk::RattrayVariant::odd : rmk::RattrayVariant::odd_sym;
                v = rmk::rattray(c_n, c_m, c_k, variant, c_orth, true);
                res["problem"] = "rattray";
                res["n"] = c_n;
                res["m"] = c_m;
                res["k"] = c_k;
                res["variant"] = c_variant + (c_orth ? "-orth" : "-free");
                res["bounds_fired"] = rmk::bounds(c_n, c_m, c_k, std::nullopt).fired();
                if (c_k >= 2) {
                    alg = rmk::Algebra::free_poly(c_k);
                    basis_holder.emplace(c_orth ? rmk::stiefel_dual_ideal(alg, c_n)
                                                : rmk::rattray_free_ideal(alg, c_n));
                    cert_basis = &*basis_holder;
                }
            } else if (ck_r2->parsed()) {
                v = rmk::rattray2_grassmann(c_n, c_m, true);
                res["problem"] = "rattray2";
                res["n"] = c_n;
                res["m"] = c_m;
                res["closed_form"] = rmk::rattray2_closed_form(c_n, c_m);
                res["height"] = v.height;
                res["height_capped"] = v.height_capped;
                res["min_pow2"] = rmk::min_pow2_at_least(c_n);
            } else if (ck_r3->parsed()) {
                v = rmk::rattray3(c_n, c_m, true);
                res["problem"] = "rattray3";
                res["n"] = c_n;
                res["m"] = c_m;
            } else {
                v = rmk::makeev(c_n, c_m, c_k, c_l, c_orth, true);
                res["problem"] = "makeev";
                res["n"] = c_n;
                res["m"] = c_m;
                res["k"] = c_k;
                res["l"] = c_l;
                res["variant"] = std::string("makeev") + (c_orth ? "-orth" : "-free");
                res["bounds_fired"] = rmk::bounds(c_n, c_m, c_k, c_l).fired();
            }

            res["verdict"] = v.decided_admissible ? "decided_admissible" : "not_decided";
            res["criterion"] = v.criterion;
            res["notes"] = v.notes;
            if (v.height_capped)
                report["warnings"].push_back("height search capped at the quotient dimension");
            if (v.have_certificate) res["certificate"] = certificate_json(v.certificate, cert_basis);
            report["results"].push_back(res);
            report["timing_ms"] = elapsed_ms(t0);

            std::string line =
                (v.decided_admissible ? "decided by criterion " : "not decided by criterion ") +
                v.criterion;
            if (v.have_certificate)
                line += " (slice degree " + std::to_string(v.certificate.slice_degree) +
                        ", dimension " + std::to_string(v.certificate.slice_dimension) +
                        ", rank " + std::to_string(v.certificate.ideal_rank) + ")";
            if (v.height >= 0) line += "; height " + std::to_string(v.height);
            out.emit(line + "\n", report);
            return v.decided_admissible ? exit_ok : exit_not_decided;
        }

        // ------------------------------------------------------ table ----
        if (table->parsed()) {
            rmk::SweepSpec spec;
            spec.problem = t_problem == "makeev" ? rmk::Problem::makeev : rmk::Problem::rattray;
            spec.n = parse_range(t_n);
            spec.m = parse_range(t_m);
            spec.k = parse_range(t_k);
            if (!t_l.empty()) spec.l = parse_range(t_l);
            spec.variant =
                t_variant == "odd" ? rmk::RattrayVariant::odd : rmk::RattrayVariant::odd_sym;
            spec.orth = t_orth;
            spec.jobs = t_jobs;
            spec.degree_cap = t_cap;
            if (grid_cardinality(spec) == 0) throw std::invalid_argument("empty sweep grid");

            auto rows = (t_jobs == 1) ? rmk::run_sweep_serial(spec) : rmk::run_sweep(spec);

            long n_capped = 0;
            for (const auto& r : rows) n_capped += r.verdict == "capped";
            if (n_capped > 0)
                report["warnings"].push_back(std::to_string(n_capped) +
                                             " rows exceeded the degree cap");

            if (t_format == "json" || out.as_json) {
                for (const auto& r : rows) {
                    json jr;
                    jr["type"] = "sweep-row";
                    jr["n"] = r.n;
                    jr["m"] = r.m;
                    jr["k"] = r.k;
                    if (r.l >= 0) jr["l"] = r.l;
                    jr["variant"] = r.variant;
                    jr["verdict"] = r.verdict;
                    jr["bounds_fired"] = r.bounds_fired;
                    if (r.slice_degree >= 0) {
                        jr["slice_degree"] = r.slice_degree;
                        jr["slice_dimension"] = r.slice_dimension;
                        jr["ideal_rank"] = r.ideal_rank;
                    }
                    report["results"].push_back(jr);
                }
                report["timing_ms"] = elapsed_ms(t0);
                out.as_json = true;
                out.emit("", report);
            } else if (t_format == "csv") {
                out.emit(rmk::sweep_csv(rows), report);
            } else {
                out.emit(rmk::sweep_table(rows), report);
            }
            return exit_ok;
        }

        // ------------------------------------------------------- ring ----
        if (ring->parsed()) {
            std::string poly, query;
            if (rg_dual->parsed()) {
                query = "dual";
                poly = rmk::ring_dual(r_k, r_l);
            } else if (rg_er->parsed()) {
                query = "euler-rattray";
                poly = rmk::ring_euler_rattray(r_k, r_m, r_doubled);
            } else if (rg_em->parsed()) {
                query = "euler-makeev";
                poly = rmk::ring_euler_makeev(r_k, r_l, r_m, r_orth);
            } else if (rg_d8->parsed()) {
                query = "d8";
                poly = rmk::ring_d8(r_component, r_m, r_l);
            } else {
                query = "w3";
                poly = rmk::ring_w3(r_component, r_m, r_l);
            }
            json res;
            res["type"] = "ring";
            res["query"] = query;
            res["polynomial"] = poly;
            report["results"].push_back(res);
            report["timing_ms"] = elapsed_ms(t0);
            out.emit(poly + "\n", report);
            return exit_ok;
        }

        // ---------------------------------------------------- witness ----
        if (wt_frame->parsed()) {
            if (w_tol <= 0) w_tol = 1e-8;
            if (w_restarts <= 0) w_restarts = 200;
            std::vector<rmk::OddSymFunction> funcs;
            for (long i = 0; i < w_m; ++i)
                funcs.push_back(rmk::random_odd_sym(
                    w_n, w_seed * 0x9e3779b1ULL + static_cast<std::uint64_t>(i), w_mods));
            auto r = rmk::search_frame(funcs, w_n, w_k, w_tol, w_restarts, w_seed);
            json jr = frame_json(r);
            jr["n"] = w_n;
            jr["k"] = w_k;
            jr["m"] = w_m;
            jr["seed"] = w_seed;
            jr["tol"] = w_tol;
            report["results"].push_back(jr);
            report["timing_ms"] = elapsed_ms(t0);
            std::string line = r.found ? "witness found" : "witness not found (not a refutation)";
            line += "; best residual " + sci(r.residual_inf) + "; restarts " +
                    std::to_string(r.restarts_used);
            out.emit(line + "\n", report);
            return r.found ? exit_ok : exit_not_found;
        }

        if (wt_eq->parsed()) {
            if (w_tol <= 0) w_tol = 5e-3;
            if (w_restarts <= 0) w_restarts = 12;
            std::vector<rmk::SampledMeasure> mus;
            for (std::size_t i = 0; i < w_measures.size(); ++i)
                mus.push_back(make_measure(w_measures[i], w_n, w_seed, i));
            if (w_orth && !w_free_offsets && mus.empty())
                throw std::invalid_argument("halving offsets need a first measure");
            auto r = rmk::search_equipartition(mus, w_n, w_k, w_l, w_orth,
                                               w_free_offsets || !w_orth, w_tol, w_restarts,
                                               w_seed);
            json jr = equipart_json(r);
            jr["n"] = w_n;
            jr["k"] = w_k;
            jr["l"] = w_l;
            jr["orth"] = w_orth;
            jr["seed"] = w_seed;
            jr["tol"] = w_tol;
            report["results"].push_back(jr);
            report["timing_ms"] = elapsed_ms(t0);
            std::string line =
                r.found ? "equipartition found" : "equipartition not found (not a refutation)";
            line += "; worst deviation " + sci(r.worst_deviation) + "; restarts " +
                    std::to_string(r.restarts_used);
            out.emit(line + "\n", report);
            return r.found ? exit_ok : exit_not_found;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const rmk::degree_cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return exit_usage;
}
