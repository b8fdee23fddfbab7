#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyma/io.hpp"
#include "polyma/random_gen.hpp"
#include "polyma/report.hpp"

namespace polyma {

namespace cli_detail {

struct SpaceFile {
    BalancedSpace space;
    LoadedComplex loaded;
    std::string path;
};

inline LoadedComplex load_complex_file(const std::string& path) {
    return complex_from_json(read_json_file(path));
}

inline SpaceFile load_space(const std::string& path) {
    SpaceFile out;
    out.path = path;
    out.loaded = load_complex_file(path);
    if (!out.loaded.weights) fail(Err::IoError, "'" + path + "' carries no weights");
    out.space = make_balanced_space(out.loaded.complex, *out.loaded.weights);
    return out;
}

inline std::string sibling(const std::string& base_file, const std::string& name) {
    return (std::filesystem::path(base_file).parent_path() / name).string();
}

inline PAFunction load_function(const std::string& path, std::ostream& err) {
    json j = read_json_file(path);
    LoadedComplex carrier = load_complex_file(sibling(path, carrier_name_of(j)));
    PAFunction f = pafunction_from_json(j, carrier);
    auto rep = validate_pa(f);
    bool warned = false;
    for (const auto& v : rep.violations) {
        if (v.kind == PaViolation::Kind::Integrality) {
            if (!warned) err << "warning: " << path << ": non-integral slopes\n";
            warned = true;
        } else {
            fail(Err::IoError, path + ": representatives disagree on a shared face");
        }
    }
    return f;
}

inline PQFunction load_pq(const std::string& path) {
    json j = read_json_file(path);
    LoadedComplex carrier = load_complex_file(sibling(path, carrier_name_of(j)));
    return pq_from_json(j, carrier);
}

inline Measure1D load_measure(const std::string& path, const LoadedComplex& carrier) {
    return measure1d_from_json(read_json_file(path), carrier);
}

inline RatVector parse_point(const std::string& s) {
    RatVector out;
    std::string cur;
    for (char ch : s + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(rat_parse(cur));
            cur.clear();
        } else if (!isspace((unsigned char)ch)) {
            cur += ch;
        }
    }
    if (out.empty()) fail(Err::BadParameter, "empty point '" + s + "'");
    return out;
}

inline std::vector<Rat> parse_rat_list(const std::string& s) {
    RatVector v = parse_point(s);
    return std::vector<Rat>(v.begin(), v.end());
}

inline uint64_t env_seed() {
    const char* s = std::getenv("POLYMA_SEED");
    return s ? std::strtoull(s, nullptr, 10) : 1u;
}

/// Writes fn.json plus its carrier file when the carrier differs from the
/// space complex; returns nothing, files land next to `space_path`.
inline void write_function(const PAFunction& f, const SpaceFile& sf, const std::string& dir,
                           const std::string& space_file, const std::string& label) {
    std::string carrier_name = space_file;
    if (!same_complex(f.carrier, sf.space.complex)) {
        carrier_name = label + "_carrier.json";
        write_json_file((std::filesystem::path(dir) / carrier_name).string(),
                        complex_to_json(*f.carrier));
    }
    write_json_file((std::filesystem::path(dir) / (label + ".json")).string(),
                    pafunction_to_json(f, carrier_name));
}

}  // namespace cli_detail

/// Command-line driver. Exit codes: 0 success, 1 domain failure
/// (validation failure, witness, solver error), 2 usage error.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;
    CLI::App app{"exact pluripotential theory on balanced polyhedral spaces"};
    app.require_subcommand(1);

    std::string space_path, fn_path, a_path, b_path, g_path, u_path, p_path, mu_path, out_path;
    std::string phi_path, psi_path, gamma_path, pq_path, forms_path, in_path;
    std::string point_s, samples_s = "0,1/4,1/2,3/4,1", method_s = "dual_cycles";
    std::string name_s, eps_s = "1/2", out_dir = ".";
    std::vector<std::string> fn_paths, rest_paths;
    int face_id = -1, random_n = 0;
    bool csv = false, plot = false;

    auto* validate_cmd = app.add_subcommand("validate", "check a complex or function file");
    validate_cmd->add_option("--space", space_path);
    validate_cmd->add_option("--fn", fn_path);

    auto* balance_cmd = app.add_subcommand("balance", "check the stored top weights balance");
    balance_cmd->add_option("--space", space_path)->required();

    auto* refc = app.add_subcommand("refine-common", "common refinement of two complexes");
    refc->add_option("--a", a_path)->required();
    refc->add_option("--b", b_path)->required();
    refc->add_option("--out", out_path);

    auto* refs = app.add_subcommand("refine-simplicial", "simplicial refinement");
    refs->add_option("--space", space_path)->required();
    refs->add_option("--out", out_path);

    auto* star_cmd = app.add_subcommand("star", "star fan at a point");
    star_cmd->add_option("--space", space_path)->required();
    star_cmd->add_option("--point", point_s)->required();

    auto* skel = app.add_subcommand("skeleton", "subcomplex of bounded faces");
    skel->add_option("--space", space_path)->required();
    skel->add_option("--out", out_path);

    auto* retr = app.add_subcommand("retract", "retraction onto the skeleton");
    retr->add_option("--space", space_path)->required();
    retr->add_option("--point", point_s)->required();

    auto* ma_cmd = app.add_subcommand("ma", "polyhedral Monge-Ampere measure");
    ma_cmd->add_option("--space", space_path)->required();
    ma_cmd->add_option("--fn", fn_path)->required();
    ma_cmd->add_option("--out", out_path);

    auto* mma = app.add_subcommand("mixed-ma", "mixed Monge-Ampere measure");
    mma->add_option("--space", space_path)->required();
    mma->add_option("--fn", fn_paths)->required();
    mma->add_option("--out", out_path);

    auto* deg = app.add_subcommand("degree", "deg(fn) = total Monge-Ampere mass");
    deg->add_option("--space", space_path)->required();
    deg->add_option("--fn", fn_path)->required();

    auto* bil = app.add_subcommand("bilinear", "integral of f against MA(g, rest...)");
    bil->add_option("--space", space_path)->required();
    bil->add_option("--f", a_path)->required();
    bil->add_option("--g", b_path)->required();
    bil->add_option("--rest", rest_paths);

    auto* cvx = app.add_subcommand("convex-check", "polyhedral convexity");
    cvx->add_option("--fn", fn_path)->required();
    cvx->add_option("--method", method_s)->check(CLI::IsMember({"support_lp", "dual_cycles"}));

    auto* scvx = app.add_subcommand("strict-convex-check", "strict convexity w.r.t. the carrier");
    scvx->add_option("--fn", fn_path)->required();

    auto* rma = app.add_subcommand("real-ma", "real Monge-Ampere measure of max(forms)");
    rma->add_option("--forms", forms_path)->required();
    rma->add_option("--out", out_path);

    auto* crma = app.add_subcommand("compare-real-ma", "MA_poly vs real MA on top faces");
    crma->add_option("--space", space_path)->required();
    crma->add_option("--fn", fn_path);
    crma->add_option("--face", face_id);
    crma->add_option("--random", random_n);

    auto* en = app.add_subcommand("energy", "energy functional");
    en->add_option("--space", space_path)->required();
    en->add_option("--fn", fn_path)->required();
    en->add_option("--gamma", gamma_path)->required();

    auto* enc = app.add_subcommand("energy-check", "energy derivative and difference identities");
    enc->add_option("--space", space_path)->required();
    enc->add_option("--phi", phi_path);
    enc->add_option("--psi", psi_path);
    enc->add_option("--gamma", gamma_path)->required();
    enc->add_option("--samples", samples_s);
    enc->add_option("--random", random_n);

    auto* lap = app.add_subcommand("laplacian", "Laplacian measure of a 1-d function");
    lap->add_option("--space", space_path)->required();
    lap->add_option("--fn", fn_path);
    lap->add_option("--pq", pq_path);

    auto* sma = app.add_subcommand("solve-ma1", "solve MA(phi) = mu in dimension one");
    sma->add_option("--space", space_path)->required();
    sma->add_option("--gamma", gamma_path)->required();
    sma->add_option("--mu", mu_path)->required();
    sma->add_option("--basepoint", point_s)->required();
    sma->add_option("--out", out_path);

    auto* env = app.add_subcommand("envelope1", "convex envelope below gamma + u in dimension one");
    env->add_option("--space", space_path)->required();
    env->add_option("--gamma", gamma_path)->required();
    env->add_option("--u", u_path)->required();
    env->add_option("--out", out_path);

    auto* smc = app.add_subcommand("smooth-check", "polyhedral smoothness per vertex");
    smc->add_option("--space", space_path)->required();

    auto* orc = app.add_subcommand("ortho-check", "orthogonality integral for a competitor");
    orc->add_option("--space", space_path)->required();
    orc->add_option("--gamma", gamma_path)->required();
    orc->add_option("--u", u_path)->required();
    orc->add_option("--p", p_path)->required();

    auto* exg = app.add_subcommand("example", "generate a built-in example workspace");
    exg->add_option("--name", name_s)
        ->required()
        ->check(CLI::IsMember({"tropical_line", "axes_cross", "hexagon", "plane_complete",
                               "bergman_u34"}));
    exg->add_option("--epsilon", eps_s);
    exg->add_option("--out", out_dir);

    auto* rep = app.add_subcommand("report", "render a saved artifact as a table or CSV");
    rep->add_option("--in", in_path)->required();
    rep->add_flag("--csv", csv);
    rep->add_flag("--plot-data", plot);

    std::vector<const char*> argv{"polyma"};
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (*validate_cmd) {
            bool ok = true;
            if (!space_path.empty()) {
                auto lc = load_complex_file(space_path);
                auto rep2 = validate_complex(*lc.complex);
                if (!rep2.valid) {
                    ok = false;
                    for (const auto& v : rep2.violations)
                        out << "violation: faces " << v.face_a << "," << v.face_b << ": "
                            << v.detail << "\n";
                }
                if (lc.weights) {
                    WeightK top;
                    top.k = lc.weight_dim;
                    for (const auto& [id, v] : *lc.weights) top.values[id] = v;
                    auto br = check_balanced(*lc.complex, top);
                    if (!br.balanced) {
                        ok = false;
                        for (const auto& d : br.defects)
                            out << "balance defect at face " << d.tau << "\n";
                    }
                }
            }
            if (!fn_path.empty()) {
                PAFunction f = load_function(fn_path, err);
                auto rep2 = validate_pa(f);
                if (!rep2.valid) {
                    for (const auto& v : rep2.violations)
                        out << "violation on face " << v.face_a
                            << (v.kind == PaViolation::Kind::Integrality ? " (integrality)"
                                                                         : " (continuity)")
                            << "\n";
                    ok = false;
                }
            }
            out << (ok ? "Valid" : "Invalid") << "\n";
            return ok ? 0 : 1;
        }
        if (*balance_cmd) {
            auto sf = load_space(space_path);
            out << "Balanced\n";  // make_balanced_space already verified
            return 0;
        }
        if (*refc) {
            auto a = load_complex_file(a_path);
            auto b = load_complex_file(b_path);
            Complex r = common_refinement(*a.complex, *b.complex);
            out << "faces: " << r.n_faces() << "\n";
            if (!out_path.empty()) write_json_file(out_path, complex_to_json(r));
            return 0;
        }
        if (*refs) {
            auto a = load_complex_file(space_path);
            Complex r = simplicial_refinement(*a.complex);
            out << "faces: " << r.n_faces() << " simplicial: " << (is_simplicial(r) ? 1 : 0)
                << "\n";
            if (!out_path.empty()) write_json_file(out_path, complex_to_json(r));
            return 0;
        }
        if (*star_cmd) {
            auto sf = load_space(space_path);
            StarFan st = star(sf.space, parse_point(point_s));
            out << "base face: " << st.base_face << "\n";
            for (const auto& f : st.fan->faces()) {
                out << "cone dim " << f.dim << " rays";
                for (const auto& r : f.poly.rays()) out << " " << dir_str(r);
                auto w = st.weights.find(f.id);
                if (w != st.weights.end()) out << "  weight " << rat_str(w->second);
                out << "\n";
            }
            return 0;
        }
        if (*skel) {
            auto a = load_complex_file(space_path);
            Complex r = skeleton(*a.complex);
            out << "faces: " << r.n_faces() << "\n";
            if (!out_path.empty()) write_json_file(out_path, complex_to_json(r));
            return 0;
        }
        if (*retr) {
            auto a = load_complex_file(space_path);
            RatVector r = retract(*a.complex, parse_point(point_s));
            out << point_str(r) << "\n";
            return 0;
        }
        if (*ma_cmd || *mma) {
            auto sf = load_space(space_path);
            std::vector<PAFunction> fs;
            if (*ma_cmd)
                fs.assign((size_t)sf.space.d, load_function(fn_path, err));
            else
                for (const auto& p : fn_paths) fs.push_back(load_function(p, err));
            AtomicMeasure m = ma_poly(fs, sf.space);
            out << render_measure(m);
            if (!out_path.empty()) write_json_file(out_path, measure_to_json(m));
            return 0;
        }
        if (*deg) {
            auto sf = load_space(space_path);
            out << rat_str(degree_pa(load_function(fn_path, err), sf.space)) << "\n";
            return 0;
        }
        if (*bil) {
            auto sf = load_space(space_path);
            std::vector<PAFunction> rest;
            for (const auto& p : rest_paths) rest.push_back(load_function(p, err));
            out << rat_str(ma_bilinear(load_function(a_path, err), load_function(b_path, err),
                                       rest, sf.space))
                << "\n";
            return 0;
        }
        if (*cvx) {
            PAFunction f = load_function(fn_path, err);
            auto r = is_papc(f, method_s == "support_lp" ? ConvexityMethod::SupportLp
                                                         : ConvexityMethod::DualCycles);
            if (r.convex) {
                out << "Convex\n";
                return 0;
            }
            out << "Witness at face " << r.witness->face << ": " << r.witness->note << "\n";
            return 1;
        }
        if (*scvx) {
            out << (is_strictly_convex(load_function(fn_path, err)) ? "StrictlyConvex"
                                                                    : "NotStrictlyConvex")
                << "\n";
            return 0;
        }
        if (*rma) {
            json j = read_json_file(forms_path);
            std::vector<AffineForm> forms;
            for (const auto& e : j.at("forms"))
                forms.emplace_back(ratvec_from_json(e.at("linear")), rat_from_json(e.at("const")));
            AtomicMeasure m = real_ma(forms);
            out << render_measure(m);
            if (!out_path.empty()) write_json_file(out_path, measure_to_json(m));
            return 0;
        }
        if (*crma) {
            auto sf = load_space(space_path);
            bool all_equal = true;
            auto run_one = [&](const PAFunction& f) {
                for (FaceId id : sf.space.complex->faces_of_dim(sf.space.d)) {
                    if (face_id >= 0 && id != face_id) continue;
                    auto r = compare_real_ma(f, id, sf.space);
                    out << "face " << id << ": " << (r.equal ? "Equal" : "Discrepancy") << "\n";
                    all_equal = all_equal && r.equal;
                }
            };
            if (random_n > 0) {
                Rng rng(env_seed());
                for (int i = 0; i < random_n; ++i) run_one(random_papc(rng, sf.space));
            } else {
                run_one(load_function(fn_path, err));
            }
            return all_equal ? 0 : 1;
        }
        if (*en) {
            auto sf = load_space(space_path);
            out << rat_str(energy(load_function(fn_path, err), load_function(gamma_path, err),
                                  sf.space))
                << "\n";
            return 0;
        }
        if (*enc) {
            auto sf = load_space(space_path);
            PAFunction gamma = load_function(gamma_path, err);
            auto samples = parse_rat_list(samples_s);
            bool ok = true;
            auto run_one = [&](const PAFunction& phi, const PAFunction& psi) {
                auto r = energy_identities_check(phi, psi, gamma, sf.space, samples);
                for (const auto& row : r.samples)
                    out << "t=" << rat_str(row.t) << " dE=" << rat_str(row.poly_derivative)
                        << " integral=" << rat_str(row.integral) << "\n";
                out << "derivative: " << (r.derivative_ok ? "ok" : "FAIL")
                    << "  difference: " << (r.difference_ok ? "ok" : "FAIL") << "\n";
                ok = ok && r.derivative_ok && r.difference_ok;
            };
            if (random_n > 0) {
                Rng rng(env_seed());
                for (int i = 0; i < random_n; ++i) {
                    PAFunction u1 = random_bounded_pa(rng, sf.space);
                    PAFunction u2 = random_bounded_pa(rng, sf.space);
                    run_one(envelope1(sf.space, gamma, u1), envelope1(sf.space, gamma, u2));
                }
            } else {
                run_one(load_function(phi_path, err), load_function(psi_path, err));
            }
            return ok ? 0 : 1;
        }
        if (*lap) {
            auto sf = load_space(space_path);
            Measure1D m = pq_path.empty() ? laplacian(load_function(fn_path, err), sf.space)
                                          : laplacian(load_pq(pq_path), sf.space);
            out << render_measure1d(m, *sf.space.complex);
            return 0;
        }
        if (*sma) {
            auto sf = load_space(space_path);
            Measure1D mu = load_measure(mu_path, sf.loaded);
            auto r = solve_ma1(sf.space, load_function(gamma_path, err), mu,
                               parse_point(point_s));
            out << render_pq(r.phi);
            out << "pc-status: " << (r.pc_status.convex ? "Convex" : "Witness") << "\n";
            if (!out_path.empty())
                write_json_file(out_path, pq_to_json(r.phi, std::filesystem::path(space_path)
                                                                .filename()
                                                                .string()));
            return 0;
        }
        if (*env) {
            auto sf = load_space(space_path);
            PAFunction p = envelope1(sf.space, load_function(gamma_path, err),
                                     load_function(u_path, err));
            out << render_vertex_table(p);
            if (!out_path.empty()) {
                std::string dir = std::filesystem::path(out_path).parent_path().string();
                if (dir.empty()) dir = ".";
                std::string label = std::filesystem::path(out_path).stem().string();
                write_function(p, sf, dir, std::filesystem::path(space_path).filename().string(),
                               label);
            }
            return 0;
        }
        if (*smc) {
            auto sf = load_space(space_path);
            auto res = is_poly_smooth(sf.space);
            for (const auto& [vid, st] : res) {
                const RatVector& v = sf.space.complex->face(vid).poly.vertices()[0];
                out << point_str(v) << ": " << (st.smooth ? "Smooth" : "Singular " + st.reason)
                    << "\n";
            }
            return 0;
        }
        if (*orc) {
            auto sf = load_space(space_path);
            auto r = ortho_check(sf.space, load_function(gamma_path, err),
                                 load_function(u_path, err), load_function(p_path, err));
            out << "integral: " << rat_str(r.integral) << "\n";
            return 0;
        }
        if (*exg) {
            Workspace w = example_generate(name_s, rat_parse(eps_s));
            std::filesystem::create_directories(out_dir);
            std::string space_file = w.name + "_complex.json";
            SpaceFile sf;
            sf.space = w.space;
            write_json_file((std::filesystem::path(out_dir) / space_file).string(),
                            complex_to_json(*w.space.complex, &w.space.weights, w.space.d,
                                            w.name));
            if (w.gamma) write_function(*w.gamma, sf, out_dir, space_file, w.name + "_gamma");
            if (w.u) write_function(*w.u, sf, out_dir, space_file, w.name + "_u");
            if (w.mu)
                write_json_file((std::filesystem::path(out_dir) / (w.name + "_mu.json")).string(),
                                measure1d_to_json(*w.mu));
            out << "wrote " << w.name << " workspace to " << out_dir << "\n";
            return 0;
        }
        if (*rep) {
            json j = read_json_file(in_path);
            if (j.contains("atoms")) {
                AtomicMeasure m = measure_from_json(j);
                if (csv) {
                    out << "point,mass\n";
                    for (const auto& [x, mass] : m.atoms) {
                        std::string p = point_str(x);
                        out << '"' << p << "\"," << rat_str(mass) << "\n";
                    }
                } else {
                    out << render_measure(m);
                }
                return 0;
            }
            if (j.contains("forms")) {
                PAFunction f = load_function(in_path, err);
                out << (plot ? render_plot_csv(f) : render_vertex_table(f));
                return 0;
            }
            if (j.contains("edges")) {
                PQFunction f = load_pq(in_path);
                out << (plot ? render_plot_csv(f) : render_pq(f));
                return 0;
            }
            if (j.contains("faces")) {
                auto lc = complex_from_json(j);
                out << "ambient: " << lc.complex->ambient_dim()
                    << " faces: " << lc.complex->n_faces() << " dim: " << lc.complex->dim()
                    << "\n";
                return 0;
            }
            fail(Err::IoError, "unrecognized artifact");
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace polyma
