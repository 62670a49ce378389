#include "ncg/examples.hpp"
#include "ncg/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace ncg;

namespace {

struct Flags {
    double tol = 1e-9;
    std::uint64_t seed = 7;
    std::string format = "text";
    bool strict = false;
    bool generalized = false;
    std::string out;
    std::string suite = "auto";
};

OrientationMode mode_of(const Flags& f) { return f.generalized ? OrientationMode::generalized : OrientationMode::strict; }

Tolerance tol_of(const Flags& f) {
    Tolerance t;
    t.rel = f.tol;
    return t;
}

Suite suite_of(const std::string& s) {
    if (s == "spinc") return Suite::spinc;
    if (s == "riemannian") return Suite::riemannian;
    if (s == "all") return Suite::all;
    return Suite::automatic;
}

std::string header(const std::string& cmd, const Flags& f) {
    std::ostringstream os;
    os << "# ncgw " << cmd << "  seed=" << f.seed << "  tol=" << f.tol
       << "  orientation=" << (f.generalized ? "generalized" : "strict") << "\n";
    return os.str();
}

// Prints the report (plus extra structured data) and returns the exit code.
int emit(const std::string& cmd, const Flags& f, const CheckReport& rep, const Json& extra = Json::object(),
         const std::string& extra_text = "") {
    if (f.format == "json") {
        Json j = {{"command", cmd},
                  {"seed", f.seed},
                  {"tol", f.tol},
                  {"orientation", f.generalized ? "generalized" : "strict"},
                  {"report", report_to_json(rep)}};
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << header(cmd, f) << extra_text << rep.text() << (rep.ok() ? "result: PASS\n" : "result: FAIL\n");
    }
    return rep.ok() ? 0 : 1;
}

void write_output(const Flags& f, const Json& doc) {
    if (!f.out.empty()) write_text_file(f.out, doc.dump(1) + "\n");
}

cplx parse_lambda(const std::string& s) {
    double re = 0.0, im = 0.0;
    char comma = 0;
    std::istringstream is(s);
    is >> re;
    if (is.fail()) throw ParseError("bad --lambda value '" + s + "'", "--lambda");
    if (is >> comma) {
        if (comma != ',' || !(is >> im)) throw ParseError("bad --lambda value '" + s + "'", "--lambda");
    }
    return {re, im};
}

std::vector<Mat> read_projectors(const std::string& path) {
    Json j = read_json_file(path);
    const Json& list = j.is_object() && j.contains("projectors") ? j["projectors"] : j;
    if (!list.is_array()) throw ParseError("expected a list of projectors", path);
    std::vector<Mat> out;
    for (std::size_t i = 0; i < list.size(); ++i) out.push_back(matrix_from_json(list[i], path + ": /projectors/" + std::to_string(i)));
    return out;
}

bool is_projector(const Mat& p, const Tolerance& tol) {
    return herm_defect(p) <= tol.rel && operator_norm(p * p - p) <= tol.rel && p.norm() > tol.rel;
}

std::vector<Mat> default_projectors(const std::vector<Mat>& gens, const SpectralTripleData& t, const Tolerance& tol) {
    std::vector<Mat> out;
    for (const Mat& g : gens)
        if (is_projector(g, tol) && (!t.grading || operator_norm(comm(g, *t.grading)) <= tol.rel)) out.push_back(g);
    return out;
}

Json matrix_int_json(const Eigen::MatrixXi& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ncgw: finite-dimensional spectral triple workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--tol", f.tol, "relative tolerance")->capture_default_str();
    app.add_option("--seed", f.seed, "seed for every random choice")->capture_default_str();
    app.add_option("--format", f.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    auto* so = app.add_flag("--strict-orientation", f.strict, "orientation cycles must have legs in the algebra (default)");
    auto* go = app.add_flag("--generalized-orientation", f.generalized, "accept generalized orientation cycles");
    so->excludes(go);
    app.add_option("-o,--output", f.out, "output path");
    app.add_option("--suite", f.suite, "auto, spinc, riemannian or all")
        ->check(CLI::IsMember({"auto", "spinc", "riemannian", "all"}))
        ->capture_default_str();

    std::string file;

    auto* check = app.add_subcommand("check", "run the condition suite on a .striple file");
    check->add_option("file", file)->required();

    ExampleSpec spec;
    std::string lambda = "1";
    auto* example = app.add_subcommand("example", "write a built-in example triple");
    example->add_option("kind", spec.kind,
                        "trivial_points, two_point, matrix_geometry, odd_matrix_base, odd_matrix_geometry, doubled")
        ->required();
    example->add_option("--size", spec.size, "N for trivial_points, n for the matrix geometries")->capture_default_str();
    example->add_option("--lambda", lambda, "two_point coupling, 're' or 're,im'")->capture_default_str();
    example->add_option("--base", spec.base, "base example for doubled")->capture_default_str();

    std::string direction, bimodule_path;
    auto* convert = app.add_subcommand("convert", "spin^c <-> Riemannian conversion");
    convert->add_option("direction", direction)->required()->check(CLI::IsMember({"to-riemannian", "to-spinc"}));
    convert->add_option("file", file)->required();
    convert->add_option("--bimodule", bimodule_path, "equivalence bimodule for to-spinc (default: the one bundled in the file)");

    std::string module_path;
    auto* product = app.add_subcommand("product", "product with a bimodule connection");
    product->add_option("file", file)->required();
    product->add_option("--module", module_path, "JSON with 'module' and optional 'connection' (default: trivial module)");

    auto* dbl = app.add_subcommand("double", "even doubling of an odd triple");
    dbl->add_option("file", file)->required();

    int samples = 10;
    auto* homotopy = app.add_subcommand("homotopy-check", "odd/even representative equivalence");
    homotopy->add_option("file", file)->required();
    homotopy->add_option("--samples", samples)->capture_default_str();

    std::string left_path, right_path;
    auto* pair = app.add_subcommand("pair", "index pairing matrix of projector lists");
    pair->add_option("file", file)->required();
    pair->add_option("--left", left_path, "projectors for the algebra (default: projector generators)");
    pair->add_option("--right", right_path, "projectors for the right action (default: projector generators)");

    std::vector<double> s_values;
    auto* zeta = app.add_subcommand("zeta", "Tr((1 + D^2)^(-s/2))");
    zeta->add_option("file", file)->required();
    zeta->add_option("--s", s_values, "exponents (default p, p+1, p+2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (f.strict) f.generalized = false;
    const Tolerance tol = tol_of(f);

    try {
        if (*example) {
            if (spec.kind == "two_point") spec.lambda = parse_lambda(lambda);
            spec.seed = f.seed;
            SpectralTripleData t = build_example(spec);
            const std::string body = triple_to_json(t).dump(1) + "\n";
            if (f.out.empty()) std::cout << body;
            else write_text_file(f.out, body);
            return 0;
        }

        Json doc = read_json_file(file);
        SpectralTripleData t;
        try {
            t = triple_from_json(doc);
        } catch (const Json::exception& e) {
            throw ParseError(e.what(), file);
        } catch (const ParseError& e) {
            throw ParseError(e.message, file + ": " + e.where);
        }

        if (*check) {
            CheckReport rep = full_suite(t, mode_of(f), tol, suite_of(f.suite));
            return emit("check", f, rep);
        }

        if (*convert && direction == "to-riemannian") {
            ConversionResult r = spinc_to_riemannian(t, mode_of(f), tol, f.seed);
            Json out = conversion_to_json(r);
            out["source"] = triple_to_json(t);
            out["bimodule"] = bimodule_to_json(spinc_bimodule(t, tol).bimodule);
            write_output(f, out);
            return emit("convert to-riemannian", f, r.report);
        }

        if (*convert) {
            Json bj;
            if (!bimodule_path.empty()) {
                bj = read_json_file(bimodule_path);
                if (bj.contains("bimodule")) bj = bj["bimodule"];
            } else if (doc.contains("bimodule")) {
                bj = doc["bimodule"];
            } else {
                throw ParseError("no bimodule: pass --bimodule or convert a file written by to-riemannian", file);
            }
            EquivBimodule E = bimodule_from_json(bj, "/bimodule", tol);
            ConversionWitness w;
            if (doc.contains("witness")) w = witness_from_json(doc["witness"], "/witness");
            ConversionResult r = riemannian_to_spinc(t, E, mode_of(f), tol, w.frame.empty() ? nullptr : &w.frame);
            CheckReport rep = r.report;
            if (doc.contains("source") && !doc["source"].is_null()) {
                SpectralTripleData src = triple_from_json(doc["source"], "/source");
                rep.merge(compare_triples(src, r.output, tol), "round_trip.");
            }
            write_output(f, conversion_to_json(r));
            return emit("convert to-spinc", f, rep);
        }

        if (*product) {
            BimoduleConnection conn;
            if (module_path.empty()) {
                conn = grassmann_connection(right_module_over(t, identity(t.hilbert_dim), tol));
            } else {
                Json mj = read_json_file(module_path);
                if (!mj.contains("module")) throw ParseError("missing field 'module'", module_path);
                ProjectiveModule mod = module_from_json(mj["module"], t, "/module", tol);
                conn = mj.contains("connection") ? connection_from_json(mj["connection"], mod, "/connection")
                                                 : grassmann_connection(mod);
            }
            ProductTriple pt = product_triple(t, conn, {}, tol);
            CheckReport rep = pt.report;
            rep.merge(connection_condition_check(t, conn, pt.twisted, false, tol), "connection_condition.");
            write_output(f, triple_to_json(pt.triple));
            return emit("product", f, rep, {{"output_dim", pt.triple.hilbert_dim}},
                        "output dimension " + std::to_string(pt.triple.hilbert_dim) + "\n");
        }

        if (*dbl) {
            Doubled d = double_odd_triple(t, tol);
            Json out = triple_to_json(d.triple);
            out["cliff"] = matrix_to_json(d.cliff);
            write_output(f, out);
            return emit("double", f, d.report);
        }

        if (*homotopy) {
            return emit("homotopy-check", f, appendix_equivalence_check(t, samples, tol));
        }

        if (*pair) {
            std::vector<Mat> lp = left_path.empty() ? default_projectors(t.algebra, t, tol) : read_projectors(left_path);
            std::vector<Mat> rp;
            if (!right_path.empty()) rp = read_projectors(right_path);
            else if (t.right_action) rp = default_projectors(*t.right_action, t, tol);
            else rp = {identity(t.hilbert_dim)};
            PairingMatrix pm = poincare_pairing_matrix(t, lp, rp, tol);
            CheckReport rep;
            if (pm.m.rows() == pm.m.cols() && pm.m.rows() > 0)
                rep.add_flag("unimodular", pm.unimodular, static_cast<double>(std::llabs(pm.det)), 1.0, "|det| = 1");
            else
                rep.skip("unimodular", "pairing matrix is not square");
            std::ostringstream os;
            os << "pairing matrix (" << pm.m.rows() << "x" << pm.m.cols() << "):\n" << pm.m << "\ndet " << pm.det << "\n";
            return emit("pair", f, rep, {{"matrix", matrix_int_json(pm.m)}, {"det", pm.det}}, os.str());
        }

        if (*zeta) {
            if (s_values.empty()) s_values = {double(t.p), double(t.p + 1), double(t.p + 2)};
            std::vector<double> z = zeta_diagnostic(t, s_values);
            std::ostringstream os;
            Json rows = Json::array();
            for (std::size_t i = 0; i < z.size(); ++i) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "s = %-8g  %.15g\n", s_values[i], z[i]);
                os << buf;
                rows.push_back({{"s", s_values[i]}, {"value", z[i]}});
            }
            return emit("zeta", f, CheckReport{}, {{"zeta", rows}}, os.str());
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const NcgError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
