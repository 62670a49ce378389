#include "ncg/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ncg {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw ParseError("expected an object", where.empty() ? "/" : where);
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'", where.empty() ? "/" : where);
    return *it;
}

bool present(const Json& j, const char* key) {
    auto it = j.find(key);
    return it != j.end() && !it->is_null();
}

int int_field(const Json& j, const char* key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_number_integer()) throw ParseError(std::string("'") + key + "' must be an integer", where + "/" + key);
    return v.get<int>();
}

double number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError("expected a number", where);
    return v.get<double>();
}

cplx complex_from_json(const Json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw ParseError("expected [re, im]", where);
    return {number(v[0], where + "/0"), number(v[1], where + "/1")};
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

std::vector<Mat> matrix_list(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("expected a list of matrices", where);
    std::vector<Mat> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from_json(j[i], where + "/" + std::to_string(i)));
    return out;
}

Json matrix_list_json(const std::vector<Mat>& ms) {
    Json a = Json::array();
    for (const Mat& m : ms) a.push_back(matrix_to_json(m));
    return a;
}

void need_shape(const Mat& m, int n, const std::string& where) {
    if (m.rows() != n || m.cols() != n)
        throw ParseError("expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()),
                         where);
}

double tol_from_json(const Json& v) {
    if (v.is_null()) return std::numeric_limits<double>::infinity();
    return v.get<double>();
}

Json double_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("expected a matrix (list of rows)", where);
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Mat(0, 0);
    if (!j[0].is_array()) throw ParseError("expected a row", where + "/0");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const std::string rw = where + "/" + std::to_string(i);
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("ragged matrix row", rw);
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c));
    }
    return m;
}

Json vector_to_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
    return a;
}

Vec vector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("expected a vector", where);
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where + "/" + std::to_string(i));
    return v;
}

Json triple_to_json(const SpectralTripleData& t) {
    Json j;
    j["version"] = 1;
    j["hilbert_dim"] = t.hilbert_dim;
    j["p"] = t.p;
    j["algebra"] = {{"generators", matrix_list_json(t.algebra)}};
    j["dirac"] = matrix_to_json(t.dirac);
    j["grading"] = t.grading ? matrix_to_json(*t.grading) : Json(nullptr);
    j["right_action"] = t.right_action ? Json{{"generators", matrix_list_json(*t.right_action)}} : Json(nullptr);
    if (t.cycle) {
        Json terms = Json::array();
        for (const auto& term : t.cycle->terms) terms.push_back(matrix_list_json(term));
        j["cycle"] = {{"degree", t.cycle->degree}, {"generalized", t.cycle->generalized}, {"terms", terms}};
    } else {
        j["cycle"] = nullptr;
    }
    j["phi"] = t.phi ? vector_to_json(*t.phi) : Json(nullptr);
    j["state"] = t.state ? matrix_to_json(*t.state) : Json(nullptr);
    return j;
}

SpectralTripleData triple_from_json(const Json& j, const std::string& where) {
    SpectralTripleData t;
    const int version = int_field(j, "version", where);
    if (version != 1) throw ParseError("unsupported version " + std::to_string(version), where + "/version");
    t.hilbert_dim = int_field(j, "hilbert_dim", where);
    const int n = t.hilbert_dim;
    if (n <= 0) throw ParseError("hilbert_dim must be positive", where + "/hilbert_dim");
    t.p = int_field(j, "p", where);
    if (t.p < 0) throw ParseError("p must be nonnegative", where + "/p");

    const std::string aw = where + "/algebra";
    t.algebra = matrix_list(field(field(j, "algebra", where), "generators", aw), aw + "/generators");
    for (std::size_t i = 0; i < t.algebra.size(); ++i) need_shape(t.algebra[i], n, aw + "/generators/" + std::to_string(i));

    t.dirac = matrix_from_json(field(j, "dirac", where), where + "/dirac");
    need_shape(t.dirac, n, where + "/dirac");

    if (present(j, "grading")) {
        t.grading = matrix_from_json(j["grading"], where + "/grading");
        need_shape(*t.grading, n, where + "/grading");
    }
    if (present(j, "right_action")) {
        const std::string rw = where + "/right_action";
        auto gens = matrix_list(field(j["right_action"], "generators", rw), rw + "/generators");
        for (std::size_t i = 0; i < gens.size(); ++i) need_shape(gens[i], n, rw + "/generators/" + std::to_string(i));
        t.right_action = std::move(gens);
    }
    if (present(j, "cycle")) {
        const std::string cw = where + "/cycle";
        const Json& c = j["cycle"];
        HochschildChain ch;
        ch.degree = int_field(c, "degree", cw);
        if (ch.degree < 0) throw ParseError("degree must be nonnegative", cw + "/degree");
        const Json& gen = field(c, "generalized", cw);
        if (!gen.is_boolean()) throw ParseError("'generalized' must be a boolean", cw + "/generalized");
        ch.generalized = gen.get<bool>();
        const Json& terms = field(c, "terms", cw);
        if (!terms.is_array()) throw ParseError("expected a list of terms", cw + "/terms");
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string tw = cw + "/terms/" + std::to_string(k);
            auto legs = matrix_list(terms[k], tw);
            if (static_cast<int>(legs.size()) != ch.degree + 1)
                throw ParseError("term needs degree+1 legs", tw);
            for (std::size_t l = 0; l < legs.size(); ++l) need_shape(legs[l], n, tw + "/" + std::to_string(l));
            ch.terms.push_back(std::move(legs));
        }
        t.cycle = std::move(ch);
    }
    if (present(j, "phi")) {
        t.phi = vector_from_json(j["phi"], where + "/phi");
        if (t.phi->size() != n) throw ParseError("phi has the wrong length", where + "/phi");
    }
    if (present(j, "state")) {
        t.state = matrix_from_json(j["state"], where + "/state");
        need_shape(*t.state, n, where + "/state");
    }
    return t;
}

Json report_to_json(const CheckReport& r) {
    Json entries = Json::array();
    for (const CheckEntry& e : r.entries)
        entries.push_back({{"id", e.id},
                           {"status", status_name(e.status)},
                           {"residual", double_or_null(e.residual)},
                           {"tolerance", double_or_null(e.tolerance)},
                           {"details", e.details}});
    return {{"ok", r.ok()}, {"entries", entries}};
}

CheckReport report_from_json(const Json& j, const std::string& where) {
    CheckReport r;
    const Json& entries = field(j, "entries", where);
    if (!entries.is_array()) throw ParseError("expected a list of entries", where + "/entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string ew = where + "/entries/" + std::to_string(i);
        const Json& e = entries[i];
        CheckEntry c;
        c.id = field(e, "id", ew).get<std::string>();
        const std::string st = field(e, "status", ew).get<std::string>();
        if (st == "pass") c.status = Status::pass;
        else if (st == "fail") c.status = Status::fail;
        else if (st == "skipped") c.status = Status::skipped;
        else throw ParseError("unknown status '" + st + "'", ew + "/status");
        c.residual = tol_from_json(field(e, "residual", ew));
        c.tolerance = tol_from_json(field(e, "tolerance", ew));
        if (present(e, "details")) c.details = e["details"].get<std::string>();
        r.entries.push_back(std::move(c));
    }
    return r;
}

Json module_to_json(const ProjectiveModule& mod, const std::string& base_ref) {
    auto blocks = [&](const Mat& m) {
        const int N = mod.block();
        Json rows = Json::array();
        for (int i = 0; i < mod.m; ++i) {
            Json row = Json::array();
            for (int k = 0; k < mod.m; ++k) row.push_back(matrix_to_json(m.block(i * N, k * N, N, N)));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    return {{"base_algebra_ref", base_ref},
            {"m", mod.m},
            {"q_blocks", blocks(mod.q)},
            {"r_blocks", blocks(mod.r)},
            {"side", mod.side == Side::left ? "left" : "right"}};
}

namespace {

Mat read_blocks(const Json& j, int m, int N, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != m) throw ParseError("expected m rows of blocks", where);
    Mat out(m * N, m * N);
    for (int i = 0; i < m; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        const std::string rw = where + "/" + std::to_string(i);
        if (!row.is_array() || static_cast<int>(row.size()) != m) throw ParseError("expected m blocks", rw);
        for (int k = 0; k < m; ++k) {
            const std::string bw = rw + "/" + std::to_string(k);
            Mat b = matrix_from_json(row[static_cast<std::size_t>(k)], bw);
            need_shape(b, N, bw);
            out.block(i * N, k * N, N, N) = b;
        }
    }
    return out;
}

}  // namespace

ProjectiveModule module_from_json(const Json& j, const SpectralTripleData& t, const std::string& where,
                                  const Tolerance& tol) {
    const std::string ref = field(j, "base_algebra_ref", where).get<std::string>();
    const int m = int_field(j, "m", where);
    if (m <= 0) throw ParseError("m must be positive", where + "/m");
    const std::string side = field(j, "side", where).get<std::string>();
    if (side != "left" && side != "right") throw ParseError("side must be 'left' or 'right'", where + "/side");
    const int N = t.hilbert_dim;
    Mat q = read_blocks(field(j, "q_blocks", where), m, N, where + "/q_blocks");
    Mat r = present(j, "r_blocks") ? read_blocks(j["r_blocks"], m, N, where + "/r_blocks") : q;
    if (ref == "right_action") {
        if (side != "left") throw ParseError("a module over the right action is a left module here", where + "/side");
        ProjectiveModule mod = right_module_over(t, q, tol);
        mod.r = r;
        validate_module(mod, tol);
        return mod;
    }
    if (ref != "algebra") throw ParseError("base_algebra_ref must be 'algebra' or 'right_action'", where + "/base_algebra_ref");
    ProjectiveModule mod;
    mod.base = algebra_of(t, tol);
    mod.m = m;
    mod.q = q;
    mod.r = r;
    mod.side = side == "left" ? Side::left : Side::right;
    validate_module(mod, tol);
    return mod;
}

Json connection_to_json(const BimoduleConnection& c, const std::string& module_ref) {
    Json pot = nullptr;
    if (!c.potential.empty()) {
        pot = Json::array();
        for (const auto& row : c.potential) pot.push_back(matrix_list_json(row));
    }
    Json j = {{"module_ref", module_ref}, {"potential", pot}};
    if (!c.parity.empty()) j["parity"] = c.parity;
    return j;
}

BimoduleConnection connection_from_json(const Json& j, const ProjectiveModule& mod, const std::string& where) {
    BimoduleConnection c = grassmann_connection(mod);
    field(j, "module_ref", where);
    const int n = mod.m, N = mod.block();
    if (present(j, "potential")) {
        const Json& p = j["potential"];
        const std::string pw = where + "/potential";
        if (!p.is_array() || static_cast<int>(p.size()) != n) throw ParseError("expected m rows", pw);
        for (int i = 0; i < n; ++i) {
            auto row = matrix_list(p[static_cast<std::size_t>(i)], pw + "/" + std::to_string(i));
            if (static_cast<int>(row.size()) != n) throw ParseError("expected m entries", pw + "/" + std::to_string(i));
            for (int k = 0; k < n; ++k) {
                need_shape(row[static_cast<std::size_t>(k)], N, pw + "/" + std::to_string(i) + "/" + std::to_string(k));
                c.potential[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k)];
            }
        }
    }
    if (present(j, "parity")) {
        const Json& par = j["parity"];
        if (!par.is_array() || static_cast<int>(par.size()) != n) throw ParseError("expected m signs", where + "/parity");
        c.parity.clear();
        for (const Json& s : par) {
            if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1))
                throw ParseError("parity entries are +1 or -1", where + "/parity");
            c.parity.push_back(s.get<int>());
        }
    }
    return c;
}

Json bimodule_to_json(const EquivBimodule& e) {
    return {{"carrier_dim", e.carrier_dim},
            {"left_generators", matrix_list_json(e.left_gens)},
            {"right_generators", matrix_list_json(e.right_gens)},
            {"left_state", matrix_to_json(e.left.rho)},
            {"right_weight", matrix_to_json(e.right.weight)}};
}

EquivBimodule bimodule_from_json(const Json& j, const std::string& where, const Tolerance& tol) {
    EquivBimodule e;
    e.carrier_dim = int_field(j, "carrier_dim", where);
    const int n = e.carrier_dim;
    if (n <= 0) throw ParseError("carrier_dim must be positive", where + "/carrier_dim");
    e.left_gens = matrix_list(field(j, "left_generators", where), where + "/left_generators");
    e.right_gens = matrix_list(field(j, "right_generators", where), where + "/right_generators");
    for (std::size_t i = 0; i < e.left_gens.size(); ++i) need_shape(e.left_gens[i], n, where + "/left_generators/" + std::to_string(i));
    for (std::size_t i = 0; i < e.right_gens.size(); ++i) need_shape(e.right_gens[i], n, where + "/right_generators/" + std::to_string(i));
    Mat rho = matrix_from_json(field(j, "left_state", where), where + "/left_state");
    need_shape(rho, n, where + "/left_state");
    Mat w = matrix_from_json(field(j, "right_weight", where), where + "/right_weight");
    need_shape(w, n, where + "/right_weight");
    e.left = LeftPairing::make(generate_algebra(e.left_gens, true, tol, n), rho);
    e.right.alg = generate_algebra(e.right_gens, true, tol, n);
    e.right.weight = w;
    return e;
}

Json conversion_to_json(const ConversionResult& r) {
    Json j = triple_to_json(r.output);
    const ConversionWitness& w = r.witness;
    Json wit;
    wit["phi"] = w.phi ? vector_to_json(*w.phi) : Json(nullptr);
    wit["J_kernel"] = w.j_kernel ? matrix_to_json(*w.j_kernel) : Json(nullptr);
    wit["epsilon"] = w.epsilon ? matrix_to_json(*w.epsilon) : Json(nullptr);
    wit["intertwiner"] = w.intertwiner ? matrix_to_json(*w.intertwiner) : Json(nullptr);
    wit["c_hat"] = w.c_hat ? matrix_to_json(*w.c_hat) : Json(nullptr);
    Json frame = Json::array();
    for (const Vec& v : w.frame) frame.push_back(vector_to_json(v));
    wit["frame"] = frame;
    j["witness"] = wit;
    j["report"] = report_to_json(r.report);
    return j;
}

ConversionWitness witness_from_json(const Json& j, const std::string& where) {
    ConversionWitness w;
    if (present(j, "phi")) w.phi = vector_from_json(j["phi"], where + "/phi");
    if (present(j, "J_kernel")) w.j_kernel = matrix_from_json(j["J_kernel"], where + "/J_kernel");
    if (present(j, "epsilon")) w.epsilon = matrix_from_json(j["epsilon"], where + "/epsilon");
    if (present(j, "intertwiner")) w.intertwiner = matrix_from_json(j["intertwiner"], where + "/intertwiner");
    if (present(j, "c_hat")) w.c_hat = matrix_from_json(j["c_hat"], where + "/c_hat");
    if (present(j, "frame")) {
        const Json& f = j["frame"];
        if (!f.is_array()) throw ParseError("expected a list of vectors", where + "/frame");
        for (std::size_t i = 0; i < f.size(); ++i) w.frame.push_back(vector_from_json(f[i], where + "/frame/" + std::to_string(i)));
    }
    return w;
}

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(e.what(), "byte " + std::to_string(e.byte));
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_json_text(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(e.message, path + ": " + e.where);
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NcgError("cannot write " + path);
    out << text;
    if (!out) throw NcgError("write failed: " + path);
}

SpectralTripleData read_triple_file(const std::string& path) {
    Json j = read_json_file(path);
    try {
        return triple_from_json(j);
    } catch (const Json::exception& e) {
        throw ParseError(e.what(), path);
    }
}

void write_triple_file(const std::string& path, const SpectralTripleData& t) {
    write_text_file(path, triple_to_json(t).dump(1) + "\n");
}

}  // namespace ncg
