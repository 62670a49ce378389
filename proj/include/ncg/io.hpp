#pragma once

#include "ncg/converters.hpp"

#include <json.hpp>

#include <string>

namespace ncg {

using Json = nlohmann::json;

// Malformed input: bad JSON, missing fields, wrong shapes. `where` is a JSON pointer or byte offset.
struct ParseError : NcgError {
    std::string message;
    std::string where;
    ParseError(const std::string& msg, const std::string& at) : NcgError(msg + " at " + at), message(msg), where(at) {}
};

// [[ [re, im], ... ], ...] row-major
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j, const std::string& where);
Json vector_to_json(const Vec& v);
Vec vector_from_json(const Json& j, const std::string& where);

Json triple_to_json(const SpectralTripleData& t);
SpectralTripleData triple_from_json(const Json& j, const std::string& where = "");

Json report_to_json(const CheckReport& r);
CheckReport report_from_json(const Json& j, const std::string& where = "");

// {base_algebra_ref, m, q_blocks, r_blocks, side}; blocks are operators on the carrier of the referenced algebra
Json module_to_json(const ProjectiveModule& mod, const std::string& base_ref);
// base_ref "right_action" or "algebra" of `t`
ProjectiveModule module_from_json(const Json& j, const SpectralTripleData& t, const std::string& where = "",
                                  const Tolerance& tol = {});
Json connection_to_json(const BimoduleConnection& c, const std::string& module_ref);
BimoduleConnection connection_from_json(const Json& j, const ProjectiveModule& mod, const std::string& where = "");

// Enough to rebuild the pairings: generators, left state, right weight.
Json bimodule_to_json(const EquivBimodule& e);
EquivBimodule bimodule_from_json(const Json& j, const std::string& where = "", const Tolerance& tol = {});

// .striple body plus witness, report and optional extras (source triple, bimodule, frame hint).
Json conversion_to_json(const ConversionResult& r);
ConversionWitness witness_from_json(const Json& j, const std::string& where = "");

Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
SpectralTripleData read_triple_file(const std::string& path);
void write_triple_file(const std::string& path, const SpectralTripleData& t);

}  // namespace ncg
