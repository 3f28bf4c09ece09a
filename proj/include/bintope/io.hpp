#pragma once

#include <iosfwd>
#include <string>

#include "bintope/binomial.hpp"
#include "bintope/homotopy.hpp"
#include "bintope/intlinalg.hpp"
#include "bintope/mspace.hpp"
#include "bintope/subdivision.hpp"
#include "json.hpp"

namespace bintope::io {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
Json to_json(const Integer& v);
Json to_json(const IntMatrix& M);
Json to_json(const Complex& z);  // [re, im]
Json to_json(const ComplexVector& v);

Integer integer_from_json(const Json& j);
IntMatrix matrix_from_json(const Json& j);

/// {"exponents": n x m rows, "rhs": m entries}. An rhs entry is an integer,
/// a rational string "p/q", a real number, or [re, im]. The system keeps an
/// exact rhs when every entry is an integer or a rational string.
BinomialSystem system_from_json(const Json& j);
Json system_to_json(const BinomialSystem& sys);

/// A JSON object with "matrix", or the whitespace text format.
IntMatrix read_matrix_file(const std::string& path);
BinomialSystem read_system_file(const std::string& path);

Json snf_to_json(const SnfResult& snf);
Json structure_to_json(const SolutionStructure& st);
Json cells_to_json(const Subdivision& sub);
Json witness_to_json(const WitnessSet& w);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::string& path);
/// Writes to `path`, or standard output when it is empty or "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace bintope::io
