#include "bintope/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "bintope/errors.hpp"

namespace bintope::io {

Json to_json(const Integer& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

Json to_json(const IntMatrix& M) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < M.cols(); ++c) row.push_back(to_json(M(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw ParseError("bad integer: " + j.dump());
    return v;
  }
  throw ParseError("expected an integer, got " + j.dump());
}

IntMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw ParseError("expected a non-empty array of rows");
  }
  const std::size_t rows = j.size(), cols = j[0].size();
  IntMatrix M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) M(r, c) = integer_from_json(j[r][c]);
  }
  return M;
}

namespace {

std::optional<Rational> rational_entry(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0) throw ParseError("bad rational: " + j.dump());
    if (q.get_den() == 0) throw ParseError("zero denominator: " + j.dump());
    q.canonicalize();
    return q;
  }
  return std::nullopt;
}

Complex complex_entry(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw ParseError("expected a number, a rational string or [re, im], got " + j.dump());
}

}  // namespace

BinomialSystem system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("exponents") || !j.contains("rhs")) {
    throw ParseError("system needs \"exponents\" and \"rhs\"");
  }
  IntMatrix A = matrix_from_json(j["exponents"]);
  const Json& rhs = j["rhs"];
  if (!rhs.is_array() || rhs.size() != A.cols()) {
    throw ParseError("rhs must have one entry per exponent column");
  }
  std::vector<Rational> exact;
  for (const auto& e : rhs) {
    auto q = rational_entry(e);
    if (!q) break;
    exact.push_back(*q);
  }
  try {
    if (exact.size() == rhs.size()) return BinomialSystem(std::move(A), std::move(exact));
    ComplexVector b;
    for (const auto& e : rhs) {
      auto q = rational_entry(e);
      b.push_back(q ? Complex(q->get_d(), 0.0) : complex_entry(e));
    }
    return BinomialSystem(std::move(A), std::move(b));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  }
}

Json system_to_json(const BinomialSystem& sys) {
  Json out;
  out["exponents"] = to_json(sys.exponents());
  Json rhs = Json::array();
  if (sys.exact_rhs()) {
    for (const auto& q : *sys.exact_rhs()) {
      if (q.get_den() == 1) {
        rhs.push_back(to_json(q.get_num()));
      } else {
        rhs.push_back(q.get_str());
      }
    }
  } else {
    for (const auto& z : sys.rhs()) rhs.push_back(to_json(z));
  }
  out["rhs"] = std::move(rhs);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
  if (!out) throw ParseError("failed writing " + path);
}

namespace {

Json parse(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

IntMatrix read_matrix_file(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j = parse(text, path);
    if (!j.contains("matrix")) throw ParseError(path + ": missing \"matrix\"");
    return matrix_from_json(j["matrix"]);
  }
  std::istringstream in(text);
  return read_matrix(in);
}

BinomialSystem read_system_file(const std::string& path) {
  return system_from_json(parse(read_file(path), path));
}

Json snf_to_json(const SnfResult& snf) {
  Json out;
  out["rank"] = snf.rank;
  Json d = Json::array();
  for (const auto& v : snf.divisors) d.push_back(to_json(v));
  out["divisors"] = std::move(d);
  out["P"] = to_json(snf.P);
  out["Q"] = to_json(snf.Q);
  return out;
}

Json structure_to_json(const SolutionStructure& st) {
  Json out;
  out["consistent"] = st.consistent;
  out["num_vars"] = st.num_vars;
  out["rank"] = st.rank;
  out["dimension"] = st.dimension;
  out["components"] = to_json(st.component_count);
  Json d = Json::array();
  for (const auto& v : st.snf.divisors) d.push_back(to_json(v));
  out["divisors"] = std::move(d);
  out["P"] = to_json(st.snf.P);
  if (st.consistent) out["zeta"] = to_json(st.zeta);
  return out;
}

Json cells_to_json(const Subdivision& sub) {
  Json cells = Json::array();
  for (const auto& c : sub.cells) {
    Json cell;
    cell["indices"] = c.indices;
    cell["nvol"] = to_json(c.nvol);
    Json normal = Json::array();
    for (const auto& q : c.normal) normal.push_back(q.get_str());
    cell["normal"] = std::move(normal);
    cells.push_back(std::move(cell));
  }
  return cells;
}

Json witness_to_json(const WitnessSet& w) {
  Json out;
  out["dimension"] = w.dimension;
  out["degree"] = to_json(w.degree);
  out["complete"] = w.complete;
  out["coefficient_seed"] = w.coefficient_seed;
  out["lifting_seed"] = w.lifting_seed;
  Json paths;
  paths["total"] = w.paths;
  paths["converged"] = w.converged;
  paths["diverged"] = w.diverged;
  paths["failed"] = w.failed;
  paths["duplicates"] = w.duplicates;
  paths["steps"] = w.total_steps;
  paths["regenerations"] = w.regenerations;
  out["paths"] = std::move(paths);
  Json points = Json::array();
  for (const auto& p : w.points) {
    Json pt;
    pt["x"] = to_json(p.x);
    pt["t"] = to_json(p.t);
    pt["system_residual"] = p.system_residual;
    pt["cut_residual"] = p.cut_residual;
    points.push_back(std::move(pt));
  }
  out["points"] = std::move(points);
  return out;
}

}  // namespace bintope::io
