#include "specband/io.hpp"

#include <fstream>
#include <sstream>

#include "specband/errors.hpp"

namespace specband {

json to_json(cd z) { return json::array({z.real(), z.imag()}); }

cd complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error("matrix must be a list of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = rows ? static_cast<int>(j[0].size()) : 0;
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) throw Error("ragged matrix rows");
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

namespace {

json vector_json(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

Eigen::VectorXcd vector_from_json(const json& j) {
  Eigen::VectorXcd v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = complex_from_json(j[i]);
  return v;
}

json pivot_json(const std::map<int, int>& pivot) {
  json p = json::object();
  for (const auto& [c, r] : pivot) p[std::to_string(c)] = r;
  return p;
}

std::map<int, int> pivot_from_json(const json& j) {
  std::map<int, int> out;
  for (const auto& [key, val] : j.items()) out[std::stoi(key)] = val.get<int>();
  return out;
}

json violations_json(const std::vector<Violation>& vs) {
  json a = json::array();
  for (const auto& v : vs) {
    a.push_back({{"clause", v.clause}, {"row", v.row}, {"col", v.col}, {"message", v.message}});
  }
  return a;
}

json ints(const std::vector<int>& v) { return json(v); }

}  // namespace

json to_json(const MatrixSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["N_max"] = spec.n_max;
  if (spec.tail) j["tail"] = {spec.tail->j0, spec.tail->k0};
  j["pivot"] = pivot_json(spec.pivot);
  json entries = json::array();
  for (const auto& [idx, v] : spec.entries) {
    entries.push_back({idx.first, idx.second, v.real(), v.imag()});
  }
  j["entries"] = std::move(entries);
  if (!spec.tail_profile.empty()) {
    json d = json::array();
    for (cd v : spec.tail_profile) d.push_back(to_json(v));
    j["tail_profile"] = {{"diagonals", d}};
  }
  return j;
}

MatrixSpec spec_from_json(const json& j) {
  MatrixSpec spec;
  try {
    spec.n = j.at("n").get<int>();
    spec.n_max = j.at("N_max").get<int>();
    if (j.contains("tail") && !j["tail"].is_null()) {
      const auto& t = j["tail"];
      if (!t.is_array() || t.size() != 2) throw Error("tail must be [j0, k0]");
      spec.tail = Tail{t[0].get<int>(), t[1].get<int>()};
    }
    if (j.contains("pivot")) spec.pivot = pivot_from_json(j["pivot"]);
    for (const auto& e : j.at("entries")) {
      if (e.size() != 3 && e.size() != 4) throw Error("entry must be [j, k, re, im]");
      const int r = e[0].get<int>();
      const int c = e[1].get<int>();
      if (r > c) throw Error("entries must be stored with j <= k");
      const cd v{e[2].get<double>(), e.size() == 4 ? e[3].get<double>() : 0.0};
      if (r == c && v.imag() != 0.0) throw StructureError("diagonal entry must be real");
      if (v != cd{}) spec.entries[{r, c}] = v;
    }
    if (j.contains("tail_profile")) {
      for (const auto& v : j["tail_profile"].at("diagonals")) spec.tail_profile.push_back(complex_from_json(v));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed matrix spec: ") + e.what());
  }
  if (spec.n < 1 || spec.n_max < 1) throw StructureError("n and N_max must be positive");
  return spec;
}

json to_json(const FiniteHermitian& m) { return {{"N", m.size()}, {"data", to_json(m.data())}}; }

json to_json(const FiniteHermitian& m, const MatrixSpec& structure) {
  json j = to_json(m);
  j["n"] = structure.n;
  std::map<int, int> pivot;
  for (const auto& [c, r] : structure.pivot) {
    if (c <= m.size()) pivot[c] = r;
  }
  j["pivot"] = pivot_json(pivot);
  if (structure.tail) j["tail"] = {structure.tail->j0, structure.tail->k0};
  return j;
}

FiniteHermitian hermitian_from_json(const json& j) {
  try {
    Eigen::MatrixXcd d = matrix_from_json(j.at("data"));
    if (j.contains("N") && j["N"].get<int>() != d.rows()) throw DimensionMismatch("N differs from data size");
    return FiniteHermitian(std::move(d));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed matrix: ") + e.what());
  }
}

json to_json(const VectorPolynomial& r) {
  json comps = json::array();
  for (const auto& c : r.comps()) {
    json a = json::array();
    for (cd v : c) a.push_back(to_json(v));
    comps.push_back(std::move(a));
  }
  return {{"n", r.dim()}, {"comps", comps}};
}

VectorPolynomial poly_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<ScalarPolynomial> comps;
    for (const auto& c : j.at("comps")) {
      ScalarPolynomial s;
      for (const auto& v : c) s.push_back(complex_from_json(v));
      comps.push_back(std::move(s));
    }
    return VectorPolynomial(n, std::move(comps));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed polynomial: ") + e.what());
  }
}

json to_json(const BoundaryMatrix& t) { return {{"n", t.n()}, {"t", to_json(t.matrix())}}; }

BoundaryMatrix boundary_from_json(const json& j) {
  try {
    return BoundaryMatrix(matrix_from_json(j.at("t")));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed boundary matrix: ") + e.what());
  }
}

json to_json(const StepMeasure& mu) {
  json pts = json::array();
  for (const auto& p : mu.points) pts.push_back({{"lambda", p.lambda}, {"C", vector_json(p.C)}});
  return {{"n", mu.n}, {"points", pts}};
}

StepMeasure measure_from_json(const json& j) {
  StepMeasure mu;
  try {
    mu.n = j.at("n").get<int>();
    for (const auto& p : j.at("points")) {
      MeasurePoint pt{p.at("lambda").get<double>(), vector_from_json(p.at("C"))};
      if (pt.C.size() != mu.n) throw DimensionMismatch("C vector length differs from n");
      mu.points.push_back(std::move(pt));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed measure: ") + e.what());
  }
  std::stable_sort(mu.points.begin(), mu.points.end(),
                   [](const MeasurePoint& a, const MeasurePoint& b) { return a.lambda < b.lambda; });
  return mu;
}

json to_json(const SpectralData& sd) {
  json l = json::array();
  for (int i = 0; i < sd.lambdas.size(); ++i) l.push_back(sd.lambdas(i));
  return {{"lambdas", l}, {"phi", to_json(sd.phi)}};
}

SpectralData spectral_from_json(const json& j) {
  SpectralData sd;
  const auto& l = j.at("lambdas");
  sd.lambdas.resize(static_cast<int>(l.size()));
  for (std::size_t i = 0; i < l.size(); ++i) sd.lambdas(static_cast<int>(i)) = l[i].get<double>();
  sd.phi = matrix_from_json(j.at("phi"));
  return sd;
}

json to_json(const Height& h) { return h.finite() ? json(h.value()) : json("-inf"); }

json to_json(const ValidationReport& rep) {
  return {{"class", to_string(rep.which)},
          {"pass", rep.pass},
          {"minimal", rep.minimal},
          {"violations", violations_json(rep.violations)},
          {"warnings", violations_json(rep.warnings)}};
}

json to_json(const StructureInfo& info) {
  json gamma = json::object();
  for (const auto& [k, g] : info.gamma) gamma[std::to_string(k)] = g;
  json j = {{"n", info.n}, {"N", info.N}, {"K", ints(info.K)}, {"K_perp", ints(info.K_perp)},
            {"gamma", gamma}, {"pivot", pivot_json(info.pivot)}};
  if (info.tail) j["tail"] = {info.tail->j0, info.tail->k0};
  return j;
}

json to_json(const Decomposition& d) {
  json a = json::array();
  for (cd v : d.a) a.push_back(to_json(v));
  json s = json::array();
  for (const auto& poly : d.s) {
    json c = json::array();
    for (cd v : poly) c.push_back(to_json(v));
    s.push_back(std::move(c));
  }
  return {{"a", a}, {"s", s}, {"residual", d.residual}, {"scale", d.scale}};
}

json to_json(const GeneratorReport& rep) {
  json h = json::array();
  for (const auto& x : rep.heights) h.push_back(to_json(x));
  return {{"heights", h},
          {"residues", ints(rep.residues)},
          {"distinct_residues", rep.distinct_residues},
          {"all_solutions", rep.all_solutions},
          {"max_height", rep.max_height},
          {"dimensions", ints(rep.dimensions)},
          {"generator_heights", ints(rep.generator_heights)},
          {"new_directions", ints(rep.new_directions)},
          {"minimal", rep.minimal}};
}

json to_json(const OrthoResult& res) {
  json p = json::array();
  for (const auto& x : res.p_tilde) p.push_back(to_json(x));
  json q = json::array();
  json qh = json::array();
  for (const auto& x : res.q_tilde) {
    q.push_back(to_json(x));
    qh.push_back(to_json(height(x)));
  }
  return {{"n", res.n},
          {"p_tilde", p},
          {"q_tilde", q},
          {"q_heights", qh},
          {"boundary", to_json(res.t_tilde)},
          {"p_index", ints(res.p_index)},
          {"q_index", ints(res.q_index)},
          {"skip_log", ints(res.skip_log)},
          {"skip_residuals", res.skip_residuals},
          {"zero_ratios", res.zero_ratios},
          {"rank_exhausted", res.rank_exhausted}};
}

json to_json(const RoundTripReport& rep) {
  json qh = json::array();
  for (const auto& h : rep.q_heights) qh.push_back(to_json(h));
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"n", rep.n},
          {"N", rep.N},
          {"mtilde_class", to_json(rep.validation)},
          {"p_count", rep.p_count},
          {"q_count", rep.q_count},
          {"q_heights", qh},
          {"q_residues_distinct", rep.q_residues_distinct},
          {"eigen_error", num(rep.eigen_error)},
          {"jumps_in", rep.jumps_in},
          {"jumps_out", rep.jumps_out},
          {"location_error", num(rep.location_error)},
          {"mass_error", num(rep.mass_error)},
          {"moment_order", rep.moment_order},
          {"moment_error", num(rep.moment_error)},
          {"boundary", to_json(rep.t_tilde)},
          {"mtilde", to_json(rep.m_tilde, rep.mtilde_spec)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace specband
