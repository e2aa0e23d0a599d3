#include "specband/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "specband/errors.hpp"
#include "specband/interpolation.hpp"
#include "specband/io.hpp"
#include "specband/reconstruct.hpp"
#include "specband/spectral.hpp"

namespace specband {

namespace {

struct Config {
  Tolerances tol;
  std::string format = "json";
  bool verbose = false;
};

struct Loaded {
  MatrixSpec spec;
  FiniteHermitian m;
  int N = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts either a matrix spec or a dense matrix file carrying "n" and "pivot".
Loaded load_matrix(const std::string& path, int N, int n_override) {
  const json j = read_json_file(path);
  Loaded out;
  if (j.contains("entries")) {
    out.spec = spec_from_json(j);
    out.N = N > 0 ? N : out.spec.n_max;
    out.m = truncate(out.spec, out.N);
    return out;
  }
  out.m = hermitian_from_json(j);
  out.N = out.m.size();
  if (N > 0 && N != out.N) throw UsageError("--N differs from the size of a dense matrix file");
  const int n = n_override > 0 ? n_override : j.value("n", 0);
  if (n < 1) throw UsageError(path + ": dense matrix needs \"n\" (or pass --n)");
  out.spec = spec_from_matrix(out.m, n, 0.0);
  if (j.contains("pivot")) {
    out.spec.pivot.clear();
    for (const auto& [key, val] : j["pivot"].items()) out.spec.pivot[std::stoi(key)] = val.get<int>();
  }
  if (j.contains("tail")) out.spec.tail = Tail{j["tail"][0].get<int>(), j["tail"][1].get<int>()};
  return out;
}

BoundaryMatrix load_boundary(const std::string& path, int n) {
  if (path.empty()) return BoundaryMatrix::identity(n);
  BoundaryMatrix t = boundary_from_json(read_json_file(path));
  if (t.n() != n) throw DimensionMismatch("boundary matrix size differs from n");
  return t;
}

void emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_text_file(path, j.dump(2) + "\n");
  }
}

std::string staircase_csv(const StepMeasure& mu, const Tolerances& tol) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "lambda";
  for (int i = 1; i <= mu.n; ++i) {
    for (int k = 1; k <= mu.n; ++k) os << ",s" << i << "_" << k << "_re,s" << i << "_" << k << "_im";
  }
  os << "\n";
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(mu.n, mu.n);
  for (const auto& jump : mu.jumps(tol)) {
    acc += jump.mass;
    os << jump.lambda;
    for (int i = 0; i < mu.n; ++i) {
      for (int k = 0; k < mu.n; ++k) os << "," << acc(i, k).real() << "," << acc(i, k).imag();
    }
    os << "\n";
  }
  return os.str();
}

bool roundtrip_ok(const RoundTripReport& rep) {
  return rep.validation.pass && rep.eigen_error <= 1e-8 && rep.mass_error <= 1e-7 && rep.location_error <= 1e-8;
}

int exit_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return kUsage;
  if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->numerical() ? kNumericalFailure : kValidationFailure;
  if (dynamic_cast<const NumericalError*>(&e)) return kNumericalFailure;
  if (dynamic_cast<const StructureError*>(&e) || dynamic_cast<const DimensionMismatch*>(&e)) return kValidationFailure;
  if (dynamic_cast<const Error*>(&e)) return kUsage;
  return kNumericalFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Direct and inverse spectral problems for Marchenko-Slavin band matrices", "specband"};
  app.require_subcommand(1);

  Config cfg;
  if (const char* env = std::getenv("SPECBAND_TOL")) {
    try {
      cfg.tol.zero_norm = std::stod(env);
    } catch (const std::exception&) {
      err << "ignoring malformed SPECBAND_TOL=" << env << "\n";
    }
  }
  std::optional<double> tol_zero, tol_cluster, tol_rank;
  app.add_option("--tol-zero", tol_zero, "Gram-Schmidt zero-norm ratio");
  app.add_option("--tol-cluster", tol_cluster, "relative eigenvalue clustering distance");
  app.add_option("--tol-rank", tol_rank, "relative singular value cut for jump ranks");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("-v,--verbose", cfg.verbose, "stage diagnostics on stderr");

  std::string file, file2, output, boundary, report, cls = "m";
  int N = 0, n = 0, k = 6, max_k = 20, batch = 0, jobs = 0, n_max = 0;
  std::uint64_t seed = 1;
  bool mtilde = false, complex_entries = false;
  double density = 0.7;

  auto* validate = app.add_subcommand("validate", "check membership in class m or mtilde");
  validate->add_option("--class", cls)->check(CLI::IsMember({"m", "mtilde"}));
  validate->add_option("file", file)->required();

  auto* trunc = app.add_subcommand("truncate", "write the N x N upper-left corner");
  trunc->add_option("--N", N)->required()->check(CLI::PositiveNumber);
  trunc->add_option("file", file)->required();
  trunc->add_option("-o,--output", output);

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and eigenvectors");
  spectrum->add_option("file", file)->required();
  spectrum->add_option("--N", N);
  spectrum->add_option("-o,--output", output);

  auto* measure = app.add_subcommand("measure", "step spectral function");
  measure->add_option("file", file)->required();
  measure->add_option("--boundary", boundary);
  measure->add_option("--N", N);
  measure->add_option("--n", n);
  measure->add_option("-o,--output", output);

  auto* moments_cmd = app.add_subcommand("moments", "moment matrices S_0..S_k");
  moments_cmd->add_option("file", file)->required();
  moments_cmd->add_option("--k", k)->check(CLI::NonNegativeNumber);

  auto* staircase = app.add_subcommand("staircase", "cumulative jumps as CSV");
  staircase->add_option("file", file)->required();
  staircase->add_option("-o,--output", output);

  auto* height_cmd = app.add_subcommand("height", "height of a vector polynomial");
  height_cmd->add_option("file", file)->required();

  auto* check = app.add_subcommand("check-solution", "test a polynomial against the interpolation problem");
  check->add_option("measure", file)->required();
  check->add_option("poly", file2)->required();

  auto* generators = app.add_subcommand("generators", "heights and minimality of q_1..q_n");
  generators->add_option("file", file)->required();
  generators->add_option("--boundary", boundary);
  generators->add_option("--N", N);
  generators->add_option("--n", n);

  auto* recon = app.add_subcommand("reconstruct", "matrix in class mtilde from a step measure");
  recon->add_option("file", file)->required();
  recon->add_option("--max-k", max_k)->check(CLI::PositiveNumber);
  recon->add_option("-o,--output", output);

  auto* rt = app.add_subcommand("roundtrip", "matrix -> measure -> reconstruction -> comparison");
  rt->add_option("file", file);
  rt->add_option("--boundary", boundary);
  rt->add_option("--N", N);
  rt->add_option("--n", n);
  rt->add_option("--report", report);
  rt->add_option("--batch", batch, "number of random instances, seeds seed..seed+batch-1");
  rt->add_option("--seed", seed);
  rt->add_option("--jobs", jobs);

  auto* gen = app.add_subcommand("gen", "random matrix spec");
  gen->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  gen->add_option("--N-max", n_max)->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed);
  gen->add_flag("--mtilde", mtilde);
  gen->add_flag("--complex", complex_entries);
  gen->add_option("--density", density)->check(CLI::Range(0.0, 1.0));
  gen->add_option("-o,--output", output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  if (tol_zero) cfg.tol.zero_norm = *tol_zero;
  if (tol_cluster) cfg.tol.cluster = *tol_cluster;
  if (tol_rank) cfg.tol.rank = *tol_rank;
  if (cfg.tol.zero_norm <= 0 || cfg.tol.cluster <= 0 || cfg.tol.rank <= 0) {
    err << "error: tolerances must be positive\n";
    return kUsage;
  }
  auto log = [&](const std::string& msg) {
    if (cfg.verbose) err << "[specband] " << msg << "\n";
  };

  try {
    if (validate->parsed()) {
      const MatrixSpec spec = load_matrix(file, 0, 0).spec;
      const auto rep = validate_class(spec, cls == "m" ? MatrixClass::M : MatrixClass::MTilde, cfg.tol);
      out << to_json(rep).dump(2) << "\n";
      return rep.pass ? kOk : kValidationFailure;
    }
    if (trunc->parsed()) {
      const MatrixSpec spec = spec_from_json(read_json_file(file));
      const MatrixSpec full = N > spec.n_max ? extend_tail(spec, N) : spec;
      emit(to_json(truncate(spec, N), full), output, out);
      return kOk;
    }
    if (spectrum->parsed()) {
      const json j = read_json_file(file);
      FiniteHermitian m;
      if (j.contains("entries")) {
        const MatrixSpec spec = spec_from_json(j);
        m = truncate(spec, N > 0 ? N : spec.n_max);
      } else {
        m = hermitian_from_json(j);
      }
      const SpectralData sd = eigen_decompose(m);
      if (cfg.format == "csv") {
        std::ostringstream os;
        os << std::setprecision(17) << "lambda\n";
        for (int i = 0; i < sd.lambdas.size(); ++i) os << sd.lambdas(i) << "\n";
        if (output.empty()) out << os.str(); else write_text_file(output, os.str());
      } else {
        emit(to_json(sd), output, out);
      }
      return kOk;
    }
    if (measure->parsed()) {
      int dim = n;
      if (dim < 1 && !boundary.empty()) dim = boundary_from_json(read_json_file(boundary)).n();
      const Loaded l = load_matrix(file, N, dim);
      const BoundaryMatrix t = load_boundary(boundary, l.spec.n);
      log("eigen-decomposing N=" + std::to_string(l.N));
      emit(to_json(step_measure(eigen_decompose(l.m), t)), output, out);
      return kOk;
    }
    if (moments_cmd->parsed()) {
      const StepMeasure mu = measure_from_json(read_json_file(file));
      json arr = json::array();
      for (const auto& s : moments(mu, k)) arr.push_back(to_json(s));
      out << json{{"n", mu.n}, {"moments", arr}}.dump(2) << "\n";
      return kOk;
    }
    if (staircase->parsed()) {
      const StepMeasure mu = measure_from_json(read_json_file(file));
      const std::string csv = staircase_csv(mu, cfg.tol);
      if (output.empty()) out << csv; else write_text_file(output, csv);
      return kOk;
    }
    if (height_cmd->parsed()) {
      const VectorPolynomial r = poly_from_json(read_json_file(file));
      out << json{{"height", to_json(height(r))}}.dump() << "\n";
      return kOk;
    }
    if (check->parsed()) {
      const StepMeasure mu = measure_from_json(read_json_file(file));
      const VectorPolynomial r = poly_from_json(read_json_file(file2));
      const bool ok = is_solution(r, InterpolationData::from_measure(mu), cfg.tol.zero_norm);
      out << json{{"solution", ok}, {"seminorm", seminorm(r, mu)}}.dump(2) << "\n";
      return ok ? kOk : kValidationFailure;
    }
    if (generators->parsed()) {
      int dim = n;
      if (dim < 1 && !boundary.empty()) dim = boundary_from_json(read_json_file(boundary)).n();
      const Loaded l = load_matrix(file, N, dim);
      const BoundaryMatrix t = load_boundary(boundary, l.spec.n);
      const StructureInfo info = analyze_structure(l.spec, l.N, cfg.tol);
      const auto p = build_p(l.m, info, t, cfg.tol);
      const auto q = build_q(l.m, info, p, cfg.tol);
      const StepMeasure mu = step_measure(eigen_decompose(l.m), t);
      const bool is_tilde = validate_class(l.spec, MatrixClass::MTilde, cfg.tol).pass;
      const auto rep = verify_generators(q, InterpolationData::from_measure(mu),
                                         is_tilde ? MatrixClass::MTilde : MatrixClass::M, cfg.tol);
      json qs = json::array();
      for (const auto& x : q) qs.push_back(to_json(x));
      json ph = json::array();
      for (const auto& x : p) ph.push_back(to_json(height(x)));
      out << json{{"class_hint", is_tilde ? "mtilde" : "m"}, {"p_heights", ph}, {"q", qs}, {"report", to_json(rep)}}
                 .dump(2)
          << "\n";
      return kOk;
    }
    if (recon->parsed()) {
      const StepMeasure mu = measure_from_json(read_json_file(file));
      const OrthoResult res = orthonormalize(mu, max_k, cfg.tol);
      const FiniteHermitian m = recover_matrix(res, mu);
      const MatrixSpec structure = spec_from_matrix(m, mu.n, cfg.tol.recover_zero);
      const auto rep = validate_class(structure, MatrixClass::MTilde, cfg.tol);
      json mat = to_json(m, structure);
      mat["boundary"] = to_json(res.t_tilde);
      if (!output.empty()) write_text_file(output, mat.dump(2) + "\n");
      json summary = to_json(res);
      summary["mtilde_class"] = to_json(rep);
      if (output.empty()) summary["mtilde"] = mat;
      out << summary.dump(2) << "\n";
      return rep.pass ? kOk : kValidationFailure;
    }
    if (rt->parsed()) {
      if (batch > 0) {
        const int dim = n > 0 ? n : 2;
        const int size = N > 0 ? N : 10;
        std::vector<json> results(static_cast<std::size_t>(batch));
        std::vector<int> codes(static_cast<std::size_t>(batch), kOk);
        const int workers = std::max(1, std::min(batch, jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency())));
        auto work = [&](int w) {
          for (int i = w; i < batch; i += workers) {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
            json entry = {{"seed", s}};
            try {
              const MatrixSpec spec = generate_random({dim, size, std::nullopt, {}, {}, false, false, 0.7}, s);
              const BoundaryMatrix t = BoundaryMatrix::random(dim, s);
              const auto rep = roundtrip(spec, t, size, cfg.tol);
              entry["ok"] = roundtrip_ok(rep);
              entry["eigen_error"] = rep.eigen_error;
              entry["mass_error"] = rep.mass_error;
              entry["mtilde_pass"] = rep.validation.pass;
              codes[i] = roundtrip_ok(rep) ? kOk : kValidationFailure;
            } catch (const std::exception& e) {
              entry["ok"] = false;
              entry["error"] = e.what();
              codes[i] = exit_for(e);
            }
            results[i] = std::move(entry);
          }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
        const int code = *std::max_element(codes.begin(), codes.end());
        const json j = {{"batch", results}, {"all_ok", code == kOk}};
        emit(j, report, out);
        if (!report.empty()) out << j["all_ok"].dump() << "\n";
        return code;
      }
      if (file.empty()) throw UsageError("roundtrip needs a matrix file or --batch");
      int dim = n;
      if (dim < 1 && !boundary.empty()) dim = boundary_from_json(read_json_file(boundary)).n();
      const Loaded l = load_matrix(file, N, dim);
      const BoundaryMatrix t = load_boundary(boundary, l.spec.n);
      const auto rep = roundtrip(l.spec, t, l.N, cfg.tol);
      json j = to_json(rep);
      j["ok"] = roundtrip_ok(rep);
      if (report.empty()) {
        out << j.dump(2) << "\n";
      } else {
        write_text_file(report, j.dump(2) + "\n");
        out << json{{"ok", roundtrip_ok(rep)}, {"eigen_error", rep.eigen_error}, {"mass_error", rep.mass_error}}.dump()
            << "\n";
      }
      return roundtrip_ok(rep) ? kOk : kValidationFailure;
    }
    if (gen->parsed()) {
      RandomProfile prof;
      prof.n = n;
      prof.n_max = n_max;
      prof.force_mtilde = mtilde;
      prof.complex_entries = complex_entries;
      prof.density = density;
      emit(to_json(generate_random(prof, seed)), output, out);
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  }
  return kUsage;
}

}  // namespace specband
