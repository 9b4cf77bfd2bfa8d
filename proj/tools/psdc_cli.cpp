// Command-line harness: matrix generation, one-shot solves, and benchmark
// sweeps over condition numbers with CSV reports.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "psdc/dnc.hpp"
#include "psdc/factor.hpp"
#include "psdc/gen.hpp"
#include "psdc/io.hpp"
#include "psdc/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitSolver = 4;

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

psdc::SignMethod parse_method(const std::string& name) {
  if (name == "newton") return psdc::SignMethod::newton;
  if (name == "dwh-ldl") return psdc::SignMethod::sigma_dwh_ldl;
  if (name == "dwh-ldliqr2") return psdc::SignMethod::sigma_dwh_ldliqr2;
  if (name == "zolo") return psdc::SignMethod::zolo_pd;
  throw CLI::ValidationError("--method", "unknown method: " + name);
}

psdc::BasisMethod parse_basis(const std::string& name) {
  if (name == "chol") return psdc::BasisMethod::chol;
  if (name == "ldl") return psdc::BasisMethod::ldl;
  throw CLI::ValidationError("--basis", "unknown basis: " + name);
}

std::string sidecar_sig_path(const std::string& matrix_path) {
  const auto dot = matrix_path.find_last_of('.');
  const std::string stem =
      dot == std::string::npos ? matrix_path : matrix_path.substr(0, dot);
  return stem + ".sig";
}

std::vector<double> parse_kappa_sweep(const std::string& text) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    const size_t dots = tok.find("..");
    if (dots != std::string::npos) {
      const double lo = std::stod(tok.substr(0, dots));
      const double hi = std::stod(tok.substr(dots + 2));
      if (!(lo >= 1.0) || !(hi >= lo))
        throw CLI::ValidationError("--sweep", "invalid range: " + tok);
      for (double k = lo; k <= hi * (1.0 + 1e-12); k *= 10.0) out.push_back(k);
    } else {
      out.push_back(std::stod(tok));
    }
    pos = comma + 1;
  }
  for (double k : out)
    if (!(k >= 1.0)) throw CLI::ValidationError("--sweep", "kappa must be >= 1");
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("PSDC_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

struct DivideOutcome {
  psdc::io::RunRecord record;
};

// One generate + spectral division cell; failures land in the status column.
psdc::io::RunRecord run_divide_cell(int n, double kappa, uint64_t seed,
                                    const std::string& method,
                                    const std::string& basis) {
  psdc::io::RunRecord rec;
  rec.method = method;
  rec.basis = basis;
  rec.n = n;
  rec.kappa = kappa;
  rec.seed = seed;
  rec.backward_error = rec.residual = rec.orthogonality_defect =
      std::nan("");
  rec.wall_time_ms = std::nan("");
  try {
    psdc::gen::GeneratorSpec spec;
    spec.n = n;
    spec.kappa = kappa;
    spec.seed = seed;
    const psdc::gen::Generated g = psdc::gen::random_definite_pseudosym(spec);

    psdc::DivideOptions opt;
    opt.method = parse_method(method);
    opt.basis = parse_basis(basis);
    opt.shift = 0.0;
    opt.definite = true;

    const auto t0 = clock_type::now();
    const psdc::DivisionResult div = psdc::spectral_divide(g.a, g.sigma, opt);
    rec.wall_time_ms = ms_since(t0);

    rec.iterations = div.sign_result.iterations;
    rec.backward_error = div.backward_error;
    // divide-only run: report the sign idempotency and the basis defect
    const int nn = div.sign_result.s.rows();
    psdc::DenseMatrix s2 =
        psdc::kernels::multiply(div.sign_result.s, div.sign_result.s);
    psdc::add_diagonal(s2, -1.0);
    rec.residual = psdc::frobenius_norm(s2) / std::sqrt(double(nn));
    psdc::DenseMatrix q(nn, nn);
    for (int i = 0; i < nn; ++i) {
      for (int j = 0; j < div.basis.r_plus; ++j) q(i, j) = div.basis.q_plus(i, j);
      for (int j = 0; j < div.basis.r_minus; ++j)
        q(i, div.basis.r_plus + j) = div.basis.q_minus(i, j);
    }
    psdc::DenseMatrix gram = psdc::kernels::gram_sigma(q, g.sigma);
    for (int i = 0; i < nn; ++i) gram(i, i) -= div.basis.sigma_hat[i];
    rec.orthogonality_defect = psdc::frobenius_norm(gram);
    rec.status = "ok";
  } catch (const psdc::Error& e) {
    rec.status = std::string("error:") + psdc::errc_name(e.code());
  }
  return rec;
}

int cmd_gen(const std::string& kind, int n, double kappa, uint64_t seed,
            double gap, const std::string& out_path) {
  psdc::gen::GeneratorSpec spec;
  spec.n = n;
  spec.kappa = kappa;
  spec.seed = seed;
  spec.gap = gap;
  if (kind == "random_definite")
    spec.kind = psdc::gen::Kind::random_definite;
  else if (kind == "random_signature")
    spec.kind = psdc::gen::Kind::random_signature;
  else if (kind == "casida_like")
    spec.kind = psdc::gen::Kind::casida_like;
  else {
    std::fprintf(stderr, "unknown --kind %s\n", kind.c_str());
    return kExitUsage;
  }
  try {
    const psdc::gen::Generated g = psdc::gen::generate(spec);
    psdc::io::write_matrix_market(out_path, g.a);
    psdc::io::write_signature(sidecar_sig_path(out_path), g.sigma);
  } catch (const psdc::Error& e) {
    if (e.code() == psdc::Errc::io_error) {
      std::fprintf(stderr, "%s\n", e.what());
      return kExitIo;
    }
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_solve(const std::string& matrix_path, const std::string& sig_path,
              const std::string& method, const std::string& basis,
              bool recursive, const std::string& out_csv,
              const std::string& evals_path) {
  psdc::DenseMatrix a;
  psdc::Signature sigma;
  try {
    a = psdc::io::read_matrix_market(matrix_path);
    sigma = psdc::io::read_signature(sig_path.empty()
                                         ? sidecar_sig_path(matrix_path)
                                         : sig_path);
  } catch (const psdc::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitIo;
  }

  psdc::io::RunRecord rec;
  rec.method = method;
  rec.basis = basis;
  rec.n = a.rows();
  rec.kappa = std::nan("");
  rec.seed = 0;
  rec.backward_error = rec.residual = rec.orthogonality_defect = std::nan("");
  rec.wall_time_ms = std::nan("");

  int exit_code = kExitOk;
  try {
    if (!a.square() || sigma.size() != a.rows())
      psdc::throw_error(psdc::Errc::invalid_argument,
                        "matrix and signature sizes do not match");
    if (psdc::pseudosymmetry_defect(a, sigma) >
        1e-8 * psdc::frobenius_norm(a))
      psdc::throw_error(psdc::Errc::not_pseudosymmetric,
                        "input is not pseudosymmetric w.r.t. the signature");

    const auto t0 = clock_type::now();
    psdc::EigenDecomposition eig;
    if (recursive) {
      psdc::RecursiveConfig config;
      config.method = parse_method(method);
      eig = psdc::solve_recursive(a, sigma, config);
    } else {
      try {
        eig = psdc::solve_definite(a, sigma, parse_method(method));
      } catch (const psdc::Error& e) {
        if (e.code() != psdc::Errc::not_definite) throw;
        // indefinite input: fall through to the general recursive solver
        psdc::RecursiveConfig config;
        config.method = parse_method(method);
        eig = psdc::solve_recursive(a, sigma, config);
      }
    }
    rec.wall_time_ms = ms_since(t0);
    rec.residual = eig.residual;
    rec.orthogonality_defect = eig.orthogonality_defect;
    rec.backward_error = 0.0;
    rec.status = "ok";
    psdc::io::write_eigenvalues(evals_path, eig.eigenvalues);
  } catch (const psdc::Error& e) {
    if (e.code() == psdc::Errc::io_error) {
      std::fprintf(stderr, "%s\n", e.what());
      return kExitIo;
    }
    rec.status = std::string("error:") + psdc::errc_name(e.code());
    std::fprintf(stderr, "%s\n", e.what());
    exit_code = kExitSolver;
  }
  try {
    psdc::io::write_report_csv(out_csv, {rec});
  } catch (const psdc::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitIo;
  }
  return exit_code;
}

int cmd_bench(int n, const std::string& sweep, int seeds,
              const std::string& methods_csv, const std::string& basis,
              int threads, const std::string& out_csv) {
  std::vector<double> kappas;
  std::vector<std::string> methods;
  try {
    kappas = parse_kappa_sweep(sweep);
    size_t pos = 0;
    while (pos < methods_csv.size()) {
      size_t comma = methods_csv.find(',', pos);
      if (comma == std::string::npos) comma = methods_csv.size();
      const std::string tok = methods_csv.substr(pos, comma - pos);
      if (!tok.empty()) {
        (void)parse_method(tok);
        methods.push_back(tok);
      }
      pos = comma + 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  }
  if (methods.empty() || kappas.empty() || seeds < 1 || n < 2) {
    std::fprintf(stderr, "bench: need a nonempty sweep, methods and seeds\n");
    return kExitUsage;
  }

  // cells in deterministic (kappa, seed, method) order
  struct Cell {
    double kappa;
    uint64_t seed;
    std::string method;
  };
  std::vector<Cell> cells;
  for (double k : kappas)
    for (int s = 0; s < seeds; ++s)
      for (const std::string& m : methods) cells.push_back({k, uint64_t(s), m});

  std::vector<psdc::io::RunRecord> rows(cells.size());
#ifdef _OPENMP
  const bool outer_parallel = threads > 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (outer_parallel)
#endif
  for (size_t i = 0; i < cells.size(); ++i) {
    rows[i] = run_divide_cell(n, cells[i].kappa, cells[i].seed, cells[i].method,
                              basis);
  }

  try {
    psdc::io::write_report_csv(out_csv, rows);
    const auto dot = out_csv.find_last_of('.');
    const std::string agg_path =
        (dot == std::string::npos ? out_csv : out_csv.substr(0, dot)) +
        ".agg.csv";
    psdc::io::write_aggregate_csv(agg_path, psdc::io::aggregate_by_kappa(rows));
  } catch (const psdc::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving spectral divide-and-conquer for "
               "pseudosymmetric matrices"};
  app.require_subcommand(1);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a test matrix");
  std::string kind = "random_definite";
  int n = 250;
  double kappa = 1e3;
  uint64_t seed = 0;
  double gap = 1.0;
  std::string out_path;
  gen_cmd->add_option("--kind", kind, "random_definite | random_signature | casida_like");
  gen_cmd->add_option("--n", n, "matrix size");
  gen_cmd->add_option("--kappa", kappa, "target condition number (>= 1)");
  gen_cmd->add_option("--seed", seed, "64-bit seed");
  gen_cmd->add_option("--gap", gap, "casida_like spectral gap");
  gen_cmd->add_option("--out", out_path, "output MatrixMarket path")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one eigenproblem");
  std::string matrix_path, sig_path, method = "zolo", basis = "ldl";
  std::string solve_out = "report.csv", evals_path = "evals.txt";
  bool recursive = false;
  solve_cmd->add_option("matrix", matrix_path, "MatrixMarket file")->required();
  solve_cmd->add_option("sig", sig_path, "signature sidecar (default: <matrix>.sig)");
  solve_cmd->add_option("--method", method, "newton | dwh-ldl | dwh-ldliqr2 | zolo");
  solve_cmd->add_option("--basis", basis, "chol | ldl");
  solve_cmd->add_flag("--recursive", recursive, "general recursive solver");
  solve_cmd->add_option("--out", solve_out, "CSV report path");
  solve_cmd->add_option("--evals", evals_path, "eigenvalue output path");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "condition-number sweep");
  std::string sweep = "1e1..1e8", methods_csv = "zolo,dwh-ldliqr2,newton";
  std::string bench_basis = "ldl", bench_out = "bench.csv";
  int bench_n = 250, seeds = 10, threads = default_threads();
  bench_cmd->add_option("--n", bench_n, "matrix size");
  bench_cmd->add_option("--sweep", sweep, "kappa list, e.g. 1e2,1e4 or 1e1..1e16");
  bench_cmd->add_option("--seeds", seeds, "seeds per kappa");
  bench_cmd->add_option("--methods", methods_csv, "comma-separated method list");
  bench_cmd->add_option("--basis", bench_basis, "chol | ldl");
  bench_cmd->add_option("--threads", threads,
                        "parallel sweep cells (default: PSDC_THREADS or 1)");
  bench_cmd->add_option("--out", bench_out, "CSV report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed())
      return cmd_gen(kind, n, kappa, seed, gap, out_path);
    if (solve_cmd->parsed())
      return cmd_solve(matrix_path, sig_path, method, basis, recursive,
                       solve_out, evals_path);
    if (bench_cmd->parsed())
      return cmd_bench(bench_n, sweep, seeds, methods_csv, bench_basis, threads,
                       bench_out);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
