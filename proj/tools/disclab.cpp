// Batch driver for set-splitting reductions and the covariance oracle.
// Subcommands: gen, check, reduce, cov, oracle, verify, report.
// Exit codes: 0 success, 1 verification failure, 2 usage or parameter error,
// 3 capacity error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "disclab/covariance.hpp"
#include "disclab/json_io.hpp"
#include "disclab/oracle.hpp"
#include "disclab/rng.hpp"
#include "disclab/setsplit.hpp"
#include "disclab/tail_analysis.hpp"

namespace {

using namespace disclab;

constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parameter, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::parameter, "cannot write '" + path + "'");
  out << text;
}

std::string fmt17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string witness_path_for(const std::string& instance_path) {
  const auto dot = instance_path.rfind(".json");
  if (dot == std::string::npos) return instance_path + ".witness.json";
  return instance_path.substr(0, dot) + ".witness.json";
}

struct OracleFlags {
  double tol = 1e-6;
  int max_cuts = 200;
  int certify_cap = 20;
  int minimize_cap = 14;

  OracleOptions options() const {
    OracleOptions opt;
    opt.certify_cap = certify_cap;
    opt.minimize_cap = minimize_cap;
    opt.max_cuts = max_cuts;
    return opt;
  }
};

void add_oracle_flags(CLI::App* cmd, OracleFlags& flags) {
  cmd->add_option("--tol", flags.tol, "convergence tolerance");
  cmd->add_option("--max-cuts", flags.max_cuts, "cutting-plane round cap");
  cmd->add_option("--certify-cap", flags.certify_cap, "kernel enumeration cap");
  cmd->add_option("--minimize-cap", flags.minimize_cap, "minimizer size cap");
}

// ---------------------------------------------------------------------------

int cmd_gen(int n, int m, int b, std::uint64_t seed, bool satisfiable,
            const std::string& out, std::string witness_out) {
  if (satisfiable) {
    const auto planted = generate_satisfiable(n, m, b, seed);
    write_file(out, to_json(planted.instance));
    if (witness_out.empty()) witness_out = witness_path_for(out);
    write_file(witness_out, to_json(planted.witness));
    std::cout << "gen: n=" << n << " m=" << m << " b=" << b << " seed=" << seed
              << " satisfiable -> " << out << ", witness -> " << witness_out
              << "\n";
  } else {
    const auto instance = generate_random(n, m, b, seed);
    write_file(out, to_json(instance));
    std::cout << "gen: n=" << n << " m=" << m << " b=" << b << " seed=" << seed
              << " -> " << out << "\n";
  }
  return 0;
}

int cmd_check(const std::string& instance_path, const std::string& assignment_path,
              bool exhaustive, int cap, const std::string& out) {
  const auto instance = instance_from_json(read_file(instance_path));
  std::ostringstream report;
  report << "{\n  \"n\": " << instance.n << ",\n  \"m\": " << instance.m();
  if (!assignment_path.empty()) {
    const auto assignment = assignment_from_json(read_file(assignment_path));
    const auto result = evaluate(instance, assignment);
    report << ",\n  \"split_count\": " << result.split_count
           << ",\n  \"unsplit_count\": " << result.unsplit_count
           << ",\n  \"unsplit_fraction\": " << fmt17(result.unsplit_fraction);
    std::cout << "check: split=" << result.split_count
              << " unsplit=" << result.unsplit_count << "\n";
  }
  if (exhaustive) {
    ExhaustiveOptions options;
    options.cap = cap;
    const auto result = exhaustive_min_unsplit(instance, options);
    report << ",\n  \"min_unsplit_fraction\": "
           << fmt17(result.min_unsplit_fraction) << ",\n  \"satisfiable\": "
           << (result.min_unsplit_count == 0 ? "true" : "false");
    std::cout << "check: min unsplit fraction = "
              << fmt17(result.min_unsplit_fraction) << "\n";
  }
  report << "\n}\n";
  if (!out.empty()) write_file(out, report.str());
  return 0;
}

int cmd_reduce(int theorem, const std::string& instance_path,
               const std::string& out, const std::string& p_text,
               const std::string& q_text) {
  const auto instance = instance_from_json(read_file(instance_path));
  if (theorem == 1) {
    const auto family = build_vector_family(instance);
    write_file(out, to_json(family));
    std::cout << "reduce: d=" << family.d << " N=" << family.N << " -> " << out
              << "\n";
  } else {
    const auto family = build_biased_family(instance, rational_from_string(p_text),
                                            rational_from_string(q_text));
    write_file(out, to_json(family));
    std::cout << "reduce: D=" << family.D() << " N=" << family.N() << " -> "
              << out << "\n";
  }
  return 0;
}

int cmd_cov(const std::string& family_path, const std::string& dist_path,
            const std::string& out, bool scaled) {
  const auto any = family_from_json(read_file(family_path));
  const auto dist = distribution_from_json(read_file(dist_path));
  const Eigen::MatrixXd columns = std::visit(
      [&](const auto& family) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(family)>;
        if constexpr (std::is_same_v<T, VectorFamily>)
          return family.dense_columns();
        else
          return scaled ? family.scaled_columns() : family.M();
      },
      any);
  const auto report = covariance_of(columns, dist);
  const auto text = to_json(report);
  if (!out.empty()) write_file(out, text);
  std::cout << "cov: op_norm=" << fmt17(report.op_norm)
            << " trace=" << fmt17(report.trace) << "\n";
  return 0;
}

int cmd_oracle(const std::string& family_path, const OracleFlags& flags,
               const std::string& out) {
  const auto any = family_from_json(read_file(family_path));
  FamilyColumns columns;
  Eigen::VectorXd x0;
  std::visit(
      [&](const auto& family) {
        columns = columns_of(family);
        using T = std::decay_t<decltype(family)>;
        if constexpr (std::is_same_v<T, VectorFamily>)
          x0 = Eigen::VectorXd::Zero(family.N);
        else
          x0 = family.x0();
      },
      any);
  const auto result = minimize_covariance(columns, x0, flags.tol, flags.options());
  const auto text = to_json(result);
  if (!out.empty()) write_file(out, text);
  const char* status = result.status == OracleStatus::exact_zero ? "exact_zero"
                       : result.status == OracleStatus::converged
                           ? "converged"
                           : "iteration_cap";
  std::cout << "oracle: value=" << fmt17(result.value)
            << " lower=" << fmt17(result.lower_bound)
            << " upper=" << fmt17(result.upper_bound) << " status=" << status
            << "\n";
  return 0;
}

// Claim checks for a zero-reduction family; completion signings are sampled
// deterministically from the given seed.
std::vector<CheckLine> verify_zero_family(const VectorFamily& family,
                                          std::uint64_t seed) {
  std::vector<CheckLine> lines;
  const Eigen::MatrixXd dense = family.dense_columns();
  double worst_norm = 0.0;
  for (int j = 0; j < family.N; ++j)
    worst_norm =
        std::max(worst_norm, std::abs(dense.col(j).squaredNorm() - 1.0));
  lines.push_back({"columns_unit_norm", worst_norm, 1e-12, worst_norm <= 1e-12});
  const bool dims_ok = family.d == family.m + 4 * family.n1 + 5 * family.n2 &&
                       family.N == family.n + 2 * family.n1 + 3 * family.n2;
  lines.push_back({"dimension_formula", static_cast<double>(family.d),
                   static_cast<double>(family.m + 4 * family.n1 + 5 * family.n2),
                   dims_ok});

  std::mt19937_64 rng(seed);
  int worst_gadget = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Assignment z;
    for (int i = 0; i < family.n; ++i) z.values.push_back(uniform_sign(rng));
    const Eigen::VectorXi w = signed_sum_unscaled(family, complete_signing(family, z));
    for (int coord = family.m; coord < family.d; ++coord)
      worst_gadget = std::max(worst_gadget, std::abs(w(coord)));
  }
  lines.push_back({"completion_zeros_gadget_coords",
                   static_cast<double>(worst_gadget), 0.0, worst_gadget == 0});
  return lines;
}

int cmd_verify(const std::string& family_path, const std::string& dist_path,
               bool use_oracle, std::string gamma_text, bool exhaustive_gamma,
               const OracleFlags& flags, std::uint64_t seed,
               const std::string& out) {
  const auto any = family_from_json(read_file(family_path));
  std::vector<CheckLine> lines;

  if (std::holds_alternative<VectorFamily>(any)) {
    const auto& family = std::get<VectorFamily>(any);
    lines = verify_zero_family(family, seed);
    std::optional<SigningDistribution> dist;
    if (!dist_path.empty())
      dist = distribution_from_json(read_file(dist_path));
    else if (use_oracle && family.N <= flags.minimize_cap) {
      const auto result = minimize_covariance(columns_of(family),
                                              Eigen::VectorXd::Zero(family.N),
                                              flags.tol, flags.options());
      dist = result.witness;
    }
    if (dist) {
      const auto report = covariance_of(family.dense_columns(), *dist);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(report.cov,
                                                         Eigen::EigenvaluesOnly);
      lines.push_back({"cov_psd", eig.eigenvalues()(0), -1e-10,
                       eig.eigenvalues()(0) >= -1e-10});
      lines.push_back({"op_norm_trace_floor", report.op_norm,
                       report.trace_lower_bound,
                       report.op_norm >= report.trace_lower_bound - 1e-12});
    }
  } else {
    const auto& family = std::get<BiasedFamily>(any);
    lines.push_back({"mean_in_kernel_exact", 0.0, 0.0,
                     family.mean_in_kernel_exact()});
    double gamma = 0.0;
    if (exhaustive_gamma) {
      // Recover the instance from the incidence rows.
      SetSplitInstance instance;
      instance.n = family.n;
      instance.b = 0;
      for (int j = 0; j < family.m; ++j) {
        std::array<int, 4> set{};
        int filled = 0;
        for (int i = 0; i < family.n && filled < 4; ++i)
          if (family.A(j, i) == 1) set[filled++] = i + 1;
        instance.sets.push_back(set);
      }
      for (int deg : instance.occurrences()) instance.b = std::max(instance.b, deg);
      const auto exhaustive = exhaustive_min_unsplit(instance);
      gamma = exhaustive.min_unsplit_fraction;
      std::cout << "verify: measured gamma = " << fmt17(gamma) << "\n";
    } else if (!gamma_text.empty()) {
      gamma = to_double(rational_from_string(gamma_text));
    }

    std::optional<SigningDistribution> dist;
    if (!dist_path.empty())
      dist = distribution_from_json(read_file(dist_path));
    else if (use_oracle && family.N() <= flags.minimize_cap) {
      const auto result = minimize_covariance(columns_of(family), family.x0(),
                                              flags.tol, flags.options());
      dist = result.witness;
    }
    if (dist) {
      const double mean_err =
          (dist->mean() - family.x0()).lpNorm<Eigen::Infinity>();
      lines.push_back({"mean_matches_x0", mean_err, 1e-10, mean_err <= 1e-10});
      if (gamma > 0.0) {
        const auto chain = verify_tail_chain(*dist, family, gamma);
        lines.insert(lines.end(), chain.begin(), chain.end());
      } else {
        // Satisfiable source: the optimal covariance is exactly zero.
        const auto certified =
            certify_zero(columns_of(family), family.x0(), flags.options());
        lines.push_back({"zero_certified", certified.is_zero ? 1.0 : 0.0, 1.0,
                         certified.is_zero});
      }
    }
  }

  const bool ok = all_pass(lines);
  const auto text = to_json(lines);
  if (!out.empty()) write_file(out, text);
  for (const auto& line : lines)
    std::cout << (line.pass ? "  pass  " : "  FAIL  ") << line.id
              << "  lhs=" << fmt17(line.lhs) << " rhs=" << fmt17(line.rhs)
              << "\n";
  std::cout << "verify: " << (ok ? "all checks passed" : "CHECKS FAILED") << "\n";
  return ok ? 0 : kExitVerification;
}

int cmd_report(int theorem, int count, int n, int m, int b, std::uint64_t seed,
               bool satisfiable, const std::string& p_text,
               const std::string& q_text, const OracleFlags& flags,
               const std::string& out) {
  std::ostringstream csv;
  csv << "id,theorem,n,m,b,p,q,beta,N,d,gamma0,c_lower,c_upper,status,claims_"
         "pass\n";
  bool all_ok = true;
  for (int index = 0; index < count; ++index) {
    const std::uint64_t instance_seed = seed + static_cast<std::uint64_t>(index);
    SetSplitInstance instance;
    std::optional<Assignment> witness;
    if (satisfiable) {
      auto planted = generate_satisfiable(n, m, b, instance_seed);
      instance = std::move(planted.instance);
      witness = std::move(planted.witness);
    } else {
      instance = generate_random(n, m, b, instance_seed);
    }
    const auto exhaustive = exhaustive_min_unsplit(instance);
    const double gamma0 = exhaustive.min_unsplit_fraction;
    if (!witness && gamma0 == 0.0) witness = exhaustive.best;

    std::string p_col, q_col, beta_col;
    int family_n_cols = 0, family_dim = 0;
    FamilyColumns columns;
    Eigen::VectorXd x0;
    std::vector<CheckLine> lines;
    std::optional<BiasedFamily> biased;
    std::optional<VectorFamily> zero;
    if (theorem == 1) {
      zero = build_vector_family(instance);
      columns = columns_of(*zero);
      x0 = Eigen::VectorXd::Zero(zero->N);
      family_n_cols = zero->N;
      family_dim = zero->d;
      lines = verify_zero_family(*zero, instance_seed);
    } else {
      biased = build_biased_family(instance, rational_from_string(p_text),
                                   rational_from_string(q_text));
      columns = columns_of(*biased);
      x0 = biased->x0();
      family_n_cols = biased->N();
      family_dim = biased->D();
      p_col = to_string(biased->p);
      q_col = to_string(biased->q);
      beta_col = to_string(biased->beta);
      lines.push_back({"mean_in_kernel_exact", 0.0, 0.0,
                       biased->mean_in_kernel_exact()});
    }

    // Oracle stage: certification first, the full minimizer when it fits.
    double c_lower = 0.0, c_upper = 0.0;
    std::string status;
    const auto options = flags.options();
    const auto certified = certify_zero(columns, x0, options);
    if (certified.is_zero) {
      status = "exact_zero";
      lines.push_back({"satisfiable_zero_agrees", gamma0, 0.0, gamma0 == 0.0});
    } else {
      c_lower = trace_lp_bound(columns, x0, options);
      if (family_n_cols <= flags.minimize_cap) {
        const auto result = minimize_covariance(columns, x0, flags.tol, options);
        c_lower = std::max(c_lower, result.lower_bound);
        c_upper = result.value;
        status = result.status == OracleStatus::converged ? "converged"
                                                          : "iteration_cap";
        if (theorem == 2 && gamma0 > 0.0) {
          const auto chain = verify_tail_chain(result.witness, *biased, gamma0);
          lines.insert(lines.end(), chain.begin(), chain.end());
        }
      } else {
        c_upper = std::numeric_limits<double>::quiet_NaN();
        status = "bound_only";
      }
      if (theorem == 1 && gamma0 > 0.0) {
        const double floor =
            (4.0 / 3.0) * gamma0 * zero->m / static_cast<double>(zero->d);
        lines.push_back({"unsat_trace_floor", c_lower, floor - 1e-6,
                         c_lower >= floor - 1e-6});
      }
      lines.push_back({"unsat_positive_agrees", gamma0, 0.0, gamma0 > 0.0});
    }
    if (theorem == 2 && witness && biased) {
      const auto five = five_point_distribution(*biased, *witness);
      const auto report = covariance_of(biased->M(), five);
      lines.push_back({"five_point_zero_cov", report.op_norm, 1e-12,
                       report.op_norm <= 1e-12});
    }

    const bool ok = all_pass(lines);
    all_ok = all_ok && ok;
    csv << instance_seed << "," << theorem << "," << instance.n << ","
        << instance.m() << "," << instance.b << "," << p_col << "," << q_col
        << "," << beta_col << "," << family_n_cols << "," << family_dim << ","
        << fmt17(gamma0) << "," << fmt17(c_lower) << ","
        << (std::isnan(c_upper) ? std::string() : fmt17(c_upper)) << ","
        << status << "," << (ok ? 1 : 0) << "\n";
  }
  write_file(out, csv.str());
  std::cout << "report: " << count << " rows -> " << out
            << (all_ok ? "" : " (verification failures)") << "\n";
  return all_ok ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"set-splitting reductions and the covariance oracle"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a set-splitting instance");
  int gen_n = 8, gen_m = 6, gen_b = 3;
  std::uint64_t gen_seed = 0;
  bool gen_satisfiable = false;
  std::string gen_out = "instance.json", gen_witness_out;
  gen->add_option("--n", gen_n, "universe size")->required();
  gen->add_option("--m", gen_m, "number of sets")->required();
  gen->add_option("--b", gen_b, "occurrence bound");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_flag("--satisfiable", gen_satisfiable, "plant a splitting witness");
  gen->add_option("-o,--out", gen_out, "instance output path");
  gen->add_option("--witness-out", gen_witness_out, "witness output path");

  // check
  auto* check = app.add_subcommand("check", "evaluate assignments");
  std::string check_instance, check_assignment, check_out;
  bool check_exhaustive = false;
  int check_cap = 24;
  check->add_option("--instance", check_instance, "instance JSON")->required();
  check->add_option("--assignment", check_assignment, "assignment JSON");
  check->add_flag("--exhaustive", check_exhaustive, "scan all assignments");
  check->add_option("--cap", check_cap, "exhaustive enumeration cap");
  check->add_option("-o,--out", check_out, "report output path");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "build a vector family");
  int reduce_theorem = 1;
  std::string reduce_in, reduce_out = "family.json", reduce_p, reduce_q;
  reduce->add_option("--theorem", reduce_theorem, "1 or 2")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  reduce->add_option("-i,--instance", reduce_in, "instance JSON")->required();
  reduce->add_option("-o,--out", reduce_out, "family output path");
  reduce->add_option("--p", reduce_p, "bias center (rational or decimal)");
  reduce->add_option("--q", reduce_q, "bias spread (rational or decimal)");

  // cov
  auto* cov = app.add_subcommand("cov", "covariance of a distribution");
  std::string cov_family, cov_dist, cov_out;
  bool cov_scaled = false;
  cov->add_option("--family", cov_family, "family JSON")->required();
  cov->add_option("--dist", cov_dist, "distribution JSON")->required();
  cov->add_flag("--scaled", cov_scaled, "use norm-1 scaled columns");
  cov->add_option("-o,--out", cov_out, "report output path");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "optimal covariance bounds");
  std::string oracle_family, oracle_out;
  OracleFlags oracle_flags;
  oracle->add_option("--family", oracle_family, "family JSON")->required();
  add_oracle_flags(oracle, oracle_flags);
  oracle->add_option("-o,--out", oracle_out, "result output path");

  // verify
  auto* verify = app.add_subcommand("verify", "check construction claims");
  std::string verify_family, verify_dist, verify_gamma, verify_out;
  bool verify_use_oracle = false, verify_exhaustive_gamma = false;
  std::uint64_t verify_seed = 0;
  OracleFlags verify_flags;
  verify->add_option("--family", verify_family, "family JSON")->required();
  verify->add_option("--dist", verify_dist, "distribution JSON");
  verify->add_flag("--use-oracle", verify_use_oracle,
                   "verify the minimizer's witness");
  verify->add_option("--gamma", verify_gamma, "unsatisfiability fraction");
  verify->add_flag("--exhaustive-gamma", verify_exhaustive_gamma,
                   "measure gamma exhaustively");
  verify->add_option("--seed", verify_seed, "seed for sampled checks");
  add_oracle_flags(verify, verify_flags);
  verify->add_option("-o,--out", verify_out, "report output path");

  // report
  auto* report = app.add_subcommand("report", "end-to-end CSV pipeline");
  int report_theorem = 1, report_count = 1, report_n = 8, report_m = 5,
      report_b = 3;
  std::uint64_t report_seed = 0;
  bool report_satisfiable = false;
  std::string report_p, report_q, report_out = "report.csv";
  OracleFlags report_flags;
  report->add_option("--theorem", report_theorem, "1 or 2")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  report->add_option("--count", report_count, "instances to run");
  report->add_option("--n", report_n, "universe size")->required();
  report->add_option("--m", report_m, "number of sets")->required();
  report->add_option("--b", report_b, "occurrence bound");
  report->add_option("--seed", report_seed, "base seed");
  report->add_flag("--satisfiable", report_satisfiable, "plant witnesses");
  report->add_option("--p", report_p, "bias center");
  report->add_option("--q", report_q, "bias spread");
  add_oracle_flags(report, report_flags);
  report->add_option("-o,--out", report_out, "CSV output path");

  try {
    app.parse(argc, argv);
    if (gen->parsed())
      return cmd_gen(gen_n, gen_m, gen_b, gen_seed, gen_satisfiable, gen_out,
                     gen_witness_out);
    if (check->parsed())
      return cmd_check(check_instance, check_assignment, check_exhaustive,
                       check_cap, check_out);
    if (reduce->parsed()) {
      if (reduce_theorem == 2 && (reduce_p.empty() || reduce_q.empty()))
        fail(ErrorKind::parameter, "--p and --q are required for --theorem 2");
      return cmd_reduce(reduce_theorem, reduce_in, reduce_out, reduce_p,
                        reduce_q);
    }
    if (cov->parsed()) return cmd_cov(cov_family, cov_dist, cov_out, cov_scaled);
    if (oracle->parsed())
      return cmd_oracle(oracle_family, oracle_flags, oracle_out);
    if (verify->parsed())
      return cmd_verify(verify_family, verify_dist, verify_use_oracle,
                        verify_gamma, verify_exhaustive_gamma, verify_flags,
                        verify_seed, verify_out);
    if (report->parsed()) {
      if (report_theorem == 2 && (report_p.empty() || report_q.empty()))
        fail(ErrorKind::parameter, "--p and --q are required for --theorem 2");
      return cmd_report(report_theorem, report_count, report_n, report_m,
                        report_b, report_seed, report_satisfiable, report_p,
                        report_q, report_flags, report_out);
    }
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::capacity ? kExitCapacity : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
