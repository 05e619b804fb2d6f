#include "dsaddle/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include <Eigen/LU>

#include "dsaddle/matrix_market.hpp"
#include "dsaddle/report.hpp"

namespace dsaddle::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : Error {
  using Error::Error;
};

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// Flat key/value rendering shared by the non-diagnose subcommands.
void print_text(std::ostream& out, const Json& j, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      print_text(out, value, name);
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        print_text(out, value[i], name + "[" + std::to_string(i) + "]");
      }
    } else if (value.is_string()) {
      out << name << ": " << value.get<std::string>() << "\n";
    } else {
      out << name << ": " << value.dump() << "\n";
    }
  }
}

void emit(std::ostream& out, const Json& j, OutputFormat format) {
  if (format == OutputFormat::Json) {
    out << j.dump(2) << "\n";
  } else {
    print_text(out, j);
  }
}

void require_input(const RunConfig& c) {
  if (c.input_dir.empty()) throw UsageError("--input is required");
}

void require_output(const RunConfig& c) {
  if (c.output_dir.empty()) throw UsageError("--output is required");
}

int run_diagnose(const RunConfig& c, std::ostream& out) {
  require_input(c);
  const auto sys = load_block_system(c.input_dir, c.tol);
  const auto d = diagnose(sys, c.tol, c.oracle);
  if (c.format == OutputFormat::Json) {
    out << to_json(sys, d).dump(2) << "\n";
  } else {
    out << to_text(sys, d);
  }
  switch (d.verdict) {
    case Verdict::Invertible:
      return kExitOk;
    case Verdict::Singular:
      return kExitSingular;
    case Verdict::Undetermined:
      return kExitUndetermined;
  }
  return kExitUndetermined;
}

int run_invert(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_input(c);
  require_output(c);
  const auto sys = load_block_system(c.input_dir, c.tol);

  std::vector<std::string> notes;
  std::optional<InverseBlocks> inv;
  std::string constructor;
  try {
    inv = three_block_inverse(sys, c.tol);
    constructor = "three_block_inverse";
  } catch (const PreconditionError& e) {
    notes.push_back(std::string("three_block_inverse not applicable: ") + e.what());
  }
  if (!inv) {
    try {
      inv = inverse_via_factorization(sys, c.tol);
      constructor = "inverse_via_factorization";
    } catch (const PreconditionError& e) {
      notes.push_back(std::string("inverse_via_factorization not applicable: ") +
                      e.what());
    }
  }
  if (!inv) {
    if (!c.allow_dense) {
      for (const auto& n : notes) err << n << "\n";
      throw DataError(
          "no structured inverse applies to this system; rerun with "
          "--allow-dense for a dense inverse");
    }
    inv = dense_inverse(sys, c.tol);
    constructor = "dense_inverse";
    err << "warning: falling back to a dense inverse\n";
  }

  fs::create_directories(c.output_dir);
  const std::pair<const char*, const Matrix*> blocks[] = {
      {"Z11", &inv->Z11}, {"Z12", &inv->Z12}, {"Z13", &inv->Z13},
      {"Z22", &inv->Z22}, {"Z23", &inv->Z23}, {"Z33", &inv->Z33}};
  Json files;
  for (const auto& [name, block] : blocks) {
    const std::string file = std::string(name) + ".mtx";
    write_matrix_market(c.output_dir / file, *block,
                        std::string("block ") + name + " of K^-1");
    files[name] = file;
  }

  const Matrix x = inv->assembled();
  Json manifest;
  manifest["schema"] = kInverseSchema;
  manifest["constructor"] = constructor;
  manifest["dims"] = {{"n", sys.n()}, {"m", sys.m()}, {"p", sys.p()}};
  manifest["blocks"] = files;
  manifest["residuals"] = {
      {"KX_minus_I_2norm", inverse_residual(sys, *inv)},
      {"symmetry_fro", (x - x.transpose()).norm()},
      {"Z22_2norm", norm2(inv->Z22)},
      {"Z23_2norm", norm2(inv->Z23)}};
  manifest["notes"] = notes;
  write_json_file(c.output_dir / "manifest.json", manifest);
  emit(out, manifest, c.format);
  return kExitOk;
}

int run_generate(const RunConfig& c, std::ostream& out) {
  require_output(c);
  if (c.spec_path.empty()) throw UsageError("--spec is required");
  std::ifstream in(c.spec_path);
  if (!in) throw DataError("cannot open " + c.spec_path.string());
  Json spec_json;
  try {
    spec_json = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(c.spec_path.string() + ": " + e.what());
  }
  GeneratorSpec spec = generator_spec_from_json(spec_json);
  if (c.seed) spec.seed = *c.seed;
  const auto inst = gen_instance(spec, c.tol);
  save_block_system(c.output_dir, inst.system);
  Json cert = to_json(inst.certificate, spec.n, spec.m, spec.p);
  cert["spec"] = to_json(spec);
  write_json_file(c.output_dir / "certificate.json", cert);
  emit(out, cert, c.format);
  return kExitOk;
}

// One identity check; precondition failures become "skipped".
template <class F>
Json residual_check(const char* name, double limit, F&& compute) {
  Json j{{"name", name}};
  try {
    const double r = compute();
    j["status"] = r <= limit ? "ok" : "violated";
    j["residual"] = r;
  } catch (const PreconditionError& e) {
    j["status"] = "skipped";
    j["reason"] = e.what();
  }
  return j;
}

int run_verify(const RunConfig& c, std::ostream& out) {
  require_input(c);
  const auto sys = load_block_system(c.input_dir, c.tol);
  const double alpha = c.alpha.value_or(default_alpha(sys));
  const double limit = c.tol.residual_rtol;
  const Index m = sys.m();

  Json checks = Json::array();
  checks.push_back(residual_check("eg_identity(W=I)", limit, [&] {
    return eg_identity(sys.A(), sys.B(), Matrix::Identity(m, m), c.tol);
  }));
  checks.push_back(residual_check("eg_identity(W=(2I-alpha*D)^-1/alpha)", limit, [&] {
    if (!alpha_admissible(sys, alpha)) {
      throw PreconditionError("alpha outside (0, 2/lambda_max(D))");
    }
    const Matrix w =
        (2.0 * Matrix::Identity(m, m) - alpha * sys.D()).inverse() / alpha;
    return eg_identity(sys.A(), sys.B(), w, c.tol);
  }));
  checks.push_back(residual_check("A=AVA", limit, [&] {
    const auto proj = reduced_hessian_projector(sys.A(), sys.B(), c.tol);
    return check_A_equals_AVA(sys.A(), sys.B(), proj.V, c.tol);
  }));
  checks.push_back(residual_check("projector_identity", limit, [&] {
    return projector_identity_residual(sys.B(), kernel_basis(sys.B(), c.tol),
                                       c.tol);
  }));
  checks.push_back(residual_check("ZZ^T*A*V=ZZ^T", limit, [&] {
    const auto proj = reduced_hessian_projector(sys.A(), sys.B(), c.tol);
    return vazz_identity_residual(sys.A(), proj);
  }));
  checks.push_back(residual_check("congruence", limit, [&] {
    return congruence_residual(sys, alpha);
  }));
  checks.push_back(residual_check("tilde_factorization", limit, [&] {
    const auto f = factorize_tilde(sys, c.tol);
    const Matrix kt = congruence_transform(sys, 1.0).K_tilde.K;
    return (f.L * f.mid * f.L.transpose() - kt).norm() / kt.norm();
  }));

  const bool k_nonsingular = oracle_invertible(sys, c.tol);
  {
    Json j{{"name", "schur_tilde_equivalence"}};
    try {
      const bool s_nonsingular =
          is_nonsingular(schur_tilde_S(sys, alpha, c.tol), c.tol);
      j["status"] = s_nonsingular == k_nonsingular ? "ok" : "violated";
      j["s_tilde_nonsingular"] = s_nonsingular;
      j["k_nonsingular"] = k_nonsingular;
    } catch (const PreconditionError& e) {
      j["status"] = "skipped";
      j["reason"] = e.what();
    }
    checks.push_back(std::move(j));
  }
  {
    Json j{{"name", "nullity_bounds"}};
    if (k_nonsingular) {
      const auto bounds = z22_nullity_bounds(sys, dense_inverse(sys, c.tol), c.tol);
      j["status"] = bounds.all_hold() ? "ok" : "violated";
      j["bounds"] = to_json(bounds);
    } else {
      j["status"] = "skipped";
      j["reason"] = "K is numerically singular";
    }
    checks.push_back(std::move(j));
  }

  bool violated = false;
  for (const auto& chk : checks) violated |= chk["status"] == "violated";
  Json report;
  report["schema"] = kVerifySchema;
  report["alpha"] = alpha;
  report["k_nonsingular"] = k_nonsingular;
  report["checks"] = std::move(checks);
  report["all_ok"] = !violated;
  emit(out, report, c.format);
  return violated ? kExitViolated : kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.tol.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    switch (config.command) {
      case Subcommand::Diagnose:
        return run_diagnose(config, out);
      case Subcommand::Invert:
        return run_invert(config, out, err);
      case Subcommand::Generate:
        return run_generate(config, out);
      case Subcommand::Verify:
        return run_verify(config, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace dsaddle::cli
