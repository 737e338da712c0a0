#include "cli/commands.hpp"

#include "cli/document.hpp"
#include "cli/recipes.hpp"
#include "cli/verify.hpp"

#include "cvree/descent.hpp"
#include "cvree/error.hpp"
#include "cvree/gree.hpp"
#include "cvree/relent.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

namespace cvree::cli {

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return 2;
    case ErrorKind::numerical_guard: return 3;
    case ErrorKind::search_failure: return 4;
  }
  return 1;
}

Json error_json(const std::string& kind, const std::string& message) {
  Json e;
  e["kind"] = kind;
  e["message"] = message;
  Json j;
  j["error"] = e;
  return j;
}

std::vector<BorderType> parse_types(const std::string& list) {
  std::vector<BorderType> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "I") {
      out.push_back(BorderType::I);
    } else if (tok == "II") {
      out.push_back(BorderType::II);
    } else if (tok == "III") {
      out.push_back(BorderType::III);
    } else if (tok == "IV") {
      out.push_back(BorderType::IV);
    } else if (!tok.empty()) {
      fail_validation("--types: unknown border type '" + tok + "' (use I, II, III, IV)");
    }
  }
  if (out.empty()) fail_validation("--types: no border type given");
  return out;
}

struct Common {
  std::string input;
  std::string output;
  bool bits = false;
};

struct GreeFlags {
  int starts = GreeOptions{}.starts;
  double tol = GreeOptions{}.tol;
  std::uint64_t seed = GreeOptions{}.seed;
  std::string types = "I,II,III,IV";
  bool no_spot_check = false;

  GreeOptions options() const {
    GreeOptions o;
    o.starts = starts;
    o.tol = tol;
    o.seed = seed;
    o.types = parse_types(types);
    o.spot_check = !no_spot_check;
    return o;
  }
};

void add_gree_flags(CLI::App* sub, GreeFlags& f) {
  sub->add_option("--starts", f.starts, "multi-start count per border family")->check(CLI::PositiveNumber);
  sub->add_option("--tol", f.tol, "simplex value tolerance");
  sub->add_option("--seed", f.seed, "random seed for the starting points");
  sub->add_option("--types", f.types, "comma-separated border families to search (I,II,III,IV)");
  sub->add_flag("--no-spot-check", f.no_spot_check, "skip the direct local-operation spot check");
}

double unit(double v, bool bits) { return bits ? nats_to_bits(v) : v; }

Json entropy_json(double nats, bool bits) {
  Json j;
  j["value"] = unit(nats, bits);
  j["unit"] = bits ? "bits" : "nats";
  j["value_nats"] = nats;
  return j;
}

Json crossing_json(const BorderCrossing& c) {
  Json j;
  j["iteration"] = c.iteration;
  j["t"] = c.t;
  j["into_separable"] = c.into_separable;
  j["value"] = c.value;
  j["border_residual"] = c.border_residual;
  return j;
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::string step_log_csv(const DescentResult& d) {
  std::ostringstream os;
  os << "# descent step log: gain and objective in nats\n";
  os << "iteration,group,gain,objective\n";
  for (const auto& s : d.state.step_log) {
    os << s.iteration << ',' << to_string(s.group) << ',' << format_double(s.gain) << ',' << format_double(s.objective)
       << '\n';
  }
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Gaussian relative entropy of entanglement toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  Common c;
  auto add_io = [&c](CLI::App* sub, bool input_required) {
    auto* opt = sub->add_option("-i,--input", c.input, "input state document");
    if (input_required) opt->required();
    sub->add_option("-o,--output", c.output, "output path (default stdout)");
    sub->add_flag("--bits", c.bits, "report entropies in bits instead of nats");
  };

  // convert
  auto* convert = app.add_subcommand("convert", "convert between CM and EM documents");
  add_io(convert, true);
  std::string direction;
  convert->add_option("--direction", direction, "cm-to-em or em-to-cm (default: from the input kind)")
      ->check(CLI::IsMember({"cm-to-em", "em-to-cm"}));

  auto* entropy = app.add_subcommand("entropy", "von Neumann entropy of a Gaussian state");
  add_io(entropy, true);

  auto* relent = app.add_subcommand("relent", "relative entropy S(rho || sigma)");
  std::string rho_path;
  std::string sigma_path;
  relent->add_option("--rho", rho_path, "state document for rho")->required();
  relent->add_option("--sigma", sigma_path, "state document for sigma")->required();
  relent->add_option("-o,--output", c.output, "output path (default stdout)");
  relent->add_flag("--bits", c.bits, "report entropies in bits instead of nats");

  auto* classify_cmd = app.add_subcommand("classify", "two-mode standard form and type label");
  add_io(classify_cmd, true);
  double class_tol = kClassifyTol;
  classify_cmd->add_option("--tol", class_tol, "tolerance for the type comparisons");

  auto* separable = app.add_subcommand("separable", "PPT separability test for two-mode states");
  add_io(separable, true);

  auto* gree_cmd = app.add_subcommand("gree", "GREE of a two-mode state by search over border states");
  add_io(gree_cmd, true);
  GreeFlags gf;
  add_gree_flags(gree_cmd, gf);

  auto* gsym = app.add_subcommand("gree-sym", "GREE of a symmetric state by the two-parameter route");
  SymmetricParams sp;
  gsym->add_option("--m", sp.m, "diagonal parameter m")->required();
  gsym->add_option("--kq", sp.kq, "position correlation kq")->required();
  gsym->add_option("--kp", sp.kp, "momentum correlation kp")->required();
  gsym->add_option("-o,--output", c.output, "output path (default stdout)");
  gsym->add_flag("--bits", c.bits, "report entropies in bits instead of nats");
  GreeFlags gsf;
  add_gree_flags(gsym, gsf);

  auto* gtmst = app.add_subcommand("gree-tmst", "GREE of a two-mode squeezed thermal state");
  double tm = 0.0;
  double tk = 0.0;
  gtmst->add_option("--m", tm, "diagonal parameter m")->required();
  gtmst->add_option("--k", tk, "correlation k")->required();
  gtmst->add_option("-o,--output", c.output, "output path (default stdout)");
  gtmst->add_flag("--bits", c.bits, "report entropies in bits instead of nats");

  auto* descend_cmd = app.add_subcommand("descend", "monotone relative-entropy descent from sigma0 toward rho");
  descend_cmd->add_option("--rho", rho_path, "state document for rho")->required();
  descend_cmd->add_option("--sigma", sigma_path, "state document for the starting sigma")->required();
  descend_cmd->add_option("-o,--output", c.output, "output path (default stdout)");
  std::string stop = "at_rho";
  descend_cmd->add_option("--stop", stop, "at_rho or at_border")->check(CLI::IsMember({"at_rho", "at_border"}));
  DescentOptions dopt;
  descend_cmd->add_option("--max-iterations", dopt.max_iterations, "iteration cap");
  descend_cmd->add_option("--tol", dopt.tol, "stop when a step gains less than this");
  std::string log_path;
  descend_cmd->add_option("--log", log_path, "write the step log as CSV");

  auto* scan = app.add_subcommand("scan", "figure-data scans (CSV)");
  ScanSettings ss;
  std::string recipe = "fig1";
  scan->add_option("--recipe", recipe, "fig1, fig2 or fig3")->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  scan->add_option("--points", ss.points, "grid points per curve")->check(CLI::NonNegativeNumber);
  scan->add_option("--lo", ss.lo, "lowest t_a = (2 gamma_a - 1)/(2 gamma_a + 1)");
  scan->add_option("--hi", ss.hi, "highest t_a");
  scan->add_option("--tb", ss.t_b, "t_b for fig1 and fig2");
  scan->add_option("--tb-list", ss.t_b_list, "t_b values for fig3")->delimiter(',');
  scan->add_option("--sinh-offset", ss.sinh_offset, "sinh 2r - sinh 2r_border (fig1, fig3)");
  scan->add_option("--x", ss.x, "local squeeze x (fig1, fig3)");
  scan->add_option("--sin2theta", ss.sin_2theta, "sin 2theta (fig2)");
  scan->add_option("--x-offset", ss.x_offset, "x - x_border (fig2)");
  scan->add_option("--jobs", ss.jobs, "worker threads")->check(CLI::PositiveNumber);
  scan->add_option("-o,--output", c.output, "output path (default stdout)");
  GreeFlags scf;
  add_gree_flags(scan, scf);

  auto* verify = app.add_subcommand("verify", "run self-check suites");
  std::string suite = "all";
  VerifyOptions vo;
  verify->add_option("--suite", suite, "roundtrip, oracle, descent or all")
      ->check(CLI::IsMember({"roundtrip", "oracle", "descent", "all"}));
  verify->add_option("--dim", vo.dim, "Fock truncation per mode for the oracle suite")->check(CLI::Range(8, 80));
  verify->add_option("--seed", vo.seed, "random seed");
  verify->add_option("--cases", vo.cases, "cases per suite (0 keeps the default)");
  verify->add_option("-o,--output", c.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (convert->parsed()) {
      const StateDocument in = load_document(c.input);
      const std::string dir = direction.empty() ? (in.kind == DocumentKind::cm ? "cm-to-em" : "em-to-cm") : direction;
      if ((dir == "cm-to-em") != (in.kind == DocumentKind::cm)) {
        fail_validation("convert: input kind does not match --direction " + dir);
      }
      const StateDocument out = dir == "cm-to-em" ? make_document(cm_to_em(CovarianceMatrix(in.matrix)), in.metadata)
                                                  : make_document(em_to_cm(ExponentialMatrix(in.matrix)), in.metadata);
      write_text(c.output, dump_canonical(to_json(out)));
    } else if (entropy->parsed()) {
      const CovarianceMatrix a = as_cm(load_document(c.input));
      write_text(c.output, dump_canonical(entropy_json(von_neumann_entropy(a), c.bits)));
    } else if (relent->parsed()) {
      const CovarianceMatrix a = as_cm(load_document(rho_path));
      const ExponentialMatrix m = as_em(load_document(sigma_path));
      const RelEntResult r = relative_entropy(a, m);
      Json j = entropy_json(r.value, c.bits);
      j["self_term"] = unit(r.self_term, c.bits);
      j["cross_term"] = unit(r.cross_term, c.bits);
      write_text(c.output, dump_canonical(j));
    } else if (classify_cmd->parsed()) {
      const CovarianceMatrix a = as_cm(load_document(c.input));
      if (a.modes() != 2) fail_validation("classify: two-mode input required");
      const StandardForm sf = standard_form(a);
      Json j;
      j["a"] = sf.a;
      j["b"] = sf.b;
      j["c1"] = sf.c1;
      j["c2"] = sf.c2;
      try {
        const TypeLabel t = classify(sf, class_tol);
        j["type"] = std::string(to_string(t.label));
        j["ratio"] = t.ratio;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::validation) throw;
        j["type"] = nullptr;
        j["ratio"] = nullptr;
        j["note"] = e.what();
      }
      write_text(c.output, dump_canonical(j));
    } else if (separable->parsed()) {
      const CovarianceMatrix a = as_cm(load_document(c.input));
      const Separability s = is_separable(a);
      Json j;
      j["separable"] = s.separable;
      j["border_residual"] = s.border_residual;
      j["min_ppt_gamma"] = s.min_ppt_gamma;
      write_text(c.output, dump_canonical(j));
    } else if (gree_cmd->parsed()) {
      const CovarianceMatrix a = as_cm(load_document(c.input));
      write_text(c.output, dump_canonical(gree_result_json(gree(a, gf.options()), c.bits)));
    } else if (gsym->parsed()) {
      write_text(c.output, dump_canonical(gree_result_json(gree_symmetric(sp, gsf.options()), c.bits)));
    } else if (gtmst->parsed()) {
      write_text(c.output, dump_canonical(gree_result_json(gree_tmst(tm, tk), c.bits)));
    } else if (descend_cmd->parsed()) {
      const CovarianceMatrix a = as_cm(load_document(rho_path));
      const ExponentialMatrix s0 = as_em(load_document(sigma_path));
      const DescentResult d = descend(a, s0, stop == "at_rho" ? DescentStop::at_rho : DescentStop::at_border, dopt);
      Json j;
      j["stop"] = stop;
      j["converged"] = d.converged;
      j["message"] = d.message;
      j["iterations"] = static_cast<int>(d.state.step_log.size());
      j["objective"] = d.state.objective;
      j["gammas_rho"] = vector_json(d.state.gammas_rho);
      j["gammas_sigma"] = vector_json(d.state.gammas_sigma);
      Json cr = Json::array();
      for (const auto& x : d.crossings) cr.push_back(crossing_json(x));
      j["crossings"] = cr;
      j["border_value"] = d.border_value ? Json(*d.border_value) : Json(nullptr);
      j["border_em"] = d.border_em ? to_json(make_document(*d.border_em)) : Json(nullptr);
      j["sigma"] = to_json(make_document(sigma_cm(d.state)));
      if (!log_path.empty()) write_text(log_path, step_log_csv(d));
      write_text(c.output, dump_canonical(j));
      if (!d.converged) {
        std::cerr << "cvree: " << d.message << '\n';
        return 4;
      }
    } else if (scan->parsed()) {
      ss.recipe = *parse_recipe(recipe);
      ss.gree = scf.options();
      write_text(c.output, scan_csv(ss, run_scan(ss)));
    } else if (verify->parsed()) {
      const std::vector<std::string> suites = suite == "all" ? suite_names() : std::vector<std::string>{suite};
      Json j;
      Json arr = Json::array();
      int failed = 0;
      for (const auto& name : suites) {
        const SuiteReport r = run_suite(name, vo);
        failed += r.failed;
        Json s;
        s["suite"] = r.suite;
        s["passed"] = r.passed;
        s["failed"] = r.failed;
        s["max_residual"] = r.max_residual;
        s["residual"] = r.residual_name;
        Json f = Json::array();
        for (std::size_t k = 0; k < r.failures.size() && k < 20; ++k) f.push_back(r.failures[k]);
        s["failures"] = f;
        arr.push_back(s);
      }
      j["suites"] = arr;
      j["failed"] = failed;
      write_text(c.output, dump_canonical(j));
      return failed == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cout << dump_canonical(error_json(to_string(e.kind()), e.what()));
    std::cerr << "cvree: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cout << dump_canonical(error_json("validation", e.what()));
    std::cerr << "cvree: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("cvree");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cvree::cli
