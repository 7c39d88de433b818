#include "cli.hpp"

#include "acmm/code_search.hpp"
#include "acmm/coded_logreg.hpp"
#include "acmm/errors.hpp"
#include "acmm/matrix_io.hpp"
#include "acmm/rng.hpp"
#include "acmm/straggler_sim.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace acmm::cli {

namespace fs = std::filesystem;

namespace {

// Raised for a decoder failure that should end the command with exit 3.
struct DecodeFailure {
  std::string what;
};

std::string stamp(const std::vector<std::string>& args, const std::string& resolved) {
  std::string s = "# acmm";
  for (const auto& a : args) s += ' ' + a;
  if (!resolved.empty()) s += " | " + resolved;
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

sim::FailurePlan parse_plan(const std::string& spec, int k, int trials) {
  if (spec == "exhaustive") return sim::FailurePlan::exhaustive(k);
  if (spec == "worst") return sim::FailurePlan::worst_case(k);
  if (spec.rfind("random:", 0) == 0) {
    try {
      return sim::FailurePlan::random(k, std::stoull(spec.substr(7)), trials);
    } catch (const std::logic_error&) {
      throw ParameterViolation("bad random plan seed in '" + spec + "'");
    }
  }
  if (spec.rfind("fixed:", 0) == 0) {
    Subset s;
    std::stringstream ss(spec.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        s.push_back(std::stoi(item));
      } catch (const std::logic_error&) {
        throw ParameterViolation("bad worker id in '" + spec + "'");
      }
    }
    return sim::FailurePlan::fixed(std::move(s));
  }
  throw ParameterViolation("plan must be exhaustive, worst, random:SEED or fixed:i,j,..");
}

struct CodecFlags {
  std::string codec = "eps-matdot";
  int m = 3;
  int p = 1;
  int q = 0;  // 0: m / p
  int P = 6;
  int k = 0;  // 0: the codec's threshold
  double eps = 1e-2;
  double eta = 0.0;    // 0: max Frobenius norm of the operands
  double gamma = 0.0;  // 0: the codec's default points
  std::string precision = "double";

  void add(CLI::App* app) {
    app->add_option("--codec", codec, "matdot | eps-matdot | polydot | eps-polydot | general:FILE")->capture_default_str();
    app->add_option("--m", m, "storage fraction 1/m")->capture_default_str();
    app->add_option("--p", p, "PolyDot row split")->capture_default_str();
    app->add_option("--q", q, "PolyDot inner split (default m/p)");
    app->add_option("--P", P, "workers")->capture_default_str();
    app->add_option("--k", k, "survivors (default: the codec's recovery threshold)");
    app->add_option("--eps", eps, "target max-entry error")->capture_default_str();
    app->add_option("--eta", eta, "Frobenius bound on the operands (default: their largest norm)");
    app->add_option("--gamma", gamma, "use Chebyshev points lambda(gamma) instead of the codec's default points");
    app->add_option("--precision", precision, "double | high (PolyDot only)")
        ->check(CLI::IsMember({"double", "high"}))
        ->capture_default_str();
  }
};

struct ResolvedCodec {
  std::optional<sim::Codec> codec;  // none: uncoded
  CodeParams params;
};

// Builds the codec and its parameters; throws ParameterViolation when k is
// below what the decoder can handle.
ResolvedCodec resolve_codec(const CodecFlags& f, double eta, bool training) {
  ResolvedCodec r;
  const auto gamma = f.gamma > 0 ? std::optional<double>(f.gamma) : std::nullopt;
  const auto precision = f.precision == "high" ? polydot::Precision::High : polydot::Precision::Double;
  const auto need = [](int k, int threshold, const std::string& what) {
    if (k < threshold) throw ParameterViolation(fmt::format("{} needs k >= {}, got k = {}", what, threshold, k));
  };
  const int m = f.m;
  if (f.codec == "matdot" || f.codec == "eps-matdot") {
    const bool exact = f.codec == "matdot";
    const int k = f.k > 0 ? f.k : (exact ? 2 * m - 1 : m);
    need(k, exact ? 2 * m - 1 : m, f.codec);
    r.params = CodeParams::matdot(m, f.P, k, f.eps, eta);
    r.codec = exact ? sim::Codec::matdot_exact(gamma) : sim::Codec::matdot_approx(gamma);
    if (!exact && training && !gamma) r.codec->gamma = 70000.0;
  } else if (f.codec == "polydot" || f.codec == "eps-polydot") {
    const int q = f.q > 0 ? f.q : (f.p > 0 && m % f.p == 0 ? m / f.p : 0);
    if (q < 1 || f.p < 1 || f.p * q != m) throw ParameterViolation("PolyDot needs p * q = m");
    const bool exact = f.codec == "polydot";
    const int threshold = exact ? f.p * f.p * q + q - 1 : f.p * f.p * q;
    const int k = f.k > 0 ? f.k : threshold;
    need(k, threshold, f.codec);
    r.params = CodeParams::polydot(f.p, q, f.P, k, f.eps, eta);
    r.codec = exact ? sim::Codec::polydot_exact(precision) : sim::Codec::polydot_approx(precision);
    r.codec->gamma = gamma;
  } else if (f.codec.rfind("general:", 0) == 0) {
    auto code = std::make_shared<search::GeneralLinearCode>(search::load_code(f.codec.substr(8)));
    const int k = f.k > 0 ? f.k : code->params.k;
    r.params = CodeParams::matdot(code->params.m, code->params.P, k, f.eps, eta);
    r.codec = sim::Codec::general(std::move(code));
  } else if (training && f.codec == "truncated") {
    const int k = f.k > 0 ? f.k : 1;
    auto code = std::make_shared<search::GeneralLinearCode>(search::code_uncoded(m, k));
    r.params = code->params;
    r.params.eta = eta;
    r.params.epsilon = f.eps;
    r.codec = sim::Codec::general(std::move(code));
  } else if (training && f.codec == "uncoded") {
    r.params = CodeParams::matdot(m, std::max(f.P, 1), 1, f.eps, eta);
  } else {
    throw ParameterViolation("unknown codec '" + f.codec + "'");
  }
  const bool exact = r.codec && (r.codec->kind == sim::CodecKind::MatDotExact || r.codec->kind == sim::CodecKind::PolyDotExact);
  if (exact && gamma && *gamma > 10.0)
    std::cerr << "warning: exact decoding at lambda(" << *gamma
              << ") interpolates from clustered points; expect a badly conditioned system\n";
  return r;
}

// ---------------------------------------------------------------- multiply

struct MultiplyFlags {
  CodecFlags codec;
  std::string plan = "exhaustive";
  int trials = 1;
  std::string a, b, out;
};

int cmd_multiply(const MultiplyFlags& f, const std::vector<std::string>& args) {
  const Matrix A = io::read_matrix(f.a);
  const Matrix B = io::read_matrix(f.b);
  const double eta = f.codec.eta > 0 ? f.codec.eta : std::max(A.norm(), B.norm());
  const auto rc = resolve_codec(f.codec, eta, false);
  const auto plan = parse_plan(f.plan, rc.params.k, f.trials);

  const sim::Simulation simulation(*rc.codec, A, B, rc.params);
  const auto report = sim::run(simulation, plan);
  const auto subsets = simulation.resolve(plan);
  const auto first = simulation.decode(subsets.front());

  const std::string meta = stamp(args, to_string(rc.params) + " codec=" + rc.codec->name()) + '\n';
  const fs::path out(f.out);
  fs::create_directories(out);
  io::write_matrix(out / "c_hat.csv", first.estimate);
  std::ostringstream csv;
  sim::write_report_csv(csv, report);
  write_text(out / "report.csv", csv.str() + meta);
  auto j = sim::report_to_json(report);
  j["codec"] = rc.codec->name();
  j["params"] = to_string(rc.params);
  write_text(out / "report.json", j.dump(2) + '\n');

  int failures = 0;
  for (const auto& o : report.per_subset) failures += o.declared_failure;
  std::cout << fmt::format("codec={} subsets={} epsilon_measured={:.6g} failures={}\n", rc.codec->name(),
                           report.per_subset.size(), report.epsilon_measured, failures);
  if (failures > 0) throw DecodeFailure{fmt::format("{} of {} subsets declared failure", failures, report.per_subset.size())};
  return kOk;
}

// ------------------------------------------------------------------ search

struct SearchFlags {
  int m = 2, k = 2, P = 3;
  int seeds = 1000;
  int iters = 1'000'000;
  bool early_stop = false;
  double stationarity_tol = 0.0;
  double eta = 1.0;
  std::string out = "search_out";
};

int cmd_search(const SearchFlags& f, const std::vector<std::string>& args) {
  const auto params = CodeParams::matdot(f.m, f.P, f.k, 1e-2, f.eta);
  search::SearchOptions opt;
  opt.max_iter = f.iters;
  opt.plateau_stop = f.early_stop;
  opt.stationarity_tol = f.stationarity_tol;
  const auto res = search::multi_seed_search(params, f.seeds, opt);

  const fs::path out(f.out);
  fs::create_directories(out);
  search::save_code(out / "code.json", res.best.code);

  const auto& L = res.per_seed_loss;
  const double mean = std::accumulate(L.begin(), L.end(), 0.0) / static_cast<double>(L.size());
  double var = 0;
  for (double l : L) var += (l - mean) * (l - mean);
  const double sd = L.size() > 1 ? std::sqrt(var / static_cast<double>(L.size() - 1)) : 0.0;
  const double half = 1.96 * sd / std::sqrt(static_cast<double>(L.size()));

  std::ostringstream csv;
  csv << "seed,loss\n";
  for (std::size_t s = 0; s < L.size(); ++s) csv << s << ',' << io::format_double(L[s]) << '\n';
  csv << stamp(args, to_string(params)) << '\n';
  write_text(out / "seed_losses.csv", csv.str());

  const auto report = search::loss(res.best.code);
  std::cout << fmt::format("best_seed={} min_loss={:.6g} mean_loss={:.6g} ci95=[{:.6g}, {:.6g}] worst_scenario_bound={:.6g}\n",
                           res.best.seed, L[res.best.seed], mean, mean - half, mean + half, report.error_bound);
  return kOk;
}

// ------------------------------------------------------------------- sweep

struct SweepFlags {
  std::string mode = "nsucc";
  int m = 3, P = 6, n = 21;
  std::uint64_t seed = 0;
  std::vector<std::string> codecs{"matdot", "eps-matdot"};
  double approx_gamma = 70000.0;
  double exact_gamma = 1.0;
  std::vector<double> gammas{1, 10, 100, 1000, 1e4, 1e5, 1e6};
  std::vector<int> n_succ;
  std::string a, b, out;
};

int cmd_sweep(const SweepFlags& f, const std::vector<std::string>& args) {
  Matrix A, B;
  if (!f.a.empty() || !f.b.empty()) {
    if (f.a.empty() || f.b.empty()) throw ParameterViolation("--a and --b go together");
    A = io::read_matrix(f.a);
    B = io::read_matrix(f.b);
  } else {
    Rng rng(f.seed, 0xA11CE);
    A = random_normal(f.n, f.n, rng);
    B = random_normal(f.n, f.n, rng);
  }
  const double eta = std::max(A.norm(), B.norm());
  std::ostringstream csv;
  if (f.mode == "nsucc") {
    std::vector<int> range = f.n_succ;
    if (range.empty()) {
      range.resize(static_cast<std::size_t>(f.P));
      std::iota(range.begin(), range.end(), 1);
    }
    bool header = true;
    for (const auto& name : f.codecs) {
      sim::Codec codec;
      CodeParams params = CodeParams::matdot(f.m, f.P, f.m, 1e-2, eta);
      if (name == "matdot") {
        codec = sim::Codec::matdot_exact(f.exact_gamma);
      } else if (name == "eps-matdot") {
        codec = sim::Codec::matdot_approx(f.approx_gamma);
      } else if (name.rfind("general:", 0) == 0) {
        auto code = std::make_shared<search::GeneralLinearCode>(search::load_code(name.substr(8)));
        if (code->params.m != f.m || code->params.P != f.P) throw ParameterViolation("code (m, P) differs from --m/--P");
        params.k = code->params.k;
        codec = sim::Codec::general(std::move(code));
      } else {
        throw ParameterViolation("sweep codecs are matdot, eps-matdot and general:FILE");
      }
      const auto rows = sim::sweep_nsucc(codec, A, B, params, range, f.seed);
      sim::write_nsucc_csv(csv, codec.name(), rows, header);
      header = false;
    }
  } else if (f.mode == "gamma") {
    std::vector<int> ns = f.n_succ.empty() ? std::vector<int>{f.m, 2 * f.m - 1} : f.n_succ;
    std::vector<double> gammas = f.gammas;
    std::sort(gammas.begin(), gammas.end());
    const auto params = CodeParams::matdot(f.m, f.P, f.m, 1e-2, eta);
    bool header = true;
    for (int n : ns) {
      sim::write_gamma_csv(csv, sim::gamma_sweep(A, B, params, gammas, n, f.seed), header);
      header = false;
    }
  } else {
    throw ParameterViolation("--mode must be nsucc or gamma");
  }
  csv << stamp(args, fmt::format("m={} P={} n={} eta={:g}", f.m, f.P, A.rows(), eta)) << '\n';
  if (f.out.empty())
    std::cout << csv.str();
  else
    write_text(f.out, csv.str());
  return kOk;
}

// ------------------------------------------------------------------- train

struct TrainFlags {
  CodecFlags codec;
  std::string dataset = "synthetic";
  std::string plan = "worst";
  double lr = 0.001;
  int batch = 128;
  int iters = 40000;
  std::uint64_t seed = 0;
  std::uint64_t data_seed = 1;
  int features = 24;
  double test_fraction = 0.2;
  int mnist_train = 0, mnist_test = 0;
  std::string out, trace;
};

int cmd_train(const TrainFlags& f, const std::vector<std::string>& args) {
  logreg::Split data;
  if (f.dataset == "synthetic") {
    logreg::BlobSpec spec;
    spec.features = f.features;
    spec.seed = f.data_seed;
    data = logreg::synthetic_blobs(spec);
  } else if (f.dataset.rfind("csv:", 0) == 0) {
    data = logreg::split_dataset(logreg::load_csv(f.dataset.substr(4)), f.test_fraction, f.data_seed);
  } else if (f.dataset.rfind("mnist:", 0) == 0) {
    data = logreg::load_mnist_dir(f.dataset.substr(6), f.mnist_train, f.mnist_test);
  } else {
    throw ParameterViolation("--dataset must be synthetic, csv:PATH or mnist:DIR");
  }

  const auto rc = resolve_codec(f.codec, 1.0, true);
  logreg::TrainConfig cfg;
  cfg.learning_rate = f.lr;
  cfg.batch_size = f.batch;
  cfg.iterations = f.iters;
  cfg.seed = f.seed;
  cfg.codec = rc.codec;
  cfg.params = rc.params;
  if (rc.codec) cfg.plan = parse_plan(f.plan, rc.params.k, 1);
  if (f.codec.eta > 0) cfg.fixed_eta = f.codec.eta;

  const auto res = logreg::train(data.train, data.test, cfg);
  const std::string codec_name = rc.codec ? (f.codec.codec == "truncated" ? "truncated" : rc.codec->name()) : "uncoded";
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  for (auto it = res.loss_trace.rbegin(); it != res.loss_trace.rend(); ++it)
    if (!std::isnan(*it)) {
      final_loss = *it;
      break;
    }

  std::ostringstream csv;
  csv << "codec,accuracy_train,accuracy_test,skipped_steps,final_loss\n"
      << codec_name << ',' << io::format_double(res.accuracy_train) << ',' << io::format_double(res.accuracy_test) << ','
      << res.skipped_steps << ',' << io::format_double(final_loss) << '\n'
      << stamp(args, to_string(rc.params)) << '\n';
  if (f.out.empty())
    std::cout << csv.str();
  else
    write_text(f.out, csv.str());
  if (!f.trace.empty()) {
    std::ostringstream tr;
    tr << "iteration,loss\n";
    for (std::size_t i = 0; i < res.loss_trace.size(); ++i) tr << i << ',' << io::format_double(res.loss_trace[i]) << '\n';
    tr << stamp(args, "") << '\n';
    write_text(f.trace, tr.str());
  }
  std::cerr << fmt::format("{}: train accuracy {:.4f}, test accuracy {:.4f}, skipped {}\n", codec_name, res.accuracy_train,
                           res.accuracy_test, res.skipped_steps);
  return kOk;
}

// ------------------------------------------------------------------ genmat

struct GenmatFlags {
  int rows = 12, cols = 12;
  std::uint64_t seed = 0;
  double norm = 0.0;  // 0: raw standard normal entries
  std::string out;
};

int cmd_genmat(const GenmatFlags& f) {
  if (f.rows < 1 || f.cols < 1) throw ParameterViolation("rows and cols must be positive");
  Rng rng(f.seed);
  const Matrix M = f.norm > 0 ? random_with_norm(f.rows, f.cols, f.norm, rng) : random_normal(f.rows, f.cols, rng);
  io::write_matrix(f.out, M);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Approximate coded matrix multiplication: codes, straggler simulation, code search, coded training"};
  app.set_config("--config", "", "TOML file with option values; command-line flags take precedence");
  app.fallthrough();
  app.require_subcommand(1);

  MultiplyFlags mf;
  auto* multiply = app.add_subcommand("multiply", "encode, simulate stragglers and decode A*B");
  mf.codec.add(multiply);
  multiply->add_option("--plan", mf.plan, "exhaustive | worst | random:SEED | fixed:i,j,..")->capture_default_str();
  multiply->add_option("--trials", mf.trials, "subsets drawn by a random plan")->capture_default_str();
  multiply->add_option("--a", mf.a, "matrix file (CSV or ACMM binary)")->required();
  multiply->add_option("--b", mf.b, "matrix file (CSV or ACMM binary)")->required();
  multiply->add_option("--out", mf.out, "output directory")->required();

  SearchFlags sf;
  auto* search = app.add_subcommand("search", "alternating minimization over general linear codes");
  search->add_option("--m", sf.m)->capture_default_str();
  search->add_option("--k", sf.k)->capture_default_str();
  search->add_option("--P", sf.P)->capture_default_str();
  search->add_option("--seeds", sf.seeds, "random initializations")->capture_default_str();
  search->add_option("--iters", sf.iters, "sweeps per seed")->capture_default_str();
  search->add_flag("--early-stop", sf.early_stop, "stop a seed once its loss changes < 1e-14 for 100 sweeps");
  search->add_option("--stationarity-tol", sf.stationarity_tol, "stop once all stationarity residuals are below this");
  search->add_option("--eta", sf.eta, "norm bound used for the reported error bound")->capture_default_str();
  search->add_option("--out", sf.out, "output directory")->capture_default_str();

  SweepFlags wf;
  auto* sweep = app.add_subcommand("sweep", "error and loss versus survivors or gamma");
  sweep->add_option("--mode", wf.mode, "nsucc | gamma")->check(CLI::IsMember({"nsucc", "gamma"}))->capture_default_str();
  sweep->add_option("--m", wf.m)->capture_default_str();
  sweep->add_option("--P", wf.P)->capture_default_str();
  sweep->add_option("--n", wf.n, "size of the random square operands")->capture_default_str();
  sweep->add_option("--seed", wf.seed)->capture_default_str();
  sweep->add_option("--codecs", wf.codecs, "matdot, eps-matdot, general:FILE")->delimiter(',')->capture_default_str();
  sweep->add_option("--approx-gamma", wf.approx_gamma, "gamma of the eps-matdot points")->capture_default_str();
  sweep->add_option("--exact-gamma", wf.exact_gamma, "gamma of the matdot points")->capture_default_str();
  sweep->add_option("--gammas", wf.gammas, "gamma mode: values of gamma")->delimiter(',')->capture_default_str();
  sweep->add_option("--n-succ", wf.n_succ, "survivor counts (default: 1..P, or m and 2m-1 in gamma mode)")->delimiter(',');
  sweep->add_option("--a", wf.a, "operand file instead of random operands");
  sweep->add_option("--b", wf.b, "operand file instead of random operands");
  sweep->add_option("--out", wf.out, "CSV path (default stdout)");

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "softmax regression with coded products");
  tf.codec.add(train);
  train->get_option("--codec")->description("uncoded | truncated | matdot | eps-matdot | polydot | eps-polydot | general:FILE");
  train->add_option("--dataset", tf.dataset, "synthetic | csv:PATH | mnist:DIR")->capture_default_str();
  train->add_option("--plan", tf.plan, "worst | random:SEED | fixed:i,j,..")->capture_default_str();
  train->add_option("--lr", tf.lr)->capture_default_str();
  train->add_option("--batch", tf.batch)->capture_default_str();
  train->add_option("--iters", tf.iters)->capture_default_str();
  train->add_option("--seed", tf.seed, "batch sampling seed")->capture_default_str();
  train->add_option("--data-seed", tf.data_seed, "synthetic data / split seed")->capture_default_str();
  train->add_option("--features", tf.features, "synthetic feature count")->capture_default_str();
  train->add_option("--test-fraction", tf.test_fraction, "csv datasets")->capture_default_str();
  train->add_option("--mnist-train", tf.mnist_train, "limit on MNIST training images (0: all)");
  train->add_option("--mnist-test", tf.mnist_test, "limit on MNIST test images (0: all)");
  train->add_option("--out", tf.out, "metrics CSV (default stdout)");
  train->add_option("--trace", tf.trace, "per-iteration loss CSV");

  GenmatFlags gf;
  auto* genmat = app.add_subcommand("genmat", "write a seeded random matrix");
  genmat->add_option("--rows", gf.rows)->capture_default_str();
  genmat->add_option("--cols", gf.cols)->capture_default_str();
  genmat->add_option("--seed", gf.seed)->capture_default_str();
  genmat->add_option("--norm", gf.norm, "rescale to this Frobenius norm");
  genmat->add_option("--out", gf.out)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*multiply) return cmd_multiply(mf, args);
    if (*search) return cmd_search(sf, args);
    if (*sweep) return cmd_sweep(wf, args);
    if (*train) return cmd_train(tf, args);
    if (*genmat) return cmd_genmat(gf);
  } catch (const DecodeFailure& e) {
    std::cerr << "decode failure: " << e.what << '\n';
    return kDecodeFailure;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const FormatError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}

}  // namespace acmm::cli
