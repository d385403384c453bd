// curvtv: denoising, inpainting, curvature maps, metrics, noise synthesis and
// benchmark sweeps for the curvature-weighted TV model.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "curvtv/curvtv.hpp"

namespace fs = std::filesystem;
using namespace curvtv;

namespace {

/// Raised for flag combinations CLI11 cannot check on its own; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, Fidelity> kFidelity{
    {"l2", Fidelity::l2}, {"l1", Fidelity::l1}, {"kl", Fidelity::kl}, {"inpaint", Fidelity::inpaint}};
const std::map<std::string, CurvatureKind> kCurvature{{"mc", CurvatureKind::mean}, {"gc", CurvatureKind::gaussian}};
const std::map<std::string, WeightKind> kWeight{
    {"tac", WeightKind::tac}, {"tsc", WeightKind::tsc}, {"trv", WeightKind::trv}, {"tv", WeightKind::tv}};

struct SolverFlags {
  std::string fidelity = "l2";
  std::string curvature = "gc";
  std::string weight = "tac";
  double lambda = 0.07;
  double alpha = 5.0;
  double mu = 2.0;
  double mu2 = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  double max_iter = 300;
  double tol = 3e-5;
  bool delta_k = false;

  void attach(CLI::App& app, bool with_fidelity) {
    if (with_fidelity)
      app.add_option("--fidelity", fidelity, "Data term")
          ->check(CLI::IsMember({"l2", "l1", "kl"}))
          ->capture_default_str();
    app.add_option("--curvature", curvature, "Curvature driving the weights")
        ->check(CLI::IsMember({"mc", "gc"}))
        ->capture_default_str();
    app.add_option("--g", weight, "Weight function (tv gives plain TV)")
        ->check(CLI::IsMember({"tac", "tsc", "trv", "tv"}))
        ->capture_default_str();
    app.add_option("--lambda", lambda, "Fidelity weight")->capture_default_str();
    app.add_option("--alpha", alpha, "Curvature weight strength")->capture_default_str();
    app.add_option("--mu", mu, "Penalty on v = grad u")->capture_default_str();
    app.add_option("--mu2", mu2, "Penalty on the fidelity split (l1, kl, inpaint)")->capture_default_str();
    app.add_option("--tau", tau, "Proximal weight on u")->capture_default_str();
    app.add_option("--sigma", sigma, "Proximal weight on v")->capture_default_str();
    app.add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
    app.add_option("--tol", tol, "Stop when the relative L1 change of u falls to this")->capture_default_str();
    app.add_flag("--delta-k", delta_k, "Log the Delta_k diagnostic in the trace (solves twice)");
  }

  SolverConfig config() const {
    if (max_iter < 1 || max_iter != std::floor(max_iter) || max_iter > 1e9)
      throw UsageError("--max-iter must be a positive integer");
    SolverConfig c;
    c.lambda = lambda;
    c.mu = mu;
    c.mu2 = mu2;
    c.tau = tau;
    c.sigma = sigma;
    c.max_iter = static_cast<int>(max_iter);
    c.tol = tol;
    c.fidelity = kFidelity.at(fidelity);
    c.curvature = {kCurvature.at(curvature), kWeight.at(weight), alpha, 1.0};
    c.track_delta_k = delta_k;
    return c;
  }
};

/// Parameter checks are usage errors, not runtime failures.
void validate_flags(const SolverConfig& c) {
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void print_metrics(const Image& ref, const Image& test) {
  if (!ref.same_shape(test)) throw std::invalid_argument("reference and result differ in size or channels");
  const double p = psnr(ref, test);
  if (std::isinf(p)) std::printf("PSNR=inf\n");
  else std::printf("PSNR=%.4f\n", p);
  std::printf("SSIM=%.6f\n", ssim(ref, test));
}

void write_traces(const SolveResult& r, const std::string& path) {
  if (path.empty()) return;
  if (r.channels.empty()) {
    write_trace(r.trace, fs::path(path));
    return;
  }
  // one file per colour channel: t.csv -> t.r.csv, t.g.csv, t.b.csv
  const fs::path p(path);
  const char* names[] = {"r", "g", "b"};
  for (std::size_t c = 0; c < r.channels.size(); ++c) {
    fs::path out = p.parent_path() / (p.stem().string() + "." + names[c] + p.extension().string());
    write_trace(r.channels[c].trace, out);
  }
}

void report_solve(const SolveResult& r) {
  std::printf("iterations=%d converged=%s\n", r.iterations_used, r.converged ? "true" : "false");
}

// ---------------------------------------------------------------------------

struct RestoreArgs {
  std::string in, out, ref, mask, trace;
  SolverFlags solver;
};

int run_denoise(const RestoreArgs& a) {
  SolverConfig cfg = a.solver.config();
  validate_flags(cfg);
  const Image f = load_image(a.in);
  const SolveResult r = solve(f, cfg, true);
  save_image(r.restored, a.out);
  write_traces(r, a.trace);
  report_solve(r);
  if (!a.ref.empty()) print_metrics(load_image(a.ref), r.restored);
  return 0;
}

int run_inpaint(const RestoreArgs& a) {
  SolverConfig cfg = a.solver.config();
  cfg.fidelity = Fidelity::inpaint;
  if (a.solver.mu2 == 0.0) cfg.mu2 = 0.1;
  const Image f = load_image(a.in);
  cfg.mask = load_mask(a.mask);
  validate_flags(cfg);
  const SolveResult r = solve(f, cfg, true);
  save_image(r.restored, a.out);
  write_traces(r, a.trace);
  report_solve(r);
  std::printf("unknown_fraction=%.6f\n", cfg.mask->unknown_fraction());
  if (!a.ref.empty()) print_metrics(load_image(a.ref), r.restored);
  return 0;
}

struct CurvatureArgs {
  std::string in, out, raw, curvature = "gc";
};

int run_curvature_map(const CurvatureArgs& a) {
  if (a.out.empty() && a.raw.empty()) throw UsageError("curvature-map needs --out and/or --raw");
  const Image u = load_image(a.in);
  if (u.channels() != 1) throw std::invalid_argument("curvature-map expects a grayscale image");
  const CurvatureMap m = curvature_map(u, CurvatureSpec{kCurvature.at(a.curvature), WeightKind::tac, 0.0, 1.0});
  const Image grid = m.to_image();
  if (!a.out.empty()) save_image(rescale_for_display(grid), a.out);
  if (!a.raw.empty()) save_raw_grid(grid, a.raw);
  const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
  std::printf("min=%.17g max=%.17g\n", *lo, *hi);
  return 0;
}

struct MetricsArgs {
  std::string ref, test;
};

int run_metrics(const MetricsArgs& a) {
  print_metrics(load_image(a.ref), load_image(a.test));
  return 0;
}

struct NoiseArgs {
  std::string in, out, model = "gaussian";
  double sigma = 20.0;
  double fraction = 0.3;
  std::uint64_t seed = 0;
};

NoiseModel noise_model(const std::string& name, double sigma, double fraction) {
  if (name == "gaussian") return GaussianNoise{sigma};
  if (name == "salt-pepper") return SaltPepperNoise{fraction};
  return PoissonNoise{};
}

int run_noise(const NoiseArgs& a) {
  const Image u = load_image(a.in);
  const Image n = add_noise(u, noise_model(a.model, a.sigma, a.fraction), a.seed);
  save_image(n, a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// bench: one row per (image, noise level, method)

struct BenchArgs {
  std::vector<std::string> images;
  std::vector<double> sigmas{10.0, 20.0};
  std::vector<std::string> methods{"tv", "tac-mc", "tac-gc", "tsc-mc", "tsc-gc", "trv-mc", "trv-gc"};
  std::string out;
  std::uint64_t seed = 1;
  int jobs = 1;
  SolverFlags solver;
};

struct BenchRow {
  std::string image, method;
  double sigma = 0, psnr_noisy = 0, psnr = 0, ssim = 0, time_ms = 0;
  int iterations = 0;
};

SolverConfig method_config(const std::string& method, const SolverConfig& base) {
  SolverConfig c = base;
  if (method == "tv") {
    c.curvature.weight = WeightKind::tv;
    return c;
  }
  const auto dash = method.find('-');
  if (dash == std::string::npos || !kWeight.count(method.substr(0, dash)) || !kCurvature.count(method.substr(dash + 1)))
    throw UsageError("unknown bench method '" + method + "' (expected tv or <tac|tsc|trv>-<mc|gc>)");
  c.curvature.weight = kWeight.at(method.substr(0, dash));
  c.curvature.curvature = kCurvature.at(method.substr(dash + 1));
  return c;
}

int run_bench(const BenchArgs& a) {
  const SolverConfig base = a.solver.config();
  validate_flags(base);
  struct Job {
    std::size_t image;
    double sigma;
    std::string method;
    SolverConfig cfg;
  };
  std::vector<Image> clean;
  for (const auto& p : a.images) clean.push_back(load_image(p));
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < clean.size(); ++i)
    for (double s : a.sigmas)
      for (const auto& m : a.methods) jobs.push_back({i, s, m, method_config(m, base)});
  // Stable case order: image path, noise level, method name.
  std::stable_sort(jobs.begin(), jobs.end(), [&](const Job& x, const Job& y) {
    return std::tie(a.images[x.image], x.sigma, x.method) < std::tie(a.images[y.image], y.sigma, y.method);
  });

  auto run_one = [&](const Job& j) {
    const Image noisy = add_noise(clean[j.image], GaussianNoise{j.sigma}, a.seed);
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = solve(noisy, j.cfg);
    BenchRow row;
    row.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    row.image = a.images[j.image];
    row.method = j.method;
    row.sigma = j.sigma;
    row.psnr_noisy = psnr(clean[j.image], noisy);
    row.psnr = psnr(clean[j.image], r.restored);
    row.ssim = ssim(clean[j.image], r.restored);
    row.iterations = r.iterations_used;
    return row;
  };

  std::vector<BenchRow> rows(jobs.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, a.jobs));
  for (std::size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<BenchRow>> batch;
    for (std::size_t k = start; k < std::min(jobs.size(), start + width); ++k)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, run_one, std::cref(jobs[k])));
    for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
  }

  std::FILE* out = a.out.empty() ? stdout : std::fopen(a.out.c_str(), "w");
  if (!out) throw ImageIoError("cannot write " + a.out);
  std::fprintf(out, "image,sigma,method,psnr_noisy,psnr,ssim,iterations,time_ms\n");
  for (const auto& r : rows)
    std::fprintf(out, "%s,%g,%s,%.4f,%.4f,%.6f,%d,%.1f\n", r.image.c_str(), r.sigma, r.method.c_str(), r.psnr_noisy,
                 r.psnr, r.ssim, r.iterations, r.time_ms);
  if (out != stdout) std::fclose(out);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature-weighted total variation image restoration"};
  app.require_subcommand(1);

  RestoreArgs den;
  auto* d = app.add_subcommand("denoise", "Restore a noisy image");
  d->add_option("--in", den.in, "Noisy input image")->required()->check(CLI::ExistingFile);
  d->add_option("--out", den.out, "Restored image")->required();
  d->add_option("--ref", den.ref, "Clean reference; prints PSNR and SSIM")->check(CLI::ExistingFile);
  d->add_option("--trace", den.trace, "Per-iteration CSV trace (colour: one file per channel)");
  den.solver.attach(*d, true);

  RestoreArgs inp;
  inp.solver.lambda = 10.0;
  inp.solver.mu = 0.5;
  inp.solver.tol = 5e-4;
  auto* ip = app.add_subcommand("inpaint", "Fill the pixels marked dark in a mask");
  ip->add_option("--in", inp.in, "Damaged input image")->required()->check(CLI::ExistingFile);
  ip->add_option("--mask", inp.mask, "Mask image, >= 128 marks observed pixels")->required()->check(CLI::ExistingFile);
  ip->add_option("--out", inp.out, "Restored image")->required();
  ip->add_option("--ref", inp.ref, "Clean reference; prints PSNR and SSIM")->check(CLI::ExistingFile);
  ip->add_option("--trace", inp.trace, "Per-iteration CSV trace (colour: one file per channel)");
  inp.solver.attach(*ip, false);

  CurvatureArgs cm;
  auto* c = app.add_subcommand("curvature-map", "Per-pixel mean or Gaussian curvature");
  c->add_option("--in", cm.in, "Grayscale input image")->required()->check(CLI::ExistingFile);
  c->add_option("--out", cm.out, "Curvature rescaled to [0, 255] for viewing");
  c->add_option("--raw", cm.raw, "Curvature values as a whitespace-separated text grid");
  c->add_option("--curvature", cm.curvature, "Curvature kind")
      ->check(CLI::IsMember({"mc", "gc"}))
      ->capture_default_str();

  MetricsArgs met;
  auto* m = app.add_subcommand("metrics", "PSNR and SSIM of an image against a reference");
  m->add_option("--ref", met.ref, "Reference image")->required()->check(CLI::ExistingFile);
  m->add_option("--test,--in", met.test, "Image under test")->required()->check(CLI::ExistingFile);

  NoiseArgs noi;
  auto* n = app.add_subcommand("noise", "Degrade an image with synthetic noise");
  n->add_option("--in", noi.in, "Clean input image")->required()->check(CLI::ExistingFile);
  n->add_option("--out", noi.out, "Noisy output image")->required();
  n->add_option("--model", noi.model, "Noise model")
      ->check(CLI::IsMember({"gaussian", "salt-pepper", "poisson"}))
      ->capture_default_str();
  n->add_option("--sigma,--sigma-noise", noi.sigma, "Gaussian standard deviation")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  n->add_option("--fraction", noi.fraction, "Salt-and-pepper fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  n->add_option("--seed", noi.seed, "Random seed")->required();

  BenchArgs ben;
  auto* b = app.add_subcommand("bench", "PSNR/SSIM/iterations/time table over images, noise levels and methods");
  b->add_option("--in", ben.images, "Clean images (repeatable)")->required()->check(CLI::ExistingFile);
  b->add_option("--sigma-noise", ben.sigmas, "Gaussian noise levels")->delimiter(',')->capture_default_str();
  b->add_option("--methods", ben.methods, "tv or <tac|tsc|trv>-<mc|gc>")->delimiter(',')->capture_default_str();
  b->add_option("--seed", ben.seed, "Noise seed")->capture_default_str();
  b->add_option("--jobs", ben.jobs, "Cases solved concurrently")->check(CLI::PositiveNumber)->capture_default_str();
  b->add_option("--out", ben.out, "CSV output (default stdout)");
  ben.solver.attach(*b, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 2;
  }

  try {
    if (*d) return run_denoise(den);
    if (*ip) return run_inpaint(inp);
    if (*c) return run_curvature_map(cm);
    if (*m) return run_metrics(met);
    if (*n) return run_noise(noi);
    if (*b) return run_bench(ben);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
