#include "commands.hpp"

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "airy/errors.hpp"
#include "airy/io.hpp"
#include "airy/lowerbound.hpp"
#include "airy/mpm.hpp"
#include "airy/otf_oracle.hpp"
#include "airy/psf.hpp"
#include "airy/sampling.hpp"
#include "airy/tensor.hpp"

namespace airy::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("airy");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char *env = std::getenv("AIRY_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

json vec_json(Vec2 p) { return json::array({p.x, p.y}); }

json estimate_json(const ParameterEstimate &e, int k, double sigma, std::size_t photons) {
  json centers = json::array();
  for (Vec2 c : e.centers) centers.push_back(vec_json(c));
  json directions = json::array();
  for (Vec2 d : e.meta.directions) directions.push_back(vec_json(d));
  return {{"weights", e.weights},
          {"centers", centers},
          {"meta",
           {{"method", e.meta.method},
            {"k", k},
            {"seed", e.meta.seed},
            {"sigma", sigma},
            {"photons", photons},
            {"scale", e.meta.scale},
            {"separation", e.meta.separation},
            {"eta_certified", e.meta.eta_certified},
            {"eta_required", e.meta.eta_required},
            {"budget_shortfall", e.meta.budget_shortfall},
            {"iterations", e.meta.iterations},
            {"failed_iterations", e.meta.failed_iterations},
            {"queries", e.meta.queries},
            {"directions", directions}}}};
}

void write_json(const fs::path &path, const json &j) { io::write_file_atomic(path, io::dump_json(j)); }

// Photons plus sigma, with --sigma taking precedence over the sidecar.
PhotonBatch load_batch(const std::string &path, std::optional<double> sigma) {
  PhotonBatch batch = io::load_photons(path);
  if (sigma) batch.sigma = *sigma;
  if (!(batch.sigma > 0.0)) throw std::invalid_argument("no sigma: pass --sigma or keep the photon sidecar");
  spdlog::info("loaded {} photons from {} (sigma {})", batch.points.size(), path, batch.sigma);
  return batch;
}

std::vector<double> parse_grid(const std::string &spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw std::invalid_argument("--delta-grid must be start:stop:step with step > 0");
  }
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = parts[0] + i * parts[2];
    if (v > parts[1] + 1e-9 * parts[2]) break;
    out.push_back(v);
  }
  return out;
}

struct Options {
  int threads = 0;

  std::string model, out, photons;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double granularity = 0.0;
  bool poisson = false;

  std::vector<std::string> freqs;
  std::vector<double> radii;
  double angle = 0.0;
  double beta = 0.05;
  bool deconvolve = false;
  std::optional<double> sigma;

  int k = 1;
  double eps1 = 0.05, eps2 = 0.05, delta = 0.1;
  std::optional<double> separation, radius;
  int rows = 0;
  double probe = 0.45;

  int ell = 2, r = 1, m = 5, grid = 0;
  std::optional<double> epsilon;
  bool literal_alpha_prime = false;
  double mm_delta = 1.0;

  std::string family = "moment-match";
  std::vector<int> ks;
  std::string delta_grid;
  bool l1 = false;
};

Vec2 parse_freq(const std::string &s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--freq expects x,y");
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

int cmd_simulate(const Options &o) {
  const auto model = io::model_from_json(json::parse(io::read_file(o.model)));
  SamplingOptions so;
  so.granularity = o.granularity;
  so.poisson = o.poisson;
  const PhotonBatch batch = sample(model, o.n, o.seed, so);
  io::save_photons(o.out, batch);
  spdlog::info("wrote {} photons to {}", batch.points.size(), o.out);
  return kExitOk;
}

int cmd_otf(const Options &o) {
  const PhotonBatch batch = load_batch(o.photons, o.sigma);
  std::vector<Vec2> freqs;
  for (const auto &f : o.freqs) freqs.push_back(parse_freq(f));
  for (double r : o.radii) freqs.push_back(unit_vector(o.angle) * r);
  if (freqs.empty()) throw std::invalid_argument("give at least one --freq or --radii value");
  const OtfEstimate est = estimate_otf(batch, freqs, o.beta);
  json fj = json::array(), vj = json::array();
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    fj.push_back(vec_json(freqs[i]));
    vj.push_back({est.values[i].real(), est.values[i].imag()});
  }
  json j = {{"sigma", batch.sigma}, {"n_used", est.n_used}, {"beta", o.beta},
            {"eta", est.eta},       {"frequencies", fj},     {"values", vj}};
  if (o.deconvolve) {
    const auto dec = deconvolve(est, SpreadParameter(batch.sigma));
    json dv = json::array();
    for (const auto &v : dec.values) dv.push_back({v.real(), v.imag()});
    j["deconvolved"] = dv;
    j["deconvolved_accuracy"] = dec.accuracy;
  }
  write_json(o.out, j);
  return kExitOk;
}

int cmd_learn_mpm(const Options &o) {
  const PhotonBatch batch = load_batch(o.photons, o.sigma);
  mpm::LearnOptions lo;
  lo.k = o.k;
  lo.eps1 = o.eps1;
  lo.eps2 = o.eps2;
  lo.delta = o.delta;
  lo.separation = o.separation;
  lo.radius = o.radius;
  lo.seed = o.seed;
  const auto est = mpm::learn_airy_disks(batch, lo);
  if (est.meta.budget_shortfall) {
    spdlog::warn("certified eta {:.3g} exceeds the required {:.3g}; accuracy is not guaranteed",
                 est.meta.eta_certified, est.meta.eta_required);
  }
  write_json(o.out, estimate_json(est, o.k, batch.sigma, batch.points.size()));
  return kExitOk;
}

int cmd_learn_tensor(const Options &o) {
  const PhotonBatch batch = load_batch(o.photons, o.sigma);
  tensor::TensorOptions to;
  to.k = o.k;
  to.eps1 = o.eps1;
  to.eps2 = o.eps2;
  to.delta = o.delta;
  to.separation = *o.separation;
  to.radius = o.radius;
  to.m = o.rows;
  to.seed = o.seed;
  to.probe = o.probe;
  const auto est = tensor::tensor_resolve(batch, to);
  write_json(o.out, estimate_json(est, o.k, batch.sigma, batch.points.size()));
  return kExitOk;
}

int cmd_lattice(const Options &o) {
  lowerbound::LatticeParams p;
  p.ell = o.ell;
  p.r = o.r;
  p.m = o.m;
  p.epsilon = o.epsilon;
  p.literal_alpha_prime = o.literal_alpha_prime;
  const auto inst = lowerbound::lattice_instance(p);
  json nodes = json::array();
  for (Vec2 c : inst.nodes) nodes.push_back(vec_json(c));
  json j = {{"label", "lattice"},
            {"ell", inst.ell},
            {"r", inst.r},
            {"k", inst.k},
            {"m", inst.m},
            {"epsilon", inst.epsilon},
            {"sigma", inst.sigma},
            {"separation", inst.separation},
            {"literal_alpha_prime", o.literal_alpha_prime},
            {"u", inst.u},
            {"nodes", nodes},
            {"rho", io::model_to_json(inst.rho, "rho")},
            {"rho_prime", io::model_to_json(inst.rho_prime, "rho_prime")}};
  if (o.grid > 0) {
    j["grid_resolution"] = o.grid;
    j["exp_sum_sup"] = lowerbound::exp_sum_sup(inst, o.grid);
  }
  write_json(o.out, j);
  return kExitOk;
}

int cmd_moment_match(const Options &o) {
  const double sigma = o.sigma.value_or(1.0 / std::numbers::pi);
  const auto inst = lowerbound::moment_match_instance(o.k, o.mm_delta, sigma);
  json j = {{"label", "moment-match"},
            {"k", inst.k},
            {"delta", inst.delta},
            {"sigma", sigma},
            {"rho", io::model_to_json(inst.rho, "rho")},
            {"rho_prime", io::model_to_json(inst.rho_prime, "rho_prime")}};
  write_json(o.out, j);
  return kExitOk;
}

int cmd_tv_sweep(const Options &o) {
  if (o.family != "moment-match") throw std::invalid_argument("--family supports only moment-match");
  if (o.n < 10000) throw std::invalid_argument("--n must be at least 10000");
  const double sigma = o.sigma.value_or(1.0 / std::numbers::pi);
  const auto deltas = parse_grid(o.delta_grid);
  std::string csv = o.l1 ? "delta,k,tv,std_error,n,l1\n" : "delta,k,tv,std_error,n\n";
  for (int k : o.ks) {
    for (double d : deltas) {
      const auto inst = lowerbound::moment_match_instance(k, d, sigma);
      // Same seed at every grid point: common random numbers along the sweep.
      const auto tv = lowerbound::tv_estimate(inst.rho, inst.rho_prime, o.n, o.seed);
      spdlog::info("k={} delta={} tv={} se={}", k, d, tv.tv, tv.std_error);
      csv += io::format_double(d) + "," + std::to_string(k) + "," + io::format_double(tv.tv) + "," +
             io::format_double(tv.std_error) + "," + std::to_string(tv.n);
      if (o.l1) csv += "," + io::format_double(tv.l1_mean);
      csv += "\n";
    }
  }
  io::write_file_atomic(o.out, csv);
  return kExitOk;
}

int cmd_criteria(const Options &o) {
  const double sigma = o.sigma.value_or(1.0 / std::numbers::pi);
  const auto c = resolution_criteria(SpreadParameter(sigma));
  json j = {{"sigma", sigma},
            {"abbe", c.abbe},
            {"rayleigh", c.rayleigh},
            {"sparrow", c.sparrow},
            {"houston", c.houston},
            {"buxton", c.buxton},
            {"schuster", c.schuster},
            {"dawes", c.dawes},
            {"gamma_lower", kGammaLower},
            {"gamma_upper", kGammaUpper}};
  if (o.out.empty()) {
    std::cout << io::dump_json(j);
  } else {
    write_json(o.out, j);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, char **argv) {
  setup_logging();
  Options o;
  CLI::App app{"Airy disk superposition toolkit"};
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  auto *sim = app.add_subcommand("simulate", "sample photons from a model");
  sim->add_option("--model", o.model, "model JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--n", o.n, "photon count (Poisson mean with --poisson)")->required();
  sim->add_option("--seed", o.seed)->required();
  sim->add_option("--out", o.out, "photon CSV; a .json sidecar is written beside it")->required();
  sim->add_option("--granularity", o.granularity, "snap to a grid moving points at most this far")
      ->check(CLI::NonNegativeNumber);
  sim->add_flag("--poisson", o.poisson, "draw the photon count from Poisson(n)");

  auto *otf_cmd = app.add_subcommand("otf", "estimate the Fourier transform at given frequencies");
  otf_cmd->add_option("--photons", o.photons)->required()->check(CLI::ExistingFile);
  otf_cmd->add_option("--freq", o.freqs, "frequency as x,y; repeatable");
  otf_cmd->add_option("--radii", o.radii, "radial frequencies along --angle")->delimiter(',');
  otf_cmd->add_option("--angle", o.angle, "direction of --radii in radians");
  otf_cmd->add_option("--beta", o.beta, "failure probability for eta")->check(CLI::Range(1e-12, 1.0));
  otf_cmd->add_option("--sigma", o.sigma, "overrides the sidecar sigma");
  otf_cmd->add_flag("--deconvolve", o.deconvolve, "also divide by the OTF");
  otf_cmd->add_option("--out", o.out)->required();

  auto *learn = app.add_subcommand("learn", "recover weights and centers");
  learn->require_subcommand(1);
  auto add_learn_common = [&](CLI::App *c) {
    c->add_option("--photons", o.photons)->required()->check(CLI::ExistingFile);
    c->add_option("--k", o.k)->required()->check(CLI::PositiveNumber);
    c->add_option("--eps1", o.eps1)->check(CLI::PositiveNumber);
    c->add_option("--eps2", o.eps2)->check(CLI::PositiveNumber);
    c->add_option("--delta", o.delta)->check(CLI::Range(1e-12, 0.999999));
    c->add_option("--radius", o.radius, "bound on |mu| (estimated when absent)");
    c->add_option("--sigma", o.sigma, "overrides the sidecar sigma");
    c->add_option("--seed", o.seed)->required();
    c->add_option("--out", o.out)->required();
  };
  auto *lmpm = learn->add_subcommand("mpm", "matrix pencil learner");
  add_learn_common(lmpm);
  lmpm->add_option("--separation", o.separation, "minimum separation (refined from data when absent)");
  auto *lten = learn->add_subcommand("tensor", "tensor learner above gamma_upper pi sigma");
  add_learn_common(lten);
  lten->add_option("--separation", o.separation, "minimum separation")->required();
  lten->add_option("--m", o.rows, "sampled tensor rows (0 = default formula)")->check(CLI::NonNegativeNumber);
  lten->add_option("--probe", o.probe, "probe row length in cutoff units")->check(CLI::Range(1e-6, 0.5));

  auto *lb = app.add_subcommand("lowerbound", "hardness instances");
  lb->require_subcommand(1);
  auto *lat = lb->add_subcommand("lattice", "Fejer lattice pair");
  lat->add_option("--ell", o.ell);
  lat->add_option("--r", o.r);
  lat->add_option("--epsilon", o.epsilon, "default 4/ell");
  lat->add_option("--m", o.m, "odd integer; separation 2/m");
  lat->add_flag("--literal-alpha-prime", o.literal_alpha_prime, "scale off-zero coefficients by m");
  lat->add_option("--grid", o.grid, "also report exp_sum_sup on this polar grid")->check(CLI::NonNegativeNumber);
  lat->add_option("--out", o.out)->required();
  auto *mm = lb->add_subcommand("moment-match", "moment-matching pair");
  mm->add_option("--k", o.k)->required();
  mm->add_option("--delta", o.mm_delta)->required()->check(CLI::PositiveNumber);
  mm->add_option("--sigma", o.sigma, "default 1/pi");
  mm->add_option("--out", o.out)->required();

  auto *tv = app.add_subcommand("tv", "total variation estimates");
  tv->require_subcommand(1);
  auto *sweep = tv->add_subcommand("sweep", "TV over a separation grid");
  sweep->add_option("--family", o.family, "instance family")->check(CLI::IsMember({"moment-match"}));
  sweep->add_option("--k", o.ks, "comma-separated even k values")->required()->delimiter(',');
  sweep->add_option("--delta-grid", o.delta_grid, "start:stop:step")->required();
  sweep->add_option("--n", o.n, "proposal samples per point")->required();
  sweep->add_option("--seed", o.seed)->required();
  sweep->add_option("--sigma", o.sigma, "default 1/pi");
  sweep->add_flag("--l1", o.l1, "append the raw L1 mean column");
  sweep->add_option("--out", o.out)->required();

  auto *crit = app.add_subcommand("criteria", "classical resolution criteria");
  crit->add_option("--sigma", o.sigma, "default 1/pi");
  crit->add_option("--out", o.out, "JSON path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  if (o.threads > 0) omp_set_num_threads(o.threads);

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (otf_cmd->parsed()) return cmd_otf(o);
    if (lmpm->parsed()) return cmd_learn_mpm(o);
    if (lten->parsed()) return cmd_learn_tensor(o);
    if (lat->parsed()) return cmd_lattice(o);
    if (mm->parsed()) return cmd_moment_match(o);
    if (sweep->parsed()) return cmd_tv_sweep(o);
    if (crit->parsed()) return cmd_criteria(o);
  } catch (const NumericalError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument &e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace airy::cli
