// Batch front end wiring the library modules: hull decompositions, laminate
// repair, localized wave synthesis, one improvement step, conserved-quantity
// checks, and the 2-d evolution. Configuration comes from a JSON file plus
// flag overrides; explicit flags win. Exit codes: 0 success, 1 named failure,
// 2 schema error, 3 state outside the relaxed set.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mhdci/conserved.hpp"
#include "mhdci/evolve2d.hpp"
#include "mhdci/goodify.hpp"
#include "mhdci/hull.hpp"
#include "mhdci/improve.hpp"
#include "mhdci/serialize.hpp"
#include "mhdci/wave_synthesis.hpp"

using namespace mhdci;
using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int threads = 1;  // accepted for interface stability; this build is serial
  std::string out = ".";
  std::string config;
};

void addCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--threads", c.threads, "thread budget (serial build)");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--config", c.config, "JSON config file; flags override");
}

json loadConfig(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw SchemaError("cannot open config " + path);
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw SchemaError("malformed JSON in " + path);
  if (!j.is_object()) throw SchemaError("config must be a JSON object");
  return j;
}

template <typename T>
void fromConfig(CLI::App*, const json& j, const std::string& key, T& var) {
  // flag overrides were already merged into j on top of the config file
  if (!j.contains(key)) return;
  try {
    var = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError("config field '" + key + "' has the wrong type");
  }
}

std::string outPath(const Common& c, const std::string& name) {
  std::filesystem::create_directories(c.out);
  return (std::filesystem::path(c.out) / name).string();
}

void writeJson(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << j.dump(2) << "\n";
}

State15 loadState(const std::string& spec, std::mt19937_64& rng, const HullParams& hp) {
  if (spec == "zero") return State15{};
  if (spec == "random") return sampleRelaxedState(rng, hp);
  std::ifstream f(spec);
  if (!f) throw SchemaError("cannot open state file " + spec);
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw SchemaError("malformed JSON in " + spec);
  // reuse the laminate state schema: {u,S,B,E}
  json doc = {{"format", "laminate/1"}, {"tree", {{"state", j}}}};
  return laminateFromJson(doc.dump()).root->state;
}

// least-squares slope of log(err) against log(ell)
double fitSlope(const std::vector<double>& ell, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = int(ell.size());
  for (int i = 0; i < n; ++i) {
    double x = std::log(ell[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

json certifySummary(const CertifyReport& rep) {
  return {{"ok", rep.ok},
          {"weight_error", rep.weightError},
          {"barycenter_error", rep.barycenterError},
          {"worst_residual", rep.worstResidual},
          {"bad_verdicts", rep.badVerdicts},
          {"failures", rep.failures}};
}

int cmdDecompose(const Common& c, const json& cfg, CLI::App* cmd) {
  std::string state = "zero";
  double r = 2.0, s = 1.0, tau = 0.9, epsTau = 0.0;
  bool repair = false;
  fromConfig(cmd, cfg, "state", state);
  fromConfig(cmd, cfg, "r", r);
  fromConfig(cmd, cfg, "s", s);
  fromConfig(cmd, cfg, "tau", tau);
  fromConfig(cmd, cfg, "eps-tau", epsTau);
  fromConfig(cmd, cfg, "repair", repair);

  HullParams hp{{r, s}, tau, epsTau};
  std::mt19937_64 rng(c.seed);
  State15 v = loadState(state, rng, hp);
  Laminate lam = decomposeFull(v, hp);
  if (repair) {
    // atoms sit on K_{r,s}; the repair envelope must shrink back onto it
    HullParams hpg{{r / tau, s / tau}, tau};
    lam = goodify(lam, hpg);
  }
  CertifyReport rep = certify(lam);
  double worstDist = 0;
  for (const Atom& a : lam.atoms())
    worstDist = std::max(worstDist, distanceToK(a.state, hp.base));
  writeLaminate(outPath(c, "laminate.json"), lam);
  json summary = certifySummary(rep);
  summary["atoms"] = lam.atoms().size();
  summary["depth"] = lam.depth();
  summary["max_distance_to_target"] = worstDist;
  writeJson(outPath(c, "decompose_report.json"), summary);
  std::printf("decompose: atoms=%zu depth=%d certified=%s\n", lam.atoms().size(),
              lam.depth(), rep.ok ? "yes" : "no");
  return rep.ok ? 0 : 1;
}

int cmdGoodify(const Common& c, const json& cfg, CLI::App* cmd) {
  std::string in;
  double r = 2.0, s = 1.0, tau = 0.9, epsTau = 0.0;
  fromConfig(cmd, cfg, "in", in);
  fromConfig(cmd, cfg, "r", r);
  fromConfig(cmd, cfg, "s", s);
  fromConfig(cmd, cfg, "tau", tau);
  fromConfig(cmd, cfg, "eps-tau", epsTau);
  if (in.empty()) throw SchemaError("goodify needs --in (a laminate JSON)");

  Laminate lam = readLaminate(in);
  HullParams hp{{r, s}, tau, epsTau};
  Laminate good = goodify(lam, hp);
  CertifyReport rep = certify(good);
  writeLaminate(outPath(c, "goodified.json"), good);
  json summary = certifySummary(rep);
  summary["depth_before"] = lam.depth();
  summary["depth_after"] = good.depth();
  summary["barycenter_shift"] = norm(good.barycenter() - lam.barycenter());
  writeJson(outPath(c, "goodify_report.json"), summary);
  std::printf("goodify: bad=%d depth %d -> %d\n", rep.badVerdicts, lam.depth(),
              good.depth());
  return (rep.ok && rep.badVerdicts == 0) ? 0 : 1;
}

int cmdSynthesize(const Common& c, const json& cfg, CLI::App* cmd) {
  double lambda = 0.4, eps = 0.05, ellMain = 16.0;
  int grid = 6, samples = 4000, plateauSamples = 20000;
  std::vector<double> sweep{8, 16, 32, 64};
  fromConfig(cmd, cfg, "lambda", lambda);
  fromConfig(cmd, cfg, "eps", eps);
  fromConfig(cmd, cfg, "ell", ellMain);
  fromConfig(cmd, cfg, "grid", grid);
  fromConfig(cmd, cfg, "samples", samples);
  fromConfig(cmd, cfg, "plateau-samples", plateauSamples);
  fromConfig(cmd, cfg, "sweep", sweep);

  // reference segment with two independent Clebsch factors and a certificate
  Vec4 v0{1, 0, 0, 0}, w0{0, 1, 0, 0};
  WaveVector xi{{0, 0, 1}, 0.25};
  Bivector omBar = wedge(v0 * 2.0 - w0, xi.vec());
  State15 base{{}, {}, wedge(v0, w0).b, wedge(v0, w0).e};
  State15 dir{{}, {}, omBar.b, omBar.e};
  SegmentSpec seg{base, dir, lambda, xi};
  CubeSpec cube = makeCube({0, 0, 0, 0}, 1.0, eps);
  SynthesisOptions opt;
  opt.eps = eps;

  std::vector<double> errs;
  for (double ell : sweep) {
    LocalizedWave w = synthesizeWave({{}, {}, v0, w0}, seg, cube, ell, opt);
    errs.push_back(cancellationError(w, samples, c.seed));
  }
  double slope = fitSlope(sweep, errs);

  LocalizedWave wave = synthesizeWave({{}, {}, v0, w0}, seg, cube, ellMain, opt);
  PlateauReport pr = measurePlateaus(wave, plateauSamples, c.seed + 1);

  std::vector<std::string> cols{"x", "y", "z", "t",   "u1",  "u2",  "u3",
                                "S11", "S12", "S13", "S22", "S23", "S33",
                                "B1", "B2", "B3", "E1",  "E2",  "E3"};
  std::vector<std::vector<double>> rows;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b)
      for (int d = 0; d < grid; ++d)
        for (int e = 0; e < grid; ++e) {
          Vec4 y{(a + 0.5) / grid - 0.5, (b + 0.5) / grid - 0.5,
                 (d + 0.5) / grid - 0.5, (e + 0.5) / grid - 0.5};
          Vec4 p = cube.global(y);
          State15 v = wave.eval(p);
          rows.push_back({p.x, p.y, p.z, p.t, v.u.x, v.u.y, v.u.z, v.S(0, 0),
                          v.S(0, 1), v.S(0, 2), v.S(1, 1), v.S(1, 2), v.S(2, 2),
                          v.B.x, v.B.y, v.B.z, v.E.x, v.E.y, v.E.z});
        }
  writeCsv(outPath(c, "grid.csv"), cols, rows);

  json rep = {{"ell", sweep},
              {"cancellation_error", errs},
              {"slope", slope},
              {"lambda", lambda},
              {"plateau_fractions", pr.fraction},
              {"plateau_targets", {1.0 - lambda, lambda}},
              {"off_plateau", pr.offPlateau},
              {"seed", c.seed}};
  writeJson(outPath(c, "synthesize_report.json"), rep);
  std::printf("synthesize: slope=%.3f plateaus=(%.3f, %.3f)\n", slope,
              pr.fraction.size() > 0 ? pr.fraction[0] : 0.0,
              pr.fraction.size() > 1 ? pr.fraction[1] : 0.0);
  return 0;
}

int cmdImprove(const Common& c, const json& cfg, CLI::App* cmd) {
  ImproveOptions opt;
  opt.seed = c.seed;
  double r = 2.0, s = 1.0;
  fromConfig(cmd, cfg, "r", r);
  fromConfig(cmd, cfg, "s", s);
  fromConfig(cmd, cfg, "tau", opt.hull.tau);
  fromConfig(cmd, cfg, "tau2", opt.tau2);
  fromConfig(cmd, cfg, "ell", opt.ell);
  fromConfig(cmd, cfg, "eps", opt.eps);
  fromConfig(cmd, cfg, "truncate-depth", opt.truncateDepth);
  fromConfig(cmd, cfg, "samples", opt.samples);
  fromConfig(cmd, cfg, "certify-samples", opt.certifySamples);
  opt.hull.base = {r, s};

  Box4 dom{{0, 0, 0, 0}, {1, 1, 1, 1}};
  auto [field, rep] = improveStep([](const Vec4&) { return State15{}; }, dom, opt);
  json out = {{"deficit", rep.deficit},
              {"gain", rep.gain},
              {"c_hat", rep.cHat},
              {"gamma", rep.gamma},
              {"cubes", rep.cubes},
              {"certified", rep.certified},
              {"certify_failures", rep.certifyFailures},
              {"max_residual", rep.maxResidual},
              {"weak_distance", rep.weakDistance},
              {"seed", c.seed}};
  writeJson(outPath(c, "improve_report.json"), out);
  std::printf("improve: gain=%.3e certified=%d/%d\n", rep.gain, rep.certified,
              rep.certified + rep.certifyFailures);
  return (rep.gain > 0 && rep.certifyFailures == 0) ? 0 : 1;
}

int cmdVerify(const Common& c, const json& cfg, CLI::App* cmd) {
  std::string check = "both";
  int n = 64;
  double dt = 0.02, tEnd = 1.0;
  fromConfig(cmd, cfg, "check", check);
  fromConfig(cmd, cfg, "n", n);
  fromConfig(cmd, cfg, "dt", dt);
  fromConfig(cmd, cfg, "t-end", tEnd);

  std::vector<std::string> cols{"value", "reference", "error", "budget", "pass"};
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  bool ok = true;
  if (check == "beltrami" || check == "both") {
    VecField3 B = sampleField(n, beltramiSample);
    double H = magneticHelicity(B);
    double box = std::pow(2.0 * M_PI, 3);
    bool pass = std::abs(H - box) <= 1e-6;
    ok = ok && pass;
    names.push_back("beltrami_helicity");
    rows.push_back({H, box, std::abs(H - box), 1e-6, pass ? 1.0 : 0.0});
  }
  if (check == "maxwell" || check == "both") {
    HelicityDriftReport rep = maxwellHelicityDrift(n, dt, tEnd);
    bool pass = rep.drift <= rep.bound;
    ok = ok && pass;
    names.push_back("maxwell_helicity_drift");
    rows.push_back({rep.final_, rep.initial, rep.drift, rep.bound, pass ? 1.0 : 0.0});
  }
  if (rows.empty()) throw SchemaError("unknown check '" + check + "'");

  std::ofstream f(outPath(c, "conserved.csv"));
  f << "quantity,value,reference,error,budget,pass\n";
  f.precision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    f << names[i];
    for (double v : rows[i]) f << "," << v;
    f << "\n";
  }
  std::printf("verify: %s\n", ok ? "all checks passed" : "FAILED");
  return ok ? 0 : 1;
}

int cmdEvolve2d(const Common& c, const json& cfg, CLI::App* cmd) {
  int n = 256, every = 10;
  double dt = 2e-3, tEnd = 0.25;
  fromConfig(cmd, cfg, "n", n);
  fromConfig(cmd, cfg, "dt", dt);
  fromConfig(cmd, cfg, "t-end", tEnd);
  fromConfig(cmd, cfg, "series-every", every);

  Evolve2DSolver solver(n);
  solver.setInitial(shearedVortexInit);
  double psi0 = solver.psiL2();
  double floor0 = psi0;  // Poincaré: ∫|B|² ≥ ∫ψ² for mean-free ψ
  double minB = solver.magneticEnergy();

  std::vector<std::string> cols{"time", "psi_l2", "magnetic_energy",
                                "kinetic_energy", "cross_helicity"};
  std::vector<std::vector<double>> rows;
  auto record = [&] {
    rows.push_back({solver.time(), solver.psiL2(), solver.magneticEnergy(),
                    solver.kineticEnergy(), solver.crossHelicity()});
  };
  record();
  int steps = std::max(1, int(std::ceil(tEnd / dt)));
  double step = tEnd / steps;
  for (int i = 0; i < steps; ++i) {
    solver.step(step);
    minB = std::min(minB, solver.magneticEnergy());
    if ((i + 1) % every == 0 || i + 1 == steps) record();
  }
  writeCsv(outPath(c, "series.csv"), cols, rows);

  double consErr = std::abs(solver.psiL2() - psi0);
  double slack = 10.0 * (std::pow(step, 4) + 1e-12) * psi0;
  bool floorOk = minB >= floor0 - consErr - slack;
  json rep = {{"n", n},
              {"dt", step},
              {"t_end", tEnd},
              {"psi_l2_initial", psi0},
              {"psi_l2_error", consErr},
              {"min_magnetic_energy", minB},
              {"poincare_floor", floor0},
              {"floor_ok", floorOk}};
  writeJson(outPath(c, "evolve2d_report.json"), rep);
  std::printf("evolve2d: psi2 error=%.3e minB=%.6g floor=%.6g\n", consErr, minB,
              floor0);
  return floorOk ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational toolkit for relaxed MHD states and localized waves"};
  app.require_subcommand(1);

  Common common;
  struct Sub {
    CLI::App* cmd;
    int (*run)(const Common&, const json&, CLI::App*);
  };
  std::vector<Sub> subs;
  auto add = [&](const char* name, const char* desc,
                 int (*run)(const Common&, const json&, CLI::App*)) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    addCommon(cmd, common);
    cmd->allow_extras();
    subs.push_back({cmd, run});
  };
  add("decompose", "split a relaxed state into a laminate with atoms in K", cmdDecompose);
  add("goodify", "repair a laminate so every split is good", cmdGoodify);
  add("synthesize", "build a localized wave and measure its decay", cmdSynthesize);
  add("improve", "one energy-raising perturbation step on a subsolution", cmdImprove);
  add("verify", "helicity checks on reference fields", cmdVerify);
  add("evolve2d", "pseudospectral 2-d run with conservation report", cmdEvolve2d);

  CLI11_PARSE(app, argc, argv);

  for (const Sub& s : subs) {
    if (!s.cmd->parsed()) continue;
    try {
      // remaining extras become flat config overrides of the form --key value
      json cfg = loadConfig(common.config);
      std::vector<std::string> extras = s.cmd->remaining();
      for (std::size_t i = 0; i + 1 < extras.size(); i += 2) {
        if (extras[i].rfind("--", 0) != 0)
          throw SchemaError("unexpected argument '" + extras[i] + "'");
        std::string key = extras[i].substr(2);
        const std::string& val = extras[i + 1];
        try {
          cfg[key] = json::parse(val);
        } catch (...) {
          cfg[key] = val;
        }
      }
      if (!extras.empty() && extras.size() % 2 != 0)
        throw SchemaError("flag '" + extras.back() + "' misses a value");
      return s.run(common, cfg, s.cmd);
    } catch (const SchemaError& e) {
      std::fprintf(stderr, "schema error: %s\n", e.what());
      return 2;
    } catch (const NotInRelaxedSet& e) {
      std::fprintf(stderr, "NotInRelaxedSet: %s\n", e.what());
      return 3;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  return 0;
}
