// tfzak: time-frequency / Zak transform toolkit CLI.
//
// Subcommands: transform, norm, verify, report.  Every run reads an optional
// JSON config (flags override keys), writes CSV/JSON artifacts into the
// output directory, and records a manifest so `report` can emit plot data.
// Exit codes: 0 success, 1 verification failure, 2 usage/config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tfz/experiments.hpp"
#include "tfz/fields.hpp"
#include "tfz/geometry.hpp"
#include "tfz/io.hpp"
#include "tfz/norms.hpp"
#include "tfz/parallel.hpp"
#include "tfz/transforms.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace tfz;

namespace {

constexpr const char* kVersion = "tfzak 1.0.0";

struct GlobalOpts {
  std::string config_path;
  std::string out_dir;
  unsigned seed = 20260826;
  int threads = 1;
  bool quick = false;
};

json load_config(const GlobalOpts& g) {
  json cfg = json::object();
  if (g.config_path.empty()) return cfg;
  std::ifstream is(g.config_path);
  if (!is) throw std::runtime_error("config: cannot open " + g.config_path);
  try {
    cfg = json::parse(is);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: parse error: ") + e.what());
  }
  const std::vector<std::string> known{"out", "seed", "threads", "quick"};
  for (const auto& [key, _] : cfg.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::runtime_error("config: unknown key \"" + key + "\"");
  return cfg;
}

fs::path resolve_out(GlobalOpts& g, const json& cfg) {
  std::string out = g.out_dir;
  if (out.empty() && cfg.contains("out")) out = cfg["out"].get<std::string>();
  if (const char* env = std::getenv("TFZAK_OUT")) out = env;  // env wins per contract
  if (out.empty()) out = "tfzak-out";
  fs::create_directories(out);
  return out;
}

void apply_config(GlobalOpts& g, const json& cfg) {
  if (cfg.contains("seed") && g.seed == 20260826) g.seed = cfg["seed"].get<unsigned>();
  if (cfg.contains("threads") && g.threads == 1) g.threads = cfg["threads"].get<int>();
  if (cfg.contains("quick") && !g.quick) g.quick = cfg["quick"].get<bool>();
  worker_count() = static_cast<unsigned>(std::max(1, g.threads));
}

SampledField make_signal(const std::string& name, double step) {
  const double lo[1] = {-16.0}, hi[1] = {16.0};
  if (name == "gaussian")
    return sample([](std::span<const double> x) {
      return cplx(std::exp(-0.5 * x[0] * x[0]), 0.0);
    }, lo, hi, step);
  if (name == "hermite")
    return sample([](std::span<const double> x) {
      return cplx(x[0] * std::exp(-0.5 * x[0] * x[0]), 0.0);
    }, lo, hi, step);
  throw std::runtime_error("unknown signal \"" + name + "\"");
}

struct CheckRow {
  std::string name;
  bool pass = false;
  json detail;
};

// ---------------------------------------------------------------------------
// verify experiments

CheckRow verify_zak_parseval(bool quick) {
  CheckRow row{"zak-parseval"};
  const SampledField f = make_signal("gaussian", 1.0 / 64);
  const double c1 = check_zak_parseval(f, OrderedBasis::standard(1));
  double drift = 0.0;
  if (!quick) {
    const SampledField ff = make_signal("gaussian", 1.0 / 128);
    const double c2 = check_zak_parseval(ff, OrderedBasis::standard(1));
    drift = std::abs(c2 / c1 - 1.0);
  }
  const double target = std::sqrt(2.0 * std::numbers::pi);
  row.pass = std::abs(c1 / target - 1.0) <= 0.01 && drift <= 0.005;
  row.detail = {{"constant", c1}, {"target", target}, {"drift", drift}};
  return row;
}

CheckRow verify_finite_parseval(unsigned seed, bool quick) {
  CheckRow row{"finite-zak-parseval"};
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const std::vector<std::size_t> lengths = quick ? std::vector<std::size_t>{64}
                                                 : std::vector<std::size_t>{64, 1024};
  double worst = 0.0;
  for (std::size_t l : lengths) {
    std::vector<cplx> f(l);
    for (auto& v : f) v = cplx(unif(rng), unif(rng));
    double e2 = 0.0;
    for (const auto& v : f) e2 += std::norm(v);
    for (std::size_t m = 2; m <= l / 2; ++m) {
      if (l % m != 0) continue;
      const std::size_t n = l / m;
      const std::vector<cplx> z = finite_zak(f, m, n);
      double z2 = 0.0;
      for (const auto& v : z) z2 += std::norm(v);
      worst = std::max(worst, std::abs(z2 - static_cast<double>(n) * e2) /
                                  (static_cast<double>(n) * e2));
    }
  }
  row.pass = worst <= 1e-10;
  row.detail = {{"worst_relative_defect", worst}};
  return row;
}

CheckRow verify_quasiperiodicity(double plant_defect) {
  CheckRow row{"quasi-periodicity"};
  const SampledField f = make_signal("gaussian", 1.0 / 64);
  ZakField z = zak(f, OrderedBasis::standard(1), 64, 2);
  const double clean = check_quasiperiodicity(z);
  double reported = clean;
  if (plant_defect > 0.0) {
    for (std::size_t i = 0; i < 64; ++i)  // corrupt one u-cell row
      for (std::size_t j = 0; j < z.data.axis(1).count; ++j)
        z.data.values()[i * z.data.axis(1).count + j] *= 1.0 + plant_defect;
    reported = check_quasiperiodicity(z);
  }
  row.pass = reported <= 1e-9;
  row.detail = {{"defect", reported}, {"planted", plant_defect}};
  return row;
}

CheckRow verify_echo_periodicity(bool quick) {
  CheckRow row{"echo-periodicity"};
  const SampledField f = make_signal("gaussian", 1.0 / 64);
  const OrderedBasis e = OrderedBasis::standard(1);
  const Window phi = gaussian_window(1.0, {0.0}, {0.0});
  StftZakParams params;
  params.cells = 2;
  if (quick) {
    params.cell_samples = 8;
    params.grid_n = 128;
    params.out_eta = 32;
    params.out_y = 32;
  } else {
    params.cell_samples = 16;
  }
  const SampledField g = stft_of_zak(f, e, phi, phi, params);
  const double defect = check_echo_periodicity(g, e);
  row.pass = defect <= 1e-8;
  row.detail = {{"defect", defect}};
  return row;
}

CheckRow verify_stft_closed_form() {
  CheckRow row{"stft-closed-form"};
  const SampledField f = make_signal("gaussian", 1.0 / 64);
  const Window phi = gaussian_window(1.0, {0.0}, {0.0});
  const SampledField v = stft(f, phi);
  double worst = 0.0;
  const std::size_t n0 = v.axis(0).count, n1 = v.axis(1).count;
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j) {
      const double x = v.axis(0).coord(i);
      const double xi = v.axis(1).coord(j);
      const double target =
          std::exp(-(x * x + xi * xi) / 4.0) / std::sqrt(2.0);
      worst = std::max(worst,
                       std::abs(std::abs(v.values()[i * n1 + j]) - target));
    }
  row.pass = worst <= 1e-6;
  row.detail = {{"max_error", worst}};
  return row;
}

CheckRow verify_wiener_r_independence(bool quick) {
  CheckRow row{"wiener-r-independence"};
  const SignalFamily fam = SignalFamily::gaussian_dilates(
      quick ? std::vector<double>{1.0} : std::vector<double>{0.5, 1.0, 2.0});
  const Window phi = gaussian_window(1.0, {0.0}, {0.0});
  const OrderedBasis e2 = OrderedBasis::standard(2);
  const Weight one;
  // Precompute one STFT per signal and resolution; every (p, r) case below
  // reuses them, since the transform dominates the cost.
  const std::vector<double> steps =
      quick ? std::vector<double>{1.0 / 32} : std::vector<double>{1.0 / 32, 1.0 / 64};
  std::vector<std::vector<SampledField>> stfts(steps.size());
  for (std::size_t s = 0; s < steps.size(); ++s)
    for (const SampledField& f : fam.generate(steps[s])) stfts[s].push_back(stft(f, phi));

  const auto wnorm = [&](const SampledField& v, double r, double p) {
    return wiener_norm(v, e2, MixedExponent::scalar(r, 2),
                       MixedExponent::scalar(p, 2), one)
        .value;
  };
  bool ok = true;
  json spreads = json::array();
  for (double p : quick ? std::vector<double>{1.0} : std::vector<double>{0.5, 1.0, 2.0}) {
    for (double r : {0.5, 1.0, 2.0}) {
      std::vector<std::vector<double>> ratios(steps.size());
      for (std::size_t s = 0; s < steps.size(); ++s)
        for (const SampledField& v : stfts[s])
          ratios[s].push_back(wnorm(v, r, p) / wnorm(v, MixedExponent::inf, p));
      const auto [lo, hi] =
          std::minmax_element(ratios.back().begin(), ratios.back().end());
      const double spread = *hi / *lo;
      double drift = 0.0;
      for (std::size_t i = 0; i < ratios.back().size(); ++i)
        drift = std::max(drift, std::abs(ratios.back()[i] / ratios.front()[i] - 1.0));
      spreads.push_back({{"p", p}, {"r", r}, {"spread", spread}, {"drift", drift}});
      ok = ok && spread <= 4.0 && drift <= 0.05 && std::isfinite(spread);
    }
  }
  row.pass = ok;
  row.detail = {{"cases", spreads}};
  return row;
}

CheckRow verify_periodic_characterization(unsigned seed, bool quick,
                                          std::vector<std::vector<double>>* ratios_out) {
  CheckRow row{"periodic-characterization"};
  const OrderedBasis e0 = OrderedBasis::diagonal({2.0 * std::numbers::pi});
  // Wide window: separates the unit-spaced coefficient bumps in frequency.
  const Window phi = gaussian_window(2.5, {0.0}, {0.0});
  const int npoly = quick ? 5 : 20;
  bool ok = true;
  json cases = json::array();
  const std::vector<std::pair<double, double>> qr =
      quick ? std::vector<std::pair<double, double>>{{1.0, 1.0}}
            : std::vector<std::pair<double, double>>{
                  {0.5, 0.5}, {1.0, 1.0}, {2.0, 0.5}, {2.0, 2.0}};
  for (const auto& [q, r] : qr) {
    const PeriodicModReport rep =
        check_periodic_modulation(e0, q, r, npoly, 9, seed, phi);
    cases.push_back({{"q", q}, {"r", r}, {"spread", rep.stft_side.spread},
                     {"drift", rep.stft_side.drift},
                     {"homogeneity_defect", rep.homogeneity_defect}});
    ok = ok && rep.pass;
    if (ratios_out) ratios_out->push_back(rep.stft_side.ratios_fine);
  }
  row.pass = ok;
  row.detail = {{"cases", cases}};
  return row;
}

CheckRow verify_gs_decay() {
  CheckRow row{"gs-decay"};
  const SampledField f = make_signal("gaussian", 1.0 / 32);
  const Window phi = gaussian_window(1.0, {0.0}, {0.0});
  const std::vector<double> clo{-6.0, -6.0}, chi{6.0, 6.0};
  const SampledField v = crop(stft(f, phi), clo, chi);
  const DecayModel m = fit_gs_decay(v, 0.5, 0.5);
  const FactorialBoundReport fb = check_factorial_bound(1.0, 1.0, 40);
  row.pass = std::abs(m.rate - 0.25) <= 0.0125 && fb.pass;
  row.detail = {{"fitted_rate", m.rate}, {"target", 0.25},
                {"factorial_h", fb.h}, {"factorial_threshold", fb.threshold}};
  return row;
}

// ---------------------------------------------------------------------------

void write_ratio_csv(const fs::path& path, const std::string& check,
                     const std::vector<std::vector<double>>& families) {
  std::ostringstream os;
  os << "check,case,signal,ratio\n";
  for (std::size_t c = 0; c < families.size(); ++c)
    for (std::size_t s = 0; s < families[c].size(); ++s)
      os << check << "," << c << "," << s << "," << float_repr(families[c][s])
         << "\n";
  write_text(path.string(), os.str());
}

int cmd_verify(GlobalOpts& g, const std::string& what, double plant_defect) {
  const json cfg = load_config(g);
  apply_config(g, cfg);
  const fs::path out = resolve_out(g, cfg);

  std::vector<CheckRow> rows;
  std::vector<std::string> artifacts;
  const bool all = what == "all";
  const auto want = [&](const std::string& n) { return all || what == n; };

  if (want("finite-zak-parseval")) rows.push_back(verify_finite_parseval(g.seed, g.quick));
  if (want("zak-parseval")) rows.push_back(verify_zak_parseval(g.quick));
  if (want("quasi-periodicity")) rows.push_back(verify_quasiperiodicity(plant_defect));
  if (want("echo-periodicity")) rows.push_back(verify_echo_periodicity(g.quick));
  if (want("stft-closed-form")) rows.push_back(verify_stft_closed_form());
  if (want("wiener-r-independence")) rows.push_back(verify_wiener_r_independence(g.quick));
  if (want("periodic-characterization")) {
    std::vector<std::vector<double>> ratios;
    rows.push_back(verify_periodic_characterization(g.seed, g.quick, &ratios));
    const fs::path csv = out / "periodic-characterization.csv";
    write_ratio_csv(csv, "periodic-characterization", ratios);
    artifacts.push_back(csv.filename().string());
  }
  if (want("gs-decay")) rows.push_back(verify_gs_decay());
  if (rows.empty()) {
    std::cerr << "verify: unknown experiment \"" << what << "\"\n";
    return 2;
  }

  json summary = json::object();
  summary["tool"] = kVersion;
  summary["seed"] = g.seed;
  summary["quick"] = g.quick;
  summary["checks"] = json::array();
  bool ok = true;
  for (const auto& r : rows) {
    summary["checks"].push_back(
        {{"name", r.name}, {"verdict", r.pass ? "PASS" : "FAIL"}, {"detail", r.detail}});
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
    ok = ok && r.pass;
  }
  write_text((out / "summary.json").string(), summary.dump(2) + "\n");

  json manifest = json::object();
  manifest["tool"] = kVersion;
  manifest["config_hash"] =
      std::to_string(std::hash<std::string>{}(cfg.dump() + std::to_string(g.seed)));
  manifest["checks"] = summary["checks"];
  manifest["artifacts"] = artifacts;
  write_text((out / "manifest.json").string(), manifest.dump(2) + "\n");

  if (!ok) {
    for (const auto& r : rows)
      if (!r.pass) std::cerr << "verify: check failed: " << r.name << "\n";
    return 1;
  }
  return 0;
}

int cmd_transform(GlobalOpts& g, const std::string& kind, const std::string& signal,
                  std::size_t l, std::size_t m) {
  const json cfg = load_config(g);
  apply_config(g, cfg);
  const fs::path out = resolve_out(g, cfg);

  if (kind == "finite-zak") {
    if (l == 0 || m == 0 || l % m != 0)
      throw std::runtime_error("transform: finite-zak needs --L and --M with M | L");
    std::vector<cplx> f(l, cplx(0.0));
    if (signal == "delta")
      f[0] = 1.0;
    else if (signal == "ones")
      std::fill(f.begin(), f.end(), cplx(1.0));
    else
      throw std::runtime_error("transform: finite-zak signal must be delta or ones");
    const std::size_t n = l / m;
    const std::vector<cplx> z = finite_zak(f, m, n);
    std::ostringstream os;
    os << "n,k,re,im\n";
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < n; ++k)
        os << i << "," << k << "," << float_repr(z[i * n + k].real()) << ","
           << float_repr(z[i * n + k].imag()) << "\n";
    write_text((out / "finite-zak.csv").string(), os.str());
    return 0;
  }

  const SampledField f = make_signal(signal, 1.0 / 64);
  if (kind == "zak") {
    const ZakField z = zak(f, OrderedBasis::standard(1), 64, 2);
    write_field(z.data, (out / "zak.tfz").string(), "zak basis=standard(1)");
    write_field_csv(z.data, (out / "zak.csv").string());
    const double defect = check_quasiperiodicity(z);
    if (defect > 1e-9) throw std::runtime_error("transform: quasi-periodicity defect");
    return 0;
  }
  if (kind == "stft") {
    const Window phi = gaussian_window(1.0, {0.0}, {0.0});
    const SampledField v = stft(f, phi);
    write_field(v, (out / "stft.tfz").string(), "stft gaussian width=1");
    return 0;
  }
  if (kind == "coefficients") {
    const OrderedBasis e0 = OrderedBasis::diagonal({2.0 * std::numbers::pi});
    const double lo[1] = {0.0}, hi[1] = {2.0 * std::numbers::pi};
    const SampledField pf = sample(
        [](std::span<const double> x) { return std::polar(2.0, 3.0 * x[0]); }, lo, hi,
        2.0 * std::numbers::pi / 256);
    const FourierCoefficients c = fourier_coefficients(pf, e0, {-5}, {5});
    std::ostringstream os;
    os << "nu,re,im\n";
    for (int nu = -5; nu <= 5; ++nu) {
      const int nn[1] = {nu};
      os << nu << "," << float_repr(c.at(nn).real()) << ","
         << float_repr(c.at(nn).imag()) << "\n";
    }
    write_text((out / "coefficients.csv").string(), os.str());
    return 0;
  }
  throw std::runtime_error("transform: unknown kind \"" + kind + "\"");
}

int cmd_norm(GlobalOpts& g, const std::string& fixture) {
  const json cfg = load_config(g);
  apply_config(g, cfg);
  const fs::path out = resolve_out(g, cfg);
  std::ostringstream os;
  os << "fixture,family,value,step,inf_handled\n";
  const Weight one;
  if (fixture == "indicator-cell") {
    const double lo[1] = {-2.0}, hi[1] = {2.0};
    const SampledField f = sample(
        [](std::span<const double> x) {
          return cplx(x[0] >= 0.0 && x[0] < 1.0 ? 1.0 : 0.0, 0.0);
        },
        lo, hi, 1.0 / 64);
    const NormValue v = mixed_lebesgue_norm(f, OrderedBasis::standard(1),
                                            MixedExponent::scalar(2.0, 1), one);
    os << "indicator-cell," << v.family << "," << float_repr(v.value) << ","
       << float_repr(v.steps[0]) << ",no\n";
  } else if (fixture == "m2-gaussian") {
    const SampledField f = make_signal("gaussian", 1.0 / 64);
    const Window phi = gaussian_window(1.0, {0.0}, {0.0});
    const OrderedBasis e = OrderedBasis::standard(1);
    const NormValue v =
        modulation_norm(f, phi, ModKind::m, e, e, MixedExponent::scalar(2.0, 1),
                        MixedExponent::scalar(2.0, 1), one);
    os << "m2-gaussian," << v.family << "," << float_repr(v.value) << ","
       << float_repr(v.steps[0]) << ",no\n";
  } else if (fixture == "sup-gaussian") {
    const SampledField f = make_signal("gaussian", 1.0 / 64);
    const NormValue v =
        mixed_lebesgue_norm(f, OrderedBasis::standard(1),
                            MixedExponent::scalar(MixedExponent::inf, 1), one);
    os << "sup-gaussian," << v.family << "," << float_repr(v.value) << ","
       << float_repr(v.steps[0]) << ",inf-handled: max\n";
  } else {
    throw std::runtime_error("norm: unknown fixture \"" + fixture + "\"");
  }
  write_text((out / "norms.csv").string(), os.str());
  std::cout << os.str();
  return 0;
}

int cmd_report(GlobalOpts& g) {
  const json cfg = load_config(g);
  apply_config(g, cfg);
  const fs::path out = resolve_out(g, cfg);
  const fs::path manifest_path = out / "manifest.json";
  if (!fs::exists(manifest_path)) {
    std::cerr << "report: no manifest at " << manifest_path << "\n";
    return 2;
  }
  std::ifstream is(manifest_path);
  json manifest = json::parse(is);
  std::ostringstream os;
  os << "check,verdict\n";
  for (const auto& c : manifest["checks"])
    os << c["name"].get<std::string>() << "," << c["verdict"].get<std::string>()
       << "\n";
  write_text((out / "report.csv").string(), os.str());
  // Concatenate per-check ratio tables into one long-format file.
  std::ostringstream curves;
  curves << "check,case,signal,ratio\n";
  for (const auto& a : manifest["artifacts"]) {
    std::ifstream acsv(out / a.get<std::string>());
    std::string line;
    std::getline(acsv, line);  // drop header
    while (std::getline(acsv, line)) curves << line << "\n";
  }
  write_text((out / "plot-data.csv").string(), curves.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-frequency analysis toolkit: Zak transforms, STFT, and "
               "mixed quasi-norm verification"};
  app.set_version_flag("--version", kVersion);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON config file (flags override keys)");
  app.add_option("--out", g.out_dir, "output directory (TFZAK_OUT overrides)");
  app.add_option("--seed", g.seed, "deterministic RNG seed");
  app.add_option("--threads", g.threads, "worker thread cap");
  app.add_flag("--quick", g.quick, "reduced problem sizes");

  // Let global flags (--quick, --seed, ...) appear after the subcommand too.
  app.fallthrough();
  auto* t = app.add_subcommand("transform", "compute a transform and export it");
  std::string t_kind = "zak", t_signal = "gaussian";
  std::size_t t_l = 0, t_m = 0;
  t->add_option("--kind", t_kind, "zak | stft | finite-zak | coefficients");
  t->add_option("--signal", t_signal, "gaussian | hermite | delta | ones");
  t->add_option("--L", t_l, "finite-zak signal length");
  t->add_option("--M", t_m, "finite-zak rows (N = L/M)");

  auto* n = app.add_subcommand("norm", "evaluate a norm fixture");
  std::string n_fixture = "indicator-cell";
  n->add_option("--fixture", n_fixture, "indicator-cell | m2-gaussian | sup-gaussian");

  auto* v = app.add_subcommand("verify", "run verification experiments");
  std::string v_what = "all";
  double v_plant = 0.0;
  v->add_option("experiment", v_what, "experiment name or 'all'");
  v->add_option("--plant-defect", v_plant, "multiplicative corruption to plant");

  auto* r = app.add_subcommand("report", "emit plot data from prior manifests");
  (void)r;

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (t->parsed()) return cmd_transform(g, t_kind, t_signal, t_l, t_m);
    if (n->parsed()) return cmd_norm(g, n_fixture);
    if (v->parsed()) return cmd_verify(g, v_what, v_plant);
    if (r->parsed()) return cmd_report(g);
  } catch (const std::exception& e) {
    std::cerr << "tfzak: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
