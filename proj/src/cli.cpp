#include "billspec/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "billspec/error.hpp"
#include "billspec/io.hpp"
#include "billspec/rotation.hpp"
#include "billspec/seeley.hpp"
#include "billspec/weyl.hpp"

namespace billspec {

using nlohmann::json;

namespace {

struct Common {
  std::string output;
  int threads = 0;
};

// Output sink: the file named by -o, or `out` when none is given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
    os_ = file_.get();
  }
  std::ostream& stream() { return *os_; }
  std::string where() const { return path_.empty() ? "stdout" : path_; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw Error(ErrorCode::ConfigError, "write to '" + path_ + "' failed");
    }
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

json meta_json(std::string_view tool, const json& cfg, const std::uint64_t* seed) {
  char h[24];
  std::snprintf(h, sizeof h, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  json m = {{"tool", "billspec " + std::string(tool)}, {"version", std::string(kVersion)}, {"config_hash", h},
            {"config", cfg}};
  if (seed) m["seed"] = *seed;
  return m;
}

BoundaryCondition parse_bc(const std::string& s) {
  if (s == "dirichlet") return BoundaryCondition::Dirichlet;
  if (s == "neumann") return BoundaryCondition::Neumann;
  throw Error(ErrorCode::ConfigError, "boundary condition must be dirichlet or neumann");
}

RotationModel parse_model(const std::string& name, double mu, double alpha, double beta) {
  if (name == "flat_disk") return FlatDisk{mu, alpha};
  if (name == "spherical_cut") return SphericalCut{alpha, beta};
  if (name == "cylinder") return Cylinder{mu, alpha};
  throw Error(ErrorCode::ConfigError, "model must be flat_disk, spherical_cut or cylinder");
}

// Quadratic polynomial field from {"c", "x", "xi", "xx", "xxi", "xixi"}.
PhaseField poly_field(const json& j, const char* name) {
  if (!j.contains(name) || !j.at(name).is_object())
    throw Error(ErrorCode::ConfigError, std::string("robin config needs object '") + name + "'");
  const json& p = j.at(name);
  for (auto it = p.begin(); it != p.end(); ++it) {
    static const std::set<std::string> keys = {"c", "x", "xi", "xx", "xxi", "xixi"};
    if (!keys.count(it.key()) || !it.value().is_number())
      throw Error(ErrorCode::ConfigError, std::string("bad coefficient '") + it.key() + "' in " + name);
  }
  auto c = [&](const char* k) { return p.value(k, 0.0); };
  const double c0 = c("c"), cx = c("x"), cxi = c("xi"), cxx = c("xx"), cxxi = c("xxi"), cxixi = c("xixi");
  return [=](double x, double xi) { return c0 + cx * x + cxi * xi + cxx * x * x + cxxi * x * xi + cxixi * xi * xi; };
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-o,--output", c.output, "output file (default: standard output)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"billiard dynamics and spectral asymptotics toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);

  // trace
  auto* trace = app.add_subcommand("trace", "billiard orbit as a table of bounces");
  std::string t_domain, t_policy = "refract";
  int t_bounces = 100;
  std::uint64_t t_seed = 0;
  double t_u = std::numeric_limits<double>::quiet_NaN(), t_phi = std::numeric_limits<double>::quiet_NaN();
  double t_max_time = std::numeric_limits<double>::infinity();
  trace->add_option("--domain", t_domain, "domain JSON")->required();
  trace->add_option("--bounces", t_bounces)->check(CLI::PositiveNumber);
  trace->add_option("--seed", t_seed, "seed for the random initial state")->required();
  trace->add_option("--u", t_u, "boundary parameter of the start (overrides the random draw with --phi)");
  trace->add_option("--phi", t_phi, "angle to the inward normal");
  trace->add_option("--max-time", t_max_time);
  trace->add_option("--policy", t_policy)->check(CLI::IsMember({"reflect", "refract"}));
  add_common(trace, common);

  // rotation
  auto* rotation = app.add_subcommand("rotation", "rotation function: closed form against quadrature");
  std::string r_model = "flat_disk";
  double r_mu = 1.0, r_alpha = 1.0, r_beta = 1.0;
  int r_count = 21;
  rotation->add_option("--model", r_model)->check(CLI::IsMember({"flat_disk", "spherical_cut", "cylinder"}));
  rotation->add_option("--mu", r_mu);
  rotation->add_option("--alpha", r_alpha);
  rotation->add_option("--beta", r_beta);
  rotation->add_option("--count", r_count)->check(CLI::Range(2, 1000000));
  add_common(rotation, common);

  // periodic
  auto* periodic = app.add_subcommand("periodic", "measure of near-periodic sets");
  std::string p_model = "flat_disk", p_domain;
  double p_mu = 1.0, p_alpha = 1.0, p_beta = 1.0, p_eps = 1e-3, p_T = 10.0, p_phase_eps = 1e-2;
  int p_n = 10;
  std::size_t p_grid = 100000;
  std::int64_t p_samples = 100000;
  std::uint64_t p_seed = 0;
  periodic->add_option("--model", p_model)->check(CLI::IsMember({"flat_disk", "spherical_cut", "cylinder"}));
  periodic->add_option("--mu", p_mu);
  periodic->add_option("--alpha", p_alpha);
  periodic->add_option("--beta", p_beta);
  periodic->add_option("--n", p_n)->check(CLI::PositiveNumber);
  periodic->add_option("--eps", p_eps)->check(CLI::NonNegativeNumber);
  periodic->add_option("--grid", p_grid);
  auto* p_domain_opt = periodic->add_option("--domain", p_domain, "domain JSON for the phase-space estimate");
  periodic->add_option("--T", p_T);
  periodic->add_option("--phase-eps", p_phase_eps);
  periodic->add_option("--samples", p_samples);
  auto* p_seed_opt = periodic->add_option("--seed", p_seed);
  p_domain_opt->needs(p_seed_opt);
  add_common(periodic, common);

  // weyl
  auto* weyl = app.add_subcommand("weyl", "two-term Weyl residuals against an exact spectrum");
  std::string w_domain, w_bc = "dirichlet";
  double w_lmin = 100.0, w_lmax = 6400.0, w_step = 1.0;
  weyl->add_option("--domain", w_domain)->required();
  weyl->add_option("--bc", w_bc)->check(CLI::IsMember({"dirichlet", "neumann"}));
  weyl->add_option("--lmin", w_lmin);
  weyl->add_option("--lmax", w_lmax);
  weyl->add_option("--step", w_step);
  add_common(weyl, common);

  // robin
  auto* robin = app.add_subcommand("robin", "Robin boundary-layer coefficient from JSON fields");
  std::string rb_config;
  robin->add_option("--config", rb_config)->required();
  add_common(robin, common);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "exact eigenvalues of a reference domain");
  std::string s_domain, s_bc = "dirichlet";
  double s_lmax = 100.0;
  spectrum->add_option("--domain", s_domain)->required();
  spectrum->add_option("--bc", s_bc)->check(CLI::IsMember({"dirichlet", "neumann"}));
  spectrum->add_option("--lmax", s_lmax)->required();
  add_common(spectrum, common);

  // remainder
  auto* remainder = app.add_subcommand("remainder", "Monte-Carlo remainder integral over a boundary zone");
  std::string m_domain, m_zone, m_rule = "escape";
  double m_gmin = 0.01, m_gmax = 0.5, m_delta = 0.1, m_delta1 = 0.1, m_zeta = -1.0, m_h = 1e-2;
  std::int64_t m_samples = 1000000;
  std::uint64_t m_seed = 0;
  remainder->add_option("--domain", m_domain)->required();
  remainder->add_option("--zone", m_zone, "zone JSON (overrides the zone flags)");
  remainder->add_option("--gamma-min", m_gmin);
  remainder->add_option("--gamma-max", m_gmax);
  remainder->add_option("--rule", m_rule)->check(CLI::IsMember({"escape", "seeley"}));
  remainder->add_option("--delta", m_delta);
  remainder->add_option("--delta1", m_delta1);
  remainder->add_option("--zeta", m_zeta, "fixed zeta instead of gamma^(2-delta)");
  remainder->add_option("--hbar", m_h, "h for the seeley rule");
  remainder->add_option("--samples", m_samples)->check(CLI::PositiveNumber);
  remainder->add_option("--seed", m_seed)->required();
  add_common(remainder, common);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(common.threads);
    Sink sink(common.output, out);
    std::ostream& summary = common.output.empty() ? err : out;

    if (*trace) {
      const json dj = read_json_file(t_domain);
      const Domain domain = domain_from_json(dj);
      json cfg = {{"command", "trace"}, {"domain", dj}, {"bounces", t_bounces}, {"policy", t_policy},
                  {"max_time", std::isfinite(t_max_time) ? json(t_max_time) : json("inf")}};
      BoundaryState s0;
      if (!std::isnan(t_u) && !std::isnan(t_phi)) {
        s0 = state_from_incidence(domain, t_u, t_phi);
        cfg["u"] = t_u;
        cfg["phi"] = t_phi;
      } else {
        CounterRng rng(t_seed, 0);
        s0 = sample_boundary_state(domain, rng);
      }
      const OrbitRecord rec = orbit(domain, {s0.p, s0.xi}, t_bounces, t_max_time,
                                    t_policy == "reflect" ? BranchPolicy::Reflect : BranchPolicy::Refract);
      CsvWriter csv(sink.stream());
      csv.meta("trace", config_hash(cfg), &t_seed);
      csv.header({"bounce", "t", "x", "y", "xi_x", "xi_y", "component", "layer"});
      int i = 0;
      for (const auto& b : rec.bounces) csv.row(++i, b.t, b.p.x, b.p.y, b.xi.x, b.xi.y, b.component, b.layer);
      sink.close();
      summary << "trace: " << rec.bounces.size() << " bounces, termination " << to_string(rec.termination)
              << ", wrote " << sink.where() << "\n";
      return 0;
    }

    if (*rotation) {
      const RotationModel model = parse_model(r_model, r_mu, r_alpha, r_beta);
      const json cfg = {{"command", "rotation"}, {"model", r_model}, {"mu", r_mu}, {"alpha", r_alpha},
                        {"beta", r_beta}, {"count", r_count}};
      const RadialProfile prof = profile_for(model);
      const RotationMode mode =
          std::holds_alternative<Cylinder>(model) ? RotationMode::HitsInner : RotationMode::Turns;
      const double top = 0.95 * turning_threshold(model);
      CsvWriter csv(sink.stream());
      csv.meta("rotation", config_hash(cfg), nullptr);
      csv.header({"eta", "f_closed", "f_numeric", "difference"});
      double worst = 0.0;
      for (int i = 0; i < r_count; ++i) {
        const double eta = top * i / (r_count - 1);
        const double fc = f_closed(model, eta), fn = f_numeric(prof, eta, mode);
        worst = std::max(worst, std::abs(fc - fn));
        csv.row(eta, fc, fn, fc - fn);
      }
      sink.close();
      summary << "rotation: " << r_count << " points, max |closed - numeric| " << format_real(worst) << ", wrote "
              << sink.where() << "\n";
      return 0;
    }

    if (*periodic) {
      const RotationModel model = parse_model(p_model, p_mu, p_alpha, p_beta);
      json cfg = {{"command", "periodic"}, {"model", p_model}, {"mu", p_mu}, {"alpha", p_alpha},
                  {"beta", p_beta}, {"n", p_n}, {"eps", p_eps}, {"grid", p_grid}};
      const double thr = turning_threshold(model);
      const double hi = std::holds_alternative<Cylinder>(model) ? thr * (1.0 - 1e-6) : thr;
      const double m1 = periodic_measure_1d([&](double e) { return f_closed(model, e); }, 0.0, hi, p_n, p_eps,
                                            p_grid);
      json result = {{"measure_1d", m1}, {"eta_range", {0.0, hi}}};
      const std::uint64_t* seed = nullptr;
      if (!p_domain.empty()) {
        const json dj = read_json_file(p_domain);
        cfg["domain"] = dj;
        cfg["T"] = p_T;
        cfg["phase_eps"] = p_phase_eps;
        cfg["samples"] = p_samples;
        const auto est = near_periodic_phase_measure(domain_from_json(dj), p_T, p_phase_eps, p_samples, p_seed);
        result["phase_measure"] = {{"estimate", est.estimate}, {"stderr", est.stderr_}, {"samples", est.samples},
                                   {"hits", est.hits}, {"exceptional", est.exceptional}};
        seed = &p_seed;
      }
      json doc = {{"meta", meta_json("periodic", cfg, seed)}, {"result", result}};
      sink.stream() << doc.dump(2) << "\n";
      sink.close();
      summary << "periodic: measure_1d " << format_real(m1) << ", wrote " << sink.where() << "\n";
      return 0;
    }

    if (*weyl) {
      const json dj = read_json_file(w_domain);
      const Domain domain = domain_from_json(dj);
      const BoundaryCondition bc = parse_bc(w_bc);
      const json cfg = {{"command", "weyl"}, {"domain", dj}, {"bc", w_bc}, {"lmin", w_lmin}, {"lmax", w_lmax},
                        {"step", w_step}};
      // generate past lmax so the guaranteed range covers the grid
      const Spectrum spec = reference_spectrum(domain, 1.05 * w_lmax + 50.0, bc);
      const ResidualSeries series = residual_series(domain, spec, lambda_grid(w_lmin, w_lmax, w_step));
      CsvWriter csv(sink.stream());
      csv.meta("weyl", config_hash(cfg), nullptr);
      csv.header({"lambda", "N", "NW", "R", "Rnorm"});
      double sup = 0.0;
      for (const auto& r : series.rows) {
        csv.row(r.lambda, r.N, r.NW, r.R, r.Rnorm);
        sup = std::max(sup, std::abs(r.Rnorm));
      }
      sink.close();
      summary << "weyl: " << series.rows.size() << " rows, sup |R|/sqrt(lambda) " << format_real(sup) << ", wrote "
              << sink.where() << "\n";
      return 0;
    }

    if (*robin) {
      const json cfg_in = read_json_file(rb_config);
      const PhaseField a = poly_field(cfg_in, "a_prime");
      const PhaseField b = poly_field(cfg_in, "beta");
      auto tau = [&](const char* k, double dflt) {
        if (!cfg_in.contains(k)) return dflt;
        const json& v = cfg_in.at(k);
        if (v.is_string() && v.get<std::string>() == "-inf") return -std::numeric_limits<double>::infinity();
        if (!v.is_number()) throw Error(ErrorCode::ConfigError, std::string("'") + k + "' must be a number");
        return v.get<double>();
      };
      const double tau1 = tau("tau1", -std::numeric_limits<double>::infinity());
      const double tau2 = tau("tau2", 0.0);
      PhaseWindow w;
      if (cfg_in.contains("window")) {
        const json& wj = cfg_in.at("window");
        try {
          w.x_lo = wj.at("x").at(0).get<double>();
          w.x_hi = wj.at("x").at(1).get<double>();
          w.xi_lo = wj.at("xi").at(0).get<double>();
          w.xi_hi = wj.at("xi").at(1).get<double>();
        } catch (const json::exception&) {
          throw Error(ErrorCode::ConfigError, "window must be {\"x\": [lo, hi], \"xi\": [lo, hi]}");
        }
      }
      Kappa1Options opt;
      opt.nx = opt.nxi = cfg_in.value("grid", 256);
      opt.richardson = cfg_in.value("richardson", true);
      const double k1 = robin_kappa1(a, b, tau1, tau2, w, opt);
      const json cfg = {{"command", "robin"}, {"config", cfg_in}};
      json doc = {{"meta", meta_json("robin", cfg, nullptr)}, {"result", {{"kappa1", k1}}}};
      sink.stream() << doc.dump(2) << "\n";
      sink.close();
      summary << "robin: kappa1 " << format_real(k1) << ", wrote " << sink.where() << "\n";
      return 0;
    }

    if (*spectrum) {
      const json dj = read_json_file(s_domain);
      const Domain domain = domain_from_json(dj);
      const json cfg = {{"command", "spectrum"}, {"domain", dj}, {"bc", s_bc}, {"lmax", s_lmax}};
      const Spectrum spec = reference_spectrum(domain, s_lmax, parse_bc(s_bc));
      CsvWriter csv(sink.stream());
      csv.meta("spectrum", config_hash(cfg), nullptr);
      csv.header({"index", "lambda", "multiplicity", "m", "k"});
      int i = 0;
      for (const auto& e : spec.eigenvalues) csv.row(++i, e.lambda, e.multiplicity, e.m, e.k);
      sink.close();
      summary << "spectrum: " << total_count(spec) << " eigenvalues with multiplicity, guaranteed up to "
              << format_real(spec.guaranteed_up_to) << ", wrote " << sink.where() << "\n";
      return 0;
    }

    if (*remainder) {
      const json dj = read_json_file(m_domain);
      const Domain domain = domain_from_json(dj);
      json zj;
      if (!m_zone.empty()) {
        zj = read_json_file(m_zone);
      } else {
        zj = {{"gamma_min", m_gmin}, {"gamma_max", m_gmax}, {"rule", m_rule}, {"delta", m_delta},
              {"delta1", m_delta1}, {"h", m_h}};
        if (m_zeta >= 0) zj["zeta"] = m_zeta;
      }
      ZoneSpec zone;
      try {
        zone.gamma_min = zj.at("gamma_min").get<double>();
        zone.gamma_max = zj.at("gamma_max").get<double>();
        const std::string rule = zj.value("rule", "escape");
        if (rule == "seeley") {
          zone.rule = SeeleyRule{zj.value("h", 1e-2), zj.value("delta", 0.1)};
        } else if (rule == "escape") {
          EscapeRule er;
          er.delta1 = zj.value("delta1", 0.1);
          if (zj.contains("zeta")) er.zeta = FixedZeta{zj.at("zeta").get<double>()};
          else er.zeta = PowerRule{zj.value("delta", 0.1)};
          zone.rule = er;
        } else {
          throw Error(ErrorCode::ConfigError, "zone rule must be escape or seeley");
        }
      } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("bad zone: ") + e.what());
      }
      const json cfg = {{"command", "remainder"}, {"domain", dj}, {"zone", zj}, {"samples", m_samples}};
      const RemainderReport rep = remainder_integral(domain, zone, m_samples, m_seed);
      json doc = {{"meta", meta_json("remainder", cfg, &m_seed)},
                  {"result",
                   {{"estimate", rep.estimate}, {"stderr", rep.stderr_}, {"samples", rep.samples},
                    {"exceptional", rep.exceptional}, {"seed", rep.seed}}}};
      sink.stream() << doc.dump(2) << "\n";
      sink.close();
      summary << "remainder: estimate " << format_real(rep.estimate) << " +- " << format_real(rep.stderr_)
              << ", wrote " << sink.where() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace billspec
