#include "ion2d/cli.hpp"

#include "ion2d/dispersion.hpp"
#include "ion2d/io.hpp"
#include "ion2d/paley.hpp"
#include "ion2d/resonance.hpp"
#include "ion2d/semigroup.hpp"
#include "ion2d/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace ion2d {
namespace cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "ion2d 1.0.0";

// output-directory override: the only environment variable honored
std::string resolve_out(const std::string& path) {
    const char* base = std::getenv("ION2D_OUT_DIR");
    if (!base || !*base) return path;
    fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base) / p).string();
}

std::string manifest_comment(const std::string& config_echo, std::uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "0x%016llx",
                  static_cast<unsigned long long>(io::fnv1a64(config_echo)));
    return std::string("# manifest version=") + kVersion + " config_hash=" + buf +
           " seed=" + std::to_string(seed);
}

json manifest_json(const json& config_echo, std::uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "0x%016llx",
                  static_cast<unsigned long long>(io::fnv1a64(config_echo.dump())));
    json m;
    m["version"] = kVersion;
    m["config_hash"] = buf;
    m["seed"] = seed;
    return m;
}

void write_csv_with_manifest(const std::string& path, const std::string& manifest,
                             const std::vector<std::string>& header,
                             const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw io::io_error("cannot open " + path + " for writing");
    out << manifest << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << io::fmt(r[i]);
        out << "\n";
    }
    if (!out) throw io::io_error("short write to " + path);
}

int cmd_dispersion(double xmin, double xmax, int count, const std::string& out) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < count; ++i) {
        const double x = xmin * std::pow(xmax / xmin, double(i) / (count - 1));
        rows.push_back({x, dispersion::lambda_eval(x, 0), dispersion::lambda_eval(x, 1),
                        dispersion::lambda_eval(x, 2)});
    }
    json cfg;
    cfg["subcommand"] = "dispersion";
    cfg["xmin"] = xmin;
    cfg["xmax"] = xmax;
    cfg["count"] = count;
    write_csv_with_manifest(resolve_out(out), manifest_comment(cfg.dump(), 0),
                            {"x", "lambda", "dlambda", "d2lambda"}, rows);
    return 0;
}

json report_to_json(const resonance::VerificationReport& r, const json& cfg) {
    json j;
    j["lemma"] = r.lemma;
    j["samples"] = r.samples;
    j["min_ratio"] = r.min_ratio;
    j["argmin"] = r.argmin;
    j["window"] = r.window;
    j["seed"] = r.seed;
    j["vacuous"] = r.vacuous;
    j["note"] = r.note;
    j["manifest"] = manifest_json(cfg, r.seed);
    return j;
}

int cmd_resonance(const std::string& lemma, std::uint64_t samples, std::uint64_t seed,
                  double window, double kappa, double kappa1, double kappa2, double xi_mag,
                  const std::string& signs, const std::string& out) {
    json cfg;
    cfg["subcommand"] = "resonance";
    cfg["lemma"] = lemma;
    cfg["samples"] = samples;
    cfg["seed"] = seed;
    cfg["window"] = window;

    resonance::VerificationReport rep;
    if (lemma == "time") {
        rep = resonance::verify_time_resonance(samples, seed);
    } else if (lemma == "space") {
        dispersion::SignPair sp;
        sp.iota1 = (signs.size() > 0 && signs[0] == 'm') ? -1 : +1;
        sp.iota2 = (signs.size() > 1 && signs[1] == 'm') ? -1 : +1;
        cfg["kappa"] = kappa;
        cfg["xi_mag"] = xi_mag;
        cfg["signs"] = signs;
        rep = resonance::verify_space_resonance({xi_mag, 0.0}, kappa, sp, samples, seed,
                                                window);
    } else if (lemma == "iterated") {
        cfg["kappa1"] = kappa1;
        cfg["kappa2"] = kappa2;
        cfg["signs"] = signs;
        if (signs == "mpp")
            rep = resonance::verify_iterated_resonance(kappa1, kappa2, samples, seed, window);
        else {
            resonance::SignTriple st;
            st.iota1 = signs.size() > 0 && signs[0] == 'm' ? -1 : +1;
            st.iota2 = signs.size() > 1 && signs[1] == 'm' ? -1 : +1;
            st.iota3 = signs.size() > 2 && signs[2] == 'm' ? -1 : +1;
            rep = resonance::verify_iterated_nondegenerate(st, samples, seed, window);
        }
    } else {
        throw CLI::ValidationError("--lemma must be time|space|iterated");
    }
    io::write_text(resolve_out(out), report_to_json(rep, cfg).dump(2) + "\n");
    return 0;
}

int cmd_norms(const std::string& in, const std::string& params_path, const std::string& out) {
    paley::NormParams np;
    json cfg;
    cfg["subcommand"] = "norms";
    cfg["in"] = in;
    if (!params_path.empty()) {
        json p = json::parse(io::read_text(params_path));
        for (auto& [k, v] : p.items()) {
            if (k == "delta") np.delta = v.get<double>();
            else if (k == "N0") np.N0 = v.get<double>();
            else if (k == "N1") np.N1 = v.get<double>();
            else if (k == "N2") np.N2 = v.get<double>();
            else if (k == "N3") np.N3 = v.get<double>();
            else if (k == "gamma_scale") np.gamma_scale = v.get<double>();
            else throw CLI::ValidationError("params.json: unknown key " + k);
        }
        if (!(np.N0 > np.N1 && np.N1 > np.N2 && np.N2 > np.N3 && np.N3 > 0))
            throw CLI::ValidationError("params.json: need N0 > N1 > N2 > N3 > 0");
        if (!(np.delta > 0 && np.delta < 1))
            throw CLI::ValidationError("params.json: need 0 < delta < 1");
        cfg["params"] = p;
    }
    SpectralField f = io::read_field(in);
    const auto z = paley::z_norm(f, np);
    const double e = paley::energy_norm(f, np, 1);
    json j;
    j["l2"] = f.norm_l2();
    j["z_norm"] = z.value;
    j["z_argmax"] = {{"j", z.arg_j}, {"k", z.arg_k}};
    j["energy_norm"] = e;
    j["params"] = {{"delta", np.delta}, {"N0", np.N0}, {"N1", np.N1},
                   {"N2", np.N2},       {"N3", np.N3}, {"gamma_scale", np.gamma_scale}};
    j["manifest"] = manifest_json(cfg, 0);
    io::write_text(resolve_out(out), j.dump(2) + "\n");
    return 0;
}

int cmd_decay(int k, int gamma0_shell, double tmax, int grid, const std::string& out) {
    semigroup::DecayProbeSpec spec;
    if (gamma0_shell >= 0) {
        if (gamma0_shell == 0) {
            spec = semigroup::gamma0_bump_probe(tmax, grid);
        } else {
            // symmetric shell at distance 2^{-n} from gamma0
            spec.profile.kind = "anshell";
            spec.profile.center = dispersion::gamma0();
            spec.profile.width = std::ldexp(1.0, -gamma0_shell);
            spec.domain_length = 4.0 * std::sqrt(2.0) * tmax;
            spec.grid = grid;
            spec.fit_tmin = tmax / 10.0;
            for (int i = 0; i < 13; ++i)
                spec.times.push_back(tmax / 100.0 * std::pow(100.0, i / 12.0));
        }
    } else {
        spec = semigroup::generic_shell_probe(tmax, grid);
        const double c = std::ldexp(1.0, k);
        spec.profile.center = c;
        spec.profile.width = 0.6 * c;
    }
    auto res = semigroup::decay_exponent_probe(spec);
    json cfg;
    cfg["subcommand"] = "decay";
    cfg["k"] = k;
    cfg["gamma0_shell"] = gamma0_shell;
    cfg["tmax"] = tmax;
    cfg["grid"] = grid;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.times.size(); ++i)
        rows.push_back({res.times[i], res.supnorm[i], res.l2norm[i]});
    write_csv_with_manifest(resolve_out(out), manifest_comment(cfg.dump(), 0),
                            {"t", "supnorm", "l2norm"}, rows);
    return 0;
}

solver::SimConfig parse_sim_config(const json& j) {
    solver::SimConfig c;
    for (auto& [k, v] : j.items()) {
        if (k == "grid") c.grid = v.get<int>();
        else if (k == "domain_length") c.domain_length = v.get<double>();
        else if (k == "dt") c.dt = v.get<double>();
        else if (k == "t_end") c.t_end = v.get<double>();
        else if (k == "diagnostics_every") c.diagnostics_every = v.get<int>();
        else if (k == "snapshot_every") { /* handled by caller */ }
        else if (k == "amplitude") c.initial_data.amplitude = v.get<double>();
        else if (k == "shape") c.initial_data.shape = v.get<std::string>();
        else if (k == "seed") c.initial_data.seed = v.get<std::uint64_t>();
        else if (k == "k_cutoff") c.initial_data.k_cutoff = v.get<double>();
        else if (k == "elliptic_tol") c.elliptic.tol = v.get<double>();
        else if (k == "n_rot") c.n_rot = v.get<int>();
        else if (k == "norm_params") {
            for (auto& [k2, v2] : v.items()) {
                if (k2 == "delta") c.norm_params.delta = v2.get<double>();
                else if (k2 == "N0") c.norm_params.N0 = v2.get<double>();
                else if (k2 == "N1") c.norm_params.N1 = v2.get<double>();
                else if (k2 == "N2") c.norm_params.N2 = v2.get<double>();
                else if (k2 == "N3") c.norm_params.N3 = v2.get<double>();
                else if (k2 == "gamma_scale") c.norm_params.gamma_scale = v2.get<double>();
                else throw CLI::ValidationError("config: unknown norm_params key " + k2);
            }
        } else {
            throw CLI::ValidationError("config: unknown key " + k);
        }
    }
    if (c.grid <= 0 || (c.grid & (c.grid - 1)) != 0)
        throw CLI::ValidationError("config: grid must be a power of two");
    if (c.dt < 0 || c.t_end <= 0) throw CLI::ValidationError("config: bad dt/t_end");
    return c;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    json j = json::parse(io::read_text(config_path));
    solver::SimConfig c = parse_sim_config(j);
    int snapshot_every = j.contains("snapshot_every") ? j["snapshot_every"].get<int>() : 0;

    const fs::path dir = resolve_out(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io::io_error("cannot create " + dir.string());

    const std::uint64_t seed = c.initial_data.seed;
    const std::string mcomment = manifest_comment(j.dump(), seed);

    std::ofstream csv(dir / "diagnostics.csv");
    if (!csv) throw io::io_error("cannot open diagnostics.csv");
    csv << mcomment << "\n";
    csv << "t,mass,hamiltonian,l2_U,energy_norm,z_norm,sup_n,sup_gradpsi,flagged\n";

    int rec_count = 0;
    auto hook = [&](const solver::SimState& s, const solver::DiagnosticsRecord& r) {
        csv << io::fmt(r.t) << "," << io::fmt(r.mass) << "," << io::fmt(r.hamiltonian) << ","
            << io::fmt(r.l2_U) << "," << io::fmt(r.energy_norm) << "," << io::fmt(r.z_norm)
            << "," << io::fmt(r.sup_n) << "," << io::fmt(r.sup_gradpsi) << ","
            << (r.flagged ? 1 : 0) << "\n";
        if (snapshot_every > 0 && rec_count % snapshot_every == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%04d_rho.spf", rec_count);
            io::write_field((dir / name).string(), s.rho);
            std::snprintf(name, sizeof(name), "snapshot_%04d_psi.spf", rec_count);
            io::write_field((dir / name).string(), s.psi);
        }
        ++rec_count;
    };

    solver::RunResult res = solver::run(c, hook);
    csv.close();
    if (!csv) throw io::io_error("diagnostics.csv write failed");

    json man = manifest_json(j, seed);
    man["config"] = j;
    man["dt_used"] = res.dt_used;
    man["records"] = res.records.size();
    man["guard_tripped"] = res.guard_tripped;
    if (res.guard_tripped) man["guard_message"] = res.guard_message;
    io::write_text((dir / "run-manifest.json").string(), man.dump(2) + "\n");

    return res.guard_tripped ? 3 : 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"ion2d: dispersive analysis laboratory for the 2D ion Euler-Poisson system"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // dispersion
    auto* disp = app.add_subcommand("dispersion", "tabulate lambda and derivatives to CSV");
    double xmin = 0.05, xmax = 8.0;
    int count = 400;
    std::string disp_out = "dispersion.csv";
    disp->add_option("--xmin", xmin);
    disp->add_option("--xmax", xmax);
    disp->add_option("--count", count);
    disp->add_option("--out", disp_out)->required();

    // resonance verify
    auto* reso = app.add_subcommand("resonance", "resonance lemma verification");
    auto* verify = reso->add_subcommand("verify", "run a lemma verification scan");
    std::string lemma = "time", signs = "pp", reso_out = "report.json";
    std::uint64_t samples = 100000, seed = 1;
    double window = 1e-2, kappa = 1e-4, kappa1 = 1e-8, kappa2 = 1e-3;
    double xi_mag = 2.0 * dispersion::gamma0() + 0.05;
    verify->add_option("--lemma", lemma, "time|space|iterated")->required();
    verify->add_option("--samples", samples);
    verify->add_option("--seed", seed);
    verify->add_option("--window", window);
    verify->add_option("--kappa", kappa, "Xi bound (space lemma)");
    verify->add_option("--kappa1", kappa1, "XiTilde bound (iterated lemma)");
    verify->add_option("--kappa2", kappa2, "grad_xi PhiTilde floor (iterated lemma)");
    verify->add_option("--xi-mag", xi_mag, "output frequency magnitude (space lemma)");
    verify->add_option("--signs", signs, "pp|pm|mp|mm or mpp|ppp|... (iterated)");
    verify->add_option("--out", reso_out)->required();

    // norms
    auto* norms = app.add_subcommand("norms", "Z-norm and energy norm of a field file");
    std::string norms_in, norms_params, norms_out = "norms.json";
    norms->add_option("--in", norms_in)->required();
    norms->add_option("--params", norms_params);
    norms->add_option("--out", norms_out)->required();

    // decay
    auto* decay = app.add_subcommand("decay", "linear decay exponent probe");
    int dk = -1, g0shell = -1, grid = 512;
    double tmax = 100.0;
    decay->add_option("--k", dk, "frequency shell 2^k for the generic probe");
    decay->add_option("--gamma0-shell", g0shell,
                      "gamma0 probe: 0 = wide aggregate bump, n >= 1 = shell at 2^-n");
    decay->add_option("--tmax", tmax);
    decay->add_option("--grid", grid);
    std::string decay_out = "decay.csv";
    decay->add_option("--out", decay_out)->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "pseudo-spectral time integration");
    std::string sim_config, sim_out = "out";
    sim->add_option("--config", sim_config)->required();
    sim->add_option("--out", sim_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (disp->parsed()) return cmd_dispersion(xmin, xmax, count, disp_out);
        if (reso->parsed() && verify->parsed())
            return cmd_resonance(lemma, samples, seed, window, kappa, kappa1, kappa2, xi_mag,
                                 signs, reso_out);
        if (norms->parsed()) return cmd_norms(norms_in, norms_params, norms_out);
        if (decay->parsed()) return cmd_decay(dk, g0shell, tmax, grid, decay_out);
        if (sim->parsed()) return cmd_simulate(sim_config, sim_out);
        std::fprintf(stderr, "no subcommand\n");
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const solver::guard_error& e) {
        std::fprintf(stderr, "numeric guard: %s\n", e.what());
        return 3;
    } catch (const io::io_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace cli
}  // namespace ion2d
