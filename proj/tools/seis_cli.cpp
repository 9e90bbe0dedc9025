#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seis/blockcert.hpp"
#include "seis/coupling.hpp"
#include "seis/dynamics.hpp"
#include "seis/edgechain.hpp"
#include "seis/percolation.hpp"
#include "svgplot.hpp"

using namespace seis;

namespace {

ProcessKind parse_kind(const std::string& name) {
    if (name == "contact") return ProcessKind::Contact;
    if (name == "seis") return ProcessKind::Seis;
    if (name == "two-stage") return ProcessKind::TwoStageLower;
    if (name == "upper") return ProcessKind::Upper;
    if (name == "limit") return ProcessKind::Limit;
    throw std::invalid_argument("unknown process '" + name + "'");
}

uint8_t default_active(ProcessKind kind) {
    return kind == ProcessKind::Limit ? 1 : (kind == ProcessKind::Seis ? 1 : 2);
}

Configuration parse_init(ProcessKind kind, const std::string& init, int n) {
    std::vector<uint8_t> states(static_cast<size_t>(n), 0);
    if (init == "single") {
        states[static_cast<size_t>(n / 2)] = default_active(kind);
    } else if (init == "half") {
        for (int x = n / 2; x < n; ++x) states[static_cast<size_t>(x)] = default_active(kind);
    } else {
        if (static_cast<int>(init.size()) != n)
            throw std::invalid_argument("--init string length must equal --sites");
        for (int x = 0; x < n; ++x) {
            if (init[static_cast<size_t>(x)] < '0' || init[static_cast<size_t>(x)] > '3')
                throw std::invalid_argument("--init must consist of digits 0-3");
            states[static_cast<size_t>(x)] = static_cast<uint8_t>(init[static_cast<size_t>(x)] - '0');
        }
    }
    Configuration eta(kind, std::move(states));
    eta.validate();
    return eta;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file " + path);
    return file;
}

Intensities process_intensities(const Process& p) {
    switch (p.kind) {
        case ProcessKind::Contact: return {1.0, 0.0, p.lambda};
        case ProcessKind::Limit: return {0.0, 1.0, 0.0};
        default: return {1.0, 1.0 / p.tau, p.lambda};
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator and certification tool for one-dimensional epidemic processes"};
    app.set_config("--config", "", "read options from a TOML/INI file");
    app.require_subcommand(1);

    std::string proc_name = "contact", init = "single", out_path, svg_path, dump_path;
    double lambda = 1.0, tau = 1.0, t_end = 10.0, tol = 1e-4;
    double lo = 0.05, hi = 3.0, budget = 650.0, T_override = 0.0, threshold = 0.819;
    double p = 0.7, p_min = 0.0, p_max = 0.0;
    int sites = 101, m = 3, window = 200, replicas = 200;
    int J = -1, K = -1, jj = -1, ii = 1, rows = 100, width = 200, reps = 1000, steps = 9;
    int k_nbrs = 2;
    long samples = 1000000;
    uint64_t seed = 1;
    bool cycle = false, require_pass = false, one_dep = false;
    std::vector<double> taus;

    auto add_common = [&](CLI::App* c, bool with_proc = true) {
        if (with_proc) c->add_option("--process", proc_name, "contact|seis|two-stage|upper|limit");
        c->add_option("--lambda", lambda, "transmission rate");
        c->add_option("--tau", tau, "mean latent time");
        c->add_option("--seed", seed, "rng seed");
    };

    auto* sim = app.add_subcommand("simulate", "evolve a process and emit its trajectory as CSV");
    add_common(sim);
    sim->add_option("--sites", sites);
    sim->add_flag("--cycle", cycle, "use a cycle instead of a path");
    sim->add_option("--init", init, "initial state: 'single', 'half', or a digit string");
    sim->add_option("--t-end", t_end);
    sim->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* esp = app.add_subcommand("edge-speed", "front drift of the half-line initial state");
    add_common(esp);
    esp->add_option("--window", window);
    esp->add_option("--t-end", t_end);
    esp->add_option("--replicas", replicas);

    auto* zie = app.add_subcommand("ziezold", "critical-value lower bound from the window chain");
    add_common(zie);
    zie->add_option("--m", m, "window size parameter (m+1 sites)");
    zie->add_option("--lambda-min", lo);
    zie->add_option("--lambda-max", hi);
    zie->add_option("--tol", tol);
    zie->add_option("--dump-chain", dump_path, "write the jump chain as CSV");

    auto* tab = app.add_subcommand("table1", "window-chain bounds for a sweep of tau values");
    tab->add_option("--m", m);
    tab->add_option("--taus", taus, "tau values (default: the standard sweep)");
    tab->add_option("--svg", svg_path, "write a lambda_m vs tau plot");

    auto* blk = app.add_subcommand("block", "crossing-probability certificate on a site block");
    add_common(blk);
    blk->add_option("--J", J, "block sites 0..J");
    blk->add_option("--K", K, "horizontal shift");
    blk->add_option("--j", jj, "overlap sites (K is derived as J-j+1 when given)");
    blk->add_option("--i", ii, "required active count");
    blk->add_option("--budget", budget, "expected label count fixing T");
    blk->add_option("--T", T_override, "explicit block duration (overrides budget)");
    blk->add_option("--threshold", threshold);
    blk->add_flag("--require-pass", require_pass, "exit 3 if the certificate fails");
    blk->add_option("--out", out_path, "write the certificate as CSV");

    auto* lb = app.add_subcommand("limit-bounds", "both critical-value bounds for the limit process");
    lb->add_option("--m", m)->default_val(8);
    lb->add_option("--lambda", lambda)->default_val(8.563);

    auto* dsp = app.add_subcommand("dispersal", "empirical vs exact offspring-set frequencies");
    dsp->add_option("--lambda", lambda);
    dsp->add_option("--k", k_nbrs, "neighbor count");
    dsp->add_option("--samples", samples);
    dsp->add_option("--seed", seed);

    auto* cpl = app.add_subcommand("couple", "rescaled SEIS vs limit-process coupling report");
    cpl->add_option("--lambda", lambda);
    cpl->add_option("--taus", taus, "tau values (default 10,100,1000)");
    cpl->add_option("--sites", sites)->default_val(30);
    cpl->add_option("--T", t_end)->default_val(5.0);
    cpl->add_option("--replicas", replicas)->default_val(1000);
    cpl->add_option("--seed", seed);
    cpl->add_option("--svg", svg_path, "write a mean ell(S) vs tau plot");

    auto* prc = app.add_subcommand("percolation", "oriented site percolation survival frequency");
    prc->add_option("--p", p);
    prc->add_option("--p-min", p_min);
    prc->add_option("--p-max", p_max);
    prc->add_option("--steps", steps);
    prc->add_option("--rows", rows);
    prc->add_option("--width", width);
    prc->add_option("--reps", reps);
    prc->add_option("--seed", seed);
    prc->add_flag("--one-dependent", one_dep);
    prc->add_option("--svg", svg_path, "write a survival vs p plot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            ProcessKind kind = parse_kind(proc_name);
            Process proc(kind, lambda, tau);
            Graph g = build_graph(cycle ? GraphKind::Cycle : GraphKind::Path, sites);
            Configuration eta0 = parse_init(kind, init, sites);
            Substructure sub = generate(g, process_intensities(proc), t_end, seed);
            Trajectory traj = evolve(proc, eta0, sub, t_end);
            std::ofstream file;
            trajectory_csv(traj, open_out(file, out_path));
        } else if (esp->parsed()) {
            Process proc(parse_kind(proc_name), lambda, tau);
            EdgeSpeedResult r = edge_speed(proc, window, t_end, replicas, seed);
            std::cout << "alpha," << r.alpha << "\nhalf_width," << r.half_width << "\nreplicas,"
                      << r.replicas << "\n";
        } else if (zie->parsed()) {
            ProcessKind kind = parse_kind(proc_name);
            if (!dump_path.empty()) {
                EdgeChain chain = build_edge_chain(kind, m, lambda, tau);
                std::ofstream file(dump_path);
                edge_chain_csv(chain, file);
            }
            LambdaMResult r = lambda_m(kind, m, tau, {lo, hi}, tol);
            std::cout << "lambda_" << m << "," << r.value << "\n";
            if (r.multiple_sign_changes)
                std::cerr << "warning: multiple sign changes in the bracket; reporting the largest\n";
        } else if (tab->parsed()) {
            if (taus.empty()) taus = {1e4, 1e3, 100, 10, 1, 0.58, 0.1, 0.01, 1e-3, 1e-4};
            svg::Series s{"lambda_" + std::to_string(m), {}, {}};
            std::cout << "tau,lambda_" << m << "\n";
            for (double tv : taus) {
                double v = lambda_m(ProcessKind::Upper, m, tv).value;
                std::cout << tv << "," << v << "\n";
                s.x.push_back(tv);
                s.y.push_back(v);
            }
            if (!svg_path.empty()) svg::write_plot(svg_path, {s}, "tau", "lambda_m", true);
        } else if (blk->parsed()) {
            ProcessKind kind = parse_kind(proc_name);
            BlockGeometry geom;
            if (jj > 0) {
                geom.J = J > 0 ? J : 10;
                geom.K = geom.J - jj + 1;
            } else {
                if (J > 0) geom.J = J;
                if (K > 0) geom.K = K;
            }
            geom.required = ii;
            geom.budget = budget;
            geom.T = T_override;
            CertResult cert = certify_block(kind, geom, lambda, tau, threshold);
            cert_report(cert, std::cout);
            if (!out_path.empty()) {
                std::ofstream file(out_path);
                cert_report_csv(cert, file);
            }
            if (require_pass && !cert.pass) return 3;
        } else if (lb->parsed()) {
            LambdaMResult lower = lambda_m(ProcessKind::Limit, m, 0.0);
            std::cout << "lower bound (window chain, m=" << m << "): " << lower.value << "\n";
            BlockGeometry geom;
            geom.J = 10;
            geom.K = 7;
            geom.required = 2;
            CertResult cert = certify_block(ProcessKind::Limit, geom, lambda, 0.0, threshold);
            cert_report(cert, std::cout);
        } else if (dsp->parsed()) {
            DispersalPmf pmf = dispersal_pmf(lambda, k_nbrs);
            std::vector<long> counts(pmf.prob.size(), 0);
            SplitMix64 rng(seed);
            for (long i = 0; i < samples; ++i) ++counts[sample_dispersal(pmf, rng)];
            std::cout << "mask,expected,observed\n";
            for (size_t mask = 0; mask < pmf.prob.size(); ++mask)
                std::cout << mask << "," << pmf.prob[mask] << ","
                          << static_cast<double>(counts[mask]) / samples << "\n";
        } else if (cpl->parsed()) {
            if (taus.empty()) taus = {10, 100, 1000};
            Graph g = build_graph(GraphKind::Path, sites);
            std::vector<uint8_t> states(static_cast<size_t>(sites), 0);
            states[static_cast<size_t>(sites / 2)] = 1;
            Configuration eta0(ProcessKind::Seis, states);
            svg::Series s{"mean ell(S)", {}, {}};
            std::cout << "tau,discrepancy_freq,mean_lebesgue_S,agreement_freq\n";
            for (double tv : taus) {
                int disc = 0, agree = 0;
                double ls = 0;
                for (int r = 0; r < replicas; ++r) {
                    CouplingReport rep =
                        run_coupled(lambda, tv, g, eta0, t_end, mix_seed(seed, static_cast<uint64_t>(r)));
                    disc += rep.discrepancy;
                    agree += rep.agreement;
                    ls += rep.lebesgue_S;
                }
                std::cout << tv << "," << static_cast<double>(disc) / replicas << ","
                          << ls / replicas << "," << static_cast<double>(agree) / replicas << "\n";
                s.x.push_back(tv);
                s.y.push_back(ls / replicas);
            }
            if (!svg_path.empty()) svg::write_plot(svg_path, {s}, "tau", "mean ell(S)", true);
        } else if (prc->parsed()) {
            Dependence dep = one_dep ? Dependence::OneDependent : Dependence::Independent;
            std::vector<double> ps;
            if (p_max > p_min)
                for (int i = 0; i < steps; ++i)
                    ps.push_back(p_min + (p_max - p_min) * i / (steps - 1));
            else
                ps.push_back(p);
            svg::Series s{"survival", {}, {}};
            std::cout << "p,survival,ci_half_width\n";
            for (double pv : ps) {
                SurvivalEstimate est = survival_frequency(pv, rows, width, dep, reps, seed);
                std::cout << pv << "," << est.survival << "," << est.ci_half_width << "\n";
                s.x.push_back(pv);
                s.y.push_back(est.survival);
            }
            if (!svg_path.empty()) svg::write_plot(svg_path, {s}, "p", "survival frequency");
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
