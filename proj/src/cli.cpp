#include "dtaoi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtaoi/analyzer.hpp"
#include "dtaoi/config.hpp"
#include "dtaoi/errors.hpp"
#include "dtaoi/optimizer.hpp"
#include "dtaoi/reproduce.hpp"
#include "dtaoi/simulator.hpp"

namespace dtaoi {

namespace {

// Destination for a data file: the named file, or `fallback` when empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw InvalidInput("cannot write " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }
    bool is_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

int decimals_for(double step)
{
    return std::max(0, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
}

Provenance provenance_of(const Config& cfg)
{
    Provenance p;
    p.config_hash = cfg.hash;
    p.tol = cfg.solver.tol;
    p.max_iter = cfg.solver.max_iter;
    return p;
}

struct AnalyzeArgs {
    std::string config;
    std::optional<int> source;
    double tail_eps = 1e-10;
    std::string out;
    std::string format = "csv";
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out)
{
    Config cfg = load_config(a.config);
    if (a.source)
        cfg.scenario.tagged_source = *a.source;
    const AgeResult res = analyze(cfg.scenario, cfg.solver);
    const std::vector<CdfRow> rows = cdf_table(res, a.tail_eps);
    const SolverMeta& m = res.solver_meta;

    Sink sink(a.out, out);
    std::ostream& os = sink.get();
    if (a.format == "json") {
        nlohmann::ordered_json j;
        j["tool"] = "dtaoi " + tool_version();
        j["config_hash"] = cfg.hash;
        j["source"] = res.source;
        j["discipline"] = std::string(to_string(res.discipline));
        j["tail_eps"] = a.tail_eps;
        j["mean_aoi"] = res.mean_aoi;
        j["var_aoi"] = res.var_aoi;
        j["mean_paoi"] = res.mean_paoi;
        j["var_paoi"] = res.var_paoi;
        j["solver"] = {{"tol", m.tol},
                       {"max_iter", m.max_iter},
                       {"iterations", m.iterations},
                       {"method", m.method},
                       {"residual_R", m.residual_R},
                       {"residual_pi0", m.residual_pi0},
                       {"spectral_radius", m.spectral_radius},
                       {"phases", m.phases}};
        auto& arr = j["rows"] = nlohmann::ordered_json::array();
        for (const CdfRow& r : rows)
            arr.push_back({{"ell", r.ell},
                           {"aoi_pmf", r.aoi_pmf},
                           {"aoi_cdf", r.aoi_cdf},
                           {"paoi_pmf", r.paoi_pmf},
                           {"paoi_cdf", r.paoi_cdf}});
        os << j.dump(2) << '\n';
        return kExitOk;
    }

    Provenance p = provenance_of(cfg);
    p.extra = Fields{{"source", std::to_string(res.source)},
               {"discipline", std::string(to_string(res.discipline))},
               {"tail_eps", format_double(a.tail_eps)},
               {"mean_aoi", format_double(res.mean_aoi)},
               {"var_aoi", format_double(res.var_aoi)},
               {"mean_paoi", format_double(res.mean_paoi)},
               {"var_paoi", format_double(res.var_paoi)},
               {"residual_R", format_double(m.residual_R)},
               {"residual_pi0", format_double(m.residual_pi0)},
               {"spectral_radius", format_double(m.spectral_radius)},
               {"method", m.method}};
    write_provenance(os, p);
    os << "ell,aoi_pmf,aoi_cdf,paoi_pmf,paoi_cdf\n";
    for (const CdfRow& r : rows)
        os << r.ell << ',' << format_double(r.aoi_pmf) << ',' << format_double(r.aoi_cdf) << ','
           << format_double(r.paoi_pmf) << ',' << format_double(r.paoi_cdf) << '\n';
    return kExitOk;
}

struct SimulateArgs {
    std::string config;
    std::optional<std::uint64_t> slots;
    std::optional<std::uint64_t> warmup;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool compare = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err)
{
    Config cfg = load_config(a.config);
    const std::uint64_t horizon = a.slots.value_or(cfg.sim.horizon);
    const std::uint64_t warmup = a.warmup.value_or(cfg.sim.warmup);
    const std::uint64_t seed = a.seed.value_or(cfg.sim.seed);
    const SimStats sim = simulate(cfg.scenario, horizon, seed, warmup);

    std::vector<std::optional<AgeResult>> laws(sim.sources.size());
    if (a.compare)
        for (std::size_t n = 0; n < laws.size(); ++n) {
            Scenario s = cfg.scenario;
            s.tagged_source = static_cast<int>(n + 1);
            laws[n] = analyze(s, cfg.solver);
        }

    Sink sink(a.out, out);
    std::ostream& os = sink.get();
    Provenance p = provenance_of(cfg);
    p.seed = seed;
    p.extra = Fields{{"discipline", std::string(to_string(sim.discipline))},
               {"horizon", std::to_string(horizon)},
               {"warmup", std::to_string(warmup)}};
    write_provenance(os, p);
    os << "source,ell,aoi_pmf,aoi_cdf,paoi_pmf,paoi_cdf,wait_pmf";
    if (a.compare)
        os << ",aoi_cdf_analytic,paoi_cdf_analytic";
    os << '\n';
    for (std::size_t n = 0; n < sim.sources.size(); ++n) {
        const SourceStats& s = sim.sources[n];
        const std::size_t len = std::max({s.aoi.counts.size(), s.paoi.counts.size(), s.wait.counts.size()});
        std::uint64_t acc_aoi = 0;
        std::uint64_t acc_paoi = 0;
        for (std::size_t ell = 0; ell < len; ++ell) {
            acc_aoi += ell < s.aoi.counts.size() ? s.aoi.counts[ell] : 0;
            acc_paoi += ell < s.paoi.counts.size() ? s.paoi.counts[ell] : 0;
            const auto frac = [](std::uint64_t x, std::uint64_t t) {
                return t == 0 ? 0.0 : static_cast<double>(x) / static_cast<double>(t);
            };
            os << n + 1 << ',' << ell << ',' << format_double(s.aoi.pmf(ell)) << ','
               << format_double(frac(acc_aoi, s.aoi.total)) << ',' << format_double(s.paoi.pmf(ell))
               << ',' << format_double(frac(acc_paoi, s.paoi.total)) << ','
               << format_double(s.wait.pmf(ell));
            if (a.compare)
                os << ',' << format_double(cdf_at(laws[n]->aoi, ell)) << ','
                   << format_double(cdf_at(laws[n]->paoi, ell));
            os << '\n';
        }
    }

    if (a.compare) {
        std::ostream& summary = sink.is_file() ? out : err;
        double worst = 0.0;
        for (std::size_t n = 0; n < sim.sources.size(); ++n) {
            const double ks_aoi = kolmogorov_distance(sim.sources[n].aoi, laws[n]->aoi);
            const double ks_paoi = sim.sources[n].paoi.total == 0
                                       ? 1.0
                                       : kolmogorov_distance(sim.sources[n].paoi, laws[n]->paoi);
            summary << "source " << n + 1 << ": max |F_emp - F_analytic| AoI=" << fixed(ks_aoi, 6)
                    << " PAoI=" << fixed(ks_paoi, 6) << '\n';
            worst = std::max({worst, ks_aoi, ks_paoi});
        }
        summary << "max |F_emp - F_analytic| = " << fixed(worst, 6) << '\n';
    }
    return kExitOk;
}

struct OptimizeArgs {
    std::string config;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> step;
    std::string table;
    unsigned threads = 0;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out)
{
    const Config cfg = load_config(a.config);
    SearchSpec spec;
    spec.q = cfg.scenario.q;
    spec.discipline = cfg.scenario.discipline;
    spec.alpha = a.alpha.value_or(cfg.search.alpha);
    spec.beta = a.beta ? a.beta : cfg.search.beta;
    spec.grid_step = a.step.value_or(cfg.search.grid_step);
    spec.solver = cfg.solver;
    spec.threads = a.threads;
    const SearchResult res = grid_search(spec);

    const int d = decimals_for(spec.grid_step);
    out << "p1*=" << fixed(res.p1_star, d) << " p2*=" << fixed(res.p2_star, d)
        << " C*=" << fixed(res.cost_star, 1) << '\n';

    if (!a.table.empty()) {
        Sink sink(a.table, out);
        std::ostream& os = sink.get();
        Provenance p = provenance_of(cfg);
        p.extra = Fields{{"discipline", std::string(to_string(spec.discipline))},
                   {"q", format_double(spec.q)},
                   {"alpha", format_double(spec.alpha)},
                   {"beta", spec.beta ? format_double(*spec.beta) : "none"},
                   {"grid_step", format_double(spec.grid_step)},
                   {"tie_break", "larger p1, then larger p2"},
                   {"p1_star", format_double(res.p1_star)},
                   {"p2_star", format_double(res.p2_star)},
                   {"cost_star", format_double(res.cost_star)}};
        write_provenance(os, p);
        os << "p1,p2,mean_aoi_1,mean_aoi_2,cost\n";
        for (const GridPoint& g : res.table)
            os << format_double(g.p1) << ',' << format_double(g.p2) << ','
               << format_double(g.mean_aoi_1) << ',' << format_double(g.mean_aoi_2) << ','
               << format_double(g.cost) << '\n';
    }
    return kExitOk;
}

struct ReproduceArgs {
    std::string data_dir = default_data_dir();
    std::vector<std::string> only;
    std::uint64_t slots = 1'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out)
{
    const auto wanted = [&](const std::string& name) {
        return a.only.empty() || std::find(a.only.begin(), a.only.end(), name) != a.only.end();
    };
    bool all_ok = true;
    const auto report_tables = [&](const char* title, const std::vector<OptimumCheck>& checks, int d) {
        std::size_t good = 0;
        for (const OptimumCheck& c : checks) {
            const bool ok = c.ok();
            good += ok ? 1 : 0;
            out << (ok ? "ok   " : "DIFF ") << title << ' ' << to_string(c.expected.discipline)
                << " q=" << format_double(c.expected.q) << " alpha=" << format_double(c.expected.alpha)
                << ": p1*=" << fixed(c.found.p1_star, d) << " p2*=" << fixed(c.found.p2_star, d)
                << " C*=" << fixed(c.found.cost_star, 1) << " (expected " << fixed(c.expected.p1, d)
                << ' ' << fixed(c.expected.p2, d) << ' ' << fixed(c.expected.cost, 1) << ")\n";
        }
        out << title << ": " << good << '/' << checks.size() << " rows match\n";
        all_ok = all_ok && good == checks.size();
    };

    if (wanted("unconstrained")) {
        TableCheckOptions o;
        o.grid_step = 0.01;
        o.p_tol = 0.01;
        o.threads = a.threads;
        report_tables("unconstrained",
                      check_optimum_table(load_optimum_table(a.data_dir + "/expected/optimum_unconstrained.csv"), o),
                      2);
    }
    if (wanted("constrained")) {
        TableCheckOptions o;
        o.grid_step = 0.001;
        o.beta = 0.1;
        o.p_tol = 0.001;
        o.threads = a.threads;
        report_tables("constrained",
                      check_optimum_table(load_optimum_table(a.data_dir + "/expected/optimum_beta_0.1.csv"), o),
                      3);
    }
    if (wanted("trace")) {
        const TraceExpectation t = load_trace_expectation(a.data_dir + "/expected/trace_ages.csv",
                                                          a.data_dir + "/expected/trace_paoi.csv");
        for (Discipline d : {Discipline::npb, Discipline::pb, Discipline::npsbr}) {
            const TraceCheck c = check_trace(t, d);
            out << (c.ok() ? "ok   " : "DIFF ") << "trace " << to_string(d) << '\n';
            for (const auto& m : c.mismatches)
                out << "     " << m << '\n';
            all_ok = all_ok && c.ok();
        }
    }
    if (wanted("figures")) {
        for (double load : {0.5, 2.0}) {
            for (const KsCheck& c : check_figure(0.1, load, a.slots, kDefaultWarmupSlots, a.seed)) {
                const bool ok = c.ks_aoi <= 0.01 && c.ks_paoi <= 0.01;
                out << (ok ? "ok   " : "DIFF ") << "figure load=" << format_double(load) << ' '
                    << to_string(c.discipline) << " source " << c.source
                    << ": KS AoI=" << fixed(c.ks_aoi, 5) << " PAoI=" << fixed(c.ks_paoi, 5) << '\n';
                all_ok = all_ok && ok;
            }
        }
    }
    out << (all_ok ? "all checks match\n" : "some checks differ\n");
    return all_ok ? kExitOk : kExitMismatch;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Discrete-time age-of-information analysis, simulation and optimization"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "AoI/PAoI distributions of one source");
    analyze_cmd->add_option("config", an.config, "scenario file (JSON)")->required();
    analyze_cmd->add_option("--source", an.source, "1-based source to analyze (default: config)");
    analyze_cmd->add_option("--tail-eps", an.tail_eps, "stop when both tails drop below this")
        ->check(CLI::Range(1e-300, 0.5));
    analyze_cmd->add_option("--out", an.out, "output file (default: stdout)");
    analyze_cmd->add_option("--format", an.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    SimulateArgs sm;
    auto* simulate_cmd = app.add_subcommand("simulate", "slot-level simulation of all sources");
    simulate_cmd->add_option("config", sm.config, "scenario file (JSON)")->required();
    simulate_cmd->add_option("--slots", sm.slots, "horizon in slots, warmup included");
    simulate_cmd->add_option("--warmup", sm.warmup, "slots discarded before recording");
    simulate_cmd->add_option("--seed", sm.seed, "RNG seed");
    simulate_cmd->add_option("--out", sm.out, "output file (default: stdout)");
    simulate_cmd->add_flag("--compare", sm.compare, "add analytic cdf columns and report the distance");

    OptimizeArgs op;
    auto* optimize_cmd = app.add_subcommand("optimize", "grid search over (p1, p2) for two sources");
    optimize_cmd->add_option("config", op.config, "scenario file (JSON); q and discipline are used")->required();
    optimize_cmd->add_option("--alpha", op.alpha, "weight of source 2");
    optimize_cmd->add_option("--beta", op.beta, "bound on p1 + p2");
    optimize_cmd->add_option("--step", op.step, "grid step");
    optimize_cmd->add_option("--table", op.table, "write the full grid to this CSV file");
    optimize_cmd->add_option("--threads", op.threads, "worker threads (0: all cores)");

    ReproduceArgs rp;
    auto* reproduce_cmd = app.add_subcommand("reproduce", "rerun the reference tables and compare");
    reproduce_cmd->add_option("--data-dir", rp.data_dir, "directory containing expected/");
    reproduce_cmd->add_option("--only", rp.only, "subset: unconstrained, constrained, trace, figures")
        ->check(CLI::IsMember({"unconstrained", "constrained", "trace", "figures"}));
    reproduce_cmd->add_option("--slots", rp.slots, "simulation horizon for the figure checks");
    reproduce_cmd->add_option("--seed", rp.seed, "RNG seed for the figure checks");
    reproduce_cmd->add_option("--threads", rp.threads, "worker threads (0: all cores)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze_cmd)
            return cmd_analyze(an, out);
        if (*simulate_cmd)
            return cmd_simulate(sm, out, err);
        if (*optimize_cmd)
            return cmd_optimize(op, out);
        if (*reproduce_cmd)
            return cmd_reproduce(rp, out);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

} // namespace dtaoi
