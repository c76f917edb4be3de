#include "mfpotts/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfpotts/critical.hpp"
#include "mfpotts/errors.hpp"
#include "mfpotts/finite_volume.hpp"
#include "mfpotts/fuzzy.hpp"
#include "mfpotts/model.hpp"
#include "mfpotts/parallel.hpp"
#include "mfpotts/random_cluster.hpp"
#include "mfpotts/scheme.hpp"
#include "mfpotts/scheme_io.hpp"
#include "mfpotts/verify.hpp"

namespace mfpotts {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
    std::optional<double> tol;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> max_states;
    std::string out_path;

    SolverTolerances tolerances() const {
        SolverTolerances t;
        if (tol) t.beta = *tol;
        return t;
    }
};

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::vector<double> require_grid(const std::string& text, const char* what) {
    try {
        return parse_grid(text);
    } catch (const DomainError& e) {
        throw DomainError(std::string(what) + ": " + e.what());
    }
}

void require_positive(long long v, const char* what) {
    if (v < 1) throw DomainError(std::string(what) + " must be positive");
}

double require_integral(double q) { return static_cast<double>(integer_q(q)); }

// Commands. Each writes its result to `out` and returns an exit code.

int cmd_critical(double q, double z, const Globals& g, std::ostream& out) {
    const CriticalTemperatures ct = critical_temperatures(q, z, g.tolerances());
    Json j;
    if (ct.beta_zero) j["beta_zero"] = *ct.beta_zero;
    j["beta_one"] = ct.beta_one;
    j["beta_c"] = ct.beta_c;
    j["order"] = std::string(to_string(ct.order));
    out << j.dump() << '\n';
    return kExitOk;
}

int cmd_phase_diagram(const std::string& q_text, const std::string& z_text, const Globals& g,
                      std::ostream& out) {
    const auto qs = require_grid(q_text, "q grid");
    const auto zs = require_grid(z_text, "z grid");
    std::vector<std::pair<double, double>> points;
    for (double q : qs) {
        for (double z : zs) {
            ModelParams{q, z, 0.0}.validate();
            points.emplace_back(q, z);
        }
    }
    const auto rows = parallel_map(points.size(), [&](std::size_t i) {
        return critical_temperatures(points[i].first, points[i].second, g.tolerances());
    });
    out << "q,z,beta_zero,beta_one,beta_c,order\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << format_double(points[i].first) << ',' << format_double(points[i].second) << ','
            << optional_field(rows[i].beta_zero) << ',' << format_double(rows[i].beta_one) << ','
            << format_double(rows[i].beta_c) << ',' << to_string(rows[i].order) << '\n';
    }
    return kExitOk;
}

int cmd_bifurcation(double q, double z, const std::string& beta_text, const Globals& g, std::ostream& out) {
    const auto betas = require_grid(beta_text, "beta grid");
    for (double b : betas) ModelParams{q, z, b}.validate();
    struct Row {
        MfSolutionSet solutions;
        double global_min_u = 0.0;
    };
    const auto rows = parallel_map(betas.size(), [&](std::size_t i) {
        const ModelParams p{q, z, betas[i]};
        return Row{mf_solutions(p, g.tolerances()), landscape(p, g.tolerances()).global_min_u};
    });
    out << "beta,u_largest,positive_solutions,global_min_u\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << format_double(betas[i]) << ',' << format_double(rows[i].solutions.largest()) << ','
            << rows[i].solutions.positive_count() << ',' << format_double(rows[i].global_min_u) << '\n';
    }
    return kExitOk;
}

int cmd_landscape(double q, double z, const std::string& beta_text, const std::string& u_text, const Globals& g,
                  std::ostream& out) {
    const auto betas = require_grid(beta_text, "beta grid");
    auto us = require_grid(u_text, "u grid");
    for (double b : betas) ModelParams{q, z, b}.validate();
    for (double& u : us) u = std::clamp(u, 0.0, 1.0 - 1e-9);
    const auto profiles = parallel_map(betas.size(), [&](std::size_t i) {
        return landscape(ModelParams{q, z, betas[i]}, g.tolerances());
    });
    out << "beta,u,k,k_prime\n";
    for (double b : betas) {
        const ModelParams p{q, z, b};
        for (double u : us) {
            out << format_double(b) << ',' << format_double(u) << ',' << format_double(k(u, p)) << ','
                << format_double(k_prime(u, p)) << '\n';
        }
    }
    out << "\nbeta,u,k,kind,is_global\n";
    for (std::size_t i = 0; i < betas.size(); ++i) {
        for (const auto& pt : profiles[i].points) {
            out << format_double(betas[i]) << ',' << format_double(pt.u) << ',' << format_double(pt.k) << ','
                << to_string(pt.kind) << ',' << (pt.u == profiles[i].global_min_u ? "true" : "false") << '\n';
        }
    }
    return kExitOk;
}

int cmd_fuzzy(double q, double z, double beta, const std::vector<int>& sizes, std::ostream& out) {
    const int qi = integer_q(q);
    const GibbsVerdict v = classify(beta, qi, z, SpinPartition(sizes));
    Json j;
    j["gibbs_for_all_beta"] = v.gibbs_for_all_beta;
    j["non_gibbs"] = v.non_gibbs;
    j["threshold_beta"] = v.threshold_beta ? Json(*v.threshold_beta) : Json(nullptr);
    j["governing_class_size"] = v.governing_class_size ? Json(*v.governing_class_size) : Json(nullptr);
    j["regime"] = std::string(to_string(v.regime));
    j["discontinuities"] = Json::array();
    for (const auto& d : v.discontinuities) {
        j["discontinuities"].push_back({{"class", d.class_index + 1}, {"nu", d.nu}});
    }
    j["inherited_quadratic_case"] = v.inherited_quadratic_case;
    out << j.dump() << '\n';
    return kExitOk;
}

int cmd_kernel(double q, double z, double beta, const std::vector<int>& sizes, const std::vector<double>& nu,
               std::ostream& out) {
    const SpinPartition partition(sizes);
    partition.require_proper();
    if (partition.q() != integer_q(q)) throw DomainError("partition sizes must sum to q");
    const ProbabilityVector checked(nu);
    const auto row = q_infinity_row(checked.weights(), beta, z, partition);
    Json j;
    j["partition"] = sizes;
    j["nu"] = nu;
    j["row"] = row;
    out << j.dump() << '\n';
    return kExitOk;
}

int cmd_scheme(const std::string& path, double beta, std::optional<double> z_flag, const std::string& format,
               std::ostream& out) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open scheme file " + path);
    const SchemeDocument doc = parse_scheme(in);
    const std::optional<double> z = z_flag ? z_flag : doc.z;
    if (!z) throw DomainError("z must be given by --z or in the scheme file");
    const Trajectory tr = gibbs_trajectory(beta, doc.scheme, *z);

    auto sizes_text = [](const std::vector<int>& s) {
        std::string text;
        for (std::size_t i = 0; i < s.size(); ++i) text += (i ? ";" : "") + std::to_string(s[i]);
        return text;
    };
    if (format == "json") {
        Json j;
        j["q"] = doc.scheme.q;
        j["z"] = *z;
        j["beta"] = beta;
        j["regular"] = tr.regular;
        j["regime"] = tr.regime ? Json(std::string(to_string(*tr.regime))) : Json(nullptr);
        j["t_gibbs"] = tr.t_gibbs ? Json(*tr.t_gibbs) : Json(nullptr);
        j["switches"] = tr.switches;
        j["points"] = Json::array();
        for (const auto& pt : tr.points) {
            j["points"].push_back({{"t", pt.t},
                                   {"block_sizes", pt.block_sizes},
                                   {"r_star", pt.r_star ? Json(*pt.r_star) : Json(nullptr)},
                                   {"threshold", pt.threshold ? Json(*pt.threshold) : Json(nullptr)},
                                   {"status", std::string(to_string(pt.status))}});
        }
        out << j.dump() << '\n';
        return kExitOk;
    }
    if (format != "csv") throw DomainError("format must be csv or json");
    out << "t,block_sizes,r_star,threshold,status\n";
    for (const auto& pt : tr.points) {
        out << pt.t << ',' << sizes_text(pt.block_sizes) << ',' << (pt.r_star ? std::to_string(*pt.r_star) : "")
            << ',' << optional_field(pt.threshold) << ',' << to_string(pt.status) << '\n';
    }
    return kExitOk;
}

int cmd_sample(int N, double q, double z, double beta, int sweeps, int every, const Globals& g,
               std::ostream& out) {
    require_positive(N, "N");
    require_positive(sweeps, "sweeps");
    require_positive(every, "every");
    const ModelParams p{require_integral(q), z, beta};
    p.validate();
    const int qi = integer_q(q);
    out << "sweep";
    for (int c = 1; c <= qi; ++c) out << ",n_" << c;
    out << '\n';
    run_heat_bath(N, p, RngSeed{g.seed}, sweeps, [&](int s, std::span<const int> counts) {
        if ((s + 1) % every != 0) return;
        out << s + 1;
        for (int c : counts) out << ',' << c;
        out << '\n';
    });
    return kExitOk;
}

int cmd_rcm(int N, int z, int q, const std::string& lambda_text, int samples, int burn_in, const Globals& g,
            std::ostream& out) {
    require_positive(samples, "samples");
    if (burn_in < 0) throw DomainError("burn-in must be >= 0");
    const auto lambdas = require_grid(lambda_text, "lambda grid");
    const auto points = percolation_scan(N, z, q, lambdas, RngSeed{g.seed}, samples, burn_in,
                                         g.max_states.value_or(kDefaultCliqueCap));
    out << "lambda,p,mean_max_fraction,stderr\n";
    for (const auto& pt : points) {
        out << format_double(pt.lambda) << ',' << format_double(pt.p_open) << ','
            << format_double(pt.mean_max_fraction) << ',' << format_double(pt.stderr_max_fraction) << '\n';
    }
    return kExitOk;
}

int cmd_verify(const std::vector<std::string>& suites, const Globals& g, std::ostream& out) {
    VerifyCaps caps;
    if (g.max_states) caps.types = caps.clique_states = *g.max_states;
    bool all = true;
    for (const auto& r : run_verify(suites, caps)) {
        all = all && r.passed;
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " measured=" << format_double(r.measured)
            << " tolerance=" << format_double(r.tolerance) << " [" << r.detail << "]\n";
    }
    return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw DomainError("malformed number '" + s + "' in grid '" + text + "'");
        }
        if (used != s.size() || !std::isfinite(v)) throw DomainError("malformed number '" + s + "' in grid '" + text + "'");
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw DomainError("range grid must be start:stop:step, got '" + text + "'");
        const double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
        if (!(step > 0.0) || stop < start) throw DomainError("range grid needs step > 0 and stop >= start");
        const double n = std::floor((stop - start) / step + 1e-9);
        if (n > 1e7) throw DomainError("range grid has too many points");
        for (long i = 0; i <= static_cast<long>(n); ++i) {
            const double v = start + static_cast<double>(i) * step;
            out.push_back(std::abs(v - stop) <= 1e-9 * step ? stop : v);
        }
        return out;
    }
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(number(part));
    if (out.empty()) throw DomainError("empty grid");
    return out;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean-field generalized Potts model: critical temperatures, fuzzy Gibbsianness, finite-N checks",
                 "mfpotts"};
    app.require_subcommand(1);
    Globals g;
    double tol = 0.0;
    std::uint64_t max_states = 0;
    auto* tol_opt = app.add_option("--tol", tol, "Critical temperature bisection width")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Random seed");
    auto* cap_opt = app.add_option("--max-states", max_states, "Enumeration cap")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out_path, "Write results to this file instead of stdout");

    double q = 2.0, z = 2.0, beta = 0.0;
    std::string q_grid, z_grid, beta_grid, u_grid = "0:1:0.01", lambda_grid, file, format = "csv";
    std::vector<int> partition;
    std::vector<double> nu;
    std::vector<std::string> suites;
    std::optional<double> z_opt;
    int N = 0, sweeps = 1000, every = 1, samples = 200, burn_in = 50, zi = 2, qi = 2;

    std::function<int(std::ostream&)> action;
    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    auto* critical = sub("critical", "beta_0, beta_1, beta_c and transition order as JSON");
    critical->add_option("--q", q)->required();
    critical->add_option("--z", z)->required();
    critical->callback([&] { action = [&](std::ostream& o) { return cmd_critical(q, z, g, o); }; });

    auto* phase = sub("phase-diagram", "CSV of critical temperatures over a (q, z) grid");
    phase->add_option("--q-grid", q_grid)->required();
    phase->add_option("--z-grid", z_grid)->required();
    phase->callback([&] { action = [&](std::ostream& o) { return cmd_phase_diagram(q_grid, z_grid, g, o); }; });

    auto* bif = sub("bifurcation", "CSV of mean-field solutions over a beta grid");
    bif->add_option("--q", q)->required();
    bif->add_option("--z", z)->required();
    bif->add_option("--beta-grid", beta_grid)->required();
    bif->callback([&] { action = [&](std::ostream& o) { return cmd_bifurcation(q, z, beta_grid, g, o); }; });

    auto* land = sub("landscape", "CSV of k and k' over a u grid plus stationary points");
    land->add_option("--q", q)->required();
    land->add_option("--z", z)->required();
    land->add_option("--beta-grid,--beta", beta_grid)->required();
    land->add_option("--u-grid", u_grid);
    land->callback([&] { action = [&](std::ostream& o) { return cmd_landscape(q, z, beta_grid, u_grid, g, o); }; });

    auto* fuzzy = sub("fuzzy", "Gibbs verdict of a fuzzy partition as JSON");
    fuzzy->add_option("--q", q)->required();
    fuzzy->add_option("--z", z)->required();
    fuzzy->add_option("--beta", beta)->required();
    fuzzy->add_option("--partition", partition)->required()->delimiter(',');
    fuzzy->callback([&] { action = [&](std::ostream& o) { return cmd_fuzzy(q, z, beta, partition, o); }; });

    auto* kernel = sub("kernel", "Limiting fuzzy kernel row at a conditioning distribution");
    kernel->add_option("--q", q)->required();
    kernel->add_option("--z", z)->required();
    kernel->add_option("--beta", beta)->required();
    kernel->add_option("--partition", partition)->required()->delimiter(',');
    kernel->add_option("--nu", nu)->required()->delimiter(',');
    kernel->callback([&] { action = [&](std::ostream& o) { return cmd_kernel(q, z, beta, partition, nu, o); }; });

    auto* scheme = sub("scheme", "Gibbs status along a collapsing scheme");
    scheme->add_option("--file", file)->required();
    scheme->add_option("--beta", beta)->required();
    scheme->add_option("--z", z_opt);
    scheme->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    scheme->callback([&] { action = [&](std::ostream& o) { return cmd_scheme(file, beta, z_opt, format, o); }; });

    auto* sample = sub("sample", "Heat-bath chain; CSV of color counts per recorded sweep");
    sample->add_option("--N", N)->required();
    sample->add_option("--q", q)->required();
    sample->add_option("--z", z)->required();
    sample->add_option("--beta", beta)->required();
    sample->add_option("--sweeps", sweeps);
    sample->add_option("--every", every, "Record every n-th sweep");
    sample->callback([&] { action = [&](std::ostream& o) { return cmd_sample(N, q, z, beta, sweeps, every, g, o); }; });

    auto* rcm = sub("rcm", "Largest open-clique component fraction over a lambda grid");
    rcm->add_option("--N", N)->required();
    rcm->add_option("--z", zi)->required();
    rcm->add_option("--q", qi)->required();
    rcm->add_option("--lambda-grid", lambda_grid)->required();
    rcm->add_option("--samples", samples);
    rcm->add_option("--burn-in", burn_in);
    rcm->callback([&] {
        action = [&](std::ostream& o) { return cmd_rcm(N, zi, qi, lambda_grid, samples, burn_in, g, o); };
    });

    auto* verify = sub("verify", "Run the exact-oracle suites");
    verify->add_option("--suite", suites, "marginal, variance, kernel-convergence, gradient")->delimiter(',');
    verify->callback([&] { action = [&](std::ostream& o) { return cmd_verify(suites, g, o); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    if (*tol_opt) g.tol = tol;
    if (*cap_opt) g.max_states = max_states;

    std::unique_ptr<std::ofstream> file_out;
    if (!g.out_path.empty()) {
        file_out = std::make_unique<std::ofstream>(g.out_path);
        if (!*file_out) {
            err << "error: cannot open " << g.out_path << " for writing\n";
            return kExitInvalid;
        }
    }
    std::ostream& sink = file_out ? *file_out : out;
    try {
        return action(sink);
    } catch (const AtDiscontinuity& e) {
        err << "error: " << e.what() << " (effective beta " << format_double(e.effective_beta())
            << ", critical beta " << format_double(e.critical_beta()) << ")\n";
        return kExitDiscontinuity;
    } catch (const SchemeError& e) {
        err << "error: invalid scheme at " << e.what() << '\n';
        return kExitInvalid;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}

}  // namespace mfpotts
