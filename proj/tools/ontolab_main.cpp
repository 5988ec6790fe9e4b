// ontolab — command-line laboratory for ontological models of a single qubit.
//
// Commands:
//   verify      run the Born-rule reproduction suite for one model
//   classify    decide psi-complete / psi-supplemented / psi-epistemic
//   experiment  theorem1 | einstein1927 | residual
//   plot        export an epistemic state as CSV grid/atom rows
//
// Exit codes: 0 pass, 1 quantitative failure, 2 usage error,
//             3 hypothesis refusal, 4 I/O error.

#include "CLI11.hpp"

#include "ontolab/analysis.hpp"
#include "ontolab/experiments.hpp"
#include "ontolab/models.hpp"
#include "ontolab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitQuantitativeFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRefusal = 3;
constexpr int kExitIo = 4;

struct CliOptions {
    std::string model_name;
    std::string state_spec = "z+";
    std::string grid_spec;
    long long mc_samples = 0;
    unsigned long long seed = 0;
    int threads = 0;
    std::string out_path;
    std::string format = "text";
};

ontolab::QuadratureConfig build_config(const CliOptions& opt) {
    ontolab::QuadratureConfig cfg;
    if (opt.mc_samples > 0) {
        cfg = ontolab::QuadratureConfig::monte_carlo(opt.mc_samples, opt.seed);
    } else if (!opt.grid_spec.empty()) {
        const auto sep = opt.grid_spec.find('x');
        if (sep == std::string::npos) {
            throw std::invalid_argument("grid spec must look like NPxNA, e.g. 128x256");
        }
        std::size_t used_p = 0;
        std::size_t used_a = 0;
        int np = 0;
        int na = 0;
        try {
            np = std::stoi(opt.grid_spec.substr(0, sep), &used_p);
            na = std::stoi(opt.grid_spec.substr(sep + 1), &used_a);
        } catch (const std::exception&) {
            throw std::invalid_argument("grid spec must look like NPxNA, e.g. 128x256");
        }
        if (used_p != sep || used_a != opt.grid_spec.size() - sep - 1) {
            throw std::invalid_argument("grid spec must look like NPxNA, e.g. 128x256");
        }
        cfg = ontolab::QuadratureConfig::gauss(np, na);
        cfg.seed = opt.seed;
    } else {
        cfg = ontolab::QuadratureConfig::gauss();
        cfg.seed = opt.seed;
    }
    cfg.threads = opt.threads;
    return cfg;
}

void describe_quadrature(const CliOptions& opt, const ontolab::QuadratureConfig& cfg,
                         ontolab::Report& report) {
    if (cfg.scheme == ontolab::QuadratureConfig::Scheme::MonteCarlo) {
        report.add("scheme", "monte-carlo");
        report.add("samples", static_cast<long long>(cfg.n_samples));
        report.add("seed", static_cast<long long>(cfg.seed));
    } else {
        report.add("scheme", "gauss");
        std::ostringstream grid;
        grid << cfg.n_polar << "x" << cfg.n_azimuthal;
        report.add("grid", grid.str());
    }
    (void)opt;
}

std::string point_to_string(const ontolab::OnticPoint& point) {
    std::string out;
    for (std::size_t i = 0; i < point.coords.size(); ++i) {
        if (i) out += "; ";
        const auto& c = point.coords[i];
        out += ontolab::format_double(c.x) + " " + ontolab::format_double(c.y) + " " +
               ontolab::format_double(c.z);
    }
    return out;
}

// Writes to --out when given, stdout otherwise.  Unwritable path → exit 4.
int emit(const std::string& text, const CliOptions& opt) {
    if (opt.out_path.empty()) {
        std::cout << text;
        return kExitPass;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output path: " << opt.out_path << "\n";
        return kExitIo;
    }
    out << text;
    out.flush();
    if (!out) {
        std::cerr << "error: failed writing output path: " << opt.out_path << "\n";
        return kExitIo;
    }
    return kExitPass;
}

int finish(ontolab::Report& report, const CliOptions& opt, int exit_code) {
    const int io = emit(report.render(opt.format), opt);
    return io != kExitPass ? io : exit_code;
}

int report_born_violation(const CliOptions& opt, const ontolab::ModelContractError& err,
                          const std::string& command) {
    ontolab::Report report;
    report.add("command", command);
    report.add("model", opt.model_name);
    report.add("error", "born-rule-violation");
    report.add("psi", ontolab::ray_to_bloch(err.psi));
    report.add("phi", ontolab::ray_to_bloch(err.phi));
    report.add("deviation", err.deviation);
    report.add("pass", false);
    return finish(report, opt, kExitQuantitativeFailure);
}

int run_verify(const CliOptions& opt) {
    const auto model = ontolab::find_model(opt.model_name);
    const auto cfg = build_config(opt);
    const auto suite = ontolab::verify_born(*model, cfg);

    ontolab::Report report;
    report.add("command", "verify");
    report.add("model", model->name());
    describe_quadrature(opt, cfg, report);
    report.add("pairs", static_cast<long long>(suite.pairs));
    if (cfg.scheme == ontolab::QuadratureConfig::Scheme::MonteCarlo) {
        report.add("sigma_limit", 3.0);
        report.add("max_deviation", suite.max_deviation);
        report.add("max_sigma_excess", suite.max_sigma_excess);
    } else {
        report.add("tolerance", 1e-6);
        report.add("max_deviation", suite.max_deviation);
    }
    report.add("worst_psi", ontolab::ray_to_bloch(suite.worst_psi));
    report.add("worst_phi", ontolab::ray_to_bloch(suite.worst_phi));
    report.add("pass", suite.pass);
    return finish(report, opt, suite.pass ? kExitPass : kExitQuantitativeFailure);
}

int run_classify(const CliOptions& opt) {
    const auto model = ontolab::find_model(opt.model_name);
    const auto cfg = build_config(opt);
    const auto sampler = ontolab::make_default_sampler();

    ontolab::ClassificationReport result;
    try {
        result = ontolab::classify(*model, sampler, cfg);
    } catch (const ontolab::ModelContractError& err) {
        return report_born_violation(opt, err, "classify");
    }

    ontolab::Report report;
    report.add("command", "classify");
    report.add("model", result.model_name);
    describe_quadrature(opt, cfg, report);
    report.add("verdict", ontolab::verdict_name(result.verdict));
    report.add("psi_ontic", result.is_psi_ontic);
    report.add("pairs_tested", static_cast<long long>(result.pairs_tested));
    report.add("max_fidelity", result.max_fidelity);
    if (result.witness) {
        report.add("witness_psi", ontolab::ray_to_bloch(result.witness->psi));
        report.add("witness_phi", ontolab::ray_to_bloch(result.witness->phi));
        report.add("witness_fidelity", result.witness->fidelity);
        if (result.witness->overlap_point) {
            report.add("witness_overlap_point", point_to_string(*result.witness->overlap_point));
        }
    }
    return finish(report, opt, kExitPass);
}

int run_theorem1(const CliOptions& opt) {
    const auto model = ontolab::find_model(opt.model_name);
    const auto cfg = build_config(opt);

    ontolab::LocalityVerdict verdict;
    try {
        verdict = ontolab::theorem1_check(*model, cfg);
    } catch (const ontolab::ModelContractError& err) {
        return report_born_violation(opt, err, "experiment");
    }

    ontolab::Report report;
    report.add("command", "experiment");
    report.add("experiment", "theorem1");
    report.add("model", model->name());
    describe_quadrature(opt, cfg, report);
    report.add("verdict", ontolab::locality_kind_name(verdict.kind));
    report.add("fidelity_plus_0", verdict.f_plus_0);
    report.add("fidelity_plus_1", verdict.f_plus_1);
    report.add("fidelity_minus_0", verdict.f_minus_0);
    report.add("fidelity_minus_1", verdict.f_minus_1);
    if (verdict.overlap_witness) {
        report.add("witness_pair", verdict.overlap_witness->pair);
        report.add("witness_point", point_to_string(verdict.overlap_witness->point));
    }
    return finish(report, opt, kExitPass);
}

int run_einstein1927(const CliOptions& opt, bool state_given) {
    const auto model = ontolab::find_model(opt.model_name);
    const auto cfg = build_config(opt);
    std::optional<ontolab::Ray> psi;
    if (state_given) psi = ontolab::parse_state_spec(opt.state_spec);

    ontolab::Diffraction1927Report result;
    try {
        result = ontolab::einstein_1927_check(*model, cfg, psi);
    } catch (const ontolab::ModelContractError& err) {
        return report_born_violation(opt, err, "experiment");
    } catch (const ontolab::HypothesisRefusal& refusal) {
        ontolab::Report report;
        report.add("command", "experiment");
        report.add("experiment", "einstein1927");
        report.add("model", model->name());
        report.add("refusal", std::string(refusal.what()));
        return finish(report, opt, kExitRefusal);
    }

    ontolab::Report report;
    report.add("command", "experiment");
    report.add("experiment", "einstein1927");
    report.add("model", model->name());
    describe_quadrature(opt, cfg, report);
    report.add("state", psi ? opt.state_spec : std::string("x+"));
    report.add("p_joint_factorized", result.p_joint_factorized);
    report.add("p_joint_quantum", result.p_joint_quantum);
    report.add("contradiction", result.contradiction);
    return finish(report, opt, kExitPass);
}

int run_residual(const CliOptions& opt) {
    const auto model = ontolab::find_model(opt.model_name);
    const auto cfg = build_config(opt);
    const double residual = ontolab::local_causality_residual(*model, cfg);

    ontolab::Report report;
    report.add("command", "experiment");
    report.add("experiment", "residual");
    report.add("model", model->name());
    describe_quadrature(opt, cfg, report);
    report.add("residual", residual);
    return finish(report, opt, kExitPass);
}

int run_plot(const CliOptions& opt) {
    const auto model = ontolab::find_model(opt.model_name);
    const auto cfg = build_config(opt);
    const auto state = ontolab::parse_state_spec(opt.state_spec);
    const auto rows =
        ontolab::plot_rows(model->prepare(state), cfg.n_polar, cfg.n_azimuthal);

    std::ostringstream csv;
    csv << "type,factor,theta,phi,x,y,z,value\n";
    char buf[64];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        csv << buf;
    };
    for (const auto& row : rows) {
        csv << (row.is_atom ? "atom" : "grid") << "," << row.factor << ",";
        put(row.theta);
        csv << ",";
        put(row.phi);
        csv << ",";
        put(row.pos.x);
        csv << ",";
        put(row.pos.y);
        csv << ",";
        put(row.pos.z);
        csv << ",";
        put(row.value);
        csv << "\n";
    }
    return emit(csv.str(), opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ontolab: a numerical laboratory for ontological models of a single qubit"};
    app.require_subcommand(1);

    CliOptions opt;
    bool state_given = false;

    const auto add_common = [&](CLI::App* cmd, bool needs_model) {
        auto* model_opt = cmd->add_option("--model", opt.model_name,
                                          "model name: bb, bm, or ks");
        if (needs_model) model_opt->required();
        auto* grid = cmd->add_option("--grid", opt.grid_spec,
                                     "Gauss grid as NPxNA (default 128x256)");
        auto* mc = cmd->add_option("--mc", opt.mc_samples,
                                   "use Monte Carlo with this many samples");
        grid->excludes(mc);
        mc->excludes(grid);
        cmd->add_option("--seed", opt.seed, "random seed for Monte Carlo (default 0)");
        cmd->add_option("--threads", opt.threads,
                        "worker threads, 0 = hardware default (results are identical "
                        "for any value)");
        cmd->add_option("--out", opt.out_path, "write the report to this file");
        cmd->add_option("--format", opt.format, "report format")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        return cmd;
    };

    auto* verify = add_common(app.add_subcommand("verify",
        "check that a model reproduces the Born rule on a deterministic pair suite"), true);
    auto* classify = add_common(app.add_subcommand("classify",
        "classify a model as psi-complete, psi-supplemented, or psi-epistemic"), true);
    auto* experiment = app.add_subcommand("experiment",
        "run a named experiment: theorem1, einstein1927, or residual");
    std::string experiment_name;
    experiment->add_option("name", experiment_name, "experiment name")
        ->required()
        ->check(CLI::IsMember({"theorem1", "einstein1927", "residual"}));
    add_common(experiment, true);
    experiment->add_option("--state", opt.state_spec,
                           "preparation for einstein1927 (z+ z- x+ x- y+ y- or theta,phi)")
        ->each([&](const std::string&) { state_given = true; });
    auto* plot = add_common(app.add_subcommand("plot",
        "export the epistemic state of a preparation as CSV rows"), true);
    plot->add_option("--state", opt.state_spec,
                     "prepared state (z+ z- x+ x- y+ y- or theta,phi); default z+");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return run_verify(opt);
        if (classify->parsed()) return run_classify(opt);
        if (experiment->parsed()) {
            if (experiment_name == "theorem1") return run_theorem1(opt);
            if (experiment_name == "einstein1927") return run_einstein1927(opt, state_given);
            return run_residual(opt);
        }
        if (plot->parsed()) return run_plot(opt);
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ontolab::HypothesisRefusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefusal;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitQuantitativeFailure;
    }
    return kExitUsage;
}
