// Command-line front end: model loading/building, reproduction numbers,
// endemic equilibria, Pareto/anti-Pareto frontiers and model reductions.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sisopt/equilibrium.hpp"
#include "sisopt/equivalence.hpp"
#include "sisopt/model.hpp"
#include "sisopt/model_io.hpp"
#include "sisopt/pareto.hpp"
#include "sisopt/spectral.hpp"

namespace {

using nlohmann::json;

struct ModelArgs {
    std::string model_path;
    std::string builder;
    double kappa = 1.0;
    double gamma = 1.0;
    int groups = 2;
    double eps = 0.0;
};

void add_model_options(CLI::App* cmd, ModelArgs& args) {
    cmd->add_option("--model", args.model_path, "model JSON file");
    cmd->add_option("--builder", args.builder,
                    "built-in model: homogeneous | multipartite | perturbed-multipartite")
        ->check(CLI::IsMember({"homogeneous", "multipartite", "perturbed-multipartite"}));
    cmd->add_option("--kappa", args.kappa, "kernel level for the builders");
    cmd->add_option("--gamma", args.gamma, "recovery rate (homogeneous builder)");
    cmd->add_option("--groups", args.groups, "group count (multipartite builders)");
    cmd->add_option("--eps", args.eps, "diagonal perturbation (perturbed-multipartite)");
}

sisopt::SisModel make_model(const ModelArgs& args) {
    if (!args.model_path.empty())
        return sisopt::load_model_file(args.model_path);
    if (args.builder == "homogeneous")
        return sisopt::build_homogeneous(args.kappa, args.gamma);
    if (args.builder == "multipartite")
        return sisopt::build_multipartite(args.groups, args.kappa);
    if (args.builder == "perturbed-multipartite")
        return sisopt::build_perturbed_multipartite(args.groups, args.kappa, args.eps);
    throw sisopt::ParseError("provide either --model or --builder");
}

struct StrategyArgs {
    std::string eta_path;
    std::optional<double> eta_const;
};

void add_strategy_options(CLI::App* cmd, StrategyArgs& args) {
    cmd->add_option("--eta", args.eta_path, "strategy JSON file (array of per-site values)");
    cmd->add_option("--eta-const", args.eta_const, "constant strategy value in [0,1]");
}

sisopt::Strategy make_strategy(const StrategyArgs& args, std::size_t n) {
    if (!args.eta_path.empty()) {
        sisopt::Strategy s = sisopt::load_strategy_file(args.eta_path);
        if (s.size() != n)
            throw sisopt::DimensionMismatch("strategy size does not match the model");
        return s;
    }
    const double v = args.eta_const.value_or(1.0);
    sisopt::Strategy s = sisopt::Strategy::constant(n, v);
    s.validate();
    return s;
}

struct FrontierArgs {
    std::string loss = "re";
    std::string cost = "uniform";
    std::string cost_density_path;
    std::size_t grid = 21;
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    std::string out;
    double tol_spectral = 1e-12;
    double tol_fix = 1e-12;
};

void add_frontier_options(CLI::App* cmd, FrontierArgs& args, bool with_grid = true) {
    cmd->add_option("--loss", args.loss, "loss function: re | i")
        ->check(CLI::IsMember({"re", "i"}));
    cmd->add_option("--cost", args.cost, "cost function: uniform | affine")
        ->check(CLI::IsMember({"uniform", "affine"}));
    cmd->add_option("--cost-density", args.cost_density_path,
                    "per-site cost density JSON array (affine cost)");
    if (with_grid)
        cmd->add_option("--grid", args.grid, "number of frontier grid points");
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_option("--out", args.out, "output path (or prefix for frontier commands)");
    cmd->add_option("--tol-spectral", args.tol_spectral, "power iteration tolerance");
    cmd->add_option("--tol-fix", args.tol_fix, "equilibrium fixed-point tolerance");
}

sisopt::LossKind loss_kind(const FrontierArgs& args) {
    return args.loss == "re" ? sisopt::LossKind::Re : sisopt::LossKind::InfectedFraction;
}

sisopt::CostFunction cost_function(const FrontierArgs& args, const sisopt::SisModel& model) {
    if (args.cost == "uniform")
        return sisopt::CostFunction::uniform();
    if (args.cost_density_path.empty())
        throw sisopt::ParseError("affine cost needs --cost-density");
    std::ifstream in(args.cost_density_path);
    if (!in)
        throw sisopt::ParseError("cannot open " + args.cost_density_path);
    nlohmann::json j;
    in >> j;
    std::vector<double> density = j.get<std::vector<double>>();
    if (density.size() != model.size())
        throw sisopt::DimensionMismatch("cost density size does not match the model");
    return sisopt::CostFunction::affine(std::move(density));
}

sisopt::OptimizerOptions optimizer_options(const FrontierArgs& args) {
    sisopt::OptimizerOptions opts;
    opts.seed = args.seed;
    opts.perron.tol_rel = args.tol_spectral;
    opts.equilibrium.tol_fix = args.tol_fix;
    if (const char* env = std::getenv("VACC_PARETO_THREADS"))
        opts.threads = std::atoi(env); // 0 = auto
    else
        opts.threads = 0;
    return opts;
}

void write_or_print(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw sisopt::ParseError("cannot open " + path + " for writing");
    out << payload;
}

void emit_frontier(const sisopt::Frontier& frontier, const std::string& prefix) {
    std::ostringstream csv, sidecar;
    sisopt::write_frontier_csv(frontier, csv);
    sisopt::write_strategies_json(frontier, sidecar);
    if (prefix.empty()) {
        std::cout << csv.str();
        return;
    }
    write_or_print(prefix + ".csv", csv.str());
    write_or_print(prefix + "_strategies.json", sidecar.str());
    std::cout << "wrote " << prefix << ".csv (" << frontier.points.size() << " points) and "
              << prefix << "_strategies.json\n";
    if (frontier.reducible_warning)
        std::cerr << "warning: kernel is reducible; anti-frontier connectedness is not certified\n";
    for (const auto& p : frontier.points)
        if (p.flagged)
            std::cerr << "warning: non-monotone frontier point at cost " << p.cost
                      << " (kept, flagged)\n";
}

int run(int argc, char** argv) {
    CLI::App app{"heterogeneous SIS vaccination: reproduction numbers, endemic equilibria "
                 "and cost/loss frontiers"};
    app.require_subcommand(1);

    ModelArgs model_args;
    StrategyArgs strategy_args;
    FrontierArgs frontier_args;

    ModelArgs model_b_args; // second model for two-model commands
    std::string mapping_path, out_model, out_mapping, splits;

    auto* cmd_r0 = app.add_subcommand("r0", "reproduction number R_0");
    add_model_options(cmd_r0, model_args);
    cmd_r0->add_option("--tol-spectral", frontier_args.tol_spectral, "power iteration tolerance");

    auto* cmd_re = app.add_subcommand("re", "effective reproduction number R_e(eta)");
    add_model_options(cmd_re, model_args);
    add_strategy_options(cmd_re, strategy_args);
    cmd_re->add_option("--tol-spectral", frontier_args.tol_spectral, "power iteration tolerance");

    auto* cmd_eq = app.add_subcommand("equilibrium", "maximal endemic equilibrium and I(eta)");
    add_model_options(cmd_eq, model_args);
    add_strategy_options(cmd_eq, strategy_args);
    cmd_eq->add_option("--tol-fix", frontier_args.tol_fix, "fixed-point tolerance");
    cmd_eq->add_option("--out", frontier_args.out, "output JSON path");

    auto* cmd_front = app.add_subcommand("frontier", "Pareto frontier sweep");
    add_model_options(cmd_front, model_args);
    add_frontier_options(cmd_front, frontier_args);

    auto* cmd_anti = app.add_subcommand("anti-frontier", "anti-Pareto frontier sweep");
    add_model_options(cmd_anti, model_args);
    add_frontier_options(cmd_anti, frontier_args);

    auto* cmd_feas = app.add_subcommand("feasible", "sample the feasible (cost, loss) region");
    add_model_options(cmd_feas, model_args);
    add_frontier_options(cmd_feas, frontier_args, false);
    cmd_feas->add_option("--samples", frontier_args.samples, "number of random strategies");

    auto* cmd_erad = app.add_subcommand("erad-cost", "minimal cost of eradication");
    add_model_options(cmd_erad, model_args);
    add_frontier_options(cmd_erad, frontier_args, false);

    auto* cmd_stab = app.add_subcommand("stability", "sampled sup-gap of R_e between two models");
    cmd_stab->add_option("--model-a", model_args.model_path, "first model JSON")->required();
    cmd_stab->add_option("--model-b", model_b_args.model_path, "second model JSON")->required();
    cmd_stab->add_option("--samples", frontier_args.samples, "number of random strategies");
    cmd_stab->add_option("--seed", frontier_args.seed, "random seed");

    auto* cmd_reduce = app.add_subcommand("reduce", "merge behaviorally identical sites");
    add_model_options(cmd_reduce, model_args);
    cmd_reduce->add_option("--out-model", out_model, "reduced model JSON path")->required();
    cmd_reduce->add_option("--out-mapping", out_mapping, "mapping JSON path")->required();

    auto* cmd_blow = app.add_subcommand("blowup", "split sites into identical parts");
    add_model_options(cmd_blow, model_args);
    cmd_blow->add_option("--splits", splits, "comma-separated part counts, one per site")
        ->required();
    cmd_blow->add_option("--out-model", out_model, "fine model JSON path")->required();
    cmd_blow->add_option("--out-mapping", out_mapping, "mapping JSON path")->required();

    auto* cmd_verify = app.add_subcommand("verify-equiv", "check two coupled models agree");
    cmd_verify->add_option("--model-fine", model_args.model_path, "fine model JSON")->required();
    cmd_verify->add_option("--model-coarse", model_b_args.model_path, "coarse model JSON")
        ->required();
    cmd_verify->add_option("--mapping", mapping_path, "mapping JSON")->required();
    cmd_verify->add_option("--samples", frontier_args.samples, "number of random strategies");
    cmd_verify->add_option("--seed", frontier_args.seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    sisopt::PerronOptions popts;
    popts.tol_rel = frontier_args.tol_spectral;

    if (cmd_r0->parsed()) {
        sisopt::SisModel model = make_model(model_args);
        sisopt::PerronTriple t =
            sisopt::perron_triple(model.next_gen, sisopt::Strategy::ones(model.size()), popts);
        json j = {{"value", t.rho}, {"iterations", t.iterations}, {"residual", t.residual}};
        std::cout << j.dump() << '\n';
        return 0;
    }
    if (cmd_re->parsed()) {
        sisopt::SisModel model = make_model(model_args);
        sisopt::Strategy eta = make_strategy(strategy_args, model.size());
        sisopt::PerronTriple t = sisopt::perron_triple(model.next_gen, eta, popts);
        json j = {{"value", t.rho}, {"iterations", t.iterations}, {"residual", t.residual}};
        std::cout << j.dump() << '\n';
        return 0;
    }
    if (cmd_eq->parsed()) {
        sisopt::SisModel model = make_model(model_args);
        sisopt::Strategy eta = make_strategy(strategy_args, model.size());
        sisopt::EquilibriumOptions eopts;
        eopts.tol_fix = frontier_args.tol_fix;
        sisopt::Equilibrium eq;
        int code = 0;
        try {
            eq = sisopt::maximal_equilibrium(model, eta, eopts);
        } catch (const sisopt::EquilibriumNoConvergence& e) {
            // still emit the partial state alongside the failure
            std::cerr << "numerical error: " << e.what() << '\n';
            eq = e.partial;
            code = 2;
        }
        json j = {{"g", eq.g},
                  {"infected_fraction", eq.infected_fraction},
                  {"residual", eq.residual},
                  {"iterations", eq.iterations},
                  {"maximality_certificate", eq.maximality_certificate},
                  {"converged", eq.converged}};
        write_or_print(frontier_args.out, j.dump(2) + "\n");
        return code;
    }
    if (cmd_front->parsed() || cmd_anti->parsed()) {
        sisopt::SisModel model = make_model(model_args);
        sisopt::CostFunction cost = cost_function(frontier_args, model);
        sisopt::OptimizerOptions opts = optimizer_options(frontier_args);
        sisopt::Frontier frontier =
            cmd_front->parsed()
                ? sisopt::pareto_frontier(model, loss_kind(frontier_args), cost,
                                          frontier_args.grid, opts)
                : sisopt::anti_pareto_frontier(model, loss_kind(frontier_args), cost,
                                               frontier_args.grid, opts);
        emit_frontier(frontier, frontier_args.out);
        return 0;
    }
    if (cmd_feas->parsed()) {
        sisopt::SisModel model = make_model(model_args);
        sisopt::CostFunction cost = cost_function(frontier_args, model);
        sisopt::OptimizerOptions opts = optimizer_options(frontier_args);
        auto samples = sisopt::feasible_region_sample(model, loss_kind(frontier_args), cost,
                                                      frontier_args.samples, frontier_args.seed,
                                                      opts);
        std::ostringstream csv;
        sisopt::write_samples_csv(samples, csv);
        write_or_print(frontier_args.out, csv.str());
        return 0;
    }
    if (cmd_erad->parsed()) {
        sisopt::SisModel model = make_model(model_args);
        sisopt::CostFunction cost = cost_function(frontier_args, model);
        sisopt::OptimizerOptions opts = optimizer_options(frontier_args);
        sisopt::EradicationCost erad = sisopt::eradication_cost(model, cost, opts);
        json j = {{"cost", erad.cost},
                  {"cost_via_infected_fraction", erad.cost_via_I},
                  {"upper_bound", erad.upper_bound},
                  {"certified", erad.certified}};
        write_or_print(frontier_args.out, j.dump() + "\n");
        return 0;
    }
    if (cmd_stab->parsed()) {
        sisopt::SisModel a = sisopt::load_model_file(model_args.model_path);
        sisopt::SisModel b = sisopt::load_model_file(model_b_args.model_path);
        double gap = sisopt::re_stability_gap(a, b, frontier_args.samples, frontier_args.seed);
        json j = {{"sup_gap_lower_bound", gap},
                  {"samples", frontier_args.samples},
                  {"note", "sampled lower bound; the true sup over all strategies can be larger"}};
        std::cout << j.dump() << '\n';
        return 0;
    }
    if (cmd_reduce->parsed()) {
        sisopt::SisModel model = make_model(model_args);
        auto [reduced, mapping] = sisopt::reduce(model);
        sisopt::save_model_file(reduced, out_model);
        sisopt::save_mapping_file(mapping, out_mapping);
        std::cout << "reduced " << model.size() << " sites to " << reduced.size() << '\n';
        return 0;
    }
    if (cmd_blow->parsed()) {
        sisopt::SisModel model = make_model(model_args);
        std::vector<int> parts;
        std::stringstream ss(splits);
        for (std::string item; std::getline(ss, item, ',');)
            parts.push_back(std::stoi(item));
        auto [fine, mapping] = sisopt::blow_up(model, parts);
        sisopt::save_model_file(fine, out_model);
        sisopt::save_mapping_file(mapping, out_mapping);
        std::cout << "blew up " << model.size() << " sites to " << fine.size() << '\n';
        return 0;
    }
    if (cmd_verify->parsed()) {
        sisopt::SisModel fine = sisopt::load_model_file(model_args.model_path);
        sisopt::SisModel coarse = sisopt::load_model_file(model_b_args.model_path);
        sisopt::SiteMapping mapping =
            sisopt::load_mapping_file(mapping_path, fine.space, coarse.space);
        sisopt::EquivalenceReport report =
            sisopt::verify_equivalence(fine, coarse, mapping, frontier_args.samples,
                                       frontier_args.seed);
        for (const auto& check : report.checks)
            std::cout << (check.pass ? "PASS" : "FAIL") << ' ' << check.name << " gap="
                      << check.gap << " tol=" << check.tol << '\n';
        std::cout << (report.all_pass ? "all checks passed" : "checks failed") << '\n';
        return report.all_pass ? 0 : 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sisopt::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const sisopt::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
