// pwdeming: precision-profile weighted Deming regression for methods
// comparison. Subcommands: fit (analyze a CSV of paired measurements) and
// simulate (run a Monte-Carlo study from a JSON design).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pwd/csv.hpp"
#include "pwd/report.hpp"
#include "pwd/simlab.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

// A profile option is either inline JSON or a path to a JSON file.
pwd::PrecisionProfile load_profile(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg[0] != '{') {
        std::ifstream in(arg);
        if (!in) throw pwd::DataError("cannot open profile file " + arg);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw pwd::DataError(std::string("profile JSON parse error: ") + e.what());
    }
    return pwd::profile_from_json(j);
}

struct FitArgs {
    std::string input;
    std::string profile_x, profile_y;
    double lambda = 1.0;
    double level = 0.95;
    double mdl = 0.0;
    bool has_mdl = false;
    bool outliers = false;
    int k_max = 0;
    bool has_k_max = false;
    double alpha = 0.05;
    std::uint64_t seed = 12345;
    std::string format = "text";
    std::string plots;
};

int run_fit(const FitArgs& a) {
    if (a.profile_x.empty() != a.profile_y.empty()) {
        std::cerr << "error: --profile-x and --profile-y must be given together\n";
        return kExitUsage;
    }
    const bool known = !a.profile_x.empty();
    if (known && a.lambda != 1.0) {
        std::cerr << "error: --lambda applies to the RL path only; "
                     "it cannot be combined with supplied profiles\n";
        return kExitUsage;
    }

    pwd::AnalysisRequest req;
    if (known)
        req.profiles = {load_profile(a.profile_x), load_profile(a.profile_y)};
    req.lambda = a.lambda;
    req.level = a.level;
    if (a.has_mdl) req.mdl = a.mdl;
    req.outliers = a.outliers;
    if (a.has_k_max) req.k_max = a.k_max;
    req.outlier_alpha = a.alpha;
    req.seed = a.seed;
    if (!a.plots.empty()) req.plots_dir = a.plots;

    const pwd::MCDataset data = pwd::read_csv_file(a.input);
    const nlohmann::ordered_json report = pwd::analyze(data, req);
    if (a.format == "json")
        std::cout << report.dump(2) << '\n';
    else
        std::cout << pwd::render_text(report);
    return 0;
}

struct SimulateArgs {
    std::string config;
    std::string out;
};

int run_simulate(const SimulateArgs& a) {
    std::ifstream in(a.config);
    if (!in) throw pwd::DataError("cannot open config file " + a.config);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw pwd::DataError(std::string("config JSON parse error: ") + e.what());
    }
    const pwd::SimDesign design = pwd::design_from_json(j);
    const pwd::SimResult result = pwd::run_study(design);

    const std::string csv = pwd::result_to_csv(result);
    {
        std::ofstream out(a.out + ".json");
        if (!out) throw pwd::DataError("cannot write " + a.out + ".json");
        out << pwd::result_to_json(result).dump(2) << '\n';
    }
    {
        std::ofstream out(a.out + ".csv");
        if (!out) throw pwd::DataError("cannot write " + a.out + ".csv");
        out << csv;
    }
    std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Precision-profile weighted Deming regression for methods comparison"};
    app.require_subcommand(1);

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "Analyze a CSV of paired measurements");
    fit->add_option("input", fit_args.input, "CSV file with header columns x,y[,id]")
        ->required();
    fit->add_option("--profile-x", fit_args.profile_x,
                    "Predicate precision profile (inline JSON or file path)");
    fit->add_option("--profile-y", fit_args.profile_y, "Test precision profile");
    fit->add_option("--lambda", fit_args.lambda, "RL relative-precision constant g/h");
    fit->add_option("--level", fit_args.level, "Confidence level");
    fit->add_option("--mdl", fit_args.mdl, "Medical decision level to predict at");
    fit->add_flag("--outliers", fit_args.outliers, "Run the sequential outlier screen");
    fit->add_option("--k-max", fit_args.k_max, "Outlier trim budget (default 5% of n)");
    fit->add_option("--alpha", fit_args.alpha, "Outlier significance threshold");
    fit->add_option("--seed", fit_args.seed, "Seed for Monte-Carlo reference distributions");
    fit->add_option("--format", fit_args.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    fit->add_option("--plots", fit_args.plots, "Directory for plot-data CSV files");

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Run a Monte-Carlo study");
    sim->add_option("--config", sim_args.config, "Simulation design JSON")->required();
    sim->add_option("--out", sim_args.out, "Output basename (.json and .csv are written)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    fit_args.has_mdl = fit->count("--mdl") > 0;
    fit_args.has_k_max = fit->count("--k-max") > 0;

    try {
        if (fit->parsed()) return run_fit(fit_args);
        if (sim->parsed()) return run_simulate(sim_args);
    } catch (const pwd::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const pwd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
