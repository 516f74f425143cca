// Command-line surface for the risk-budgeting solvers: solve, simulate,
// contributions, verify, bench. JSON reports, CSV matrices and benches.
//
// Exit codes: 0 success (solver converged), 2 solver stopped on its
// iteration limit (or another non-converged termination), 3 input error.

#include "rb/cp_es.hpp"
#include "rb/cp_general.hpp"
#include "rb/csv.hpp"
#include "rb/risk_measures.hpp"
#include "rb/scenario_gen.hpp"
#include "rb/sgd_es.hpp"
#include "rb/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace rb;

constexpr int kExitConverged = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInputError = 3;

struct InputError {
    std::string flag;
    std::string message;
};

[[noreturn]] void fail(const std::string& flag, const std::string& message) {
    throw InputError{flag, message};
}

// ---------------------------------------------------------------- options

struct ModelOptions {
    std::string scenarios_path;          // --scenarios
    std::string model = "gaussian";      // --model
    std::string mu_path, cov_path;       // --mu / --cov
    double nu = 5.0;                     // --nu
    long n = 5000;                       // --n
    long d = 10;                         // --d (when mu/cov are generated)
    std::uint64_t seed = 0;              // --seed
    std::uint64_t param_seed = 7;        // --param-seed

    void attach(CLI::App& app, bool with_scenarios) {
        if (with_scenarios) {
            app.add_option("--scenarios", scenarios_path,
                           "CSV of scenario loss factors (rows = scenarios)");
        }
        app.add_option("--model", model, "Scenario model: gaussian or student-t")
            ->check(CLI::IsMember({"gaussian", "student-t"}));
        app.add_option("--mu", mu_path, "CSV vector of expected returns");
        app.add_option("--cov", cov_path, "CSV covariance matrix of returns");
        app.add_option("--nu", nu, "Student-t degrees of freedom (> 2)");
        app.add_option("--n", n, "Number of scenarios to sample");
        app.add_option("--d", d, "Asset count when --mu/--cov are generated");
        app.add_option("--seed", seed, "Sampling seed");
        app.add_option("--param-seed", param_seed,
                       "Seed for generated mu/cov when --mu/--cov are absent");
    }

    GaussianSpec parameters() const {
        if (!mu_path.empty() || !cov_path.empty()) {
            if (mu_path.empty() || cov_path.empty()) {
                fail(mu_path.empty() ? "--mu" : "--cov",
                     "provide both --mu and --cov or neither");
            }
            GaussianSpec spec;
            try {
                spec.mu = load_vector(mu_path);
            } catch (const std::exception& e) {
                fail("--mu", e.what());
            }
            try {
                spec.sigma = load_matrix(cov_path);
            } catch (const std::exception& e) {
                fail("--cov", e.what());
            }
            if (spec.sigma.rows() != spec.mu.size()) {
                fail("--cov", "covariance dimension does not match --mu");
            }
            return spec;
        }
        if (d < 1) fail("--d", "asset count must be positive");
        ParamGenSpec pg;
        pg.d = d;
        return generate_mu_sigma(pg, param_seed);
    }

    ScenarioMatrix sample(const GaussianSpec& params) const {
        if (n < 1) fail("--n", "scenario count must be positive");
        if (model == "gaussian") {
            return sample_gaussian(params, n, seed);
        }
        if (!(nu > 2.0)) fail("--nu", "degrees of freedom must exceed 2");
        StudentTSpec st;
        st.mu = params.mu;
        st.sigma = params.sigma;
        st.nu = nu;
        return sample_student_t(st, n, seed);
    }

    // Scenario matrix plus the Gaussian parameters when the scenarios were
    // sampled here (absent when loaded from a file).
    std::pair<ScenarioMatrix, std::optional<GaussianSpec>> scenarios() const {
        if (!scenarios_path.empty()) {
            try {
                return {load_scenarios(scenarios_path), std::nullopt};
            } catch (const std::exception& e) {
                fail("--scenarios", e.what());
            }
        }
        const GaussianSpec params = parameters();
        return {sample(params), params};
    }
};

struct MeasureOptions {
    std::string measure = "es";   // --measure
    double alpha = 0.95;          // --alpha
    std::string gamma = "sqrt";   // --gamma

    void attach(CLI::App& app) {
        app.add_option("--measure", measure, "Risk measure: es, evar or distortion")
            ->check(CLI::IsMember({"es", "evar", "distortion"}));
        app.add_option("--alpha", alpha, "Tail level for es/evar (default 0.95)");
        app.add_option("--gamma", gamma,
                       "Distortion weights: 'sqrt' or 'grid:PATH' (two-column CSV u,gamma)");
    }

    RiskSpec spec() const {
        if (measure == "distortion") {
            if (gamma == "sqrt") return RiskSpec::distortion(GammaFn::sqrt_distortion());
            if (gamma.rfind("grid:", 0) == 0) {
                const std::string path = gamma.substr(5);
                Matrix grid;
                try {
                    grid = load_matrix(path);
                } catch (const std::exception& e) {
                    fail("--gamma", e.what());
                }
                if (grid.cols() != 2) {
                    fail("--gamma", "grid file must have two columns: u, gamma");
                }
                try {
                    return RiskSpec::distortion(GammaFn::from_grid(grid.col(0), grid.col(1)));
                } catch (const std::exception& e) {
                    fail("--gamma", e.what());
                }
            }
            fail("--gamma", "expected 'sqrt' or 'grid:PATH', got '" + gamma + "'");
        }
        if (!(alpha >= 0.0 && alpha < 1.0)) fail("--alpha", "must lie in [0, 1)");
        return measure == "es" ? RiskSpec::es(alpha) : RiskSpec::evar(alpha);
    }
};

BudgetVector parse_budgets(const std::string& arg, Eigen::Index d) {
    if (arg.empty() || arg == "equal") return BudgetVector::equal(d);
    std::ifstream in(arg);
    if (!in) fail("--budgets", "cannot open '" + arg + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const std::exception& e) {
        fail("--budgets", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array() || doc.empty()) {
        fail("--budgets", "expected a JSON array of positive numbers");
    }
    Vector b(static_cast<Eigen::Index>(doc.size()));
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        const auto& entry = doc[static_cast<std::size_t>(i)];
        if (!entry.is_number()) fail("--budgets", "entries must be numbers");
        b[i] = entry.get<double>();
        if (!(b[i] > 0.0) || !std::isfinite(b[i])) {
            fail("--budgets", "entries must be positive and finite");
        }
    }
    if (b.size() != d) {
        fail("--budgets", "expected " + std::to_string(d) + " entries, got " +
                              std::to_string(b.size()));
    }
    return BudgetVector(std::move(b));
}

// Weights from a JSON report ("weights" field), a JSON array, or a CSV
// vector, so solver output feeds straight back into verify/contributions.
Vector load_weights(const std::string& path) {
    {
        std::ifstream in(path);
        if (!in) fail("--weights", "cannot open '" + path + "'");
        json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
        if (!doc.is_discarded()) {
            const json* arr = nullptr;
            if (doc.is_array()) arr = &doc;
            if (doc.is_object() && doc.contains("weights")) arr = &doc["weights"];
            if (arr != nullptr && arr->is_array() && !arr->empty()) {
                Vector w(static_cast<Eigen::Index>(arr->size()));
                for (Eigen::Index i = 0; i < w.size(); ++i) {
                    const auto& entry = (*arr)[static_cast<std::size_t>(i)];
                    if (!entry.is_number()) fail("--weights", "entries must be numbers");
                    w[i] = entry.get<double>();
                }
                return w;
            }
        }
    }
    try {
        return load_vector(path);
    } catch (const std::exception& e) {
        fail("--weights", e.what());
    }
}

json to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

json finite_or_null(double x) {
    if (std::isfinite(x)) return json(x);
    return json(nullptr);
}

void write_text(const std::string& path, const std::string& text, const char* flag) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(flag, "cannot open '" + path + "' for writing");
    out << text;
}

// ------------------------------------------------------------------ solve

struct SolveOptions {
    ModelOptions model;
    MeasureOptions measure;
    std::string budgets = "equal";
    std::string algorithm = "cp";
    double tol = 1e-6;
    long max_iter = 0;  // 0: per-algorithm default
    std::string out;
    bool plot = false;
};

int cmd_solve(const SolveOptions& opt) {
    const auto [sm, params] = opt.model.scenarios();
    const BudgetVector budgets = parse_budgets(opt.budgets, sm.n_assets());
    const RiskSpec risk = opt.measure.spec();
    if (!(opt.tol > 0.0)) fail("--tol", "tolerance must be positive");

    SolveReport rep;
    if (opt.algorithm == "cp") {
        if (risk.kind != RiskKind::ExpectedShortfall) {
            fail("--algorithm", "'cp' implements ES only; use cp-general for " + opt.measure.measure);
        }
        SolverConfig cfg;
        cfg.tolerance = opt.tol;
        if (opt.max_iter > 0) cfg.max_iterations = static_cast<int>(opt.max_iter);
        rep = solve_rb_es(sm, budgets, risk.alpha, cfg);
    } else if (opt.algorithm == "cp-general") {
        SolverConfig cfg;
        cfg.tolerance = opt.tol;
        if (opt.max_iter > 0) cfg.max_iterations = static_cast<int>(opt.max_iter);
        rep = solve_rb_general(sm, budgets, risk, cfg);
    } else {
        if (risk.kind != RiskKind::ExpectedShortfall) {
            fail("--algorithm", "'sgd' implements ES only");
        }
        SGDConfig cfg;
        cfg.n_iterations = opt.max_iter > 0 ? opt.max_iter : 1000000;
        cfg.seed = opt.model.seed;
        cfg.trace_points = 100;
        rep = solve_rb_es_sgd(sm, budgets, risk.alpha, cfg);
    }

    const double contrib_total = rep.contributions.sum();
    json report;
    report["schema"] = "rb/1";
    report["weights"] = to_json(rep.weights);
    report["t_star"] = rep.t_star;
    report["t_star_scaled"] = rep.t_star_scaled;
    report["risk"] = rep.risk;
    report["contributions"] = to_json(rep.contributions);
    report["normalized_contributions"] =
        contrib_total != 0.0 ? to_json(rep.contributions / contrib_total)
                             : to_json(Vector::Zero(rep.contributions.size()));
    report["iterations"] = rep.iterations;
    json trace = json::array();
    for (const auto& [lower, upper] : rep.trace) {
        trace.push_back(json::array({finite_or_null(lower), finite_or_null(upper)}));
    }
    report["gap_trace"] = trace;
    report["termination"] = to_string(rep.termination);
    json echo;
    echo["scenarios"] = opt.model.scenarios_path;
    echo["model"] = opt.model.model;
    echo["n"] = sm.n_scenarios();
    echo["d"] = sm.n_assets();
    echo["budgets"] = opt.budgets;
    echo["measure"] = opt.measure.measure;
    echo["alpha"] = opt.measure.alpha;
    echo["gamma"] = opt.measure.gamma;
    echo["algorithm"] = opt.algorithm;
    echo["tol"] = opt.tol;
    echo["max_iter"] = opt.max_iter;
    report["config_echo"] = echo;
    report["seed"] = opt.model.seed;

    write_text(opt.out, report.dump(2) + "\n", "--out");

    if (opt.plot) {
        std::ostringstream csv;
        csv << "iteration,lower_bound,upper_value\n";
        for (std::size_t i = 0; i < rep.trace.size(); ++i) {
            csv << i + 1 << ',';
            if (std::isfinite(rep.trace[i].first)) csv << rep.trace[i].first;
            csv << ',' << rep.trace[i].second << '\n';
        }
        const std::string stem = (opt.out.empty() || opt.out == "-") ? "rb_solve" : opt.out;
        write_text(stem + ".trace.csv", csv.str(), "--plot");
    }
    return rep.termination == Termination::Converged ? kExitConverged : kExitNotConverged;
}

// --------------------------------------------------------------- simulate

int cmd_simulate(const ModelOptions& model, const std::string& out) {
    const GaussianSpec params = model.parameters();
    const ScenarioMatrix sm = model.sample(params);
    if (out.empty()) fail("--out", "simulate requires an output path");
    try {
        write_scenarios(out, sm);
    } catch (const std::exception& e) {
        fail("--out", e.what());
    }
    return 0;
}

// ---------------------------------------------- contributions and verify

int cmd_contributions(const std::string& scenarios_path, const std::string& weights_path,
                      const MeasureOptions& measure, const std::string& out) {
    ScenarioMatrix sm = [&] {
        try {
            return load_scenarios(scenarios_path);
        } catch (const std::exception& e) {
            fail("--scenarios", e.what());
        }
    }();
    const Vector w = load_weights(weights_path);
    if (w.size() != sm.n_assets()) {
        fail("--weights", "dimension does not match the scenario matrix");
    }
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) fail("--weights", "entries must be positive");
    }
    const RiskSpec risk = measure.spec();
    const Vector rc = risk_contributions(sm, w, risk);
    const RiskEvaluation ev = evaluate_risk(risk, sm, w);

    json report;
    report["schema"] = "rb/1";
    report["risk"] = ev.value;
    report["contributions"] = to_json(rc);
    report["normalized_contributions"] =
        rc.sum() != 0.0 ? to_json(rc / rc.sum()) : to_json(Vector::Zero(rc.size()));
    write_text(out, report.dump(2) + "\n", "--out");
    return 0;
}

int cmd_verify(const std::string& scenarios_path, const std::string& weights_path,
               const std::string& budgets_arg, const MeasureOptions& measure, double tol,
               const std::string& out) {
    ScenarioMatrix sm = [&] {
        try {
            return load_scenarios(scenarios_path);
        } catch (const std::exception& e) {
            fail("--scenarios", e.what());
        }
    }();
    const Vector w = load_weights(weights_path);
    if (w.size() != sm.n_assets()) {
        fail("--weights", "dimension does not match the scenario matrix");
    }
    const BudgetVector budgets = parse_budgets(budgets_arg, sm.n_assets());
    if (!(tol > 0.0)) fail("--tol", "tolerance must be positive");
    const RiskSpec risk = measure.spec();
    const RbConditionReport check = check_rb_conditions(sm, w, budgets, risk, tol);

    json report;
    report["schema"] = "rb/1";
    report["max_pairwise_residual"] = check.max_pairwise_residual;
    report["euler_residual"] = check.euler_residual;
    report["risk"] = check.risk;
    report["contributions"] = to_json(check.contributions);
    report["tolerance"] = tol;
    report["pass"] = check.pass;
    write_text(out, report.dump(2) + "\n", "--out");
    return check.pass ? 0 : 1;
}

// ------------------------------------------------------------------ bench

struct BenchOptions {
    std::vector<long> d_list{2, 5, 10, 25};
    std::vector<long> n_list{1000, 5000};
    int reps = 3;
    MeasureOptions measure;
    std::string model = "gaussian";
    double nu = 5.0;
    std::uint64_t seed = 0;
    int threads = 1;
    double tol = 1e-6;
    std::string out;
    bool plot = false;
};

struct BenchRow {
    long d = 0, n = 0;
    int rep = 0;
    double seconds = 0.0;
    int iterations = 0;
    Termination termination = Termination::Converged;
    double residual = 0.0;
    Vector weights;
};

int cmd_bench(const BenchOptions& opt) {
    if (opt.reps < 1) fail("--reps", "need at least one repetition");
    if (opt.threads < 1) fail("--threads", "need at least one thread");
    for (long d : opt.d_list) {
        if (d < 1) fail("--d-list", "asset counts must be positive");
    }
    for (long n : opt.n_list) {
        if (n < 1) fail("--n-list", "scenario counts must be positive");
    }
    const RiskSpec risk = opt.measure.spec();
    if (risk.kind == RiskKind::Distortion) {
        fail("--measure", "bench compares against Gaussian closed forms; use es or evar");
    }

    struct Cell {
        long d, n;
        int rep;
    };
    std::vector<Cell> cells;
    for (long d : opt.d_list) {
        for (long n : opt.n_list) {
            for (int r = 0; r < opt.reps; ++r) cells.push_back({d, n, r});
        }
    }
    std::vector<BenchRow> rows(cells.size());

    const auto run_cell = [&](std::size_t idx) {
        const Cell& cell = cells[idx];
        // Deterministic per-cell seeds: parameters depend only on (d, rep),
        // scenarios on the whole cell.
        const std::uint64_t pseed =
            opt.seed + 1000003ULL * static_cast<std::uint64_t>(cell.rep) +
            static_cast<std::uint64_t>(cell.d);
        const std::uint64_t sseed = pseed * 2654435761ULL + static_cast<std::uint64_t>(cell.n);
        ParamGenSpec pg;
        pg.d = cell.d;
        const GaussianSpec params = generate_mu_sigma(pg, pseed);
        ScenarioMatrix sm = [&] {
            if (opt.model == "gaussian") return sample_gaussian(params, cell.n, sseed);
            StudentTSpec st;
            st.mu = params.mu;
            st.sigma = params.sigma;
            st.nu = opt.nu;
            return sample_student_t(st, cell.n, sseed);
        }();
        const BudgetVector budgets = BudgetVector::equal(cell.d);

        SolverConfig cfg;
        cfg.tolerance = opt.tol;
        const auto t0 = std::chrono::steady_clock::now();
        const SolveReport rep = risk.kind == RiskKind::ExpectedShortfall
                                    ? solve_rb_es(sm, budgets, risk.alpha, cfg)
                                    : solve_rb_general(sm, budgets, risk, cfg);
        const auto t1 = std::chrono::steady_clock::now();

        BenchRow row;
        row.d = cell.d;
        row.n = cell.n;
        row.rep = cell.rep;
        row.seconds = std::chrono::duration<double>(t1 - t0).count();
        row.iterations = rep.iterations;
        row.termination = rep.termination;
        row.weights = rep.weights;
        // Max RB residual against the Gaussian closed-form contributions
        // at the solved weights.
        const Vector mr =
            gaussian_marginal_risks(params.mu, params.sigma, rep.weights, risk.alpha, risk.kind);
        const Vector rc = rep.weights.cwiseProduct(mr);
        const Vector nrc = rc / rc.sum();
        row.residual = (nrc - budgets.proportions()).cwiseAbs().maxCoeff();
        rows[idx] = std::move(row);
    };

    if (opt.threads == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(opt.threads, static_cast<int>(cells.size()));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "d,n,rep,seconds,iterations,termination,max_rb_residual\n";
    csv.precision(17);
    for (const BenchRow& row : rows) {
        csv << row.d << ',' << row.n << ',' << row.rep << ',' << row.seconds << ','
            << row.iterations << ',' << to_string(row.termination) << ',' << row.residual
            << '\n';
    }
    write_text(opt.out, csv.str(), "--out");

    if (opt.plot) {
        std::ostringstream wcsv;
        wcsv << "d,n,rep,asset,weight\n";
        wcsv.precision(17);
        for (const BenchRow& row : rows) {
            for (Eigen::Index i = 0; i < row.weights.size(); ++i) {
                wcsv << row.d << ',' << row.n << ',' << row.rep << ',' << i << ','
                     << row.weights[i] << '\n';
            }
        }
        const std::string stem = (opt.out.empty() || opt.out == "-") ? "rb_bench" : opt.out;
        write_text(stem + ".weights.csv", wcsv.str(), "--plot");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scenario-driven risk-budgeting portfolio solver"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Solve a risk-budgeting problem");
    SolveOptions so;
    so.model.attach(*solve, /*with_scenarios=*/true);
    so.measure.attach(*solve);
    solve->add_option("--budgets", so.budgets, "'equal' or a JSON array file of positive budgets");
    solve->add_option("--algorithm", so.algorithm, "cp, cp-general or sgd")
        ->check(CLI::IsMember({"cp", "cp-general", "sgd"}));
    solve->add_option("--tol", so.tol, "Optimality gap tolerance (default 1e-6)");
    solve->add_option("--max-iter", so.max_iter, "Iteration cap (sgd: step count)");
    solve->add_option("--out", so.out, "Report path ('-' or empty: stdout)");
    solve->add_flag("--plot", so.plot, "Also write a gap-trace CSV for plotting");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Sample scenarios to a CSV file");
    ModelOptions sim_model;
    sim_model.attach(*simulate, /*with_scenarios=*/false);
    std::string sim_out;
    simulate->add_option("--out", sim_out, "Scenario CSV output path")->required();

    // contributions
    auto* contrib = app.add_subcommand("contributions", "Risk contributions of given weights");
    std::string c_scen, c_weights, c_out;
    MeasureOptions c_measure;
    contrib->add_option("--scenarios", c_scen, "Scenario CSV")->required();
    contrib->add_option("--weights", c_weights, "Weights: JSON report, JSON array or CSV vector")
        ->required();
    c_measure.attach(*contrib);
    contrib->add_option("--out", c_out, "Report path ('-' or empty: stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "Check the risk-budgeting conditions");
    std::string v_scen, v_weights, v_budgets = "equal", v_out;
    MeasureOptions v_measure;
    double v_tol = 1e-2;
    verify->add_option("--scenarios", v_scen, "Scenario CSV")->required();
    verify->add_option("--weights", v_weights, "Weights: JSON report, JSON array or CSV vector")
        ->required();
    verify->add_option("--budgets", v_budgets, "'equal' or a JSON array file");
    v_measure.attach(*verify);
    verify->add_option("--tol", v_tol, "Pass threshold on the residuals (default 1e-2)");
    verify->add_option("--out", v_out, "Report path ('-' or empty: stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Timing/accuracy grid against Gaussian closed forms");
    BenchOptions bo;
    bench->add_option("--d-list", bo.d_list, "Asset counts")->delimiter(',');
    bench->add_option("--n-list", bo.n_list, "Scenario counts")->delimiter(',');
    bench->add_option("--reps", bo.reps, "Repetitions per cell (default 3)");
    bo.measure.attach(*bench);
    bench->add_option("--model", bo.model, "gaussian or student-t")
        ->check(CLI::IsMember({"gaussian", "student-t"}));
    bench->add_option("--nu", bo.nu, "Student-t degrees of freedom");
    bench->add_option("--seed", bo.seed, "Base seed; cells derive their own");
    bench->add_option("--threads", bo.threads, "Worker threads (default 1)");
    bench->add_option("--tol", bo.tol, "Solver tolerance (default 1e-6)");
    bench->add_option("--out", bo.out, "CSV path ('-' or empty: stdout)");
    bench->add_flag("--plot", bo.plot, "Also write per-cell weights CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (solve->parsed()) return cmd_solve(so);
        if (simulate->parsed()) return cmd_simulate(sim_model, sim_out);
        if (contrib->parsed()) return cmd_contributions(c_scen, c_weights, c_measure, c_out);
        if (verify->parsed()) return cmd_verify(v_scen, v_weights, v_budgets, v_measure, v_tol, v_out);
        if (bench->parsed()) return cmd_bench(bo);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.flag << ": " << e.message << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid input: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
