#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "conclust/center_dp.hpp"
#include "conclust/instances.hpp"
#include "conclust/io.hpp"
#include "conclust/median_dp.hpp"
#include "conclust/msr_msd.hpp"
#include "conclust/oracle.hpp"

using namespace conclust;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitInput = 1, kExitInfeasible = 2;

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Bundle load_bundle(const std::string& path) {
    json j = load_json_file(path);
    if (j.contains("instance")) return bundle_from_json(j);
    return Bundle{instance_from_json(j), {}, {}, "", 0};
}

NiceDecomposition nice_for(const Bundle& b, const std::string& decomp_path) {
    if (!decomp_path.empty())
        return make_nice(decomposition_from_json(load_json_file(decomp_path)), b.inst);
    if (b.decomposition) return make_nice(*b.decomposition, b.inst);
    return nice_decomposition_for(b.inst);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

struct SolveOutput {
    ClusteringSolution sol;
    json extra;  // solver-specific report fields
};

SolveOutput run_solver(const std::string& solver, const Bundle& b, double eps,
                       const std::string& objective, const std::string& decomp_path) {
    const Instance& inst = b.inst;
    if (solver == "exact-center")
        return {solve_center_exact(inst, nice_for(b, decomp_path)), {}};
    if (solver == "fpt-center")
        return {solve_center_fpt(inst, nice_for(b, decomp_path)), {}};
    if (solver == "fpt-median")
        return {solve_median_fpt(inst, nice_for(b, decomp_path)), {}};
    if (solver == "fpt-means")
        return {solve_means_fpt(inst, nice_for(b, decomp_path)), {}};
    if (solver == "msr" || solver == "msd" || solver == "msd-unconstrained") {
        MsrConfig cfg;
        cfg.eps = eps;
        MsrResult res = solver == "msr"  ? solve_msr(inst, cfg)
                        : solver == "msd" ? solve_msd(inst, cfg)
                                          : solve_msd_unconstrained(inst, cfg);
        return {std::move(res.solution), msr_report_to_json(res.report)};
    }
    if (solver == "oracle") {
        auto obj = objective_from_name(objective);
        if (!obj) throw CLI::ValidationError("--objective", "required for the oracle");
        return {oracle_solve(inst, *obj), {}};
    }
    throw CLI::ValidationError("--solver", "unknown solver " + solver);
}

int cmd_solve(const std::string& in, const std::string& out, const std::string& report,
              const std::string& solver, const std::string& objective, double eps,
              const std::string& decomp_path) {
    Bundle b = load_bundle(in);
    double t0 = now_seconds();
    SolveOutput res;
    try {
        res = run_solver(solver, b, eps, objective, decomp_path);
    } catch (const std::runtime_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    }
    double wall = now_seconds() - t0;
    auto check = validate_solution(b.inst, res.sol, !res.sol.centers.empty());
    if (!check.ok()) {
        for (const auto& p : check.problems) std::cerr << "invalid solution: " << p << "\n";
        return kExitInfeasible;
    }
    if (!out.empty()) save_json_file(out, solution_to_json(res.sol));
    json rep = {{"solver", solver},
                {"objective", objective_name(res.sol.objective)},
                {"value", res.sol.value},
                {"wall_time_s", wall},
                {"n", b.inst.n()},
                {"k", b.inst.k()}};
    if (!res.extra.is_null()) rep["msr"] = res.extra;
    if (!report.empty()) save_json_file(report, rep);
    std::cout << rep.dump(2) << "\n";
    return kExitOk;
}

int cmd_generate(const std::string& family, int n, int k, int w, double radius,
                 uint64_t seed, int L, const std::string& formula,
                 unsigned long long budget, const std::string& out) {
    Bundle b{Instance(1, {}, {{0.0}}, 1), {}, {}, family, seed};
    if (family == "tree") {
        b.inst = gen_random_tree(n, k, seed);
    } else if (family == "geometric") {
        b.inst = gen_random_geometric(n, k, radius, seed);
    } else if (family == "ktree") {
        auto kt = gen_partial_ktree(n, k, w, seed);
        b.inst = std::move(kt.inst);
        b.decomposition = std::move(kt.decomposition);
    } else if (family == "hardness") {
        HardnessParams params{L, parse_cnf(formula), budget};
        auto h = gen_hardness(params);
        b.inst = std::move(h.inst);
        b.centers = std::move(h.centers);
    } else {
        throw CLI::ValidationError("--family", "unknown family " + family);
    }
    json j = bundle_to_json(b);
    if (out.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json_file(out, j);
    std::cerr << "generated " << family << " instance with " << b.inst.n()
              << " vertices\n";
    return kExitOk;
}

int cmd_decompose(const std::string& in, const std::string& out) {
    Bundle b = load_bundle(in);
    TreeDecomposition td =
        b.decomposition ? *b.decomposition : heuristic_decomposition(b.inst);
    auto rep = validate_decomposition(b.inst, td);
    if (!rep.ok()) {
        for (const auto& p : rep.problems) std::cerr << p << "\n";
        return kExitInfeasible;
    }
    json j = decomposition_to_json(td);
    j["width"] = td.width();
    if (out.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json_file(out, j);
    return kExitOk;
}

int cmd_validate(const std::string& instance_path, const std::string& decomp_path,
                 const std::string& solution_path) {
    Bundle b = load_bundle(instance_path);
    bool ok = true;
    if (!decomp_path.empty()) {
        auto td = decomposition_from_json(load_json_file(decomp_path));
        auto rep = validate_decomposition(b.inst, td);
        for (const auto& p : rep.problems) {
            std::cerr << "decomposition: " << p << "\n";
            ok = false;
        }
    }
    if (!solution_path.empty()) {
        auto sol = solution_from_json(load_json_file(solution_path));
        auto rep = validate_solution(b.inst, sol, !sol.centers.empty());
        for (const auto& p : rep.problems) {
            std::cerr << "solution: " << p << "\n";
            ok = false;
        }
        if (rep.ok()) {
            double v = evaluate_objective(b.inst, sol, sol.objective);
            if (std::abs(v - sol.value) > 1e-6 * (1 + std::abs(v))) {
                std::cerr << "solution: declared value " << sol.value
                          << " but objective evaluates to " << v << "\n";
                ok = false;
            }
        }
    }
    if (ok) std::cout << "ok\n";
    return ok ? kExitOk : kExitInfeasible;
}

int cmd_oracle(const std::string& in, const std::string& objective,
               const std::string& out, bool assignment) {
    Bundle b = load_bundle(in);
    auto obj = objective_from_name(objective);
    if (!obj) throw CLI::ValidationError("--objective", "unknown objective " + objective);
    ClusteringSolution sol;
    try {
        if (assignment) {
            if (!b.centers)
                throw CLI::ValidationError("--assignment", "bundle has no centers");
            sol = oracle_solve_assignment(b.inst, *b.centers, *obj);
        } else {
            sol = oracle_solve(b.inst, *obj);
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    }
    if (!out.empty()) save_json_file(out, solution_to_json(sol));
    std::cout << json{{"objective", objective}, {"value", sol.value}}.dump() << "\n";
    return kExitOk;
}

int cmd_bench(const std::string& families, const std::string& solvers, int n, int k,
              int trials, uint64_t seed, int oracle_limit, const std::string& out) {
    std::ostringstream csv;
    csv << "instance,solver,value,oracle,ratio,time_s\n";
    for (const auto& fam : split_list(families)) {
        for (int trial = 0; trial < trials; ++trial) {
            uint64_t s = seed + (uint64_t)trial;
            Bundle b{Instance(1, {}, {{0.0}}, 1), {}, {}, fam, s};
            if (fam == "tree") b.inst = gen_random_tree(n, k, s);
            else if (fam == "geometric") b.inst = gen_random_geometric(n, k, 0.5, s);
            else if (fam == "ktree") {
                auto kt = gen_partial_ktree(n, k, 2, s);
                b.inst = std::move(kt.inst);
                b.decomposition = std::move(kt.decomposition);
            } else {
                throw CLI::ValidationError("--families", "unknown family " + fam);
            }
            std::string id = fam + "-" + std::to_string(s);
            for (const auto& solver : split_list(solvers)) {
                double t0 = now_seconds();
                SolveOutput res = run_solver(solver, b, 0.5, "", "");
                double wall = now_seconds() - t0;
                csv << id << "," << solver << "," << res.sol.value << ",";
                if (b.inst.n() <= oracle_limit) {
                    auto opt = oracle_solve(b.inst, res.sol.objective);
                    csv << opt.value << ","
                        << (opt.value > 0 ? res.sol.value / opt.value : 1.0);
                } else {
                    csv << ",";
                }
                csv << "," << wall << "\n";
            }
        }
    }
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out);
        f << csv.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"connected clustering toolkit"};
    app.require_subcommand(1);

    unsigned long long default_budget = 100000;
    if (const char* env = std::getenv("CONCLUST_MAX_VERTICES"))
        default_budget = std::strtoull(env, nullptr, 10);

    std::string in, out, report, solver = "exact-center", objective, decomp_path;
    double eps = 0.5;
    auto* solve = app.add_subcommand("solve", "run a solver on an instance");
    solve->add_option("--in", in)->required();
    solve->add_option("--out", out);
    solve->add_option("--report", report);
    solve->add_option("--solver", solver);
    solve->add_option("--objective", objective);
    solve->add_option("--eps", eps);
    solve->add_option("--decomposition", decomp_path);

    std::string family = "tree", formula;
    int n = 10, k = 2, w = 2, L = 1, trials = 5, oracle_limit = 9;
    double radius = 0.5;
    uint64_t seed = 1;
    unsigned long long budget = default_budget;
    auto* gen = app.add_subcommand("generate", "write an instance bundle");
    gen->add_option("--family", family);
    gen->add_option("--n", n);
    gen->add_option("--k", k);
    gen->add_option("--w", w);
    gen->add_option("--radius", radius);
    gen->add_option("--seed", seed);
    gen->add_option("--L", L);
    gen->add_option("--formula", formula);
    gen->add_option("--max-vertices", budget);
    gen->add_option("--out", out);

    auto* dec = app.add_subcommand("decompose", "emit a tree decomposition");
    dec->add_option("--in", in)->required();
    dec->add_option("--out", out);

    std::string solution_path;
    auto* val = app.add_subcommand("validate", "check instance/decomposition/solution");
    val->add_option("--instance", in)->required();
    val->add_option("--decomposition", decomp_path);
    val->add_option("--solution", solution_path);

    bool assignment = false;
    auto* orc = app.add_subcommand("oracle", "brute-force ground truth");
    orc->add_option("--in", in)->required();
    orc->add_option("--objective", objective)->required();
    orc->add_option("--out", out);
    orc->add_flag("--assignment", assignment);

    std::string families = "tree", solvers = "exact-center";
    auto* bench = app.add_subcommand("bench", "solver x generator matrix, CSV output");
    bench->add_option("--families", families);
    bench->add_option("--solvers", solvers);
    bench->add_option("--n", n);
    bench->add_option("--k", k);
    bench->add_option("--trials", trials);
    bench->add_option("--seed", seed);
    bench->add_option("--oracle-limit", oracle_limit);
    bench->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(in, out, report, solver, objective, eps, decomp_path);
        if (gen->parsed())
            return cmd_generate(family, n, k, w, radius, seed, L, formula, budget, out);
        if (dec->parsed()) return cmd_decompose(in, out);
        if (val->parsed()) return cmd_validate(in, decomp_path, solution_path);
        if (orc->parsed()) return cmd_oracle(in, objective, out, assignment);
        if (bench->parsed())
            return cmd_bench(families, solvers, n, k, trials, seed, oracle_limit, out);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
