#include "conclust/io.hpp"

#include <fstream>
#include <stdexcept>

namespace conclust {

using nlohmann::json;

json instance_to_json(const Instance& inst) {
    json edges = json::array();
    for (auto [u, v] : inst.edges()) edges.push_back({u, v});
    return {{"n", inst.n()},
            {"k", inst.k()},
            {"edges", edges},
            {"metric", {{"matrix", inst.metric()}}}};
}

Instance instance_from_json(const json& j) {
    int n = j.at("n").get<int>();
    int k = j.at("k").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
        edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    const auto& m = j.at("metric");
    std::vector<std::vector<double>> metric;
    if (m.contains("matrix")) {
        metric = m.at("matrix").get<std::vector<std::vector<double>>>();
    } else {
        auto coords = m.at("coords").get<std::vector<std::vector<double>>>();
        std::string norm = m.at("norm").get<std::string>();
        Norm nm;
        if (norm == "l1") nm = Norm::L1;
        else if (norm == "l2") nm = Norm::L2;
        else if (norm == "linf") nm = Norm::Linf;
        else throw std::invalid_argument("unknown norm: " + norm);
        metric = metric_from_coords(coords, nm);
    }
    return Instance(n, std::move(edges), std::move(metric), k);
}

json solution_to_json(const ClusteringSolution& sol) {
    return {{"objective", objective_name(sol.objective)},
            {"value", sol.value},
            {"clusters", sol.clusters},
            {"centers", sol.centers}};
}

ClusteringSolution solution_from_json(const json& j) {
    ClusteringSolution sol;
    auto obj = objective_from_name(j.at("objective").get<std::string>());
    if (!obj) throw std::invalid_argument("unknown objective");
    sol.objective = *obj;
    sol.value = j.at("value").get<double>();
    sol.clusters = j.at("clusters").get<std::vector<std::vector<int>>>();
    if (j.contains("centers")) sol.centers = j.at("centers").get<std::vector<int>>();
    return sol;
}

json decomposition_to_json(const TreeDecomposition& td) {
    json te = json::array();
    for (auto [a, b] : td.tree_edges) te.push_back({a, b});
    return {{"bags", td.bags}, {"tree_edges", te}};
}

TreeDecomposition decomposition_from_json(const json& j) {
    TreeDecomposition td;
    td.bags = j.at("bags").get<std::vector<std::vector<int>>>();
    for (const auto& e : j.at("tree_edges"))
        td.tree_edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return td;
}

json bundle_to_json(const Bundle& b) {
    json j = {{"instance", instance_to_json(b.inst)},
              {"meta", {{"generator", b.generator}, {"seed", b.seed}}}};
    if (b.decomposition) j["decomposition"] = decomposition_to_json(*b.decomposition);
    if (b.centers) j["centers"] = *b.centers;
    return j;
}

Bundle bundle_from_json(const json& j) {
    Bundle b{instance_from_json(j.at("instance")), {}, {}, "", 0};
    if (j.contains("decomposition"))
        b.decomposition = decomposition_from_json(j.at("decomposition"));
    if (j.contains("centers")) b.centers = j.at("centers").get<std::vector<int>>();
    if (j.contains("meta")) {
        const auto& m = j.at("meta");
        if (m.contains("generator")) b.generator = m.at("generator").get<std::string>();
        if (m.contains("seed")) b.seed = m.at("seed").get<uint64_t>();
    }
    return b;
}

json msr_report_to_json(const MsrReport& rep) {
    json guess = json::array();
    for (const auto& p : rep.guess) guess.push_back({{"v", p.v}, {"r", p.r}});
    json comps = json::array();
    for (const auto& c : rep.components)
        comps.push_back({{"pairs", c.pairs.size()},
                         {"rad", c.rad},
                         {"diam", c.diam},
                         {"sr", c.sr},
                         {"dsr", c.dsr},
                         {"dsr_exact", c.dsr_exact}});
    return {{"guess", guess},
            {"lambda", rep.lambda},
            {"component_count", rep.components.size()},
            {"components", comps},
            {"greedy_extra", rep.greedy_extra},
            {"dsr_inexact", rep.dsr_inexact},
            {"guesses_tried", rep.guesses_tried}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace conclust
