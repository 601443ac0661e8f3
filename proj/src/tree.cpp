#include "rgas/tree.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace rgas {

using nlohmann::json;

std::string to_string(SimStatus s) {
    switch (s) {
        case SimStatus::Completed: return "completed";
        case SimStatus::AbortedSimultaneous: return "aborted_simultaneous";
        case SimStatus::AbortedEventCap: return "aborted_event_cap";
    }
    return "completed";
}

SimStatus sim_status_from_string(const std::string& s) {
    if (s == "completed") return SimStatus::Completed;
    if (s == "aborted_simultaneous") return SimStatus::AbortedSimultaneous;
    if (s == "aborted_event_cap") return SimStatus::AbortedEventCap;
    throw std::invalid_argument("unknown simulation status: " + s);
}

CollisionTree prune(const CollisionTree& tree) {
    if (tree.collisions.empty())
        throw std::invalid_argument("prune: tree has no collisions");
    CollisionTree out = tree;
    out.collisions.pop_back();
    return out;
}

double tree_distance(const CollisionTree& a, const CollisionTree& b) {
    if (a.n() != b.n()) return 1.0;
    double worst = std::max(inf_norm(a.x0.coords - b.x0.coords), inf_norm(a.v0 - b.v0));
    for (int j = 0; j < a.n(); ++j) {
        const auto& ma = a.collisions[static_cast<std::size_t>(j)];
        const auto& mb = b.collisions[static_cast<std::size_t>(j)];
        double comp = std::fabs(ma.t - mb.t);
        comp = std::max(comp, inf_norm(ma.nu - mb.nu));
        comp = std::max(comp, inf_norm(ma.v - mb.v));
        worst = std::max(worst, comp);
    }
    return std::min(1.0, worst);
}

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

std::string tree_to_json_line(const CollisionTree& tree) {
    json j;
    j["x0"] = vec_to_json(tree.x0.coords);
    j["v0"] = vec_to_json(tree.v0);
    json cols = json::array();
    for (const auto& m : tree.collisions) {
        cols.push_back(json{{"t", m.t}, {"nu", vec_to_json(m.nu)}, {"v", vec_to_json(m.v)}});
    }
    j["collisions"] = std::move(cols);
    j["status"] = to_string(tree.status);
    return j.dump();
}

CollisionTree tree_from_json_line(const std::string& line) {
    const json j = json::parse(line);
    CollisionTree tree;
    tree.x0 = TorusPoint{vec_from_json(j.at("x0"))};
    tree.v0 = vec_from_json(j.at("v0"));
    for (const auto& c : j.at("collisions")) {
        CollisionMarker m;
        m.t = c.at("t").get<double>();
        m.nu = vec_from_json(c.at("nu"));
        m.v = vec_from_json(c.at("v"));
        tree.collisions.push_back(m);
    }
    tree.status = sim_status_from_string(j.at("status").get<std::string>());
    return tree;
}

std::vector<CollisionTree> read_trees_jsonl(std::istream& in) {
    std::vector<CollisionTree> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(tree_from_json_line(line));
    }
    return out;
}

void write_trees_jsonl(std::ostream& out, const std::vector<CollisionTree>& trees) {
    for (const auto& t : trees) out << tree_to_json_line(t) << "\n";
}

} // namespace rgas
