// JSON instance formats. One canonical graph-instance file serves every
// pipeline; tree-labeling instances and tree decompositions have their own
// schemas. Parse errors carry the offending field path.
#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "degnet/gst.hpp"
#include "degnet/graph.hpp"
#include "degnet/rational.hpp"
#include "degnet/treelabel.hpp"

namespace degnet {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string scalar_key(const Json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw ParseError(where + ": expected a string or integer id");
}

inline Rat json_rat(const Json& j, const std::string& where) {
    if (j.is_string()) return rat_parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_number_float()) {
        Rat q;
        mpq_set_d(q.get_mpq_t(), j.get<double>());  // binary doubles convert exactly
        return q;
    }
    throw ParseError(where + ": expected a number or rational string");
}

}  // namespace detail

// Parsed canonical instance: graph plus whichever problem fields are present.
struct InstanceData {
    Graph g;
    RequirementMatrix r;
    std::vector<std::vector<int>> groups;
    std::vector<int> db;
    bool has_db = false;
    int root = -1;
    int p = 1;
    std::optional<Rat> Ap;  // A^p, exact
    std::map<std::string, int> vertex_index;
};

inline InstanceData parse_instance(const Json& j) {
    InstanceData inst;
    if (!j.contains("vertices") || !j["vertices"].is_array()) throw ParseError("vertices: missing or not an array");
    for (const auto& v : j["vertices"]) {
        std::string name = detail::scalar_key(v, "vertices[]");
        if (inst.vertex_index.count(name)) throw ParseError("vertices: duplicate id " + name);
        inst.vertex_index[name] = inst.g.add_vertex(name);
    }
    auto vid = [&](const Json& v, const std::string& where) {
        std::string name = detail::scalar_key(v, where);
        auto it = inst.vertex_index.find(name);
        if (it == inst.vertex_index.end()) throw ParseError(where + ": unknown vertex " + name);
        return it->second;
    };
    if (!j.contains("edges") || !j["edges"].is_array()) throw ParseError("edges: missing or not an array");
    for (size_t i = 0; i < j["edges"].size(); ++i) {
        const auto& e = j["edges"][i];
        std::string where = "edges[" + std::to_string(i) + "]";
        if (!e.contains("u") || !e.contains("v")) throw ParseError(where + ": missing endpoint");
        Rat cost = e.contains("cost") ? detail::json_rat(e["cost"], where + ".cost") : Rat(1);
        std::string name = e.contains("id") ? detail::scalar_key(e["id"], where + ".id") : "";
        inst.g.add_edge(vid(e["u"], where + ".u"), vid(e["v"], where + ".v"), cost, name);
    }
    if (j.contains("requirements")) {
        for (size_t i = 0; i < j["requirements"].size(); ++i) {
            const auto& req = j["requirements"][i];
            std::string where = "requirements[" + std::to_string(i) + "]";
            inst.r.set(vid(req["u"], where + ".u"), vid(req["v"], where + ".v"), req["r"].get<int>());
        }
    }
    inst.db.assign(inst.g.n, 0);
    if (j.contains("degree_bounds")) {
        inst.has_db = true;
        for (const auto& [key, val] : j["degree_bounds"].items()) {
            auto it = inst.vertex_index.find(key);
            if (it == inst.vertex_index.end()) throw ParseError("degree_bounds." + key + ": unknown vertex");
            inst.db[it->second] = val.get<int>();
        }
    }
    if (j.contains("groups")) {
        for (size_t t = 0; t < j["groups"].size(); ++t) {
            std::vector<int> group;
            for (const auto& v : j["groups"][t]) group.push_back(vid(v, "groups[" + std::to_string(t) + "]"));
            if (group.empty()) throw ParseError("groups[" + std::to_string(t) + "]: empty group");
            inst.groups.push_back(std::move(group));
        }
    }
    if (j.contains("root")) inst.root = vid(j["root"], "root");
    if (j.contains("p")) {
        inst.p = j["p"].get<int>();
        if (inst.p < 1) throw ParseError("p: must be a positive integer");
    }
    if (j.contains("Ap"))
        inst.Ap = detail::json_rat(j["Ap"], "Ap");
    else if (j.contains("A"))
        inst.Ap = rat_pow(detail::json_rat(j["A"], "A"), static_cast<unsigned>(inst.p));
    return inst;
}

// Tree-labeling instance schema: nodes (with parent links and label lists, in
// order; children keep file order), consistency triples, label groups, cost
// tables keyed by label name.
inline LabelTreeInstance parse_tl_instance(const Json& j) {
    LabelTreeInstance inst;
    std::map<std::string, int> node_index;
    std::map<std::string, int> label_index;
    if (!j.contains("nodes") || !j["nodes"].is_array()) throw ParseError("nodes: missing or not an array");
    for (const auto& nd : j["nodes"]) {
        std::string name = detail::scalar_key(nd["id"], "nodes[].id");
        int parent = -1;
        if (nd.contains("parent") && !nd["parent"].is_null()) {
            std::string pname = detail::scalar_key(nd["parent"], "nodes[].parent");
            auto it = node_index.find(pname);
            if (it == node_index.end()) throw ParseError("nodes: parent " + pname + " must precede its child");
            parent = it->second;
        }
        int u = inst.add_node(parent);
        node_index[name] = u;
        if (!nd.contains("labels") || nd["labels"].empty()) throw ParseError("nodes[].labels: required");
        for (const auto& l : nd["labels"]) {
            std::string lname = detail::scalar_key(l, "nodes[].labels[]");
            if (label_index.count(lname)) throw ParseError("labels: duplicate " + lname + " (sets must be disjoint)");
            label_index[lname] = inst.add_label(u, lname);
        }
    }
    auto lid = [&](const Json& l, const std::string& where) {
        std::string name = detail::scalar_key(l, where);
        auto it = label_index.find(name);
        if (it == label_index.end()) throw ParseError(where + ": unknown label " + name);
        return it->second;
    };
    if (j.contains("triples")) {
        for (size_t i = 0; i < j["triples"].size(); ++i) {
            const auto& t = j["triples"][i];
            std::string where = "triples[" + std::to_string(i) + "]";
            std::string nname = detail::scalar_key(t["node"], where + ".node");
            auto nit = node_index.find(nname);
            if (nit == node_index.end()) throw ParseError(where + ".node: unknown node " + nname);
            int u = nit->second;
            const auto& tup = t["triple"];
            if (tup.size() != inst.children[u].size() + 1)
                throw ParseError(where + ".triple: arity must be 1 + number of children");
            std::array<int, 3> entry{-1, -1, -1};
            for (size_t a = 0; a < tup.size(); ++a) entry[a] = lid(tup[a], where + ".triple");
            inst.gamma[u].push_back(entry);
        }
    }
    if (j.contains("groups"))
        for (const auto& group : j["groups"]) {
            std::vector<int> labels;
            for (const auto& l : group) labels.push_back(lid(l, "groups[]"));
            inst.groups.push_back(std::move(labels));
        }
    if (j.contains("costs"))
        for (const auto& table : j["costs"]) {
            std::vector<Rat> row(inst.num_labels(), Rat(0));
            for (const auto& [key, val] : table.items()) {
                auto it = label_index.find(key);
                if (it == label_index.end()) throw ParseError("costs: unknown label " + key);
                row[it->second] = detail::json_rat(val, "costs." + key);
            }
            inst.costs.push_back(std::move(row));
        }
    inst.validate();
    return inst;
}

// Decomposition schema: {bags: [{id, vertices, parent}], root_bag}.
inline TreeDecomposition parse_td(const Json& j, const InstanceData& inst) {
    TreeDecomposition td;
    std::map<std::string, int> bag_index;
    if (!j.contains("bags") || !j["bags"].is_array()) throw ParseError("bags: missing or not an array");
    for (const auto& b : j["bags"]) {
        TreeDecomposition::Bag bag;
        bag.name = detail::scalar_key(b["id"], "bags[].id");
        if (bag_index.count(bag.name)) throw ParseError("bags: duplicate id " + bag.name);
        for (const auto& v : b["vertices"]) {
            std::string vn = detail::scalar_key(v, "bags[].vertices[]");
            auto it = inst.vertex_index.find(vn);
            if (it == inst.vertex_index.end()) throw ParseError("bags[].vertices: unknown vertex " + vn);
            bag.vertices.push_back(it->second);
        }
        bag_index[bag.name] = static_cast<int>(td.bags.size());
        td.bags.push_back(std::move(bag));
    }
    for (size_t i = 0; i < j["bags"].size(); ++i) {
        const auto& b = j["bags"][i];
        if (b.contains("parent") && !b["parent"].is_null()) {
            std::string pname = detail::scalar_key(b["parent"], "bags[].parent");
            auto it = bag_index.find(pname);
            if (it == bag_index.end()) throw ParseError("bags[].parent: unknown bag " + pname);
            td.bags[i].parent = it->second;
            td.bags[it->second].children.push_back(static_cast<int>(i));
        }
    }
    if (j.contains("root_bag")) {
        std::string rname = detail::scalar_key(j["root_bag"], "root_bag");
        auto it = bag_index.find(rname);
        if (it == bag_index.end()) throw ParseError("root_bag: unknown bag " + rname);
        td.root = it->second;
    } else {
        td.root = -1;
        for (int b = 0; b < td.num_bags(); ++b)
            if (td.bags[b].parent < 0) {
                if (td.root >= 0) throw ParseError("bags: multiple roots and no root_bag");
                td.root = b;
            }
        if (td.root < 0) throw ParseError("bags: no root found");
    }
    return td;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

inline Json rat_json(const Rat& q) {
    Json j;
    j["exact"] = rat_str(q);
    j["value"] = to_double(q);
    return j;
}

}  // namespace degnet
