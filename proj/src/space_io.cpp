#include "fairspace/space_io.hpp"

#include <fstream>
#include <sstream>

namespace fairspace {

namespace {

using nlohmann::json;

std::string stem_of(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

[[noreturn]] void schema_fail(const std::string& what) {
    throw Error(Errc::schema_error, what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        size_t b = cell.find_first_not_of(" \t\r");
        size_t e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

GroupedMetricSpace parse_space_json(const json& j, const std::string& space_id) {
    if (!j.is_object()) schema_fail("space file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "points" && key != "groups" && key != "measure" && key != "embedding" &&
            key != "dist")
            schema_fail("unknown key '" + key + "'");
    }
    if (!j.contains("points") || !j["points"].is_array()) schema_fail("missing 'points' array");
    if (!j.contains("groups") || !j["groups"].is_array()) schema_fail("missing 'groups' array");
    bool has_embedding = j.contains("embedding");
    bool has_dist = j.contains("dist");
    if (has_embedding == has_dist)
        schema_fail("exactly one of 'embedding' and 'dist' is required");

    std::vector<std::string> points;
    for (const auto& p : j["points"]) {
        if (!p.is_string()) schema_fail("'points' entries must be strings");
        points.push_back(p.get<std::string>());
    }
    size_t n = points.size();

    std::vector<int> groups;
    for (const auto& g : j["groups"]) {
        if (!g.is_number_integer()) schema_fail("'groups' entries must be integers");
        int v = g.get<int>();
        if (v < 1) schema_fail("group indices are 1-based");
        groups.push_back(v - 1);
    }
    if (groups.size() != n) schema_fail("'groups' length does not match 'points'");

    std::vector<double> measure;
    if (j.contains("measure")) {
        if (!j["measure"].is_array()) schema_fail("'measure' must be an array");
        for (const auto& m : j["measure"]) {
            if (!m.is_number()) schema_fail("'measure' entries must be numbers");
            measure.push_back(m.get<double>());
        }
        if (measure.size() != n) schema_fail("'measure' length does not match 'points'");
    } else {
        measure = uniform_measure(n);
    }

    if (has_embedding) {
        Embedding emb;
        for (const auto& row : j["embedding"]) {
            if (!row.is_array()) schema_fail("'embedding' must be a list of coordinate lists");
            std::vector<double> coords;
            for (const auto& c : row) {
                if (!c.is_number()) schema_fail("embedding coordinates must be numbers");
                coords.push_back(c.get<double>());
            }
            emb.push_back(std::move(coords));
        }
        if (emb.size() != n) schema_fail("'embedding' length does not match 'points'");
        return make_space_from_embedding(space_id, std::move(points), std::move(emb),
                                         std::move(measure), std::move(groups));
    }

    Matrix dist(n, n);
    const auto& rows = j["dist"];
    if (!rows.is_array() || rows.size() != n) schema_fail("'dist' must be an n x n matrix");
    for (size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n)
            schema_fail("'dist' must be an n x n matrix");
        for (size_t k = 0; k < n; ++k) {
            if (!rows[i][k].is_number()) schema_fail("'dist' entries must be numbers");
            dist.at(i, k) = rows[i][k].get<double>();
        }
    }
    return make_space(space_id, std::move(points), std::move(dist), std::move(measure),
                      std::move(groups));
}

GroupedMetricSpace parse_space_csv(std::istream& in, const std::string& space_id) {
    std::string line;
    if (!std::getline(in, line)) schema_fail("empty CSV file");
    auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "group")
        schema_fail("CSV header must be id,group,x1..xm");
    size_t dim = header.size() - 2;

    std::vector<std::string> points;
    std::vector<int> groups;
    Embedding emb;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != dim + 2) schema_fail("CSV row width does not match header");
        points.push_back(cells[0]);
        try {
            int g = std::stoi(cells[1]);
            if (g < 1) schema_fail("group indices are 1-based");
            groups.push_back(g - 1);
            std::vector<double> coords(dim);
            for (size_t c = 0; c < dim; ++c) coords[c] = std::stod(cells[2 + c]);
            emb.push_back(std::move(coords));
        } catch (const std::invalid_argument&) {
            schema_fail("malformed CSV number in row for '" + cells[0] + "'");
        } catch (const std::out_of_range&) {
            schema_fail("CSV number out of range in row for '" + cells[0] + "'");
        }
    }
    size_t n = points.size();
    return make_space_from_embedding(space_id, std::move(points), std::move(emb),
                                     uniform_measure(n), std::move(groups));
}

GroupedMetricSpace parse_space_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
    std::string id = stem_of(path);

    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return parse_space_csv(in, id);

    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(Errc::schema_error, "malformed JSON in '" + path + "': " + e.what());
    }
    return parse_space_json(j, id);
}

std::unordered_map<std::string, std::string> parse_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(Errc::schema_error, "malformed JSON in '" + path + "': " + e.what());
    }
    if (!j.is_object() || !j.contains("assignment") || !j["assignment"].is_object())
        throw Error(Errc::schema_error, "map file needs an 'assignment' object");
    std::unordered_map<std::string, std::string> out;
    for (const auto& [from, to] : j["assignment"].items()) {
        if (!to.is_string()) throw Error(Errc::schema_error, "assignment targets must be strings");
        out[from] = to.get<std::string>();
    }
    return out;
}

nlohmann::json space_to_json(const GroupedMetricSpace& space) {
    json j;
    j["points"] = space.point_ids;
    std::vector<int> groups;
    for (int g : space.group_of) groups.push_back(g + 1);
    j["groups"] = groups;
    j["measure"] = space.measure;
    if (space.embedding) {
        j["embedding"] = *space.embedding;
    } else {
        std::vector<std::vector<double>> rows(space.size(), std::vector<double>(space.size()));
        for (size_t i = 0; i < space.size(); ++i)
            for (size_t k = 0; k < space.size(); ++k) rows[i][k] = space.dist.at(i, k);
        j["dist"] = rows;
    }
    return j;
}

}  // namespace fairspace
