#include "thetabundle/bundle_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace thetabundle {

namespace {

Mat2i mat_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        throw std::invalid_argument("matrix must be a 2x2 integer array");
    return {j[0][0].get<long long>(), j[0][1].get<long long>(),
            j[1][0].get<long long>(), j[1][1].get<long long>()};
}

BundleTag tag_from_string(const std::string& s) {
    if (s == "A") return BundleTag::A;
    if (s == "B1") return BundleTag::B1;
    if (s == "B2") return BundleTag::B2;
    if (s == "B3") return BundleTag::B3;
    if (s == "B4") return BundleTag::B4;
    if (s == "C") return BundleTag::C;
    if (s == "D") return BundleTag::D;
    if (s == "E") return BundleTag::E;
    if (s == "F") return BundleTag::F;
    if (s == "G") return BundleTag::G;
    throw std::invalid_argument("unknown bundle type tag: " + s);
}

} // namespace

Bundle bundle_from_json_text(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("type")) {
        const BundleTag tag = tag_from_string(j["type"].get<std::string>());
        int k = j.value("k", 1);
        if ((tag == BundleTag::C || tag == BundleTag::D || tag == BundleTag::E) && k == 0)
            throw std::invalid_argument("types C, D, E require a nonzero k");
        return Bundle::from_tag(tag, k);
    }
    if (j.contains("A")) {
        const Mat2i A = mat_from_json(j["A"]);
        const Mat2i B = j.contains("B") ? mat_from_json(j["B"]) : Mat2i::identity();
        return Bundle::from_pair({A, B});
    }
    throw std::invalid_argument("bundle JSON must contain \"type\" or \"A\"");
}

Bundle bundle_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open bundle file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return bundle_from_json_text(ss.str());
}

Bundle bundle_from_spec(const std::string& spec) {
    if (spec.empty()) throw std::invalid_argument("empty bundle spec");
    if (spec.front() == '{') return bundle_from_json_text(spec);
    if (spec.find('/') != std::string::npos || spec.find(".json") != std::string::npos)
        return bundle_from_json_file(spec);
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return Bundle::from_tag(tag_from_string(spec));
    const int k = std::stoi(spec.substr(colon + 1));
    return Bundle::from_tag(tag_from_string(spec.substr(0, colon)), k);
}

} // namespace thetabundle
