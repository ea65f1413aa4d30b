#include "macd/manifest.hpp"

#include <fstream>

#include "json.hpp"
#include "macd/ngram_model.hpp"

namespace macd {

void save_manifest(const ZooManifest& manifest, const std::filesystem::path& path) {
    nlohmann::ordered_json doc;
    doc["schema"] = kManifestSchema;
    doc["expert"] = manifest.expert_path;
    doc["members"] = nlohmann::ordered_json::array();
    for (const auto& member : manifest.members) {
        doc["members"].push_back({{"path", member.path},
                                  {"temperature", member.temperature},
                                  {"label", member.label}});
    }
    std::ofstream out(path);
    if (!out) throw_error(ErrorCode::IoError, "cannot write manifest " + path.string());
    out << doc.dump(2) << "\n";
}

ZooManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_error(ErrorCode::ModelNotFound, "cannot read manifest " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw_error(ErrorCode::IoError, "malformed manifest: " + std::string(e.what()));
    }
    if (doc.value("schema", "") != kManifestSchema) {
        throw_error(ErrorCode::IoError, "manifest schema mismatch in " + path.string());
    }
    ZooManifest manifest;
    manifest.expert_path = doc.at("expert").get<std::string>();
    for (const auto& entry : doc.value("members", nlohmann::json::array())) {
        ZooManifest::Member member;
        member.path = entry.at("path").get<std::string>();
        member.temperature = entry.value("temperature", 1.0);
        member.label = entry.value("label", "");
        manifest.members.push_back(std::move(member));
    }
    return manifest;
}

std::pair<LanguageModelPtr, std::shared_ptr<AmateurEnsemble>> load_zoo(
    const std::filesystem::path& manifest_path) {
    const ZooManifest manifest = load_manifest(manifest_path);
    const std::filesystem::path base = manifest_path.parent_path();
    auto expert =
        std::make_shared<NGramModel>(NGramModel::load(base / manifest.expert_path));
    std::shared_ptr<AmateurEnsemble> ensemble;
    if (!manifest.members.empty()) {
        std::vector<EnsembleMember> members;
        members.reserve(manifest.members.size());
        for (const auto& m : manifest.members) {
            members.push_back(
                EnsembleMember{std::make_shared<NGramModel>(NGramModel::load(base / m.path)),
                               m.temperature, m.label});
        }
        ensemble = std::make_shared<AmateurEnsemble>(std::move(members));
    }
    return {std::move(expert), std::move(ensemble)};
}

}  // namespace macd
