#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "macd/ensemble.hpp"

namespace macd {

/// Describes a trained model zoo on disk: one expert plus the ordered
/// amateur members with their decode-time temperatures. Paths are relative
/// to the manifest's directory.
struct ZooManifest {
    struct Member {
        std::string path;
        double temperature = 1.0;
        std::string label;
    };
    std::string expert_path;
    std::vector<Member> members;
};

inline constexpr const char* kManifestSchema = "macd-ensemble-v1";

void save_manifest(const ZooManifest& manifest, const std::filesystem::path& path);
ZooManifest load_manifest(const std::filesystem::path& path);

/// Loads every model named by a manifest. The second element is null when
/// the manifest lists no members.
std::pair<LanguageModelPtr, std::shared_ptr<AmateurEnsemble>> load_zoo(
    const std::filesystem::path& manifest_path);

}  // namespace macd
