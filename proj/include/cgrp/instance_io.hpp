#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgrp/costmodel.hpp"
#include "cgrp/geometry.hpp"

namespace cgrp {

inline constexpr int kInstanceFormatVersion = 1;

/// Instance with the name it carries inside a dataset.
struct DatasetRecord {
  std::string id;
  Instance instance;
};

[[nodiscard]] nlohmann::json to_json(const Instance& inst);
/// Throws Error{kParse} on missing fields, wrong types or an unknown version.
[[nodiscard]] Instance instance_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const Tour& tour, double objective);
[[nodiscard]] Tour tour_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const InstanceSpec& spec);
/// Fields absent from `j` keep the values of `base`; unknown keys are rejected.
[[nodiscard]] InstanceSpec spec_from_json(const nlohmann::json& j, InstanceSpec base = {});

/// Compact single-line text; doubles are written in shortest round-trip form.
[[nodiscard]] std::string dump(const nlohmann::json& j);

/// One record per line. An instance line is the instance document plus "id".
void write_jsonl(std::ostream& os, const std::vector<DatasetRecord>& records);
[[nodiscard]] std::vector<DatasetRecord> read_jsonl(std::istream& is);

[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Reads a single instance document, or the first record of a JSONL file.
[[nodiscard]] Instance load_instance(const std::filesystem::path& path);
[[nodiscard]] std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);

}  // namespace cgrp
