#include "cgrp/instance_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "cgrp/error.hpp"

namespace cgrp {

namespace {

using nlohmann::json;

json xy(const Vec2& p) { return json::array({p.x, p.y}); }

Vec2 read_xy(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::kParse, "expected an [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

void reject_unknown(const json& j, const json& reference, const char* what) {
  for (const auto& [key, value] : j.items()) {
    if (!reference.contains(key)) {
      throw Error(ErrorCode::kParse, std::string("unknown ") + what + " field '" + key + "'");
    }
  }
}

}  // namespace

json to_json(const Instance& inst) {
  json j = {
      {"version", kInstanceFormatVersion},
      {"seed", inst.seed},
      {"omega", inst.omega},
      {"gamma", inst.gamma},
      {"depot", xy(inst.depot)},
      {"points", json::array()},
      {"lines", json::array()},
      {"areas", json::array()},
  };
  for (const auto& p : inst.points) j["points"].push_back(xy(p.loc));
  for (const auto& l : inst.lines) j["lines"].push_back({l.p1.x, l.p1.y, l.p2.x, l.p2.y});
  for (const auto& a : inst.areas) {
    j["areas"].push_back(
        {{"anchor", xy(a.anchor)}, {"length", a.length}, {"width", a.width}, {"beta", a.beta}});
  }
  if (inst.unit_square_relaxed) {
    j["relaxed"] = true;
  }
  return j;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "instance must be a JSON object");
  }
  return parse_guard("instance", [&] {
    const int version = field(j, "version").get<int>();
    if (version != kInstanceFormatVersion) {
      throw Error(ErrorCode::kParse, "unsupported instance version " + std::to_string(version));
    }
    Instance inst;
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.omega = field(j, "omega").get<int>();
    inst.gamma = field(j, "gamma").get<double>();
    inst.depot = read_xy(field(j, "depot"));
    inst.unit_square_relaxed = j.value("relaxed", false);
    for (const auto& p : field(j, "points")) inst.points.push_back({read_xy(p)});
    for (const auto& l : field(j, "lines")) {
      if (!l.is_array() || l.size() != 4) {
        throw Error(ErrorCode::kParse, "line must be [x1, y1, x2, y2]");
      }
      inst.lines.push_back({{l[0].get<double>(), l[1].get<double>()},
                            {l[2].get<double>(), l[3].get<double>()}});
    }
    for (const auto& a : field(j, "areas")) {
      inst.areas.push_back({read_xy(field(a, "anchor")), field(a, "length").get<double>(),
                            field(a, "width").get<double>(), field(a, "beta").get<double>(),
                            inst.gamma});
    }
    return inst;
  });
}

json to_json(const Tour& tour, double objective) {
  return {{"order", tour.order}, {"objective", objective}};
}

Tour tour_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "tour must be a JSON object");
  }
  return parse_guard("tour", [&] { return Tour{field(j, "order").get<std::vector<int>>()}; });
}

json to_json(const InstanceSpec& s) {
  return {
      {"size_range", {s.size_range.lo, s.size_range.hi}},
      {"area_range", {s.area_range.lo, s.area_range.hi}},
      {"line_range", {s.line_range.lo, s.line_range.hi}},
      {"omega", s.omega},
      {"detection_range", s.detection_range},
      {"min_anchor_separation", s.min_anchor_separation},
      {"line_length_range", {s.line_length_range.lo, s.line_length_range.hi}},
      {"max_attempts", s.max_attempts},
  };
}

InstanceSpec spec_from_json(const json& j, InstanceSpec s) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "instance spec must be a JSON object");
  }
  reject_unknown(j, to_json(InstanceSpec{}), "instance spec");
  auto irange = [&](const char* key, IntRange& r) {
    if (j.contains(key)) {
      const auto v = j.at(key).get<std::vector<int>>();
      if (v.size() != 2) throw Error(ErrorCode::kParse, std::string(key) + " must be [lo, hi]");
      r = {v[0], v[1]};
    }
  };
  parse_guard("instance spec", [&] {
    irange("size_range", s.size_range);
    irange("area_range", s.area_range);
    irange("line_range", s.line_range);
    s.omega = j.value("omega", s.omega);
    s.detection_range = j.value("detection_range", s.detection_range);
    s.min_anchor_separation = j.value("min_anchor_separation", s.min_anchor_separation);
    if (j.contains("line_length_range")) {
      const auto v = j.at("line_length_range").get<std::vector<double>>();
      if (v.size() != 2) throw Error(ErrorCode::kParse, "line_length_range must be [lo, hi]");
      s.line_length_range = {v[0], v[1]};
    }
    s.max_attempts = j.value("max_attempts", s.max_attempts);
    return 0;
  });
  if (auto why = s.validate(); !why.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid instance spec: " + why);
  }
  return s;
}

std::string dump(const json& j) { return j.dump(); }

void write_jsonl(std::ostream& os, const std::vector<DatasetRecord>& records) {
  for (const auto& r : records) {
    json j = to_json(r.instance);
    j["id"] = r.id;
    os << dump(j) << '\n';
  }
}

std::vector<DatasetRecord> read_jsonl(std::istream& is) {
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": " + e.what());
    }
    std::string id = j.contains("id") ? j.at("id").get<std::string>() : std::to_string(out.size());
    out.push_back({std::move(id), instance_from_json(j)});
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParse, "cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  }
  out << text;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParse, "cannot open " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return instance_from_json(json::parse(text));
  } catch (const json::parse_error&) {
    std::istringstream lines(text);
    auto records = read_jsonl(lines);
    if (records.empty()) {
      throw Error(ErrorCode::kParse, path.string() + " holds no instance");
    }
    return std::move(records.front().instance);
  }
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParse, "cannot open " + path.string());
  }
  return read_jsonl(in);
}

}  // namespace cgrp
