#include "fiberfuse/instance_io.hpp"

#include <fstream>
#include <string_view>

#include "fiberfuse/error.hpp"
#include "fiberfuse/png_io.hpp"

namespace fiberfuse {

namespace {

constexpr std::string_view kDataUri = "data:image/png;base64,";
// Base64 of the PNG signature.
constexpr std::string_view kPngBase64Magic = "iVBORw0KGgo";

BinaryMask load_embedded_mask(const std::string& ref, const std::filesystem::path& base_dir) {
  std::string_view view = ref;
  if (view.starts_with(kDataUri)) return mask_from_image(decode_png(base64_decode(view.substr(kDataUri.size()))));
  if (view.starts_with(kPngBase64Magic)) return mask_from_image(decode_png(base64_decode(view)));
  std::filesystem::path p = ref;
  if (p.is_relative()) p = base_dir / p;
  return read_mask_png(p);
}

}  // namespace

InstanceSet instance_set_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  InstanceSet set;
  try {
    set.width = j.at("width").get<int>();
    set.height = j.at("height").get<int>();
    if (set.width <= 0 || set.height <= 0) throw InputError("instance canvas must be non-empty");
    for (const auto& item : j.at("instances")) {
      Instance inst;
      inst.id = item.at("id").get<int>();
      inst.class_id = item.value("class_id", 1);
      if (item.contains("score") && !item.at("score").is_null()) inst.score = item.at("score").get<double>();
      const bool has_polygon = item.contains("polygon");
      const bool has_mask = item.contains("mask_png");
      if (has_polygon == has_mask) {
        throw InputError("instance " + std::to_string(inst.id) + " needs exactly one of polygon, mask_png");
      }
      if (has_polygon) {
        std::vector<Point> vertices;
        for (const auto& v : item.at("polygon")) {
          if (!v.is_array() || v.size() != 2) throw InputError("polygon vertex must be [x, y]");
          vertices.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        inst.polygon = Polygon(std::move(vertices));
        inst.mask = rasterize(*inst.polygon, set.width, set.height);
      } else {
        inst.mask = load_embedded_mask(item.at("mask_png").get<std::string>(), base_dir);
        check_same_size(set.width, set.height, inst.mask.width(), inst.mask.height(),
                        "instance mask_png");
      }
      set.instances.push_back(std::move(inst));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed instance file: ") + e.what());
  }
  set.validate();
  return set;
}

InstanceSet read_instance_set(const std::filesystem::path& path) {
  return instance_set_from_json(read_json_file(path), path.parent_path());
}

nlohmann::json to_json(const InstanceSet& set) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& inst : set.instances) {
    nlohmann::json item = {{"id", inst.id}, {"class_id", inst.class_id}};
    if (inst.score) item["score"] = *inst.score;
    if (inst.polygon) {
      nlohmann::json ring = nlohmann::json::array();
      for (const auto& v : inst.polygon->vertices()) ring.push_back({v.x, v.y});
      item["polygon"] = std::move(ring);
    } else {
      item["mask_png"] = std::string(kDataUri) + base64_encode(encode_png(mask_to_image(inst.mask)));
    }
    items.push_back(std::move(item));
  }
  return {{"width", set.width}, {"height", set.height}, {"instances", std::move(items)}};
}

void write_instance_set(const std::filesystem::path& path, const InstanceSet& set) {
  write_json_file(path, to_json(set));
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace fiberfuse
