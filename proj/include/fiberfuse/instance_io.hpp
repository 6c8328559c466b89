#pragma once

#include <filesystem>

#include "json.hpp"

#include "fiberfuse/fusion.hpp"

namespace fiberfuse {

// Instance files look like
//   {"width":W,"height":H,"instances":[
//     {"id":1,"class_id":1,"score":0.97,"polygon":[[x,y],...]},
//     {"id":2,"class_id":1,"mask_png":"..."}]}
// where mask_png is a "data:image/png;base64," URI, bare base64 PNG data, or a
// path relative to the file. Polygons are rasterized onto the canvas on load.

InstanceSet instance_set_from_json(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir = {});
InstanceSet read_instance_set(const std::filesystem::path& path);

/// Instances that carry a polygon are written as polygons, all others as
/// embedded PNG data URIs.
nlohmann::json to_json(const InstanceSet& set);
void write_instance_set(const std::filesystem::path& path, const InstanceSet& set);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace fiberfuse
