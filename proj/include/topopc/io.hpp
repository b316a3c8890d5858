#pragma once

#include <string>

#include "topopc/point_cloud.hpp"

namespace topopc {

enum class CloudFormat { Xyz, PlyAscii, Auto };

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// XYZ: one "x y z" per line, '#' starts a comment.
/// PLY: ascii 1.0, single vertex element with float x/y/z properties.
PointCloud load_pointcloud(const std::string& path, CloudFormat format = CloudFormat::Auto);
PointCloud parse_pointcloud(const std::string& content, CloudFormat format,
                            const std::string& origin);

void save_pointcloud(const PointCloud& pc, const std::string& path,
                     CloudFormat format = CloudFormat::Xyz);
std::string serialize_pointcloud(const PointCloud& pc, CloudFormat format);

/// Writes via a temp file in the same directory, then renames into place.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// FNV-1a 64-bit over raw bytes, hex-encoded. Used for manifest content hashes.
std::string content_hash(const std::string& bytes);

}  // namespace topopc
