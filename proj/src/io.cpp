#include "topopc/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace topopc {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, std::size_t line,
                             const std::string& what) {
    throw std::runtime_error("parse error in " + origin + " line " + std::to_string(line) +
                             ": " + what);
}

bool parse_three_doubles(const std::string& line, Point3& out) {
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x >> y >> z)) return false;
    out = Point3(x, y, z);
    return true;
}

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

PointCloud parse_xyz(const std::string& content, const std::string& origin) {
    PointCloud pc;
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        Point3 p;
        if (!parse_three_doubles(t, p)) parse_fail(origin, lineno, "expected \"x y z\"");
        if (!point_finite(p)) parse_fail(origin, lineno, "non-finite coordinate");
        pc.points.push_back(p);
    }
    if (pc.empty()) throw std::runtime_error("empty point cloud: " + origin);
    return pc;
}

PointCloud parse_ply(const std::string& content, const std::string& origin) {
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> std::string {
        if (!std::getline(in, line)) parse_fail(origin, lineno, "unexpected end of file");
        ++lineno;
        return strip(line);
    };

    if (next() != "ply") parse_fail(origin, lineno, "missing \"ply\" magic");

    std::size_t vertex_count = 0;
    bool have_vertex = false;
    std::vector<std::string> props;
    bool in_vertex_element = false;
    while (true) {
        std::string t = next();
        if (t.empty() || t.rfind("comment", 0) == 0) continue;
        if (t == "end_header") break;
        std::istringstream ss(t);
        std::string kw;
        ss >> kw;
        if (kw == "format") {
            std::string fmt;
            ss >> fmt;
            if (fmt != "ascii") parse_fail(origin, lineno, "only ascii PLY is supported");
        } else if (kw == "element") {
            std::string name;
            std::size_t count;
            if (!(ss >> name >> count)) parse_fail(origin, lineno, "bad element line");
            if (name == "vertex") {
                vertex_count = count;
                have_vertex = true;
                in_vertex_element = true;
            } else {
                if (count != 0)
                    parse_fail(origin, lineno, "unsupported element \"" + name + "\"");
                in_vertex_element = false;
            }
        } else if (kw == "property") {
            if (!in_vertex_element) continue;
            std::string type, name;
            if (!(ss >> type >> name)) parse_fail(origin, lineno, "bad property line");
            props.push_back(name);
        }
    }
    if (!have_vertex) parse_fail(origin, lineno, "no vertex element");
    if (props != std::vector<std::string>{"x", "y", "z"})
        parse_fail(origin, lineno, "vertex element must have exactly x/y/z properties");
    if (vertex_count == 0) throw std::runtime_error("empty point cloud: " + origin);

    PointCloud pc;
    pc.points.reserve(vertex_count);
    for (std::size_t i = 0; i < vertex_count; ++i) {
        std::string t = next();
        Point3 p;
        if (!parse_three_doubles(t, p)) parse_fail(origin, lineno, "expected vertex row");
        if (!point_finite(p)) parse_fail(origin, lineno, "non-finite coordinate");
        pc.points.push_back(p);
    }
    return pc;
}

CloudFormat detect_format(const std::string& path, const std::string& content) {
    if (strip(content.substr(0, 8)).rfind("ply", 0) == 0) return CloudFormat::PlyAscii;
    auto dot = path.find_last_of('.');
    if (dot != std::string::npos && path.substr(dot) == ".ply") return CloudFormat::PlyAscii;
    return CloudFormat::Xyz;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

PointCloud parse_pointcloud(const std::string& content, CloudFormat format,
                            const std::string& origin) {
    if (format == CloudFormat::Auto) format = detect_format(origin, content);
    return format == CloudFormat::PlyAscii ? parse_ply(content, origin)
                                           : parse_xyz(content, origin);
}

PointCloud load_pointcloud(const std::string& path, CloudFormat format) {
    return parse_pointcloud(read_file(path), format, path);
}

std::string serialize_pointcloud(const PointCloud& pc, CloudFormat format) {
    if (pc.empty()) throw std::invalid_argument("save_pointcloud: empty cloud");
    std::string out;
    if (format == CloudFormat::PlyAscii) {
        out += "ply\nformat ascii 1.0\nelement vertex " + std::to_string(pc.size()) +
               "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    }
    for (const auto& p : pc.points) {
        out += format_double(p.x());
        out += ' ';
        out += format_double(p.y());
        out += ' ';
        out += format_double(p.z());
        out += '\n';
    }
    return out;
}

void save_pointcloud(const PointCloud& pc, const std::string& path, CloudFormat format) {
    if (format == CloudFormat::Auto) {
        auto dot = path.find_last_of('.');
        format = (dot != std::string::npos && path.substr(dot) == ".ply")
                     ? CloudFormat::PlyAscii
                     : CloudFormat::Xyz;
    }
    write_file_atomic(path, serialize_pointcloud(pc, format));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("rename failed for " + path + ": " + ec.message());
    }
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace topopc
