#include "spinflow/obj_writer.hpp"

#include <charconv>
#include <fstream>

namespace spinflow {

namespace {

void put(std::string& s, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, res.ptr);
}

}  // namespace

std::string obj_text(const SurfaceMesh& mesh) {
    std::string s;
    s.reserve(mesh.vertices.size() * 64 + mesh.faces.size() * 24);
    for (const auto& v : mesh.vertices) {
        s += 'v';
        for (double x : v) {
            s += ' ';
            put(s, x);
        }
        s += '\n';
    }
    for (const auto& f : mesh.faces) {
        s += 'f';
        for (auto i : f) {
            s += ' ';
            s += std::to_string(i + 1);
        }
        s += '\n';
    }
    return s;
}

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const std::string text = obj_text(mesh);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("cannot write " + path);
}

}  // namespace spinflow
