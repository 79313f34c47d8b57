#include "kw/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "field snapshots assume a little-endian host");
static_assert(sizeof(kw::AlgebraElement) == 3 * sizeof(double),
              "payload layout relies on tightly packed coefficients");

namespace kw {

namespace {

constexpr char kMagic[8] = {'K', 'W', 'F', 'I', 'E', 'L', 'D', '1'};
constexpr std::uint32_t kVersion = 1;

struct Meta {
    int dim, n, degree;
    double length;
    std::string role;
    std::string stencil;
};

void write_sidecar(const std::string &path, const Meta &m) {
    nlohmann::json j;
    j["dim"] = m.dim;
    j["n"] = m.n;
    j["length"] = m.length;
    j["degree"] = m.degree;
    j["role"] = m.role;
    j["stencil"] = m.stencil;
    std::ofstream out(path + ".meta.json");
    if (!out) throw std::runtime_error("cannot write sidecar for " + path);
    out << j.dump(2) << "\n";
}

Meta read_sidecar(const std::string &path) {
    std::ifstream in(path + ".meta.json");
    if (!in) throw std::runtime_error("missing sidecar for " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &) {
        throw std::runtime_error("malformed sidecar for " + path);
    }
    Meta m;
    try {
        m.dim = j.at("dim").get<int>();
        m.n = j.at("n").get<int>();
        m.length = j.at("length").get<double>();
        m.degree = j.at("degree").get<int>();
        m.role = j.at("role").get<std::string>();
        m.stencil = j.value("stencil", "central2");
    } catch (const nlohmann::json::exception &) {
        throw std::runtime_error("malformed sidecar for " + path);
    }
    return m;
}

void write_payload(const std::string &path, const std::vector<const AdjointForm *> &forms) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(kMagic, 8);
    std::uint32_t v = kVersion, reserved = 0;
    out.write(reinterpret_cast<const char *>(&v), 4);
    out.write(reinterpret_cast<const char *>(&reserved), 4);
    for (const AdjointForm *f : forms)
        out.write(reinterpret_cast<const char *>(f->raw().data()),
                  static_cast<std::streamsize>(f->size() * sizeof(AlgebraElement)));
    if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<double> read_payload(const std::string &path, size_t expected_doubles) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    std::uint32_t v = 0, reserved = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char *>(&v), 4);
    in.read(reinterpret_cast<char *>(&reserved), 4);
    if (!in || std::memcmp(magic, kMagic, 8) != 0 || v != kVersion)
        throw std::runtime_error("malformed header in " + path);
    std::vector<double> data(expected_doubles);
    in.read(reinterpret_cast<char *>(data.data()),
            static_cast<std::streamsize>(expected_doubles * sizeof(double)));
    if (static_cast<size_t>(in.gcount()) != expected_doubles * sizeof(double))
        throw std::runtime_error("truncated payload in " + path);
    // any trailing bytes mean the sidecar disagrees with the payload
    char probe;
    in.read(&probe, 1);
    if (!in.eof()) throw std::runtime_error("dimension mismatch in " + path);
    return data;
}

Stencil stencil_from_name(const std::string &s) {
    if (s == "central2") return Stencil::central2;
    if (s == "central4") return Stencil::central4;
    throw std::runtime_error("unknown stencil name: " + s);
}

const char *stencil_name(Stencil s) {
    return s == Stencil::central2 ? "central2" : "central4";
}

} // namespace

void write_field(const std::string &path, const AdjointForm &f, const std::string &role) {
    write_payload(path, {&f});
    const TorusGrid &g = f.grid();
    write_sidecar(path, {g.dim, g.n, f.degree(), g.length, role, stencil_name(g.stencil)});
}

void write_field(const std::string &path, const Configuration &cfg) {
    write_payload(path, {&cfg.A, &cfg.phi});
    const TorusGrid &g = cfg.grid();
    write_sidecar(path, {g.dim, g.n, 1, g.length, "configuration", stencil_name(g.stencil)});
}

AdjointForm read_field(const std::string &path) {
    Meta m = read_sidecar(path);
    TorusGrid g(m.dim, m.n, m.length, stencil_from_name(m.stencil));
    AdjointForm f(g, m.degree);
    auto data = read_payload(path, f.size() * 3);
    std::memcpy(static_cast<void *>(f.raw().data()), data.data(),
                data.size() * sizeof(double));
    return f;
}

Configuration read_configuration(const std::string &path) {
    Meta m = read_sidecar(path);
    if (m.role != "configuration")
        throw std::runtime_error("snapshot role is not a configuration: " + m.role);
    TorusGrid g(m.dim, m.n, m.length, stencil_from_name(m.stencil));
    Configuration cfg(g);
    auto data = read_payload(path, (cfg.A.size() + cfg.phi.size()) * 3);
    std::memcpy(static_cast<void *>(cfg.A.raw().data()), data.data(),
                cfg.A.size() * sizeof(AlgebraElement));
    std::memcpy(static_cast<void *>(cfg.phi.raw().data()), data.data() + cfg.A.size() * 3,
                cfg.phi.size() * sizeof(AlgebraElement));
    return cfg;
}

} // namespace kw
