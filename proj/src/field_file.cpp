#include "spinflow/field_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace spinflow {

namespace {

constexpr char kMagic[5] = {'S', 'P', 'N', 'F', '1'};
constexpr std::uint8_t kNoSpin = 255;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : b_(bytes) {}

    void need(std::size_t n) const {
        if (pos_ + n > b_.size()) throw FormatError("field file truncated");
    }
    std::uint8_t u8() {
        need(1);
        return b_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(b_[pos_++]) << (8 * b);
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * b);
        return std::bit_cast<double>(v);
    }
    std::size_t remaining() const { return b_.size() - pos_; }
    std::size_t pos() const { return pos_; }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

private:
    const std::vector<std::uint8_t>& b_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_field(const SpinorField& psi) {
    const auto& c = psi.chart();
    std::vector<std::uint8_t> out(kMagic, kMagic + 5);
    out.push_back('L');
    out.push_back(static_cast<std::uint8_t>(c.domain()));
    out.push_back(c.spin_structure() ? static_cast<std::uint8_t>(*c.spin_structure()) : kNoSpin);
    put_u32(out, static_cast<std::uint32_t>(c.nx()));
    put_u32(out, static_cast<std::uint32_t>(c.ny()));
    put_u32(out, static_cast<std::uint32_t>(psi.n()));
    switch (c.domain()) {
        case DomainKind::Torus:
            put_f64(out, c.period_x());
            put_f64(out, c.period_y());
            put_f64(out, c.origin_x());
            put_f64(out, c.origin_y());
            break;
        case DomainKind::Disk:
            put_f64(out, c.radius());
            for (int q = 0; q < 3; ++q) put_f64(out, 0.0);
            break;
        case DomainKind::SphereChart:
            for (int q = 0; q < 4; ++q) put_f64(out, 0.0);
            break;
    }
    put_u32(out, static_cast<std::uint32_t>(psi.tag().size()));
    out.insert(out.end(), psi.tag().begin(), psi.tag().end());
    out.reserve(out.size() + psi.values().size() * 16);
    for (const auto& v : psi.values()) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
    return out;
}

SpinorField decode_field(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    r.need(5);
    if (std::memcmp(bytes.data(), kMagic, 5) != 0) throw FormatError("bad magic: not a field file");
    r.skip(5);
    if (r.u8() != 'L') throw FormatError("unsupported endianness tag");
    const std::uint8_t domain = r.u8();
    const std::uint8_t spin = r.u8();
    const std::uint32_t nx = r.u32();
    const std::uint32_t ny = r.u32();
    const std::uint32_t n = r.u32();
    const double a = r.f64();
    const double b = r.f64();
    const double ox = r.f64();
    const double oy = r.f64();
    const std::uint32_t tag_len = r.u32();
    r.need(tag_len);
    std::string tag(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos()),
                    bytes.begin() + static_cast<std::ptrdiff_t>(r.pos() + tag_len));
    r.skip(tag_len);
    if (n < 1 || nx < 8 || ny < 8 || nx > 1u << 15 || ny > 1u << 15 || n > 64) {
        throw FormatError("field file header has out-of-range sizes");
    }

    std::optional<GridChart> chart;
    try {
        switch (domain) {
            case 0:
                if (spin > 3) throw FormatError("torus field file without a valid spin structure");
                chart = GridChart::torus(static_cast<int>(nx), static_cast<int>(ny), a, b, static_cast<SpinStructure>(spin), ox, oy);
                break;
            case 1:
                if (spin != kNoSpin || nx != ny) throw FormatError("inconsistent disk header");
                chart = GridChart::disk(static_cast<int>(nx), a);
                break;
            case 2:
                if (spin != kNoSpin) throw FormatError("inconsistent sphere header");
                chart = GridChart::sphere(static_cast<int>(nx), static_cast<int>(ny));
                break;
            default:
                throw FormatError("unknown domain tag");
        }
    } catch (const ConfigError& e) {
        throw FormatError(std::string("invalid chart in field file: ") + e.what());
    }
    const std::size_t values = static_cast<std::size_t>(nx) * ny * 2 * n;
    if (r.remaining() != values * 16) throw FormatError("payload length does not match the header");
    SpinorField psi(*chart, static_cast<int>(n), std::move(tag));
    for (auto& v : psi.values()) {
        const double re = r.f64();
        const double im = r.f64();
        v = {re, im};
    }
    return psi;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("cannot read " + path);
    return bytes;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("cannot write " + path);
}

void write_field(const SpinorField& psi, const std::string& path) { write_bytes(path, encode_field(psi)); }

SpinorField read_field(const std::string& path) { return decode_field(read_bytes(path)); }

}  // namespace spinflow
