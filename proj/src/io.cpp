#include "ion2d/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ion2d {
namespace io {

void write_field(const std::string& path, const SpectralField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    const char magic[4] = {'S', 'P', 'F', '1'};
    out.write(magic, 4);
    const std::uint32_t n = std::uint32_t(f.grid().n);
    const double L = f.grid().length;
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&L), 8);
    const auto& p = f.phys();
    out.write(reinterpret_cast<const char*>(p.data()),
              std::streamsize(p.size() * sizeof(cdouble)));
    if (!out) throw io_error("short write to " + path);
}

SpectralField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SPF1", 4) != 0)
        throw io_error(path + ": not an SPF1 field file");
    std::uint32_t n = 0;
    double L = 0.0;
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&L), 8);
    if (!in || n == 0) throw io_error(path + ": bad header");
    Grid g(int(n), L);
    std::vector<cdouble> data(g.size());
    in.read(reinterpret_cast<char*>(data.data()), std::streamsize(data.size() * sizeof(cdouble)));
    if (!in) throw io_error(path + ": truncated field data");
    return SpectralField::from_phys(g, std::move(data));
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
    bool open = false;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) {
        delete impl_;
        throw io_error("cannot open " + path + " for writing");
    }
    impl_->open = true;
    for (std::size_t i = 0; i < header.size(); ++i)
        impl_->out << (i ? "," : "") << header[i];
    impl_->out << "\n";
}

CsvWriter::~CsvWriter() {
    close();
    delete impl_;
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->out << (i ? "," : "") << fmt(values[i]);
    impl_->out << "\n";
    if (!impl_->out) throw io_error("CSV write failed");
}

void CsvWriter::close() {
    if (impl_->open) {
        impl_->out.close();
        impl_->open = false;
    }
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw io_error("short write to " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace io
}  // namespace ion2d
