#pragma once

#include "ion2d/field.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ion2d {
namespace io {

// I/O failure (missing file, short read/write): CLI exit code 4
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field file format "SPF1": magic 'S''P''F''1', uint32 grid size n,
// float64 domain length, then n*n complex values row-major, interleaved
// little-endian float64 (physical-space representation).
void write_field(const std::string& path, const SpectralField& f);
SpectralField read_field(const std::string& path);

// deterministic double formatting used by every CSV/JSON artifact
std::string fmt(double v);

struct CsvWriter {
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    void row(const std::vector<double>& values);
    void close();

  private:
    struct Impl;
    Impl* impl_;
};

std::uint64_t fnv1a64(const std::string& s);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace io
}  // namespace ion2d
