#include "ldp/core/io_util.hpp"

#include <cstring>
#include <filesystem>
#include <sstream>

namespace ldp::io {

namespace {

template <class T>
void store_le(unsigned char* dst, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
        dst[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
}

template <class T>
T load_le(const unsigned char* src) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<T>(src[i]) << (8 * i);
    return v;
}

}  // namespace

BinWriter::BinWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw IoError("cannot open for writing: " + path);
}

void BinWriter::u8(std::uint8_t v) { bytes(&v, 1); }

void BinWriter::u32(std::uint32_t v) {
    unsigned char b[4];
    store_le(b, v);
    bytes(b, 4);
}

void BinWriter::u64(std::uint64_t v) {
    unsigned char b[8];
    store_le(b, v);
    bytes(b, 8);
}

void BinWriter::f32(float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    u32(u);
}

void BinWriter::f64(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    u64(u);
}

void BinWriter::bytes(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw IoError("write failed: " + path_);
}

void BinWriter::str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    if (!s.empty()) bytes(s.data(), s.size());
}

void BinWriter::f64_array(const double* p, std::size_t n) {
    // host is little-endian on every supported target; write raw
    bytes(p, n * sizeof(double));
}

void BinWriter::close() {
    out_.close();
    if (!out_) throw IoError("close failed: " + path_);
}

BinReader::BinReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("cannot open for reading: " + path);
}

void BinReader::fail(const std::string& what) const {
    throw IoError(what + ": " + path_);
}

std::uint8_t BinReader::u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
}

std::uint32_t BinReader::u32() {
    unsigned char b[4];
    bytes(b, 4);
    return load_le<std::uint32_t>(b);
}

std::uint64_t BinReader::u64() {
    unsigned char b[8];
    bytes(b, 8);
    return load_le<std::uint64_t>(b);
}

float BinReader::f32() {
    std::uint32_t u = u32();
    float v;
    std::memcpy(&v, &u, 4);
    return v;
}

double BinReader::f64() {
    std::uint64_t u = u64();
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

void BinReader::bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) fail("truncated file");
}

std::string BinReader::str(std::size_t max_len) {
    std::uint32_t n = u32();
    if (n > max_len) fail("corrupt string length");
    std::string s(n, '\0');
    if (n) bytes(s.data(), n);
    return s;
}

void BinReader::f64_array(double* p, std::size_t n) { bytes(p, n * sizeof(double)); }

bool BinReader::eof_clean() {
    return in_.peek() == std::ifstream::traits_type::eof();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

bool file_exists(const std::string& path) {
    return std::filesystem::exists(path);
}

}  // namespace ldp::io
