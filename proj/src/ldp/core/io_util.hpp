#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldp::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Little-endian binary writer/reader for the versioned file containers
// (episodes, checkpoints). All multi-byte fields are written LE regardless of
// host order; doubles/floats are raw IEEE-754 bytes.

class BinWriter {
public:
    explicit BinWriter(const std::string& path);
    void u8(std::uint8_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f32(float v);
    void f64(double v);
    void bytes(const void* p, std::size_t n);
    void str(const std::string& s);  // u32 length + bytes
    void f64_array(const double* p, std::size_t n);
    void close();

private:
    std::ofstream out_;
    std::string path_;
};

class BinReader {
public:
    explicit BinReader(const std::string& path);
    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    float f32();
    double f64();
    void bytes(void* p, std::size_t n);
    std::string str(std::size_t max_len = 1u << 24);
    void f64_array(double* p, std::size_t n);
    bool eof_clean();  // true if exactly at end of file

private:
    std::ifstream in_;
    std::string path_;
    [[noreturn]] void fail(const std::string& what) const;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
bool file_exists(const std::string& path);

}  // namespace ldp::io
