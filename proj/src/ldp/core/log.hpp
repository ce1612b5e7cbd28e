#pragma once

#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

namespace ldp {

// Minimal logger: stdout plus an optional run-directory file sink.
class Log {
public:
    static Log& instance() {
        static Log l;
        return l;
    }

    void open_file(const std::string& path) {
        std::lock_guard<std::mutex> g(mu_);
        file_.open(path, std::ios::app);
    }

    void close_file() {
        std::lock_guard<std::mutex> g(mu_);
        if (file_.is_open()) file_.close();
    }

    void line(const std::string& msg) {
        std::lock_guard<std::mutex> g(mu_);
        std::cout << msg << "\n";
        if (file_.is_open()) file_ << msg << "\n";
        std::cout.flush();
        if (file_.is_open()) file_.flush();
    }

private:
    std::mutex mu_;
    std::ofstream file_;
};

inline void log_line(const std::string& msg) { Log::instance().line(msg); }

template <class... Args>
void log_fmt(Args&&... args) {
    std::ostringstream ss;
    (ss << ... << args);
    log_line(ss.str());
}

}  // namespace ldp
