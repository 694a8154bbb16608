#include "config.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "fractrunc/errors.hpp"

namespace fractrunc::cli {

const char* const Config::keys[] = {"abs_tol", "rel_tol", "root_residual", "restarts", "sweeps", "angles",
                                    "radii",   "dirs",    "threads",       "seed",     "format", nullptr};

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double positive_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || !(x > 0.0)) throw DomainError(key + " must be a positive number, got '" + v + "'");
    return x;
}

long long count_value(const std::string& key, const std::string& v, long long min) {
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || x < min) throw DomainError(key + " must be an integer >= " + std::to_string(min) + ", got '" + v + "'");
    return x;
}

}  // namespace

SearchBudget Config::budget() const {
    SearchBudget b;
    b.restarts = restarts;
    b.sweeps = sweeps;
    b.angles = angles;
    b.seed = static_cast<std::uint64_t>(seed);
    b.threads = threads;
    return b;
}

void Config::set(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "abs_tol") abs_tol = positive_double(key, v);
    else if (key == "rel_tol") rel_tol = positive_double(key, v);
    else if (key == "root_residual") root_residual = positive_double(key, v);
    else if (key == "restarts") restarts = static_cast<int>(count_value(key, v, 1));
    else if (key == "sweeps") sweeps = static_cast<int>(count_value(key, v, 1));
    else if (key == "angles") angles = static_cast<int>(count_value(key, v, 2));
    else if (key == "radii") radii = static_cast<int>(count_value(key, v, 1));
    else if (key == "dirs") dirs = static_cast<int>(count_value(key, v, 1));
    else if (key == "threads") threads = static_cast<int>(count_value(key, v, 0));
    else if (key == "seed") seed = count_value(key, v, 0);
    else if (key == "format") {
        if (v != "json" && v != "csv") throw DomainError("format must be json or csv, got '" + v + "'");
        format = v;
    } else {
        throw DomainError("unknown configuration key '" + key + "'");
    }
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        out[trim(line.substr(0, eq))] = value;
    }
    return out;
}

Config Config::resolve(const std::string& file, const std::map<std::string, std::string>& flags) {
    Config c;
    if (!file.empty())
        for (const auto& [k, v] : read_key_value_file(file)) c.set(k, v);
    for (const char* const* k = keys; *k; ++k) {
        std::string env = "FRACTRUNC_";
        for (const char* p = *k; *p; ++p) env += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
        if (const char* v = std::getenv(env.c_str())) c.set(*k, v);
    }
    for (const auto& [k, v] : flags) c.set(k, v);
    return c;
}

void write_atomically(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) throw DomainError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw DomainError("cannot move output into '" + path + "': " + ec.message());
    }
}

}  // namespace fractrunc::cli
