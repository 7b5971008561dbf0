#pragma once

// key = value configuration text with namespaced keys, '#' comments and
// command-line overrides.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace wigdev {

struct ConfigError : Error {
    using Error::Error;
};

class Config {
public:
    static Config parse(std::string_view text, const std::string& source = "<config>") {
        Config c;
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto t = trim(line);
            if (t.empty()) continue;
            try {
                c.apply_override(t);
            } catch (const ConfigError& e) {
                throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot read config file " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), path);
    }

    // "key=value"
    void apply_override(std::string_view kv) {
        const auto eq = kv.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(kv) + "'");
        const auto key = trim(kv.substr(0, eq));
        const auto value = trim(kv.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key in '" + std::string(kv) + "'");
        if (!std::all_of(key.begin(), key.end(), [](char ch) {
                return std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '_';
            }))
            throw ConfigError("invalid key '" + key + "'");
        entries_[key] = value;
    }

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) > 0; }
    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return entries_; }

    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second;
    }

    [[nodiscard]] double get_double(const std::string& key, double fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        return to_double(key, it->second);
    }

    [[nodiscard]] long get_int(const std::string& key, long fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        long v{};
        const auto& s = it->second;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
            throw ConfigError(key + ": expected an integer, got '" + s + "'");
        return v;
    }

    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        const auto& s = it->second;
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw ConfigError(key + ": expected a boolean, got '" + s + "'");
    }

    // Comma-separated numbers.
    [[nodiscard]] std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
        if (out.empty()) throw ConfigError(key + ": empty list");
        return out;
    }

    // Keys not in `known`.
    [[nodiscard]] std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const {
        std::vector<std::string> out;
        for (const auto& [k, v] : entries_)
            if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back(k);
        return out;
    }

    // Sorted key=value lines; the hash input.
    [[nodiscard]] std::string canonical() const {
        std::string s;
        for (const auto& [k, v] : entries_) s += k + "=" + v + "\n";
        return s;
    }

    // 64-bit FNV-1a of the canonical text, as 16 hex digits.
    [[nodiscard]] std::string hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : canonical()) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        std::ostringstream os;
        os << std::hex;
        os.width(16);
        os.fill('0');
        os << h;
        return os.str();
    }

private:
    static std::string trim(std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos) return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return std::string(s.substr(b, e - b + 1));
    }

    static double to_double(const std::string& key, const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key + ": expected a number, got '" + s + "'");
        }
    }

    std::map<std::string, std::string> entries_;
};

}  // namespace wigdev
