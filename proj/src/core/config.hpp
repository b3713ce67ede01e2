#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cavkit {

// Flat `section.key = value` configuration. Construction seeds every known
// key with its default, so a resolved config is always total; unknown keys
// are rejected at set time (dynamic families like eval.set.<name> excepted).
class RunConfig {
public:
    RunConfig();

    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    std::string require(const std::string& key) const;  // errors when empty

    std::uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<std::size_t> get_size_list(const std::string& key) const;
    // Ordered "name=value,name=value" list.
    std::vector<std::pair<std::string, std::string>> get_pairs(const std::string& key) const;
    // All keys under a dotted prefix, sorted; returns (suffix, value).
    std::vector<std::pair<std::string, std::string>> family(const std::string& prefix) const;

    // Sorted `key=value` lines; the content-addressing input.
    std::string canonical() const;
    std::uint64_t hash() const;
    void write_file(const std::string& path) const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace cavkit
