#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sgbm {

// Flat "key = value" text with [section] headers. Used for configuration files
// and structured reports. Insertion order is preserved on output.
class KeyValueDoc {
 public:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };

  static KeyValueDoc parse(std::istream& in);
  static KeyValueDoc parse_string(const std::string& text);
  static KeyValueDoc load(const std::string& path);

  void write(std::ostream& out) const;
  std::string to_string() const;
  void save(const std::string& path) const;

  // Sets (or replaces) a value in the named section, creating it if needed.
  void set(const std::string& section, const std::string& key, const std::string& value);
  void set(const std::string& section, const std::string& key, double value);
  void set(const std::string& section, const std::string& key, long long value);
  void set(const std::string& section, const std::string& key, int value) {
    set(section, key, static_cast<long long>(value));
  }
  void set(const std::string& section, const std::string& key, bool value);
  void set(const std::string& section, const std::string& key, const char* value) {
    set(section, key, std::string(value));
  }

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  double require_double(const std::string& section, const std::string& key) const;
  long long require_int(const std::string& section, const std::string& key) const;

  bool has_section(const std::string& name) const;
  const std::vector<Section>& sections() const { return sections_; }

 private:
  Section& section(const std::string& name);
  const Section* find_section(const std::string& name) const;

  std::vector<Section> sections_;
};

// Shortest decimal text that round-trips a double.
std::string format_double(double v);

}  // namespace sgbm
