#include "sgbm/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sgbm/common.hpp"

namespace sgbm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

KeyValueDoc KeyValueDoc::parse(std::istream& in) {
  KeyValueDoc doc;
  std::string current;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw InvalidArgument("line " + std::to_string(lineno) + ": unterminated section header");
      }
      current = trim(t.substr(1, t.size() - 2));
      doc.section(current);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw InvalidArgument("line " + std::to_string(lineno) + ": empty key");
    doc.set(current, key, trim(t.substr(eq + 1)));
  }
  return doc;
}

KeyValueDoc KeyValueDoc::parse_string(const std::string& text) {
  std::istringstream is(text);
  return parse(is);
}

KeyValueDoc KeyValueDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return parse(in);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void KeyValueDoc::write(std::ostream& out) const {
  bool first = true;
  for (const auto& s : sections_) {
    if (!s.name.empty()) {
      if (!first) out << '\n';
      out << '[' << s.name << "]\n";
    }
    for (const auto& [k, v] : s.entries) out << k << " = " << v << '\n';
    first = false;
  }
}

std::string KeyValueDoc::to_string() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

void KeyValueDoc::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write(out);
}

KeyValueDoc::Section& KeyValueDoc::section(const std::string& name) {
  for (auto& s : sections_)
    if (s.name == name) return s;
  sections_.push_back({name, {}});
  return sections_.back();
}

const KeyValueDoc::Section* KeyValueDoc::find_section(const std::string& name) const {
  for (const auto& s : sections_)
    if (s.name == name) return &s;
  return nullptr;
}

bool KeyValueDoc::has_section(const std::string& name) const { return find_section(name); }

void KeyValueDoc::set(const std::string& sec, const std::string& key, const std::string& value) {
  auto& s = section(sec);
  for (auto& [k, v] : s.entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  s.entries.emplace_back(key, value);
}

void KeyValueDoc::set(const std::string& sec, const std::string& key, double value) {
  set(sec, key, format_double(value));
}

void KeyValueDoc::set(const std::string& sec, const std::string& key, long long value) {
  set(sec, key, std::to_string(value));
}

void KeyValueDoc::set(const std::string& sec, const std::string& key, bool value) {
  set(sec, key, std::string(value ? "true" : "false"));
}

std::optional<std::string> KeyValueDoc::get(const std::string& sec, const std::string& key) const {
  if (const auto* s = find_section(sec)) {
    for (const auto& [k, v] : s->entries)
      if (k == key) return v;
  }
  return std::nullopt;
}

std::string KeyValueDoc::get_or(const std::string& sec, const std::string& key,
                                const std::string& fallback) const {
  auto v = get(sec, key);
  return v ? *v : fallback;
}

namespace {

double to_double(const std::string& sec, const std::string& key, const std::string& text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("[" + sec + "] " + key + ": '" + text + "' is not a number");
  }
  return v;
}

long long to_int(const std::string& sec, const std::string& key, const std::string& text) {
  long long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("[" + sec + "] " + key + ": '" + text + "' is not an integer");
  }
  return v;
}

}  // namespace

double KeyValueDoc::get_double(const std::string& sec, const std::string& key,
                               double fallback) const {
  auto v = get(sec, key);
  return v ? to_double(sec, key, *v) : fallback;
}

long long KeyValueDoc::get_int(const std::string& sec, const std::string& key,
                               long long fallback) const {
  auto v = get(sec, key);
  return v ? to_int(sec, key, *v) : fallback;
}

double KeyValueDoc::require_double(const std::string& sec, const std::string& key) const {
  auto v = get(sec, key);
  if (!v) throw InvalidArgument("missing [" + sec + "] " + key);
  return to_double(sec, key, *v);
}

long long KeyValueDoc::require_int(const std::string& sec, const std::string& key) const {
  auto v = get(sec, key);
  if (!v) throw InvalidArgument("missing [" + sec + "] " + key);
  return to_int(sec, key, *v);
}

}  // namespace sgbm
