#include "lprf/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lprf {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

std::string head_segment(const std::string& path) {
  const std::size_t dot = path.find('.');
  return dot == std::string::npos ? path : path.substr(0, dot);
}

}  // namespace

void Report::add(const std::string& path, double value) {
  entries_.emplace_back(path, format_double(value));
}

void Report::add(const std::string& path, int value) {
  entries_.emplace_back(path, std::to_string(value));
}

void Report::add(const std::string& path, bool value) {
  entries_.emplace_back(path, value ? "true" : "false");
}

void Report::add(const std::string& path, const std::string& value) {
  entries_.emplace_back(path, value);
}

void Report::add(const std::string& path, const char* value) {
  entries_.emplace_back(path, std::string(value));
}

std::vector<std::pair<std::string, std::string>> Report::section(
    const std::string& prefix) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : entries_)
    if (e.first.compare(0, prefix.size(), prefix) == 0) out.push_back(e);
  return out;
}

std::string Report::machine_text() const {
  std::ostringstream out;
  for (const auto& e : entries_) out << e.first << " = " << e.second << "\n";
  return out.str();
}

std::string Report::human_text(const std::string& title) const {
  std::ostringstream out;
  out << title << "\n";
  out << std::string(title.size(), '=') << "\n";
  std::string group;
  for (const auto& e : entries_) {
    const std::string seg = head_segment(e.first);
    if (seg != group) {
      group = seg;
      out << "\n[" << group << "]\n";
    }
    out << "  " << e.first << " = " << e.second << "\n";
  }
  return out.str();
}

void Report::write_machine(const std::string& path) const { write_text(path, machine_text()); }

void Report::write_human(const std::string& path, const std::string& title) const {
  write_text(path, human_text(title));
}

void StageTimings::write(const std::string& path) const {
  std::ostringstream out;
  out << "# wall-clock seconds per stage; not part of the deterministic report\n";
  for (const auto& e : seconds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", e.second);
    out << e.first << " = " << buf << "\n";
  }
  write_text(path, out.str());
}

}  // namespace lprf
