// Deterministic run reports. A report is an ordered list of (path, value)
// entries; the machine form prints one "path = value" line per entry with
// doubles at full precision, so identical runs produce byte-identical files.
// Wall-clock timings never enter a report; they travel separately.

#ifndef LPRF_REPORT_H
#define LPRF_REPORT_H

#include <string>
#include <utility>
#include <vector>

namespace lprf {

class Report {
 public:
  void add(const std::string& path, double value);
  void add(const std::string& path, int value);
  void add(const std::string& path, bool value);
  void add(const std::string& path, const std::string& value);
  void add(const std::string& path, const char* value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  // Entries whose path starts with `prefix`.
  std::vector<std::pair<std::string, std::string>> section(const std::string& prefix) const;

  // One "path = value" line per entry, in insertion order.
  std::string machine_text() const;
  // Grouped by leading path segment with section headings.
  std::string human_text(const std::string& title) const;

  void write_machine(const std::string& path) const;
  void write_human(const std::string& path, const std::string& title) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Stage wall-clock log, written next to reports but never inside them.
struct StageTimings {
  std::vector<std::pair<std::string, double>> seconds;
  void write(const std::string& path) const;
};

}  // namespace lprf

#endif
