#pragma once

#include <cstdint>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace porodim {

inline constexpr std::string_view kToolVersion = "0.3.0";

/// Fixed 12-significant-digit rendering with '.' decimal point, independent
/// of the global locale.
inline std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12) << v;
  return os.str();
}

/// Quotes a field when it contains a delimiter, quote or newline.
inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// CSV writer: a `# key=value` metadata block, then one header row, then
/// data rows. Everything needed to regenerate the body goes in the metadata.
class CsvWriter {
 public:
  using Metadata = std::vector<std::pair<std::string, std::string>>;

  CsvWriter(std::ostream& out, std::string_view command, const Metadata& meta,
            const std::vector<std::string>& columns)
      : out_(out), width_(columns.size()) {
    out_ << "# command=" << command << '\n';
    out_ << "# tool_version=" << kToolVersion << '\n';
    for (const auto& [key, value] : meta) out_ << "# " << key << '=' << value << '\n';
    write_fields(columns);
  }

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row& operator<<(double v) { return push(format_number(v)); }
    Row& operator<<(int v) { return push(std::to_string(v)); }
    Row& operator<<(unsigned v) { return push(std::to_string(v)); }
    Row& operator<<(long v) { return push(std::to_string(v)); }
    Row& operator<<(unsigned long v) { return push(std::to_string(v)); }
    Row& operator<<(unsigned long long v) { return push(std::to_string(v)); }
    Row& operator<<(bool v) { return push(v ? "true" : "false"); }
    Row& operator<<(std::string_view v) { return push(std::string(v)); }
    Row& operator<<(const char* v) { return push(v); }
    ~Row() { w_.write_fields(fields_); }

   private:
    Row& push(std::string s) {
      fields_.push_back(std::move(s));
      return *this;
    }
    CsvWriter& w_;
    std::vector<std::string> fields_;
  };

  Row row() { return Row(*this); }
  [[nodiscard]] std::size_t width() const { return width_; }

 private:
  void write_fields(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_escape(fields[i]);
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t width_;
};

}  // namespace porodim
