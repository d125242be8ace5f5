#include "bentcable/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "bentcable/error.hpp"

namespace bentcable {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, int line_no) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorKind::Input,
                "line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "' as a number");
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::Input, "line " + std::to_string(line_no) + ": non-finite value");
  }
  return v;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::vector<double> xs;
  std::vector<double> ys;
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line = trim(line.substr(3));
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorKind::Input,
                  "line " + std::to_string(line_no) + ": expected exactly two comma-separated fields");
    }
    if (!header_seen) {
      if (trim(line.substr(0, comma)) != "x" || trim(line.substr(comma + 1)) != "y") {
        throw Error(ErrorKind::Input, "line " + std::to_string(line_no) + ": expected header 'x,y'");
      }
      header_seen = true;
      continue;
    }
    xs.push_back(parse_field(line.substr(0, comma), line_no));
    ys.push_back(parse_field(line.substr(comma + 1), line_no));
  }
  if (!header_seen) throw Error(ErrorKind::Input, "missing header 'x,y'");
  if (xs.empty()) throw Error(ErrorKind::Input, "no observations after the header");
  return Dataset(Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                 Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size())));
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open '" + path + "'");
  return read_csv(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << "x,y\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << format_double(data.x()[i]) << ',' << format_double(data.y()[i]) << '\n';
  }
}

void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Input, "cannot write '" + path + "'");
  write_csv(out, data);
}

}  // namespace bentcable
