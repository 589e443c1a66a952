#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "sublevel_ph/diagram.hpp"

namespace sublevel_ph {

std::string format_number(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "birth,death\n";
  for (std::size_t k = 0; k < diagram.size(); ++k) {
    const auto p = diagram.point(k);
    out << format_number(p.birth) << ',' << format_number(p.death) << '\n';
  }
}

std::string diagram_to_csv(const PersistenceDiagram& diagram) {
  std::ostringstream os;
  write_diagram_csv(os, diagram);
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, std::size_t line_no) {
  field = trim(field);
  if (field == "inf" || field == "+inf") return kInf;
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" +
                                           std::string(field) + "'");
  }
  return value;
}

}  // namespace

PersistenceDiagram read_diagram_csv(std::istream& in, std::size_t source_length) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || trim(line) != "birth,death") {
    throw Error(ErrorCode::ParseError, "missing 'birth,death' header");
  }
  ++line_no;
  std::vector<DiagramPoint> points;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected two fields");
    }
    points.push_back({parse_field(row.substr(0, comma), line_no),
                      parse_field(row.substr(comma + 1), line_no)});
  }
  try {
    return PersistenceDiagram::from_points(std::move(points), source_length);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace sublevel_ph
