#include "superpose/pmf.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "superpose/error.hpp"
#include "superpose/numeric.hpp"

namespace superpose {

double Pmf1D::total() const { return compensated_total(prob); }

double Pmf1D::mean() const {
  CompensatedSum acc;
  for (std::size_t s = 0; s < prob.size(); ++s) acc += static_cast<double>(s) * prob[s];
  return acc.value();
}

Pmf1D Pmf1D::delta(std::size_t at) {
  Pmf1D f;
  f.prob.assign(at + 1, 0.0);
  f.prob[at] = 1.0;
  return f;
}

double Pmf2D::total() const { return compensated_total(prob_); }

Pmf1D Pmf2D::marginal_first() const {
  Pmf1D m;
  m.prob.assign(rows_, 0.0);
  for (std::size_t s = 0; s < rows_; ++s) {
    CompensatedSum acc;
    for (std::size_t t = 0; t < cols_; ++t) acc += prob_[s * cols_ + t];
    m.prob[s] = acc.value();
  }
  m.mass_defect = mass_defect;
  return m;
}

Pmf1D Pmf2D::marginal_second() const { return transposed().marginal_first(); }

Pmf2D Pmf2D::transposed() const {
  Pmf2D out(cols_, rows_);
  for (std::size_t s = 0; s < rows_; ++s) {
    for (std::size_t t = 0; t < cols_; ++t) out.prob_[t * rows_ + s] = prob_[s * cols_ + t];
  }
  out.mass_defect = mass_defect;
  return out;
}

void Pmf2D::shrink_to_support() {
  std::size_t r = 0;
  std::size_t c = 0;
  for (std::size_t s = 0; s < rows_; ++s) {
    for (std::size_t t = 0; t < cols_; ++t) {
      if (prob_[s * cols_ + t] != 0.0) {
        r = std::max(r, s + 1);
        c = std::max(c, t + 1);
      }
    }
  }
  if (r == rows_ && c == cols_) return;
  Pmf2D out(r, c);
  for (std::size_t s = 0; s < r; ++s) {
    for (std::size_t t = 0; t < c; ++t) out.prob_[s * c + t] = prob_[s * cols_ + t];
  }
  out.mass_defect = mass_defect;
  *this = std::move(out);
}

Pmf2D Pmf2D::product(const Pmf1D& a, const Pmf1D& b) {
  Pmf2D out(a.size(), b.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (std::size_t t = 0; t < b.size(); ++t) out.prob_[s * out.cols_ + t] = a.prob[s] * b.prob[t];
  }
  out.mass_defect = a.mass_defect + b.mass_defect;
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Pmf1D& f) {
  out << "s,prob\n";
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (f.prob[s] != 0.0) out << s << ',' << format_double(f.prob[s]) << '\n';
  }
  out << "# mass_defect=" << format_double(f.mass_defect) << '\n';
}

void write_csv(std::ostream& out, const Pmf2D& f) {
  out << "s,t,prob\n";
  for (std::size_t s = 0; s < f.rows(); ++s) {
    for (std::size_t t = 0; t < f.cols(); ++t) {
      const double p = f.at(s, t);
      if (p != 0.0) out << s << ',' << t << ',' << format_double(p) << '\n';
    }
  }
  out << "# mass_defect=" << format_double(f.mass_defect) << '\n';
}

namespace {

double parse_number(const std::string& text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::io, "malformed number in pmf csv: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

template <typename Row>
double read_rows(std::istream& in, std::size_t width, Row&& on_row) {
  std::string line;
  double defect = 0.0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# mass_defect=", 0) == 0) {
      defect = parse_number(line.substr(14));
      continue;
    }
    if (line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.front() == 's') continue;
    }
    auto fields = split_fields(line);
    if (fields.size() != width) throw Error(ErrorKind::io, "wrong field count in pmf csv: " + line);
    on_row(fields);
  }
  return defect;
}

}  // namespace

Pmf1D read_pmf1d_csv(std::istream& in) {
  std::vector<std::pair<std::size_t, double>> rows;
  Pmf1D f;
  f.mass_defect = read_rows(in, 2, [&](const std::vector<std::string>& fields) {
    rows.emplace_back(static_cast<std::size_t>(parse_number(fields[0])), parse_number(fields[1]));
  });
  std::size_t size = 0;
  for (const auto& [s, p] : rows) size = std::max(size, s + 1);
  f.prob.assign(size, 0.0);
  for (const auto& [s, p] : rows) f.prob[s] = p;
  return f;
}

Pmf2D read_pmf2d_csv(std::istream& in) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> rows;
  const double defect = read_rows(in, 3, [&](const std::vector<std::string>& fields) {
    rows.emplace_back(static_cast<std::size_t>(parse_number(fields[0])),
                      static_cast<std::size_t>(parse_number(fields[1])), parse_number(fields[2]));
  });
  std::size_t r = 0;
  std::size_t c = 0;
  for (const auto& [s, t, p] : rows) {
    r = std::max(r, s + 1);
    c = std::max(c, t + 1);
  }
  Pmf2D f(r, c);
  for (const auto& [s, t, p] : rows) f.ref(s, t) = p;
  f.mass_defect = defect;
  return f;
}

}  // namespace superpose
