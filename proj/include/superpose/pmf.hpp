#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace superpose {

/// Finitely supported pmf on {0, 1, ..., size()-1}. mass_defect is the
/// probability that was truncated away (0 for empirical laws).
struct Pmf1D {
  std::vector<double> prob;
  double mass_defect = 0.0;

  std::size_t size() const noexcept { return prob.size(); }
  double operator[](std::size_t s) const noexcept { return s < prob.size() ? prob[s] : 0.0; }
  double total() const;
  double mean() const;

  static Pmf1D delta(std::size_t at);
};

/// Dense pmf on {0..rows-1} x {0..cols-1}, row-major.
class Pmf2D {
 public:
  Pmf2D() = default;
  Pmf2D(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), prob_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double at(std::size_t s, std::size_t t) const noexcept {
    return (s < rows_ && t < cols_) ? prob_[s * cols_ + t] : 0.0;
  }
  double& ref(std::size_t s, std::size_t t) { return prob_[s * cols_ + t]; }

  const std::vector<double>& data() const noexcept { return prob_; }

  double mass_defect = 0.0;

  double total() const;
  Pmf1D marginal_first() const;
  Pmf1D marginal_second() const;
  Pmf2D transposed() const;

  /// Drops trailing all-zero rows and columns.
  void shrink_to_support();

  static Pmf2D product(const Pmf1D& a, const Pmf1D& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> prob_;
};

/// "s,prob" rows (nonzero entries only) followed by "# mass_defect=<v>".
void write_csv(std::ostream& out, const Pmf1D& f);
/// "s,t,prob" rows (nonzero entries only) followed by "# mass_defect=<v>".
void write_csv(std::ostream& out, const Pmf2D& f);

Pmf1D read_pmf1d_csv(std::istream& in);
Pmf2D read_pmf2d_csv(std::istream& in);

/// Shortest decimal text that round-trips the double.
std::string format_double(double x);

}  // namespace superpose
