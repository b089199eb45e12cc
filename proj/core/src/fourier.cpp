#include "soficrank/fourier.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "soficrank/errors.hpp"

namespace soficrank {

namespace {

void require_abelian(const GroupRingMatrix& f) {
  if (f.group()->kind() != GroupKind::FreeAbelian) {
    throw UnsupportedGroup("Fourier symbols need a free abelian group");
  }
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues();
}

template <class Visit>
void for_each_grid_point(std::size_t dims, std::size_t grid, Visit&& visit) {
  if (grid == 0) throw ValidationError("Fourier grid resolution must be >= 1");
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> t(dims);
  while (true) {
    for (std::size_t j = 0; j < dims; ++j) {
      t[j] = (static_cast<double>(idx[j]) + 0.5) / static_cast<double>(grid);
    }
    visit(std::span<const double>(t));
    std::size_t j = dims;
    while (j > 0) {
      --j;
      if (++idx[j] < grid) break;
      idx[j] = 0;
      if (j == 0) return;
    }
    if (dims == 0) return;
  }
}

}  // namespace

Eigen::MatrixXcd fourier_symbol(const GroupRingMatrix& f, std::span<const double> t) {
  require_abelian(f);
  const auto d = static_cast<std::size_t>(f.group()->rank());
  if (t.size() != d) throw ValidationError("frequency dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(f.rows()),
                                                static_cast<Eigen::Index>(f.cols()));
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t j = 0; j < f.cols(); ++j) {
      std::complex<double> s = 0.0;
      for (const auto& [w, c] : f(i, j).terms()) {
        double phase = 0.0;
        for (std::size_t q = 0; q < d; ++q) phase += static_cast<double>(w[q]) * t[q];
        s += c.convert_to<double>() * std::polar(1.0, 2.0 * std::numbers::pi * phase);
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
    }
  }
  return out;
}

double fourier_counting_oracle(const GroupRingMatrix& f, double eta, std::size_t grid) {
  require_abelian(f);
  const auto dims = static_cast<std::size_t>(f.group()->rank());
  const auto n = static_cast<double>(f.cols());
  double total = 0.0;
  double points = 0.0;
  for_each_grid_point(dims, grid, [&](std::span<const double> t) {
    const auto sv = singular_values(fourier_symbol(f, t));
    double count = n - static_cast<double>(sv.size());  // padded zeros
    for (Eigen::Index i = 0; i < sv.size(); ++i) count += sv[i] <= eta;
    total += count;
    points += 1.0;
  });
  return total / points;
}

double fourier_kernel_measure(const GroupRingMatrix& f, std::size_t grid,
                              double threshold) {
  require_abelian(f);
  const auto dims = static_cast<std::size_t>(f.group()->rank());
  const auto n = static_cast<double>(f.cols());
  double total = 0.0;
  double points = 0.0;
  for_each_grid_point(dims, grid, [&](std::span<const double> t) {
    const auto sv = singular_values(fourier_symbol(f, t));
    double rank = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > threshold;
    total += n - rank;
    points += 1.0;
  });
  return total / points;
}

}  // namespace soficrank
