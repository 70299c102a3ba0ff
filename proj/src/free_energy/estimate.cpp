#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "phi3/errors.hpp"
#include "phi3/free_energy/free_energy.hpp"

namespace phi3::free_energy {

const char* to_string(Method m) {
  switch (m) {
    case Method::Mc:
      return "mc";
    case Method::Quadrature:
      return "quadrature";
    case Method::BdUpper:
      return "bd-upper";
    case Method::BdLower:
      return "bd-lower";
    case Method::BdOptimized:
      return "bd-optimized";
  }
  return "?";
}

bool FreeEnergyEstimate::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace

double log_sum_exp(std::vector<double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  std::sort(values.begin(), values.end());
  const double m = values.back();
  if (!std::isfinite(m)) return m;
  for (auto& v : values) v = std::exp(v - m);
  return m + std::log(pairwise_sum(values.data(), values.size()));
}

LogMean log_mean_exp(const std::vector<double>& w) {
  if (w.empty()) throw Error("log_mean_exp: no samples");
  std::vector<double> s = w;
  std::sort(s.begin(), s.end());
  const double m = s.back();
  const std::size_t n = s.size();
  std::vector<double> r(n), r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = std::exp(s[i] - m);
    r2[i] = r[i] * r[i];
  }
  const double sum = pairwise_sum(r.data(), n);
  const double sum2 = pairwise_sum(r2.data(), n);
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, sum2 / static_cast<double>(n) - mean * mean) * static_cast<double>(n) /
                     std::max<double>(1.0, static_cast<double>(n) - 1.0);
  const std::size_t top = std::max<std::size_t>(1, (n + 99) / 100);
  const double top_sum = pairwise_sum(r.data() + (n - top), top);
  return {m + std::log(mean), std::sqrt(var / static_cast<double>(n)) / mean, top_sum / sum};
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<FreeEnergyEstimate>& rows,
                     const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "L,N,sigma,A,method,log_z,stderr,log_z_per_L4,flags,config_hash\n" << std::setprecision(17);
  for (const auto& r : rows) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    out << r.L << ',' << r.N << ',' << r.sigma << ',' << r.A << ',' << to_string(r.method) << ',' << r.log_z << ','
        << r.stderr_ << ',' << r.log_z / std::pow(r.L, 4) << ',' << flags << ',' << config_hash << '\n';
  }
}

}  // namespace phi3::free_energy
