#include "anonet/scaling.h"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "anonet/error.h"
#include "anonet/oracle.h"

namespace anonet {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          double confidence) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("power-law fit needs at least two (x, y) points");
  }
  const std::size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw ConfigError("power-law fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) throw ConfigError("power-law fit needs distinct x values");

  PowerLawFit fit;
  fit.points = static_cast<int>(m);
  fit.confidence = confidence;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  const double sse = std::max(0.0, syy - fit.exponent * sxy);
  fit.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  fit.ci_low = fit.ci_high = fit.exponent;
  if (m > 2) {
    fit.stderr_exponent = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
    boost::math::students_t dist(static_cast<double>(m - 2));
    const double t = boost::math::quantile(boost::math::complement(dist, (1 - confidence) / 2));
    fit.ci_low = fit.exponent - t * fit.stderr_exponent;
    fit.ci_high = fit.exponent + t * fit.stderr_exponent;
  }
  return fit;
}

std::string graph_spec_for(const std::string& family, NodeId n) {
  auto pos = family.find("{n}");
  if (pos == std::string::npos) return family + ":" + std::to_string(n);
  std::string spec = family;
  spec.replace(pos, 3, std::to_string(n));
  return spec;
}

ScalingReport scaling_report(const ProtocolDef& protocol, const std::string& family,
                             std::span<const NodeId> sizes,
                             const std::function<std::vector<int>(NodeId, std::uint64_t)>& input_for,
                             const ScalingOptions& options) {
  ScalingReport report;
  report.protocol = protocol.name;
  report.family = family;
  std::vector<double> xs, ys;

  for (NodeId n : sizes) {
    ScalingPoint point;
    point.n = n;
    double sum = 0, sum2 = 0;
    for (int s = 0; s < options.seeds; ++s) {
      const std::uint64_t seed = options.base_seed + static_cast<std::uint64_t>(s);
      Graph g = build_graph(graph_spec_for(family, n), seed);
      auto input = input_for(n, seed);
      RunOptions ro;
      ro.seed = seed;
      ro.limits = options.limits;
      ro.rewire = options.rewire;
      auto outcome = run(protocol, g, input, oracle_for_input(protocol, input), ro);
      if (!outcome.result.stabilized) {
        ++point.excluded;
        report.flagged.push_back("n=" + std::to_string(n) + " seed=" + std::to_string(seed));
        continue;
      }
      const double v = static_cast<double>(*outcome.result.first_correct_step);
      sum += v;
      sum2 += v * v;
      ++point.runs;
    }
    if (point.runs > 0) {
      point.mean = sum / point.runs;
      if (point.runs > 1) {
        const double var = (sum2 - point.runs * point.mean * point.mean) / (point.runs - 1);
        point.stderr_mean = std::sqrt(std::max(0.0, var) / point.runs);
      }
      if (point.mean > 0) {
        xs.push_back(n);
        ys.push_back(point.mean);
      }
    }
    report.points.push_back(point);
  }
  if (xs.size() >= 2) report.fit = fit_power_law(xs, ys);
  return report;
}

}  // namespace anonet
