#include "epinet/ensembles.hpp"

#include "epinet/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace epinet {

namespace {

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void CommunitySpec::validate() const {
  require(n1 >= 1 && n2 >= 1, "community sizes must be >= 1");
  require(is_probability(theta1) && is_probability(theta2) && is_probability(phi),
          "community probabilities theta1, theta2, phi must lie in [0, 1]");
  require(std::isfinite(switch_scale) && switch_scale > 0.0, "switch_scale must be > 0");
}

CommunityAbar::CommunityAbar(const CommunitySpec& spec) : spec_(spec) {
  spec_.validate();
  const Eigen::Matrix2d q = quotient();
  const double half_trace = 0.5 * (q(0, 0) + q(1, 1));
  const double half_gap = 0.5 * (q(0, 0) - q(1, 1));
  lambda_max_ = half_trace + std::sqrt(half_gap * half_gap + q(0, 1) * q(1, 0));

  const auto n1 = static_cast<double>(spec_.n1);
  const auto n2 = static_cast<double>(spec_.n2);
  const double v1 = spec_.theta1 * (1.0 - spec_.theta1);
  const double v2 = spec_.theta2 * (1.0 - spec_.theta2);
  const double vc = spec_.phi * (1.0 - spec_.phi);
  delta_u_ = std::max((n1 - 1.0) * v1 + n2 * vc, (n2 - 1.0) * v2 + n1 * vc);
}

Eigen::Matrix2d CommunityAbar::quotient() const {
  const auto n1 = static_cast<double>(spec_.n1);
  const auto n2 = static_cast<double>(spec_.n2);
  Eigen::Matrix2d q;
  q << spec_.theta1 * (n1 - 1.0), spec_.phi * n2, spec_.phi * n1, spec_.theta2 * (n2 - 1.0);
  return q;
}

SymmetricOperator CommunityAbar::as_operator() const {
  const CommunitySpec s = spec_;
  return {s.n1 + s.n2, [s](std::span<const double> x, std::span<double> y) {
            double sum1 = 0.0, sum2 = 0.0;
            for (std::size_t k = 0; k < s.n1; ++k)
              sum1 += x[k];
            for (std::size_t k = s.n1; k < s.n1 + s.n2; ++k)
              sum2 += x[k];
            for (std::size_t k = 0; k < s.n1; ++k)
              y[k] = s.theta1 * (sum1 - x[k]) + s.phi * sum2;
            for (std::size_t k = s.n1; k < s.n1 + s.n2; ++k)
              y[k] = s.theta2 * (sum2 - x[k]) + s.phi * sum1;
          }};
}

Eigen::MatrixXd CommunityAbar::dense() const {
  const auto n1 = static_cast<Eigen::Index>(spec_.n1);
  const auto n2 = static_cast<Eigen::Index>(spec_.n2);
  Eigen::MatrixXd a(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1).setConstant(spec_.theta1);
  a.bottomRightCorner(n2, n2).setConstant(spec_.theta2);
  a.topRightCorner(n1, n2).setConstant(spec_.phi);
  a.bottomLeftCorner(n2, n1).setConstant(spec_.phi);
  a.diagonal().setZero();
  return a;
}

double CommunityAbar::approximation(double epsilon) const {
  const auto n1 = static_cast<double>(spec_.n1);
  const auto n2 = static_cast<double>(spec_.n2);
  const double a = n1 * spec_.theta1;
  const double b = n2 * spec_.theta2;
  return 0.5 * (a + b + std::sqrt((a - b) * (a - b) + 4.0 * n1 * n2 * spec_.phi * spec_.phi)) - epsilon;
}

CommunityAbar community_abar(const CommunitySpec& spec) { return CommunityAbar(spec); }

DegreeSource DegreeSource::from_vector(std::vector<double> d) {
  auto shared = std::make_shared<const std::vector<double>>(std::move(d));
  return {shared->size(), [shared](std::size_t i) { return (*shared)[i]; }};
}

DegreeSource ExpectedDegreeSpec::source() const { return DegreeSource::from_vector(d); }

ExpectedDegreeStats expected_degree_stats(const DegreeSource& degrees, const ExpectedDegreeOptions& opts) {
  const std::size_t n = degrees.n;
  require(n >= 1, "degree sequence must be non-empty");

  // Pass 1: sums and the two largest degrees.
  long double s1 = 0.0L, s2 = 0.0L;
  double top1 = -1.0, top2 = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = degrees.at(i);
    if (!std::isfinite(d) || d < 0.0)
      fail(ErrorKind::InvalidArgument, "expected degree d_" + std::to_string(i + 1) + " must be finite and >= 0");
    s1 += d;
    s2 += static_cast<long double>(d) * d;
    if (d > top1) {
      top2 = top1;
      top1 = d;
    } else if (d > top2) {
      top2 = d;
    }
  }
  require(s1 > 0.0L, "degree sequence must be nonzero");

  ExpectedDegreeStats st;
  st.n = n;
  const long double rho = 1.0L / s1;
  st.rho = static_cast<double>(rho);
  st.d_tilde = static_cast<double>(rho * s2);
  st.max_degree = top1;
  st.max_pair_probability = n >= 2 ? static_cast<double>(rho * top1 * top2) : 0.0;

  // Pass 2: variance row sums, Σ_{j≠i} a(1 − a) with a = ρ d_i d_j.
  long double best = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double d = degrees.at(i);
    const long double partner = (d == top1) ? top2 : top1;
    if (n >= 2 && rho * d * partner > 1.0L)
      ++st.invalid_vertices;
    const long double row = rho * d * (s1 - d) - rho * rho * d * d * (s2 - d * d);
    best = std::max(best, row);
  }
  st.delta_d = static_cast<double>(best);

  if (st.invalid_vertices > 0 && opts.policy == ProbabilityPolicy::Strict)
    fail(ErrorKind::InvalidArgument, "invalid expected-degree sequence: rho*d_i*d_j reaches " +
                                         std::to_string(st.max_pair_probability) + " > 1 (" +
                                         std::to_string(st.invalid_vertices) + " vertices affected)");

  if (n <= opts.iterative_cap) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
      d[i] = degrees.at(i);
    const double r = st.rho;
    SymmetricOperator op{n, [d, r](std::span<const double> x, std::span<double> y) {
                           long double proj = 0.0L;
                           for (std::size_t k = 0; k < d.size(); ++k)
                             proj += d[k] * x[k];
                           for (std::size_t k = 0; k < d.size(); ++k)
                             y[k] = r * d[k] * (static_cast<double>(proj) - d[k] * x[k]);
                         }};
    PowerIterationOptions po;
    po.tol = opts.iterative_tol;
    st.lambda_iterative = lambda_max_iterative(op, po);
  }
  return st;
}

PowerLawDegrees::PowerLawDegrees(const PowerLawSpec& spec) : spec_(spec) {
  require(spec.n >= 1, "power-law sequence needs n >= 1");
  require(std::isfinite(spec.exponent) && spec.exponent > 2.0, "power-law exponent must be > 2");
  require(std::isfinite(spec.max_degree) && spec.max_degree > 0.0, "maximum degree must be > 0");
  require(std::isfinite(spec.avg_degree) && spec.avg_degree > 0.0, "average degree must be > 0");
  const double g = spec.exponent;
  const auto n = static_cast<double>(spec.n);
  power_ = -1.0 / (g - 1.0);
  c_ = (g - 2.0) / (g - 1.0) * spec.avg_degree * std::pow(n, 1.0 / (g - 1.0));
  i0_ = n * std::pow(spec.avg_degree * (g - 2.0) / (spec.max_degree * (g - 1.0)), g - 1.0);
}

double PowerLawDegrees::operator()(std::size_t i) const {
  return c_ * std::pow(static_cast<double>(i) + i0_, power_);
}

DegreeSource PowerLawDegrees::source() const {
  const PowerLawDegrees self = *this;
  return {spec_.n, [self](std::size_t i) { return self(i); }};
}

std::vector<double> PowerLawDegrees::materialize() const {
  std::vector<double> d(spec_.n);
  for (std::size_t i = 0; i < spec_.n; ++i)
    d[i] = (*this)(i);
  return d;
}

PowerLawDegrees power_law_degrees(const PowerLawSpec& spec) { return PowerLawDegrees(spec); }

SwitchedNetworkSpec realize_spec(const Eigen::MatrixXd& abar, double switch_scale) {
  require(std::isfinite(switch_scale) && switch_scale > 0.0, "switch_scale must be > 0");
  require(abar.rows() == abar.cols() && abar.rows() >= 1, "target mean adjacency must be square and non-empty");
  const auto n = static_cast<std::size_t>(abar.rows());
  std::vector<EdgeChain> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = abar(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!is_probability(a))
        fail(ErrorKind::InvalidArgument, "target probability for " + edge_label(i, j) + " is outside [0, 1]");
      if (a == 0.0)
        continue;
      edges.push_back({i, j, switch_scale * a, switch_scale * (1.0 - a)});
    }
  }
  return SwitchedNetworkSpec::binary(n, std::move(edges));
}

SwitchedNetworkSpec realize_community(const CommunitySpec& spec) {
  return realize_spec(community_abar(spec).dense(), spec.switch_scale);
}

SwitchedNetworkSpec realize_expected_degrees(const ExpectedDegreeSpec& spec) {
  const auto st = expected_degree_stats(spec.source(), {ProbabilityPolicy::Strict, 0, 1e-10});
  const auto n = static_cast<Eigen::Index>(spec.d.size());
  Eigen::Map<const Eigen::VectorXd> d(spec.d.data(), n);
  Eigen::MatrixXd abar = st.rho * d * d.transpose();
  abar.diagonal().setZero();
  return realize_spec(abar, spec.switch_scale);
}

}  // namespace epinet
