#include "hirschfa/efa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace hirschfa::efa {

std::string_view rotation_name(Rotation r) {
  switch (r) {
    case Rotation::none: return "none";
    case Rotation::varimax: return "varimax";
    case Rotation::promax: return "promax";
  }
  return "none";
}

Rotation parse_rotation(std::string_view name) {
  if (name == "none") return Rotation::none;
  if (name == "varimax") return Rotation::varimax;
  if (name == "promax") return Rotation::promax;
  throw ValidationError(fmt::format("unknown rotation '{}' (expected varimax|promax|none)", name));
}

CorrelationMatrix correlation_matrix(const Matrix& data, std::vector<std::string> labels) {
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  if (n < 3) throw InsufficientDataError(fmt::format("correlation needs at least 3 rows, got {}", n));
  if (static_cast<Eigen::Index>(labels.size()) != p) {
    throw ValidationError("correlation_matrix: label count does not match column count");
  }
  Matrix centered = data.rowwise() - data.colwise().mean();
  Vector norms = centered.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double scale = std::max(1.0, data.col(j).cwiseAbs().maxCoeff());
    if (!(norms(j) > 1e-12 * scale * std::sqrt(static_cast<double>(n)))) {
      throw InsufficientDataError(fmt::format("variable '{}' has zero variance", labels[static_cast<std::size_t>(j)]));
    }
    centered.col(j) /= norms(j);
  }
  Matrix r = centered.transpose() * centered;
  r = 0.5 * (r + r.transpose()).eval();
  r.diagonal().setOnes();
  r = r.cwiseMax(-1.0).cwiseMin(1.0);
  return CorrelationMatrix{std::move(r), std::move(labels)};
}

double kmo(const CorrelationMatrix& r) {
  const Eigen::Index p = r.dim();
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j) r2 += r.values(i, j) * r.values(i, j);
    }
  }
  if (r2 == 0.0) {
    throw NumericalError("KMO is undefined: all off-diagonal correlations are zero");
  }
  const Matrix inv = linalg::spd_inverse(r.values);
  double q2 = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i == j) continue;
      const double q = -inv(i, j) / std::sqrt(inv(i, i) * inv(j, j));
      q2 += q * q;
    }
  }
  return r2 / (r2 + q2);
}

BartlettResult bartlett(const CorrelationMatrix& r, int n) {
  const auto p = static_cast<int>(r.dim());
  if (n <= p) throw ValidationError(fmt::format("Bartlett test needs n > p (n = {}, p = {})", n, p));
  const double log_det = linalg::spd_log_det(r.values);
  BartlettResult out;
  out.chi2 = std::max(0.0, -(n - 1.0 - (2.0 * p + 5.0) / 6.0) * log_det);
  out.df = p * (p - 1) / 2;
  out.p = out.df > 0 ? boost::math::gamma_q(0.5 * out.df, 0.5 * out.chi2) : 1.0;
  return out;
}

AdequacyResult adequacy(const CorrelationMatrix& r, int n) {
  const auto b = bartlett(r, n);
  return AdequacyResult{kmo(r), b.chi2, b.df, b.p};
}

int kaiser_factor_count(const CorrelationMatrix& r) {
  const auto eig = linalg::symmetric_eigen(r.values);
  return static_cast<int>((eig.values.array() > 1.0).count());
}

namespace {

Vector initial_communalities(const Matrix& r, bool& fallback) {
  const Eigen::Index p = r.rows();
  try {
    const Matrix inv = linalg::spd_inverse(r, 1e10);
    fallback = false;
    return (Vector::Ones(p) - inv.diagonal().cwiseInverse()).cwiseMax(0.0);
  } catch (const NumericalError&) {
    fallback = true;
    Vector h(p);
    for (Eigen::Index i = 0; i < p; ++i) {
      double best = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (j != i) best = std::max(best, std::abs(r(i, j)));
      }
      h(i) = best;
    }
    return h;
  }
}

Matrix principal_axes(const Matrix& reduced, int m) {
  const auto eig = linalg::symmetric_eigen(reduced);
  Matrix l(reduced.rows(), m);
  for (int j = 0; j < m; ++j) {
    l.col(j) = eig.vectors.col(j) * std::sqrt(std::max(eig.values(j), 0.0));
  }
  return l;
}

}  // namespace

Extraction uls_extract(const CorrelationMatrix& r, const ExtractionSettings& s) {
  const Eigen::Index p = r.dim();
  if (s.n_factors < 1 || s.n_factors >= p) {
    throw ValidationError(fmt::format("number of factors must be in [1, {}), got {}", p, s.n_factors));
  }
  Extraction ex;
  Vector h = initial_communalities(r.values, ex.smc_fallback);
  std::vector<bool> clamped(static_cast<std::size_t>(p), false);

  Matrix loadings;
  bool converged = false;
  int it = 0;
  while (it < s.max_iter) {
    ++it;
    Matrix reduced = r.values;
    reduced.diagonal() = h;
    loadings = principal_axes(reduced, s.n_factors);
    Vector next = loadings.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < p; ++i) {
      if (next(i) > 1.0 || next(i) < 0.0) {
        clamped[static_cast<std::size_t>(i)] = true;
        next(i) = std::clamp(next(i), 0.0, 1.0);
      }
    }
    const double change = (next - h).cwiseAbs().maxCoeff();
    h = next;
    if (change < s.tol) {
      converged = true;
      break;
    }
  }

  for (Eigen::Index i = 0; i < p; ++i) {
    if (clamped[static_cast<std::size_t>(i)]) {
      ex.warnings.push_back(fmt::format("Heywood case: communality of '{}' clamped to [0, 1]",
                                        r.labels[static_cast<std::size_t>(i)]));
    }
  }
  normalize_columns(loadings);
  ex.unrotated = LoadingMatrix{std::move(loadings), Rotation::none, r.labels};
  ex.communalities = ex.unrotated.values.rowwise().squaredNorm();
  ex.iterations = it;
  if (!converged) {
    throw ExtractionNotConverged(
        fmt::format("ULS extraction did not converge in {} iterations", s.max_iter), std::move(ex));
  }
  return ex;
}

std::vector<std::string> Categorization::members_of(int factor) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < memberships.size(); ++i) {
    if (std::find(memberships[i].begin(), memberships[i].end(), factor) != memberships[i].end()) {
      out.push_back(labels[i]);
    }
  }
  return out;
}

Categorization categorize(const LoadingMatrix& l, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError(fmt::format("categorization threshold must be in (0, 1), got {}", threshold));
  }
  Categorization c;
  c.threshold = threshold;
  c.labels = l.labels;
  c.memberships.resize(static_cast<std::size_t>(l.variables()));
  for (Eigen::Index i = 0; i < l.variables(); ++i) {
    for (Eigen::Index j = 0; j < l.factors(); ++j) {
      if (std::abs(l.values(i, j)) > threshold) {
        c.memberships[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
      }
    }
  }
  return c;
}

double tucker_congruence(const Vector& a, const Vector& b) {
  const double denom = std::sqrt(a.squaredNorm() * b.squaredNorm());
  return denom > 0.0 ? a.dot(b) / denom : 0.0;
}

Alignment align_loadings(const LoadingMatrix& l, const LoadingMatrix& reference) {
  if (l.values.rows() != reference.values.rows() || l.values.cols() != reference.values.cols()) {
    throw ValidationError(fmt::format("align_loadings: shape {}x{} vs reference {}x{}", l.values.rows(),
                                      l.values.cols(), reference.values.rows(), reference.values.cols()));
  }
  const auto m = static_cast<int>(l.factors());
  if (m > 8) throw ValidationError("align_loadings supports at most 8 factors");

  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  Alignment best;
  best.congruence = -1.0;
  do {
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
      total += std::abs(tucker_congruence(l.values.col(perm[static_cast<std::size_t>(j)]), reference.values.col(j)));
    }
    if (total > best.congruence + 1e-12) {
      best.congruence = total;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  best.aligned = l;
  best.signs.assign(static_cast<std::size_t>(m), 1);
  for (int j = 0; j < m; ++j) {
    Vector col = l.values.col(best.permutation[static_cast<std::size_t>(j)]);
    if (tucker_congruence(col, reference.values.col(j)) < 0.0) {
      col = -col;
      best.signs[static_cast<std::size_t>(j)] = -1;
    }
    best.aligned.values.col(j) = col;
  }
  return best;
}

EFAResult efa_on_data(const Matrix& data, std::vector<std::string> labels, stats::Transform transform,
                      const ExtractionSettings& settings, const RotationSpec& rotation) {
  Matrix transformed(data.rows(), data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    std::vector<double> col(data.col(j).data(), data.col(j).data() + data.rows());
    std::vector<double> t;
    try {
      t = stats::apply_transform(col, transform);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("variable '{}': {}", labels[static_cast<std::size_t>(j)], e.what()));
    }
    transformed.col(j) = Eigen::Map<const Vector>(t.data(), data.rows());
  }

  EFAResult res;
  res.correlations = correlation_matrix(transformed, std::move(labels));
  auto ex = uls_extract(res.correlations, settings);
  res.unrotated = ex.unrotated;
  res.communalities = ex.communalities;
  res.iterations = ex.iterations;
  res.warnings = std::move(ex.warnings);

  switch (rotation.kind) {
    case Rotation::none:
      res.rotated = res.unrotated;
      res.ss_loadings = res.rotated.values.colwise().squaredNorm().transpose();
      break;
    case Rotation::varimax: {
      res.rotated = varimax(res.unrotated, rotation.kaiser_normalize).rotated;
      res.ss_loadings = res.rotated.values.colwise().squaredNorm().transpose();
      break;
    }
    case Rotation::promax: {
      const auto vm = varimax(res.unrotated, true).rotated;
      auto pm = promax(vm, rotation.kappa);
      res.rotated = std::move(pm.pattern);
      res.ss_loadings = pm.structure.colwise().squaredNorm().transpose();
      res.structure = std::move(pm.structure);
      res.phi = std::move(pm.phi);
      break;
    }
  }
  res.variance_explained = res.ss_loadings / static_cast<double>(res.correlations.dim());
  return res;
}

EFAResult efa_pipeline(const IndicatorTable& table, std::span<const std::string> variables,
                       stats::Transform transform, const ExtractionSettings& settings,
                       const RotationSpec& rotation) {
  return efa_on_data(table.select(variables), {variables.begin(), variables.end()}, transform, settings,
                     rotation);
}

}  // namespace hirschfa::efa
