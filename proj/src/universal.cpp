#include "srdf/universal.hpp"

#include "srdf/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace srdf {

ParamFamily::ParamFamily(std::vector<ParamInterval> box, CovarianceMap covAt, int gridRes,
                         std::optional<Vector> priorDensity, std::size_t nodeCap)
    : box_(std::move(box)), gridRes_(gridRes) {
  if (box_.empty()) throw Error(ErrorCode::InvalidFamily, "family needs at least one parameter");
  if (gridRes_ < 1) throw Error(ErrorCode::InvalidFamily, "grid resolution must be positive");
  for (const auto& iv : box_)
    if (!(iv.hi >= iv.lo)) throw Error(ErrorCode::InvalidFamily, "parameter interval has hi < lo");

  const auto d = box_.size();
  double count = std::pow(static_cast<double>(gridRes_), static_cast<double>(d));
  if (count > static_cast<double>(nodeCap)) {
    std::ostringstream os;
    os << "grid of " << count << " nodes exceeds cap " << nodeCap;
    throw Error(ErrorCode::GridTooLarge, os.str());
  }
  const auto nodes = static_cast<std::size_t>(count);
  nodes_.reserve(nodes);
  models_.reserve(nodes);
  for (std::size_t flat = 0; flat < nodes; ++flat) {
    Vector tau(static_cast<Eigen::Index>(d));
    std::size_t rest = flat;
    for (std::size_t p = d; p-- > 0;) {
      const auto j = rest % static_cast<std::size_t>(gridRes_);
      rest /= static_cast<std::size_t>(gridRes_);
      const auto& iv = box_[p];
      tau(static_cast<Eigen::Index>(p)) =
          gridRes_ == 1 ? 0.5 * (iv.lo + iv.hi)
                        : iv.lo + (iv.hi - iv.lo) * static_cast<double>(j) / static_cast<double>(gridRes_ - 1);
    }
    models_.push_back(validate_covariance(covAt(tau)));
    nodes_.push_back(std::move(tau));
  }
  if (models_.front().dim() < 1) throw Error(ErrorCode::InvalidFamily, "empty covariance");
  for (const auto& m : models_)
    if (m.dim() != models_.front().dim()) throw Error(ErrorCode::InvalidFamily, "family members differ in dimension");

  if (priorDensity) {
    if (static_cast<std::size_t>(priorDensity->size()) != nodes)
      throw Error(ErrorCode::InvalidFamily, "prior must give one density value per grid node");
    if (!priorDensity->allFinite() || priorDensity->minCoeff() < 0.0 || !(priorDensity->sum() > 0.0))
      throw Error(ErrorCode::InvalidFamily, "prior density must be nonnegative with positive mass");
    prior_ = *priorDensity / priorDensity->sum();
  }
}

ParamFamily example3_family(double sigma2, double rMin, double rMax, int gridRes,
                            std::optional<Vector> priorDensity) {
  if (!(sigma2 > 0.0) || !(rMin > -1.0 && rMax < 1.0 && rMin <= rMax))
    throw Error(ErrorCode::InvalidFamily, "example3 family needs sigma2 > 0 and -1 < rMin <= rMax < 1");
  auto covAt = [sigma2](const Vector& tau) {
    Matrix s(2, 2);
    s << sigma2, tau(0) * sigma2, tau(0) * sigma2, sigma2;
    return s;
  };
  ParamFamily family({{rMin, rMax}}, covAt, gridRes, std::move(priorDensity));
  family.example3_variance = sigma2;
  return family;
}

ParamFamily example3_family(double sigma2, double rMin, double rMax, int gridRes, bool uniformPrior) {
  std::optional<Vector> prior;
  if (uniformPrior) prior = Vector::Ones(std::max(gridRes, 1));
  return example3_family(sigma2, rMin, rMax, gridRes, std::move(prior));
}

ParamFamily affine_family(Matrix base, std::vector<Matrix> coeffs, std::vector<ParamInterval> box, int gridRes,
                          std::optional<Vector> priorDensity) {
  if (coeffs.size() != box.size()) throw Error(ErrorCode::InvalidFamily, "one coefficient matrix per parameter");
  for (const auto& c : coeffs)
    if (c.rows() != base.rows() || c.cols() != base.cols())
      throw Error(ErrorCode::InvalidFamily, "coefficient matrix shape differs from base");
  auto covAt = [base = std::move(base), coeffs = std::move(coeffs)](const Vector& tau) {
    Matrix s = base;
    for (std::size_t p = 0; p < coeffs.size(); ++p) s += tau(static_cast<Eigen::Index>(p)) * coeffs[p];
    return s;
  };
  return ParamFamily(std::move(box), covAt, gridRes, std::move(priorDensity));
}

bool AmbiguityPartition::all_singletons() const {
  return std::all_of(atoms.begin(), atoms.end(), [](const AmbiguityAtom& a) { return a.members.size() == 1; });
}

AmbiguityPartition project_family(const ParamFamily& family, const SamplingSet& set, double atomTol) {
  const std::size_t n = family.node_count();
  std::vector<Matrix> blocks;
  blocks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) blocks.push_back(gather(family.model(i).sigma(), set.indices(), set.indices()));

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((blocks[i] - blocks[j]).cwiseAbs().maxCoeff() < atomTol) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }

  AmbiguityPartition out{set, {}};
  std::vector<std::ptrdiff_t> atomOf(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (atomOf[root] < 0) {
      atomOf[root] = static_cast<std::ptrdiff_t>(out.atoms.size());
      out.atoms.push_back(AmbiguityAtom{blocks[i], {}, std::nullopt});
    }
    auto& atom = out.atoms[static_cast<std::size_t>(atomOf[root])];
    atom.members.push_back(i);
    if (family.prior()) atom.weight = atom.weight.value_or(0.0) + (*family.prior())(static_cast<Eigen::Index>(i));
  }
  return out;
}

BayesAtomData bayes_atom_data(const ParamFamily& family, const AmbiguityPartition& partition, std::size_t atomIndex) {
  if (!family.prior()) throw Error(ErrorCode::NoPrior, "Bayesian quantities need a prior");
  if (atomIndex >= partition.atoms.size()) throw Error(ErrorCode::EmptyAtom, "atom index out of range");
  const AmbiguityAtom& atom = partition.atoms[atomIndex];
  if (atom.members.empty()) throw Error(ErrorCode::EmptyAtom, "atom has no members");

  const auto& a = partition.set.indices();
  const auto& ac = partition.set.complement();
  const auto k = static_cast<Eigen::Index>(a.size());
  const auto u = static_cast<Eigen::Index>(ac.size());

  BayesAtomData out;
  out.sigmaA = atom.tau1;
  out.sigmaAAcBar = Matrix::Zero(k, u);
  out.varAcBar = Vector::Zero(u);
  double mass = 0.0;
  for (auto member : atom.members) {
    const double w = (*family.prior())(static_cast<Eigen::Index>(member));
    const Matrix& s = family.model(member).sigma();
    out.sigmaAAcBar += w * gather(s, a, ac);
    for (Eigen::Index j = 0; j < u; ++j) out.varAcBar(j) += w * s(ac[j], ac[j]);
    mass += w;
  }
  out.weight = mass;
  if (mass > 0.0) {
    out.sigmaAAcBar /= mass;
    out.varAcBar /= mass;
  } else {
    // Zero-mass atom: fall back to the unweighted average so the data stay defined.
    for (auto member : atom.members) {
      const Matrix& s = family.model(member).sigma();
      out.sigmaAAcBar += gather(s, a, ac);
      for (Eigen::Index j = 0; j < u; ++j) out.varAcBar(j) += s(ac[j], ac[j]);
    }
    out.sigmaAAcBar /= static_cast<double>(atom.members.size());
    out.varAcBar /= static_cast<double>(atom.members.size());
  }

  out.gTau1 = weight_matrix(out.sigmaA, out.sigmaAAcBar);
  double explained = 0.0;
  if (u > 0) {
    const Eigen::LLT<Matrix> llt(out.sigmaA);
    explained = out.sigmaAAcBar.cwiseProduct(llt.solve(out.sigmaAAcBar)).sum();
  }
  out.deltaMinTau1 = std::max(0.0, out.varAcBar.sum() - explained);
  out.deltaMaxTau1 = out.sigmaA.trace() + out.varAcBar.sum();
  out.lambdas = congruent_eigenvalues(out.sigmaA, out.gTau1);
  return out;
}

SrdfPoint rho_bayes(const BayesAtomData& atom, double delta) {
  return srdf_from_spectrum(atom.lambdas, atom.deltaMinTau1, atom.deltaMaxTau1, delta);
}

double bayes_distortion_rate(const BayesAtomData& atom, double rateBits) {
  return distortion_rate(atom.lambdas, atom.deltaMinTau1, rateBits);
}

BayesUsrdfResult bayes_usrdf(const ParamFamily& family, const SamplingSet& set, double delta,
                             const UsrdfOptions& options) {
  if (!family.prior()) throw Error(ErrorCode::NoPrior, "Bayesian USRDf needs a prior");
  const AmbiguityPartition part = project_family(family, set, options.atomTol);
  std::vector<BayesAtomData> atoms(part.atoms.size());
  parallel_for(atoms.size(), options.threads, [&](std::size_t i) { atoms[i] = bayes_atom_data(family, part, i); });

  BayesUsrdfResult out;
  for (const auto& at : atoms) {
    out.deltaMin += at.weight * at.deltaMinTau1;
    out.deltaMax += at.weight * at.deltaMaxTau1;
    out.weights.push_back(at.weight);
  }
  if (!(delta > out.deltaMin)) {
    std::ostringstream os;
    os << "delta " << delta << " <= Bayesian minimum distortion " << out.deltaMin;
    throw Error(ErrorCode::InfeasibleDistortion, os.str());
  }

  auto averaged = [&](double r) {
    double total = 0.0;
    for (const auto& at : atoms) total += at.weight * bayes_distortion_rate(at, r);
    return total;
  };

  if (delta >= out.deltaMax) {
    out.trivial = true;
    out.rateBits = 0.0;
  } else {
    // Average distortion is decreasing in the common rate.
    double lo = 0.0, hi = kRateCapBits;
    while (hi - lo > 1e-3 * kUsrdfTol) {
      const double mid = 0.5 * (lo + hi);
      (averaged(mid) > delta ? lo : hi) = mid;
    }
    out.rateBits = 0.5 * (lo + hi);
  }
  for (const auto& at : atoms) {
    const double d = bayes_distortion_rate(at, out.rateBits);
    out.allocation.push_back(d);
    out.atomRates.push_back(d > at.deltaMinTau1 ? rho_bayes(at, d).rateBits : kRateCapBits);
  }
  return out;
}

NonBayesUsrdfResult nonbayes_usrdf(const ParamFamily& family, const SamplingSet& set, double delta,
                                   const UsrdfOptions& options) {
  const AmbiguityPartition part = project_family(family, set, options.atomTol);
  NonBayesUsrdfResult out;
  for (std::size_t i = 0; i < family.node_count(); ++i)
    out.deltaMax = std::max(out.deltaMax, max_distortion(family.model(i)));

  if (part.all_singletons()) {
    out.method = "singleton-atoms";
    std::vector<double> floors(part.atoms.size());
    std::vector<Vector> spectra(part.atoms.size());
    std::vector<double> ceilings(part.atoms.size());
    parallel_for(part.atoms.size(), options.threads, [&](std::size_t i) {
      const CovarianceModel& member = family.model(part.atoms[i].members.front());
      const BlockPartition bp = partition(member, set);
      floors[i] = min_distortion(bp);
      spectra[i] = srdf_eigenvalues(bp);
      ceilings[i] = max_distortion(member);
    });
    out.deltaMin = *std::max_element(floors.begin(), floors.end());
    if (!(delta > out.deltaMin)) throw Error(ErrorCode::InfeasibleDistortion, "delta at or below worst-case floor");
    out.rateBits = -1.0;
    for (std::size_t i = 0; i < part.atoms.size(); ++i) {
      const double r = srdf_from_spectrum(spectra[i], floors[i], ceilings[i], delta).rateBits;
      if (r > out.rateBits) {
        out.rateBits = r;
        out.worstAtom = i;
      }
    }
    out.trivial = delta >= out.deltaMax;
    return out;
  }

  if (family.example3_variance && set.size() == 1 && family.dim() == 2) {
    out.method = "example3-closed-form";
    const double s2 = *family.example3_variance;
    // Weakest correlation magnitude in the box is the worst case.
    const auto& iv = family.box().front();
    const double rMin = (iv.lo <= 0.0 && iv.hi >= 0.0) ? 0.0 : std::min(std::abs(iv.lo), std::abs(iv.hi));
    out.deltaMin = s2 * (1.0 - rMin * rMin);
    out.deltaMax = 2.0 * s2;
    if (!(delta > out.deltaMin)) throw Error(ErrorCode::InfeasibleDistortion, "delta at or below worst-case floor");
    if (delta >= out.deltaMax) {
      out.trivial = true;
      out.rateBits = 0.0;
    } else {
      out.rateBits = 0.5 * std::log2(s2 * (1.0 + rMin * rMin) / (delta - out.deltaMin));
    }
    return out;
  }

  throw Error(ErrorCode::UnsupportedFamily,
              "worst-case USRDf is only computed for singleton ambiguity atoms or the example3 family");
}

}  // namespace srdf
