#include "spinfact/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "spinfact/minimize.hpp"

namespace spinfact {

Factorizer::CachedExp::CachedExp(const Eigen::MatrixXd& a) {
  const Eigen::Index d = a.rows();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.cast<Complex>());
  const Eigen::VectorXcd& evals = es.eigenvalues();
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::MatrixXcd vinv = v.partialPivLu().inverse();
  if ((v * evals.asDiagonal() * vinv - a.cast<Complex>()).cwiseAbs().maxCoeff() > 1e-9 ||
      evals.real().cwiseAbs().maxCoeff() > 1e-9) {
    throw std::runtime_error("adjoint matrix does not have a clean imaginary spectrum");
  }
  // group eigenvalues iw by frequency and form the spectral projectors
  std::vector<std::vector<Eigen::Index>> groups;
  auto group_of = [&](double w) -> std::vector<Eigen::Index>& {
    for (std::size_t g = 0; g < freqs.size(); ++g) {
      if (std::abs(freqs[g] - w) < 1e-8) return groups[g];
    }
    freqs.push_back(w);
    groups.emplace_back();
    return groups.back();
  };
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double w = evals[k].imag();
    if (std::abs(w) < 1e-8) {
      kernel.push_back(k);
    } else if (w > 0.0) {
      group_of(w).push_back(k);
    }
  }
  auto projector = [&](const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index k : idx) p += v.col(k) * vinv.row(k);
    return p;
  };
  p0 = projector(kernel).real();
  for (const std::vector<Eigen::Index>& idx : groups) {
    const Eigen::MatrixXcd p = projector(idx);
    cosm.push_back(2.0 * p.real());
    sinm.push_back(-2.0 * p.imag());
  }
}

Eigen::MatrixXd Factorizer::CachedExp::at(double t) const {
  Eigen::MatrixXd out = p0;
  for (std::size_t g = 0; g < freqs.size(); ++g) {
    out += std::cos(freqs[g] * t) * cosm[g] + std::sin(freqs[g] * t) * sinm[g];
  }
  return out;
}

namespace {

// splits the span of a family of commuting-closed adjoint matrices into
// simultaneous invariant subspaces: eigenvectors of a generic element are
// grouped by bracket connectivity (the bracket of coefficient vectors u, w
// is ad(u) w).  Falls back to one component covering the whole space if the
// split fails to verify.
std::vector<Eigen::MatrixXd> invariant_components(const std::vector<Eigen::MatrixXd>& ads) {
  const Eigen::Index d = ads.front().rows();
  const int nb = static_cast<int>(ads.size());
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Eigen::MatrixXd generic = Eigen::MatrixXd::Zero(d, d);
  for (const Eigen::MatrixXd& a : ads) generic += coeff(rng) * a;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(generic.cast<Complex>());
  const Eigen::MatrixXcd& v = es.eigenvectors();

  // eigenvectors at distinct nonzero frequencies are clean (no degeneracy to
  // mix them), so each one seeds a component; the kernel of the generic
  // element is highly degenerate and its eigenvectors mix across components,
  // so the missing zero-frequency directions are recovered by closing each
  // seed span under the adjoint action instead
  const auto close_span = [&](Eigen::MatrixXd u) {
    bool grew = true;
    while (grew) {
      grew = false;
      for (int p = 0; p < nb; ++p) {
        Eigen::MatrixXd img = ads[p] * u;
        img -= u * (u.transpose() * img);
        if (img.cwiseAbs().maxCoeff() < 1e-8) continue;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(img);
        qr.setThreshold(1e-6);
        const Eigen::Index r = qr.rank();
        if (r == 0) continue;
        Eigen::MatrixXd grown(d, u.cols() + r);
        grown << u, qr.householderQ() * Eigen::MatrixXd::Identity(d, r);
        Eigen::HouseholderQR<Eigen::MatrixXd> clean(grown);
        u = clean.householderQ() * Eigen::MatrixXd::Identity(d, grown.cols());
        grew = true;
      }
    }
    return u;
  };

  // cluster positive frequencies, seed one span per cluster, close it
  std::vector<std::pair<double, Eigen::Index>> freqs;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (es.eigenvalues()[i].imag() > 1e-6) freqs.emplace_back(es.eigenvalues()[i].imag(), i);
  }
  std::sort(freqs.begin(), freqs.end());
  std::vector<Eigen::MatrixXd> spans;
  for (std::size_t s = 0; s < freqs.size();) {
    std::size_t e = s + 1;
    while (e < freqs.size() && freqs[e].first - freqs[e - 1].first < 1e-6) ++e;
    Eigen::MatrixXd raw(d, 2 * static_cast<Eigen::Index>(e - s));
    for (std::size_t c = s; c < e; ++c) {
      raw.col(2 * static_cast<Eigen::Index>(c - s)) = v.col(freqs[c].second).real();
      raw.col(2 * static_cast<Eigen::Index>(c - s) + 1) = v.col(freqs[c].second).imag();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(raw);
    qr.setThreshold(1e-8);
    spans.push_back(
        close_span(qr.householderQ() * Eigen::MatrixXd::Identity(d, qr.rank())));
    s = e;
  }

  // seeds whose closures meet belong to the same ideal: merge them
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < spans.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < spans.size() && !merged; ++j) {
        if ((spans[i].transpose() * spans[j]).cwiseAbs().maxCoeff() > 1e-6) {
          Eigen::MatrixXd both(d, spans[i].cols() + spans[j].cols());
          both << spans[i], spans[j];
          Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(both);
          qr.setThreshold(1e-8);
          spans[i] = qr.householderQ() * Eigen::MatrixXd::Identity(d, qr.rank());
          spans.erase(spans.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
  }
  Eigen::Index total = 0;
  for (const Eigen::MatrixXd& u : spans) total += u.cols();
  const std::size_t groups = spans.size();
  // verify: dimensions add up and every adjoint leaves every span invariant
  bool ok = total == d;
  for (const Eigen::MatrixXd& u : spans) {
    for (const Eigen::MatrixXd& a : ads) {
      const Eigen::MatrixXd img = a * u;
      if ((img - u * (u.transpose() * img)).cwiseAbs().maxCoeff() > 1e-8) ok = false;
      if (!ok) break;
    }
    if (!ok) break;
  }
  if (std::getenv("SPINFACT_FACT_VERBOSE") != nullptr) {
    std::fprintf(stderr, "invariant_components: %zu groups total=%d d=%d verified=%s\n",
                 groups, static_cast<int>(total), static_cast<int>(d),
                 ok ? "yes" : "no");
  }
  if (!ok) {
    spans.assign(1, Eigen::MatrixXd::Identity(d, d));
  }
  return spans;
}

}  // namespace

Factorizer::Factorizer(const LieAlgebraModel& model) : model_(&model) {
  if (!model.appendix_mode) throw std::invalid_argument("factorizer needs the appendix basis");
  const int m = model.dim();

  // coordinates of the symmetrized generator over the appendix basis: the
  // elementary generators are its first entries, so the coefficients carry
  // over directly (a least-squares projection would be ill-posed when the
  // tabulated basis is linearly dependent as matrices)
  SymmetrizedGenerator sym = build_symmetrized(model.family);
  SpMat assembled = assemble(model.set, sym);
  const int n_elem = static_cast<int>(sym.specs.size());
  if (n_elem > m) throw std::runtime_error("appendix basis smaller than the elementary set");
  target_coeffs_ = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < n_elem; ++k) {
    // basis[k] = s * E_k up to a scalar (the tables sometimes list the
    // conjugate orientation, flipping the sign)
    const SpMat elem = build_generator(model.set, sym.specs[k]);
    const double s = hs_inner(model.basis[k], elem) / hs_inner(elem, elem);
    if (std::abs(s) < 1e-12 ||
        to_dense(SpMat(elem - SpMat((1.0 / s) * model.basis[k]))).cwiseAbs().maxCoeff() >
            1e-10) {
      throw std::runtime_error("appendix basis does not begin with the elementary generators");
    }
    target_coeffs_[k] = sym.coefficients[k] / s;
  }
  if (to_dense(SpMat(model.assemble_coeffs(target_coeffs_) - assembled))
          .cwiseAbs()
          .maxCoeff() > 1e-10) {
    throw std::runtime_error("symmetrized generator not reproduced by the algebra basis");
  }

  // center combinations and the split Z_i = eps_i A_{k_i} + R_i
  for (const Combination& combo : load_centers(model.family)) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
    for (const auto& [idx, coeff] : combo.terms) z[idx - 1] = coeff;
    if (adjoint_matrix(model, z).cwiseAbs().maxCoeff() > 1e-9) {
      throw std::runtime_error(combo.name + " is not central");
    }
    int paired = -1;
    for (const auto& [idx, coeff] : combo.terms) {
      if (idx - 1 < n_elem) {
        if (paired >= 0) throw std::runtime_error(combo.name + " pairs two elementary elements");
        if (std::abs(std::abs(coeff) - 1.0) > 1e-12) {
          throw std::runtime_error(combo.name + " elementary coefficient is not a sign");
        }
        paired = idx - 1;
      }
    }
    if (paired < 0) throw std::runtime_error(combo.name + " pairs no elementary element");
    const double eps = z[paired];
    z_coeffs_.push_back(z);
    paired_elementary_.push_back(paired);
    central_angles_unit_.push_back(target_coeffs_[paired] * eps);
  }
  // every elementary element must be paired with exactly one center
  std::vector<int> sorted = paired_elementary_;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < n_elem; ++k) {
    if (k >= static_cast<int>(sorted.size()) || sorted[k] != k) {
      throw std::runtime_error("center combinations do not cover the elementary elements");
    }
  }

  // semisimple target S = -sum_i c_{k_i} eps_i R_i
  semisimple_target_ = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < z_coeffs_.size(); ++i) {
    Eigen::VectorXd r = z_coeffs_[i];
    r[paired_elementary_[i]] = 0.0;
    semisimple_target_ -= central_angles_unit_[i] * r;
  }
  // split identity: c = sum_i c_{k_i} eps_i z_i + S
  Eigen::VectorXd recomposed = semisimple_target_;
  for (std::size_t i = 0; i < z_coeffs_.size(); ++i) {
    recomposed += central_angles_unit_[i] * z_coeffs_[i];
  }
  if ((recomposed - target_coeffs_).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::runtime_error("central split does not recompose the target");
  }
  // ... and in the Fock representation
  SpMat fock_right(assembled.rows(), assembled.cols());
  for (std::size_t i = 0; i < z_coeffs_.size(); ++i) {
    fock_right = SpMat(fock_right + SpMat(central_angles_unit_[i] *
                                          model.assemble_coeffs(z_coeffs_[i])));
  }
  fock_right = SpMat(fock_right + model.assemble_coeffs(semisimple_target_));
  if (to_dense(SpMat(fock_right - assembled)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::runtime_error("central split fails in the Fock representation");
  }

  // commuting-ideal blocks of the derived algebra with restricted adjoints
  for (const std::vector<int>& members : ideal_partition(model)) {
    Block block;
    block.members = members;
    const int d = static_cast<int>(members.size());
    std::vector<int> pos(m, -1);
    for (int p = 0; p < d; ++p) pos[members[p]] = p;
    for (int s : members) {
      Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(d, d);
      for (int p = 0; p < d; ++p) {
        for (const StructureTerm& t : model.structure[s][members[p]]) {
          if (pos[t.k] < 0) throw std::runtime_error("ideal block is not invariant");
          ad(pos[t.k], p) = t.coeff;
        }
      }
      block.ads.push_back(std::move(ad));
    }
    for (const Eigen::MatrixXd& u : invariant_components(block.ads)) {
      Component comp;
      comp.u = u;
      for (int p = 0; p < static_cast<int>(block.ads.size()); ++p) {
        const Eigen::MatrixXd b = u.transpose() * block.ads[p] * u;
        if (b.cwiseAbs().maxCoeff() < 1e-12) continue;
        comp.active.push_back(p);
        comp.exps.emplace_back(b);
        comp.b.push_back(b);
      }
      block.comps.push_back(std::move(comp));
    }
    if (std::getenv("SPINFACT_FACT_VERBOSE") != nullptr) {
      std::fprintf(stderr, "block %zu: %zu components dims:", blocks_.size(),
                   block.comps.size());
      for (const Component& c : block.comps) {
        std::fprintf(stderr, " %d(%zu)", static_cast<int>(c.u.cols()), c.active.size());
      }
      std::fprintf(stderr, "\n");
    }
    blocks_.push_back(std::move(block));
    for (int k : members) semisimple_idx_.push_back(k);
  }
  std::sort(semisimple_idx_.begin(), semisimple_idx_.end());
  {
    // S must live inside the semisimple span
    Eigen::VectorXd leak = semisimple_target_;
    for (int k : semisimple_idx_) leak[k] = 0.0;
    if (leak.cwiseAbs().maxCoeff() > 1e-12) {
      throw std::runtime_error("semisimple target leaks outside the derived algebra");
    }
  }

  // eigendecomposition caches for the Fock certification
  basis_exp_.resize(m);
  for (const Eigen::VectorXd& z : z_coeffs_) {
    center_exp_.push_back(
        std::make_unique<AntiHermitianExp>(to_dense(model.assemble_coeffs(z))));
  }
  target_exp_ = std::make_unique<AntiHermitianExp>(to_dense(assembled));
}

const AntiHermitianExp& Factorizer::basis_exp(int k) const {
  if (!basis_exp_[k]) {
    basis_exp_[k] = std::make_unique<AntiHermitianExp>(to_dense(model_->basis[k]));
  }
  return *basis_exp_[k];
}

FactorizationResult Factorizer::factorize(double theta, unsigned seed) const {
  FactorizationResult out;
  out.family = model_->family;
  out.theta = theta;
  out.seed = seed;
  for (std::size_t i = 0; i < z_coeffs_.size(); ++i) {
    out.central.push_back({static_cast<int>(i) + 1, theta * central_angles_unit_[i]});
  }

  std::vector<double> solved(model_->dim(), 0.0);
  double total_cost = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const Block& block = blocks_[b];
    const int nb = static_cast<int>(block.members.size());
    const int d = static_cast<int>(block.ads.front().rows());

    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(d, d);
    for (int p = 0; p < nb; ++p) gen += semisimple_target_[block.members[p]] * block.ads[p];

    // cost ||target - prod_s exp(t_s B_s)||_F^2 with product-rule gradients.
    // The adjoints are simultaneously block-diagonal over the invariant
    // components, so the Frobenius cost is the exact sum of the per-component
    // costs (orthogonal change of basis), each over small matrices.
    const std::size_t nc = block.comps.size();
    std::vector<Eigen::MatrixXd> targets(nc);
    auto set_targets = [&](double th) {
      for (std::size_t c = 0; c < nc; ++c) {
        const Eigen::MatrixXd& u = block.comps[c].u;
        targets[c] = expm(Eigen::MatrixXd(th * (u.transpose() * gen * u)));
      }
    };
    auto objective = [&](const Eigen::VectorXd& t, Eigen::VectorXd* grad) {
      double f = 0.0;
      if (grad != nullptr) {
        grad->resize(nb);
        grad->setZero();
      }
      for (std::size_t c = 0; c < nc; ++c) {
        const Component& comp = block.comps[c];
        const int na = static_cast<int>(comp.active.size());
        const Eigen::Index m = comp.u.cols();
        std::vector<Eigen::MatrixXd> factors(na);
        for (int q = 0; q < na; ++q) factors[q] = comp.exps[q].at(t[comp.active[q]]);
        std::vector<Eigen::MatrixXd> prefix(na + 1), suffix(na + 1);
        prefix[0] = Eigen::MatrixXd::Identity(m, m);
        suffix[na] = Eigen::MatrixXd::Identity(m, m);
        for (int q = 0; q < na; ++q) prefix[q + 1] = prefix[q] * factors[q];
        for (int q = na - 1; q >= 0; --q) suffix[q] = factors[q] * suffix[q + 1];
        const Eigen::MatrixXd diff = prefix[na] - targets[c];
        f += diff.squaredNorm();
        if (grad != nullptr) {
          for (int q = 0; q < na; ++q) {
            const Eigen::MatrixXd dq = prefix[q] * (comp.b[q] * factors[q]) * suffix[q + 1];
            (*grad)[comp.active[q]] += 2.0 * (diff.array() * dq.array()).sum();
          }
        }
      }
      return f;
    };

    MinimizeOptions opts;
    opts.max_iterations = 2000;
    opts.f_target = 1e-14;
    opts.grad_tol = 1e-11;

    // continuation in theta: step the angle up in small increments, warm
    // starting each solve from the previous one; large blocks at large
    // angles are far outside the basin of the linearized initial guess
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(theta) / 0.4)));
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(nb);
    double theta_prev = 0.0;
    MinimizeResult best;
    for (int s = 1; s <= steps; ++s) {
      const double theta_s = theta * s / steps;
      set_targets(theta_s);
      Eigen::VectorXd t0 = warm;
      for (int p = 0; p < nb; ++p) {
        t0[p] += (theta_s - theta_prev) * semisimple_target_[block.members[p]];
      }
      best = bfgs(objective, t0, opts);
      out.iterations += best.iterations;
      const double width = 0.3 * (1.0 + std::abs(theta_s));
      for (int r = 1; r <= 8 && best.f > 1e-12; ++r) {
        std::mt19937 rng(seed * 7919u + static_cast<unsigned>(b) * 131u +
                         static_cast<unsigned>(s) * 17u + static_cast<unsigned>(r));
        std::uniform_real_distribution<double> noise(-width, width);
        Eigen::VectorXd start = t0;
        for (int p = 0; p < nb; ++p) start[p] += noise(rng);
        MinimizeResult attempt = bfgs(objective, start, opts);
        out.iterations += attempt.iterations;
        out.restarts_used = std::max(out.restarts_used, r);
        if (attempt.f < best.f) best = attempt;
      }
      warm = best.x;
      theta_prev = theta_s;
      if (std::getenv("SPINFACT_FACT_VERBOSE") != nullptr) {
        std::fprintf(stderr, "block=%zu step=%d/%d theta_s=%.3f f=%.3g iters=%d restarts=%d\n",
                     b, s, steps, theta_s, best.f, best.iterations, out.restarts_used);
      }
    }
    total_cost += best.f;
    for (int p = 0; p < nb; ++p) solved[block.members[p]] = best.x[p];
  }
  out.cost_residual = total_cost;

  for (int k : semisimple_idx_) out.semisimple.push_back({k + 1, solved[k]});
  out.fock_residual = fock_residual(out);
  if (out.cost_residual > 1e-10 || out.fock_residual > 1e-6) {
    throw std::runtime_error("factorization failed to certify");
  }
  return out;
}

double Factorizer::fock_residual(const FactorizationResult& result) const {
  const Eigen::Index n = model_->basis.front().rows();
  Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(n, n);
  // accumulate right-to-left so the leftmost factor is applied last
  for (auto it = result.semisimple.rbegin(); it != result.semisimple.rend(); ++it) {
    basis_exp(it->basis_index - 1).apply_left(it->t, prod);
  }
  for (auto it = result.central.rbegin(); it != result.central.rend(); ++it) {
    center_exp_[it->z_index - 1]->apply_left(it->angle, prod);
  }
  return (prod - target_exp_->at(result.theta)).norm();
}

void write_factorization_json(const FactorizationResult& result, const std::string& path) {
  nlohmann::ordered_json j;
  j["family"] = family_name(result.family);
  j["theta"] = result.theta;
  nlohmann::ordered_json central = nlohmann::ordered_json::array();
  for (const CentralFactor& f : result.central) {
    central.push_back({{"z_index", f.z_index}, {"angle", f.angle}});
  }
  j["central"] = central;
  nlohmann::ordered_json semi = nlohmann::ordered_json::array();
  for (const SemisimpleFactor& f : result.semisimple) {
    semi.push_back({{"basis_index", f.basis_index}, {"t", f.t}});
  }
  j["semisimple"] = semi;
  j["cost_residual"] = result.cost_residual;
  j["fock_residual"] = result.fock_residual;
  j["iterations"] = result.iterations;
  j["restarts"] = result.restarts_used;
  j["seed"] = result.seed;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace spinfact
