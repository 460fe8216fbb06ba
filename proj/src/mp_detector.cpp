#include <algorithm>
#include <cmath>
#include <vector>

#include "afdm/detect.hpp"

namespace afdm {

namespace {

// Smallest interference-plus-noise variance allowed on an edge; keeps the
// likelihoods finite when n0 = 0.
constexpr double kVarianceFloor = 1e-15;

// Messages count as settled once no probability moves by more than this.
constexpr double kMessageTolerance = 1e-3;

// A symbol counts as confident once its posterior peak reaches this level.
constexpr double kConfidentPosterior = 0.99;

struct Edge {
  std::size_t obs;
  std::size_t sym;
  Complex h;
};

void softmax_inplace(std::vector<double>& logp, std::size_t offset, std::size_t q) {
  double top = logp[offset];
  for (std::size_t a = 1; a < q; ++a) top = std::max(top, logp[offset + a]);
  double total = 0.0;
  for (std::size_t a = 0; a < q; ++a) {
    logp[offset + a] = std::exp(logp[offset + a] - top);
    total += logp[offset + a];
  }
  for (std::size_t a = 0; a < q; ++a) logp[offset + a] /= total;
}

}  // namespace

std::string to_string(DetectorKind k) { return k == DetectorKind::Mp ? "mp" : "lmmse"; }

DetectorKind parse_detector(const std::string& name) {
  if (name == "lmmse") return DetectorKind::Lmmse;
  if (name == "mp") return DetectorKind::Mp;
  throw InvalidArgument("unknown detector '" + name + "'");
}

void DetectorConfig::validate() const {
  if (mp_iters < 1) throw InvalidArgument("mp_iters must be >= 1");
  if (!(mp_damping > 0.0 && mp_damping <= 1.0)) throw InvalidArgument("mp_damping must be in (0, 1]");
  if (!(mp_prune >= 0.0 && mp_prune < 1.0)) throw InvalidArgument("mp_prune must be in [0, 1)");
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw InvalidArgument("N0 must be finite and >= 0");
}

MpResult mp_detect(const ComplexVector& y, const ComplexMatrix& h, const DetectorConfig& cfg,
                   const Constellation& c) {
  cfg.validate();
  if (h.rows() != y.size()) throw InvalidSize("observation length does not match H");

  const auto rows = static_cast<std::size_t>(h.rows());
  const auto cols = static_cast<std::size_t>(h.cols());
  const std::size_t q = c.order();
  const auto& pts = c.points();

  const double threshold = cfg.mp_prune * h.cwiseAbs().maxCoeff();
  std::vector<Edge> edges;
  std::vector<std::size_t> obs_begin(rows + 1, 0);
  for (std::size_t m = 0; m < rows; ++m) {
    obs_begin[m] = edges.size();
    for (std::size_t n = 0; n < cols; ++n) {
      const Complex hv = h(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      if (hv != Complex{0.0, 0.0} && std::abs(hv) >= threshold) edges.push_back({m, n, hv});
    }
  }
  obs_begin[rows] = edges.size();

  std::vector<std::vector<std::size_t>> sym_edges(cols);
  for (std::size_t e = 0; e < edges.size(); ++e) sym_edges[edges[e].sym].push_back(e);

  // Symbol-to-observation probabilities, one q-block per edge.
  std::vector<double> prob(edges.size() * q, 1.0 / static_cast<double>(q));
  std::vector<double> loglik(edges.size() * q, 0.0);
  std::vector<Complex> edge_mean(edges.size());
  std::vector<double> edge_var(edges.size());
  std::vector<double> total(q);
  std::vector<double> extrinsic(q);

  std::vector<std::size_t> decision(cols, 0);
  std::vector<std::size_t> previous(cols, q);  // q marks "no decision yet"
  // Loopy message passing can drift after its best iterate, so the returned
  // decisions come from the iteration with the most confident symbols.
  std::vector<std::size_t> best = decision;
  double best_confidence = -1.0;
  std::vector<double> posterior(q);

  MpResult result;
  for (int iter = 1; iter <= cfg.mp_iters; ++iter) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      Complex mean{0.0, 0.0};
      double energy = 0.0;
      for (std::size_t a = 0; a < q; ++a) {
        const double p = prob[e * q + a];
        mean += p * pts[a];
        energy += p * std::norm(pts[a]);
      }
      edge_mean[e] = mean;
      edge_var[e] = std::max(0.0, energy - std::norm(mean));
    }

    // Observation side: Gaussian interference moments excluding the target symbol.
    for (std::size_t m = 0; m < rows; ++m) {
      Complex mu{0.0, 0.0};
      double var = cfg.n0;
      for (std::size_t e = obs_begin[m]; e < obs_begin[m + 1]; ++e) {
        mu += edges[e].h * edge_mean[e];
        var += std::norm(edges[e].h) * edge_var[e];
      }
      for (std::size_t e = obs_begin[m]; e < obs_begin[m + 1]; ++e) {
        const Complex mu_e = mu - edges[e].h * edge_mean[e];
        const double var_e = std::max(kVarianceFloor, var - std::norm(edges[e].h) * edge_var[e]);
        const Complex resid = y[static_cast<Eigen::Index>(m)] - mu_e;
        for (std::size_t a = 0; a < q; ++a)
          loglik[e * q + a] = -std::norm(resid - edges[e].h * pts[a]) / var_e;
      }
    }

    // Symbol side: extrinsic updates with damping and hard decisions.
    double largest_change = 0.0;
    std::size_t confident = 0;
    for (std::size_t n = 0; n < cols; ++n) {
      std::fill(total.begin(), total.end(), 0.0);
      for (std::size_t e : sym_edges[n])
        for (std::size_t a = 0; a < q; ++a) total[a] += loglik[e * q + a];

      for (std::size_t e : sym_edges[n]) {
        for (std::size_t a = 0; a < q; ++a) extrinsic[a] = total[a] - loglik[e * q + a];
        softmax_inplace(extrinsic, 0, q);
        for (std::size_t a = 0; a < q; ++a) {
          double& p = prob[e * q + a];
          const double updated = cfg.mp_damping * extrinsic[a] + (1.0 - cfg.mp_damping) * p;
          largest_change = std::max(largest_change, std::abs(updated - p));
          p = updated;
        }
      }
      decision[n] = static_cast<std::size_t>(
          std::max_element(total.begin(), total.end()) - total.begin());
      posterior = total;
      softmax_inplace(posterior, 0, q);
      confident += posterior[decision[n]] >= kConfidentPosterior;
    }

    const double confidence = static_cast<double>(confident) / static_cast<double>(cols);
    if (confidence > best_confidence) {
      best_confidence = confidence;
      best = decision;
    }
    result.iterations = iter;
    if (decision == previous && largest_change < kMessageTolerance) {
      result.converged = true;
      break;
    }
    previous = decision;
  }

  result.symbols.resize(static_cast<Eigen::Index>(cols));
  for (std::size_t n = 0; n < cols; ++n) result.symbols[static_cast<Eigen::Index>(n)] = pts[best[n]];
  return result;
}

}  // namespace afdm
