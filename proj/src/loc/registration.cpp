#include "uak/loc/registration.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace uak::loc {
namespace {

struct Correspondence {
  Eigen::Vector3d src_mean;
  Eigen::Matrix3d src_cov;
  Eigen::Vector3d tgt_mean;
  Eigen::Matrix3d tgt_cov;
};

struct Params {
  double tx = 0.0;
  double ty = 0.0;
  double theta = 0.0;
};

Eigen::Vector3d apply_planar(const Params& p, const Eigen::Vector3d& v) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {c * v.x() - s * v.y() + p.tx, s * v.x() + c * v.y() + p.ty, v.z()};
}

Eigen::Matrix3d rotate_cov(const Params& p, const Eigen::Matrix3d& cov) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  rot(0, 0) = c;
  rot(0, 1) = -s;
  rot(1, 0) = s;
  rot(1, 1) = c;
  return rot * cov * rot.transpose();
}

std::vector<Correspondence> match(const cloud::VoxelGaussianGrid& source,
                                  const cloud::VoxelGaussianGrid& target,
                                  const Params& p, double max_distance) {
  std::vector<Correspondence> out;
  out.reserve(source.cell_count());
  const double gate2 = max_distance * max_distance;
  for (const auto& [src_idx, src_cell] : source.sorted_cells()) {
    const Eigen::Vector3d moved = apply_planar(p, src_cell.mean);
    const cloud::VoxelIndex center = target.index_of(moved);
    const cloud::VoxelCell* best = nullptr;
    double best_d2 = gate2;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          const cloud::VoxelIndex idx{center.x + dx, center.y + dy,
                                      center.z + dz};
          const cloud::VoxelCell* cell = target.find(idx);
          if (!cell) continue;
          const double d2 = (cell->mean - moved).squaredNorm();
          if (d2 < best_d2) {
            best_d2 = d2;
            best = cell;
          }
        }
      }
    }
    if (best) {
      out.push_back({src_cell.mean, src_cell.covariance, best->mean,
                     best->covariance});
    }
  }
  return out;
}

struct BlockPartial {
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double cost = 0.0;
};

constexpr std::size_t kBlockSize = 256;

// Accumulates cost (and optionally the normal equations) over fixed-size
// blocks reduced in block order, so the floating-point summation order is
// independent of how many workers execute the blocks.
BlockPartial accumulate(const std::vector<Correspondence>& corrs,
                        const Params& p, bool with_jacobian, int workers) {
  const std::size_t n_blocks = (corrs.size() + kBlockSize - 1) / kBlockSize;
  std::vector<BlockPartial> partials(n_blocks);

  auto run_block = [&](std::size_t block) {
    BlockPartial acc;
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    const std::size_t begin = block * kBlockSize;
    const std::size_t end = std::min(begin + kBlockSize, corrs.size());
    for (std::size_t i = begin; i < end; ++i) {
      const Correspondence& corr = corrs[i];
      const Eigen::Vector3d moved = apply_planar(p, corr.src_mean);
      const Eigen::Vector3d r = corr.tgt_mean - moved;
      const Eigen::Matrix3d combined =
          corr.tgt_cov + rotate_cov(p, corr.src_cov);
      const Eigen::Matrix3d w = combined.inverse();
      acc.cost += r.dot(w * r);
      if (with_jacobian) {
        Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
        jac(0, 0) = 1.0;
        jac(1, 1) = 1.0;
        jac(0, 2) = -s * corr.src_mean.x() - c * corr.src_mean.y();
        jac(1, 2) = c * corr.src_mean.x() - s * corr.src_mean.y();
        acc.H += jac.transpose() * w * jac;
        acc.b += jac.transpose() * w * r;
      }
    }
    partials[block] = acc;
  };

  const int thread_count =
      std::min<int>(std::max(workers, 1), static_cast<int>(n_blocks));
  if (thread_count <= 1) {
    for (std::size_t block = 0; block < n_blocks; ++block) run_block(block);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int w = 0; w < thread_count; ++w) {
      pool.emplace_back([&] {
        for (std::size_t block = next.fetch_add(1); block < n_blocks;
             block = next.fetch_add(1)) {
          run_block(block);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  BlockPartial total;
  for (const BlockPartial& part : partials) {
    total.H += part.H;
    total.b += part.b;
    total.cost += part.cost;
  }
  return total;
}

}  // namespace

RegistrationResult register_grids(const cloud::VoxelGaussianGrid& source,
                                  const cloud::VoxelGaussianGrid& target,
                                  const geom::Transform2& initial_guess,
                                  const RegistrationConfig& cfg) {
  if (source.empty() || target.empty()) {
    throw NoCorrespondences("registration needs non-empty grids");
  }

  Params p{initial_guess.translation.x(), initial_guess.translation.y(),
           initial_guess.rotation};
  RegistrationResult result;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    const std::vector<Correspondence> corrs =
        match(source, target, p, cfg.max_corresponding_distance);
    if (corrs.empty()) {
      throw NoCorrespondences("no target cell within gate for any source cell");
    }

    const BlockPartial lin = accumulate(corrs, p, true, cfg.worker_count);
    // Tiny fixed diagonal damping keeps the solve defined for degenerate
    // correspondence geometry without affecting well-conditioned problems.
    const Eigen::Matrix3d damped =
        lin.H + 1e-9 * Eigen::Matrix3d::Identity();
    Eigen::Vector3d delta = damped.ldlt().solve(lin.b);
    result.iterations_used = iter;

    // Already at a fixed point: the proposed update is below the
    // convergence step.
    if (delta.norm() < cfg.epsilon_corres) {
      const Params candidate{p.tx + delta.x(), p.ty + delta.y(),
                             p.theta + delta.z()};
      if (accumulate(corrs, candidate, false, cfg.worker_count).cost <=
          lin.cost) {
        p = candidate;
      }
      result.converged = true;
      break;
    }

    Params candidate;
    bool improved = false;
    for (int halving = 0; halving <= 8; ++halving) {
      candidate = Params{p.tx + delta.x(), p.ty + delta.y(),
                         p.theta + delta.z()};
      const double trial_cost =
          accumulate(corrs, candidate, false, cfg.worker_count).cost;
      if (trial_cost <= lin.cost) {
        improved = true;
        break;
      }
      delta *= 0.5;
    }

    if (!improved) break;  // stalled on a full-size step: not converged
    p = candidate;
    if (delta.norm() < cfg.epsilon_corres) {
      result.converged = true;
      break;
    }
  }

  const std::vector<Correspondence> final_corrs =
      match(source, target, p, cfg.max_corresponding_distance);
  if (final_corrs.empty()) {
    throw NoCorrespondences("alignment left the correspondence gate empty");
  }
  const double final_cost =
      accumulate(final_corrs, p, false, cfg.worker_count).cost;

  result.transform = geom::Transform2{p.theta, {p.tx, p.ty}};
  result.fitness = final_cost / static_cast<double>(final_corrs.size());
  return result;
}

}  // namespace uak::loc
