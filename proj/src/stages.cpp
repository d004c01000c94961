#include <algorithm>
#include <map>
#include <numeric>

#include "patmine/pipeline.hpp"
#include "text_util.hpp"

namespace patmine {
namespace {

std::vector<WorkingActivity> sorted_by_canonical_id(
    const std::vector<WorkingActivity>& activities) {
  std::vector<WorkingActivity> sorted = activities;
  std::sort(sorted.begin(), sorted.end(),
            [](const WorkingActivity& a, const WorkingActivity& b) {
              return a.canonical_id < b.canonical_id;
            });
  return sorted;
}

std::vector<StageCluster> cluster_seed_star(const std::vector<WorkingActivity>& sorted,
                                            const OperatorConfig& cfg) {
  std::vector<StageCluster> clusters;
  std::vector<bool> staged(sorted.size(), false);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (staged[i]) continue;
    StageCluster cluster;
    cluster.seed_id = sorted[i].canonical_id;
    cluster.id = "cluster-" + std::to_string(clusters.size() + 1);
    cluster.members.push_back(sorted[i]);
    staged[i] = true;
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (staged[j]) continue;
      if (semantic_affinity(sorted[i].intent, sorted[j].intent, cfg).decision) {
        cluster.members.push_back(sorted[j]);
        staged[j] = true;
      }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::vector<StageCluster> cluster_components(const std::vector<WorkingActivity>& sorted,
                                             const OperatorConfig& cfg) {
  const std::size_t n = sorted.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&parent](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (semantic_affinity(sorted[i].intent, sorted[j].intent, cfg).decision) {
        parent[root(i)] = root(j);
      }
    }
  }

  std::map<std::size_t, StageCluster> by_root;
  std::vector<std::size_t> emit_order;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root(i);
    auto [it, inserted] = by_root.try_emplace(r);
    if (inserted) {
      it->second.seed_id = sorted[i].canonical_id;
      emit_order.push_back(r);
    }
    it->second.members.push_back(sorted[i]);
  }

  std::vector<StageCluster> clusters;
  for (std::size_t r : emit_order) {
    StageCluster cluster = std::move(by_root[r]);
    cluster.id = "cluster-" + std::to_string(clusters.size() + 1);
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

}  // namespace

std::vector<StageCluster> package_stages(const std::vector<WorkingActivity>& activities,
                                         const OperatorConfig& cfg) {
  const std::vector<WorkingActivity> sorted = sorted_by_canonical_id(activities);
  std::vector<StageCluster> clusters = cfg.clustering_mode == ClusteringMode::SeedStar
                                           ? cluster_seed_star(sorted, cfg)
                                           : cluster_components(sorted, cfg);
  for (StageCluster& cluster : clusters) {
    cluster.name = name_stage(cluster, cfg);
  }
  return clusters;
}

std::string name_stage(const StageCluster& cluster, const OperatorConfig& cfg) {
  if (cluster.members.empty()) return "";
  if (cluster.members.size() == 1) return cluster.members.front().name;

  std::map<std::string, int> frequency;
  for (const WorkingActivity& member : cluster.members) {
    for (const std::string& term : member.intent) ++frequency[term];
  }
  std::vector<std::pair<std::string, int>> ranked(frequency.begin(), frequency.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::string name;
  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.stage_name_terms), ranked.size());
  for (std::size_t i = 0; i < take; ++i) {
    if (!name.empty()) name += " ";
    name += detail::title_case(ranked[i].first);
  }
  return name.empty() ? cluster.members.front().name : name;
}

}  // namespace patmine
