#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "litmine/error.hpp"
#include "litmine/marker_index.hpp"
#include "litmine/rng.hpp"

namespace litmine {

// ---------------------------------------------------------------------------
// Research scenes and co-occurrence matrices
// ---------------------------------------------------------------------------

// A research scene: a dataset paired with a metric cluster. Before metric
// clustering runs, raw scenes pair the dataset with the canonical metric and
// are keyed by strings of the same "dataset\tmetric" shape.
struct SceneId {
    std::string dataset;
    int metric_cluster = -1;

    std::string key() const { return dataset + "\t" + std::to_string(metric_cluster); }

    static std::optional<SceneId> parse(const std::string& key) {
        std::size_t tab = key.rfind('\t');
        if (tab == std::string::npos) return std::nullopt;
        SceneId id;
        id.dataset = key.substr(0, tab);
        try {
            id.metric_cluster = std::stoi(key.substr(tab + 1));
        } catch (...) {
            return std::nullopt;
        }
        return id;
    }
};

// Dense at desk scale; entries are nonnegative co-occurrence counts, with
// all-zero rows and columns pruned before factorisation.
struct CooccurrenceMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;
    Eigen::MatrixXd counts;
};

namespace cluster_detail {

inline CooccurrenceMatrix from_cells(
    const std::map<std::string, std::map<std::string, double>>& cells) {
    std::set<std::string> rows, cols;
    for (const auto& [r, row] : cells)
        for (const auto& [c, v] : row)
            if (v > 0) {
                rows.insert(r);
                cols.insert(c);
            }
    CooccurrenceMatrix m;
    m.row_ids.assign(rows.begin(), rows.end());
    m.col_ids.assign(cols.begin(), cols.end());
    m.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.row_ids.size()),
                                     static_cast<Eigen::Index>(m.col_ids.size()));
    std::map<std::string, Eigen::Index> row_of, col_of;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m.row_ids.size()); ++i)
        row_of[m.row_ids[i]] = i;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m.col_ids.size()); ++j)
        col_of[m.col_ids[j]] = j;
    for (const auto& [r, row] : cells)
        for (const auto& [c, v] : row)
            if (v > 0) m.counts(row_of[r], col_of[c]) = v;
    return m;
}

}  // namespace cluster_detail

// cell(m, s) = number of papers in which method m and raw scene s (a dataset
// and a metric co-occurring in that paper) both occur.
inline CooccurrenceMatrix build_method_scene_matrix(const MarkerIndex& index) {
    std::map<std::string, std::map<std::string, double>> cells;
    constexpr std::size_t kM = static_cast<std::size_t>(MarkerKind::Method);
    constexpr std::size_t kD = static_cast<std::size_t>(MarkerKind::Dataset);
    constexpr std::size_t kC = static_cast<std::size_t>(MarkerKind::Metric);
    for (const auto& [paper_id, sets] : index.papers()) {
        for (const auto& method : sets.mentioned[kM])
            for (const auto& dataset : sets.mentioned[kD])
                for (const auto& metric : sets.mentioned[kC])
                    cells[method][dataset + "\t" + metric] += 1.0;
    }
    return cluster_detail::from_cells(cells);
}

// ---------------------------------------------------------------------------
// Nonnegative matrix factorisation (multiplicative Frobenius updates)
// ---------------------------------------------------------------------------

struct NmfResult {
    Eigen::MatrixXd W;  // rows x r
    Eigen::MatrixXd H;  // r x cols
    std::vector<double> objective_trace;  // Frobenius error per iteration
    int rank = 0;
    std::uint64_t seed = 0;
};

inline NmfResult nmf(const Eigen::MatrixXd& V, int r, int max_iters = 200,
                     double tol = 1e-4, std::uint64_t seed = 0) {
    if ((V.array() < 0.0).any()) throw InvalidInput("nmf input has negative entries");
    if (r < 1 || r > std::min(V.rows(), V.cols()))
        throw InvalidInput("nmf rank out of range");
    constexpr double kEps = 1e-12;

    Rng rng(seed);
    NmfResult result;
    result.rank = r;
    result.seed = seed;
    result.W.resize(V.rows(), r);
    result.H.resize(r, V.cols());
    for (Eigen::Index i = 0; i < result.W.rows(); ++i)
        for (Eigen::Index j = 0; j < result.W.cols(); ++j)
            result.W(i, j) = 0.01 + 0.99 * rng.uniform01();
    for (Eigen::Index i = 0; i < result.H.rows(); ++i)
        for (Eigen::Index j = 0; j < result.H.cols(); ++j)
            result.H(i, j) = 0.01 + 0.99 * rng.uniform01();

    double prev = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iters; ++iter) {
        // H <- H .* (W'V) ./ (W'WH + eps)
        Eigen::MatrixXd numer_h = result.W.transpose() * V;
        Eigen::MatrixXd denom_h = result.W.transpose() * result.W * result.H;
        result.H.array() *= numer_h.array() / (denom_h.array() + kEps);
        // W <- W .* (VH') ./ (WHH' + eps)
        Eigen::MatrixXd numer_w = V * result.H.transpose();
        Eigen::MatrixXd denom_w = result.W * (result.H * result.H.transpose());
        result.W.array() *= numer_w.array() / (denom_w.array() + kEps);

        double err = (V - result.W * result.H).norm();
        result.objective_trace.push_back(err);
        if (prev < std::numeric_limits<double>::infinity()) {
            double decrease = (prev - err) / std::max(prev, kEps);
            if (decrease < tol) break;
        }
        prev = err;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Spectral clustering (symmetric normalised Laplacian + seeded k-means)
// ---------------------------------------------------------------------------

struct Clustering {
    std::vector<int> assignments;  // item index -> cluster id in [0, k)
    int k = 0;
    std::uint64_t seed = 0;
};

// Item ids attached to a positional clustering.
struct NamedClustering {
    std::map<std::string, int> assignments;
    int k = 0;
    std::uint64_t seed = 0;

    std::optional<int> cluster_of(const std::string& id) const {
        auto it = assignments.find(id);
        if (it == assignments.end()) return std::nullopt;
        return it->second;
    }
};

namespace cluster_detail {

inline double sq_dist(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return (a - b).squaredNorm();
}

// Lloyd iterations with k-means++ seeding. Empty clusters are reseeded from
// the point farthest from its centre.
inline std::pair<std::vector<int>, double> kmeans_once(const Eigen::MatrixXd& points,
                                                       int k, Rng& rng) {
    const Eigen::Index n = points.rows();
    std::vector<Eigen::RowVectorXd> centers;
    centers.reserve(k);
    centers.push_back(points.row(static_cast<Eigen::Index>(rng.below(n))));
    std::vector<double> dist(n, 0.0);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sq_dist(points.row(i), c));
            dist[i] = best;
            total += best;
        }
        Eigen::Index chosen = 0;
        if (total > 0.0) {
            double target = rng.uniform01() * total;
            double run = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                run += dist[i];
                if (run >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<Eigen::Index>(rng.below(n));
        }
        centers.push_back(points.row(chosen));
    }

    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(points.row(i), centers[0]);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(points.row(i), centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        // Recompute centres; reseed empties from the farthest point.
        std::vector<Eigen::RowVectorXd> next(k, Eigen::RowVectorXd::Zero(points.cols()));
        std::vector<int> sizes(k, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            next[assign[i]] += points.row(i);
            ++sizes[assign[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) {
                next[c] /= sizes[c];
            } else {
                Eigen::Index far = 0;
                double far_d = -1.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    double d = sq_dist(points.row(i), centers[assign[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                next[c] = points.row(far);
                assign[far] = c;
                changed = true;
            }
        }
        centers = std::move(next);
        if (!changed && iter > 0) break;
    }

    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        inertia += sq_dist(points.row(i), centers[assign[i]]);
    return {assign, inertia};
}

inline std::vector<int> kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                               int restarts = 10) {
    std::vector<int> best_assign;
    double best_inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, "kmeans-restart-" + std::to_string(r)));
        auto [assign, inertia] = kmeans_once(points, k, rng);
        if (inertia < best_inertia) {
            best_inertia = inertia;
            best_assign = std::move(assign);
        }
    }
    return best_assign;
}

// Remaps cluster ids to a contiguous range ordered by first appearance.
inline void compact_ids(std::vector<int>& assignments, int& k) {
    std::map<int, int> remap;
    for (int& a : assignments) {
        auto [it, inserted] = remap.emplace(a, static_cast<int>(remap.size()));
        a = it->second;
    }
    k = static_cast<int>(remap.size());
}

}  // namespace cluster_detail

inline Clustering spectral_cluster(const Eigen::MatrixXd& affinity, int k,
                                   std::uint64_t seed) {
    const Eigen::Index n = affinity.rows();
    if (affinity.cols() != n) throw InvalidInput("affinity must be square");
    if ((affinity.array() < 0.0).any())
        throw InvalidInput("affinity must be nonnegative");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(affinity(i, j) - affinity(j, i)) >
                1e-9 * std::max(1.0, std::abs(affinity(i, j))))
                throw InvalidInput("affinity must be symmetric");
    if (k < 2) throw InvalidInput("k must be >= 2");
    if (k > n) throw InvalidInput("k must be <= item count");

    constexpr double kEps = 1e-12;
    Eigen::VectorXd degrees = affinity.rowwise().sum();
    Eigen::VectorXd inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double d = degrees(i) > 0.0 ? degrees(i) : kEps;  // isolated nodes
        inv_sqrt(i) = 1.0 / std::sqrt(d);
    }
    Eigen::MatrixXd laplacian =
        Eigen::MatrixXd::Identity(n, n) -
        inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal();
    // Symmetrise against floating-point drift before the eigensolve.
    laplacian = 0.5 * (laplacian + laplacian.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    if (solver.info() != Eigen::Success)
        throw InvalidInput("eigensolver failed on the Laplacian");
    Eigen::MatrixXd embedding = solver.eigenvectors().leftCols(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        double norm = embedding.row(i).norm();
        if (norm > kEps) embedding.row(i) /= norm;
    }

    Clustering out;
    out.k = k;
    out.seed = seed;
    out.assignments = cluster_detail::kmeans(embedding, k, seed);
    cluster_detail::compact_ids(out.assignments, out.k);
    return out;
}

// ---------------------------------------------------------------------------
// Cosine affinities
// ---------------------------------------------------------------------------

namespace cluster_detail {

inline Eigen::MatrixXd cosine_affinity_rows(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd norms(n);
    for (Eigen::Index i = 0; i < n; ++i) norms(i) = m.row(i).norm();
    Eigen::MatrixXd affinity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double denom = norms(i) * norms(j);
            double v = denom > 0.0 ? m.row(i).dot(m.row(j)) / denom : 0.0;
            affinity(i, j) = std::max(0.0, v);
        }
    // Exact symmetry for the validator.
    return 0.5 * (affinity + affinity.transpose()).eval();
}

inline Eigen::MatrixXd cosine_affinity_cols(const Eigen::MatrixXd& m) {
    return cosine_affinity_rows(m.transpose());
}

}  // namespace cluster_detail

// ---------------------------------------------------------------------------
// Method, metric and scene clustering
// ---------------------------------------------------------------------------

struct MethodClusteringResult {
    NamedClustering clusters;  // canonical method -> cluster id
    NmfResult nmf;
};

// NMF to rank r on the method-scene matrix, then spectral clustering of the
// cosine affinity between factor rows. The paper-scale defaults are r = 100
// and k = 500; both stay configurable for desk-scale corpora.
inline MethodClusteringResult cluster_methods(const CooccurrenceMatrix& matrix,
                                              int r, int k, std::uint64_t seed) {
    if (matrix.row_ids.empty()) throw InvalidInput("method-scene matrix is empty");
    int clamped_r = std::max(
        1, std::min<int>(r, static_cast<int>(
                                std::min(matrix.counts.rows(), matrix.counts.cols()))));
    MethodClusteringResult result;
    result.nmf = nmf(matrix.counts, clamped_r, 200, 1e-4, derive_seed(seed, "nmf"));
    Eigen::MatrixXd affinity = cluster_detail::cosine_affinity_rows(result.nmf.W);
    Clustering clustering = spectral_cluster(affinity, k, derive_seed(seed, "spectral"));
    result.clusters.k = clustering.k;
    result.clusters.seed = seed;
    for (std::size_t i = 0; i < matrix.row_ids.size(); ++i)
        result.clusters.assignments[matrix.row_ids[i]] = clustering.assignments[i];
    return result;
}

// Method-cluster x metric co-occurrence, metrics clustered by the cosine
// affinity of their columns.
inline NamedClustering cluster_metrics(const NamedClustering& method_clusters,
                                       const MarkerIndex& index, int k,
                                       std::uint64_t seed) {
    std::map<std::string, std::map<std::string, double>> cells;
    constexpr std::size_t kM = static_cast<std::size_t>(MarkerKind::Method);
    constexpr std::size_t kC = static_cast<std::size_t>(MarkerKind::Metric);
    for (const auto& [paper_id, sets] : index.papers()) {
        std::set<int> clusters_here;
        for (const auto& method : sets.mentioned[kM])
            if (auto c = method_clusters.cluster_of(method)) clusters_here.insert(*c);
        for (int c : clusters_here)
            for (const auto& metric : sets.mentioned[kC])
                cells["g" + std::to_string(c)][metric] += 1.0;
    }
    CooccurrenceMatrix matrix = cluster_detail::from_cells(cells);
    if (matrix.col_ids.empty()) throw InvalidInput("no metrics to cluster");

    Eigen::MatrixXd affinity = cluster_detail::cosine_affinity_cols(matrix.counts);
    Clustering clustering = spectral_cluster(affinity, k, derive_seed(seed, "metrics"));
    NamedClustering out;
    out.k = clustering.k;
    out.seed = seed;
    for (std::size_t j = 0; j < matrix.col_ids.size(); ++j)
        out.assignments[matrix.col_ids[j]] = clustering.assignments[j];
    return out;
}

struct SceneClusteringResult {
    NamedClustering clusters;  // scene key -> cluster id
    std::vector<SceneId> scenes;
    int first_pass_k = 0;
    int oversized_clusters = 0;
};

// Scenes are (dataset, metric-cluster) pairs observed in papers. A first
// spectral pass groups them into k clusters; clusters holding more than
// oversize_threshold scenes are re-clustered into k_recluster sub-clusters,
// and the final ids are flattened to a contiguous range.
inline SceneClusteringResult cluster_scenes(const MarkerIndex& index,
                                            const NamedClustering& metric_clusters,
                                            int k, std::size_t oversize_threshold,
                                            int k_recluster, std::uint64_t seed) {
    constexpr std::size_t kM = static_cast<std::size_t>(MarkerKind::Method);
    constexpr std::size_t kD = static_cast<std::size_t>(MarkerKind::Dataset);
    constexpr std::size_t kC = static_cast<std::size_t>(MarkerKind::Metric);

    std::map<std::string, std::map<std::string, double>> cells;
    std::set<std::string> scene_keys;
    for (const auto& [paper_id, sets] : index.papers()) {
        std::set<std::string> scenes_here;
        for (const auto& dataset : sets.mentioned[kD])
            for (const auto& metric : sets.mentioned[kC])
                if (auto mc = metric_clusters.cluster_of(metric))
                    scenes_here.insert(SceneId{dataset, *mc}.key());
        scene_keys.insert(scenes_here.begin(), scenes_here.end());
        for (const auto& method : sets.mentioned[kM])
            for (const auto& scene : scenes_here) cells[method][scene] += 1.0;
    }
    CooccurrenceMatrix matrix = cluster_detail::from_cells(cells);
    if (matrix.col_ids.empty()) throw InvalidInput("no research scenes to cluster");

    Eigen::MatrixXd affinity = cluster_detail::cosine_affinity_cols(matrix.counts);
    Clustering first = spectral_cluster(affinity, k, derive_seed(seed, "scenes"));

    // Collect cluster members (scene column indices).
    std::map<int, std::vector<Eigen::Index>> members;
    for (std::size_t j = 0; j < matrix.col_ids.size(); ++j)
        members[first.assignments[j]].push_back(static_cast<Eigen::Index>(j));

    SceneClusteringResult result;
    result.first_pass_k = first.k;
    result.clusters.seed = seed;
    int next_id = 0;
    for (const auto& [cluster_id, cols] : members) {
        if (cols.size() > oversize_threshold && cols.size() >= 2 && k_recluster >= 2) {
            ++result.oversized_clusters;
            int k_sub = std::min<int>(k_recluster, static_cast<int>(cols.size()));
            Eigen::MatrixXd sub(matrix.counts.rows(),
                                static_cast<Eigen::Index>(cols.size()));
            for (std::size_t idx = 0; idx < cols.size(); ++idx)
                sub.col(static_cast<Eigen::Index>(idx)) = matrix.counts.col(cols[idx]);
            Eigen::MatrixXd sub_affinity = cluster_detail::cosine_affinity_cols(sub);
            Clustering second = spectral_cluster(
                sub_affinity, k_sub,
                derive_seed(seed, "rescenes-" + std::to_string(cluster_id)));
            for (std::size_t idx = 0; idx < cols.size(); ++idx)
                result.clusters.assignments[matrix.col_ids[cols[idx]]] =
                    next_id + second.assignments[idx];
            next_id += second.k;
        } else {
            for (Eigen::Index col : cols)
                result.clusters.assignments[matrix.col_ids[col]] = next_id;
            ++next_id;
        }
    }
    result.clusters.k = next_id;
    // Only scenes that co-occur with some method have a column and therefore
    // an assignment.
    for (const auto& [key, cluster] : result.clusters.assignments)
        if (auto id = SceneId::parse(key)) result.scenes.push_back(*id);
    return result;
}

// Cluster export rows: (cluster_id, member_id), sorted.
inline void write_clustering(const NamedClustering& clustering,
                             const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write clustering " + path.string());
    std::vector<std::pair<int, std::string>> rows;
    for (const auto& [id, cluster] : clustering.assignments)
        rows.emplace_back(cluster, id);
    std::sort(rows.begin(), rows.end());
    out << "cluster_id\tmember_id\n";
    for (const auto& [cluster, id] : rows) out << cluster << '\t' << id << '\n';
}

}  // namespace litmine
