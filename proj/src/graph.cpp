#include "graph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace nosched {
namespace {

// Bron-Kerbosch with pivoting over the symmetrised positive-weight adjacency.
// Graphs here are tiny (a handful of cells), so no degeneracy ordering needed.
void bron_kerbosch(const std::vector<std::vector<bool>>& adj,
                   std::vector<int>& r, std::vector<int> p, std::vector<int> x,
                   std::vector<std::vector<int>>& out) {
    if (p.empty() && x.empty()) {
        out.push_back(r);
        return;
    }
    int pivot = -1;
    size_t best = 0;
    for (const auto& cand : {p, x})
        for (int v : cand) {
            size_t cnt = 0;
            for (int w : p)
                if (adj[v][w]) ++cnt;
            if (pivot < 0 || cnt > best) {
                pivot = v;
                best = cnt;
            }
        }
    std::vector<int> ext;
    for (int v : p)
        if (pivot < 0 || !adj[pivot][v]) ext.push_back(v);
    for (int v : ext) {
        std::vector<int> p2, x2;
        for (int w : p)
            if (adj[v][w]) p2.push_back(w);
        for (int w : x)
            if (adj[v][w]) x2.push_back(w);
        r.push_back(v);
        bron_kerbosch(adj, r, std::move(p2), std::move(x2), out);
        r.pop_back();
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

Eigen::MatrixXd to_eigen(const Graph& g) {
    const int n = g.nodes();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g.weight(i, j);
    return m;
}

} // namespace

void Graph::finish() {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            double w = w_[static_cast<size_t>(i) * n_ + j];
            if (w < 0.0)
                throw ConfigError("graph weights must be non-negative, got " +
                                  std::to_string(w) + " at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
            if (i == j && w != 0.0)
                throw ConfigError("graph diagonal must be zero, got " + std::to_string(w) +
                                  " at node " + std::to_string(i));
        }

    std::vector<std::vector<bool>> adj(n_, std::vector<bool>(n_, false));
    edges_ = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (weight(i, j) > 0.0 || weight(j, i) > 0.0) {
                adj[i][j] = adj[j][i] = true;
                ++edges_;
            }

    std::vector<int> r, p, x;
    for (int i = 0; i < n_; ++i) p.push_back(i);
    cliques_.clear();
    bron_kerbosch(adj, r, std::move(p), std::move(x), cliques_);
    for (auto& c : cliques_) std::sort(c.begin(), c.end());
    std::sort(cliques_.begin(), cliques_.end());
}

Graph Graph::named(const std::string& name, double weight) {
    if (!(weight > 0.0)) throw ConfigError("topology weight must be > 0");
    int n;
    std::vector<std::pair<int, int>> edges;
    if (name == "pair2") {
        n = 2;
        edges = {{0, 1}};
    } else if (name == "line4") {
        n = 4;
        edges = {{0, 1}, {1, 2}, {2, 3}};
    } else if (name == "ring8") {
        n = 8;
        for (int i = 0; i < 8; ++i) edges.push_back({i, (i + 1) % 8});
    } else {
        throw ConfigError("unknown topology '" + name + "' (expected pair2, line4, ring8 or a matrix file)");
    }
    std::vector<double> w(static_cast<size_t>(n) * n, 0.0);
    for (auto [i, j] : edges) {
        w[static_cast<size_t>(i) * n + j] = weight;
        w[static_cast<size_t>(j) * n + i] = weight;
    }
    return from_matrix(n, std::move(w));
}

Graph Graph::from_matrix(int n, std::vector<double> weights) {
    if (n <= 0) throw ConfigError("graph must have at least one node");
    if (weights.size() != static_cast<size_t>(n) * n)
        throw ConfigError("graph matrix must be square: expected " + std::to_string(n * n) +
                          " entries, got " + std::to_string(weights.size()));
    Graph g;
    g.n_ = n;
    g.w_ = std::move(weights);
    g.finish();
    return g;
}

Graph Graph::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("topology matrix file not readable: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof())
            throw ConfigError(path + ": non-numeric token in matrix row " +
                              std::to_string(rows.size() + 1));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError(path + ": empty matrix");
    const int n = static_cast<int>(rows.size());
    std::vector<double> w;
    w.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (rows[i].size() != static_cast<size_t>(n))
            throw ConfigError(path + ": row " + std::to_string(i + 1) + " has " +
                              std::to_string(rows[i].size()) + " entries, expected " +
                              std::to_string(n));
        for (double v : rows[i]) w.push_back(v);
    }
    return from_matrix(n, std::move(w));
}

double Graph::weighted_sum(int i, const std::vector<uint8_t>& s) const {
    double acc = 0.0;
    for (int j = 0; j < n_; ++j)
        if (s[j]) acc += weight(i, j);
    return acc;
}

double spectral_radius(const Graph& g) {
    const int n = g.nodes();
    if (n <= 16) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(g), false);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    // Shifted power iteration: for a non-negative matrix the dominant
    // eigenvalue of W + I is rho(W) + 1, which breaks +/- pair oscillation.
    Eigen::MatrixXd m = to_eigen(g);
    m += Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double lambda = 0.0;
    const double tol = 1e-9;
    const int cap = 200000;
    for (int it = 0; it < cap; ++it) {
        Eigen::VectorXd y = m * x;
        double norm = y.norm();
        if (norm == 0.0) return 0.0; // zero matrix after shift cannot happen; W=0 -> rho 0
        y /= norm;
        double next = y.dot(m * y);
        double resid = (m * y - next * y).norm();
        x = y;
        if (resid <= tol * std::max(1.0, std::abs(next))) return next - 1.0;
        lambda = next;
    }
    throw NumericError("spectral radius power iteration did not converge after 200000 iterations"
                       "; last estimate " + std::to_string(lambda - 1.0));
}

double two_norm(const Graph& g) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(g));
    return svd.singularValues()(0);
}

} // namespace nosched
