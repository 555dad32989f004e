#pragma once

#include <string>
#include <vector>

namespace nosched {

// Interference graph over bearers. Weighted, non-negative, zero diagonal.
// Cliques are the maximal cliques of the positive-weight adjacency structure;
// singletons are included so every bearer belongs to at least one clique.
// Immutable after construction.
class Graph {
public:
    static Graph named(const std::string& name, double weight);
    static Graph from_matrix(int n, std::vector<double> weights);
    static Graph from_file(const std::string& path);

    int nodes() const { return n_; }
    int edge_count() const { return edges_; }
    double weight(int i, int j) const { return w_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<double>& matrix() const { return w_; }
    const std::vector<std::vector<int>>& cliques() const { return cliques_; }

    // row sum of weights against a 0/1 vector: (W s)_i
    double weighted_sum(int i, const std::vector<uint8_t>& s) const;

private:
    Graph() = default;
    int n_ = 0;
    int edges_ = 0;
    std::vector<double> w_;
    std::vector<std::vector<int>> cliques_;
    void finish();
};

// largest |eigenvalue|; dense solve for n <= 16, shifted power iteration above
double spectral_radius(const Graph& g);
// largest singular value
double two_norm(const Graph& g);

} // namespace nosched
