#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace reslim::detail {

/// Dinic max-flow on real capacities.
class MaxFlow {
public:
    explicit MaxFlow(std::size_t n) : adj_(n), level_(n), it_(n) {}

    void add_edge(std::size_t u, std::size_t v, double cap) {
        adj_[u].push_back(edges_.size());
        edges_.push_back({v, cap});
        adj_[v].push_back(edges_.size());
        edges_.push_back({u, 0.0});
    }

    double run(std::size_t s, std::size_t t, double eps) {
        double flow = 0.0;
        eps_ = eps;
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            for (;;) {
                double f = dfs(s, t, std::numeric_limits<double>::infinity());
                if (f <= eps_) break;
                flow += f;
            }
        }
        return flow;
    }

private:
    struct Edge {
        std::size_t to;
        double cap;
    };

    bool bfs(std::size_t s, std::size_t t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<std::size_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (auto id : adj_[u]) {
                const auto& e = edges_[id];
                if (e.cap > eps_ && level_[e.to] < 0) {
                    level_[e.to] = level_[u] + 1;
                    q.push(e.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs(std::size_t u, std::size_t t, double pushed) {
        if (u == t) return pushed;
        for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
            auto id = adj_[u][i];
            auto& e = edges_[id];
            if (e.cap > eps_ && level_[e.to] == level_[u] + 1) {
                double f = dfs(e.to, t, std::min(pushed, e.cap));
                if (f > eps_) {
                    e.cap -= f;
                    edges_[id ^ 1].cap += f;
                    return f;
                }
            }
        }
        return 0.0;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Edge> edges_;
    std::vector<int> level_;
    std::vector<std::size_t> it_;
    double eps_ = 0.0;
};

}  // namespace reslim::detail
