#include "reslim/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace reslim {

namespace {

using Mask = std::uint32_t;

class SetCover {
public:
    SetCover(std::vector<Mask> sets, Mask universe) : universe_(universe) {
        // Dominance pruning: drop sets contained in another one.
        std::sort(sets.begin(), sets.end(), [](Mask a, Mask b) { return std::popcount(a) > std::popcount(b); });
        for (Mask s : sets) {
            bool dominated = false;
            for (Mask t : sets_)
                if ((s & t) == s) {
                    dominated = true;
                    break;
                }
            if (!dominated) sets_.push_back(s);
        }
    }

    std::size_t solve() {
        best_ = greedy();
        search(universe_, 0);
        return best_;
    }

private:
    std::size_t greedy() const {
        Mask u = universe_;
        std::size_t k = 0;
        while (u) {
            Mask pick = 0;
            int gain = -1;
            for (Mask s : sets_)
                if (std::popcount(s & u) > gain) {
                    gain = std::popcount(s & u);
                    pick = s;
                }
            u &= ~pick;
            ++k;
        }
        return k;
    }

    void search(Mask u, std::size_t depth) {
        if (!u) {
            best_ = std::min(best_, depth);
            return;
        }
        int maxgain = 0;
        for (Mask s : sets_) maxgain = std::max(maxgain, std::popcount(s & u));
        std::size_t lb = (std::popcount(u) + maxgain - 1) / maxgain;
        if (depth + lb >= best_) return;

        // Branch on the uncovered element with the fewest covering sets.
        int elem = -1;
        int fewest = 1 << 30;
        for (Mask rest = u; rest; rest &= rest - 1) {
            int e = std::countr_zero(rest);
            int cnt = 0;
            for (Mask s : sets_) cnt += (s >> e) & 1u;
            if (cnt < fewest) {
                fewest = cnt;
                elem = e;
            }
        }
        std::vector<Mask> cand;
        for (Mask s : sets_)
            if ((s >> elem) & 1u) cand.push_back(s);
        std::sort(cand.begin(), cand.end(),
                  [u](Mask a, Mask b) { return std::popcount(a & u) > std::popcount(b & u); });
        for (Mask s : cand) search(u & ~s, depth + 1);
    }

    Mask universe_;
    std::vector<Mask> sets_;
    std::size_t best_ = 0;
};

std::size_t farthest_point_cover(const FiniteMetricSpace& s, double eps) {
    const std::size_t n = s.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::size_t next = 0, k = 0;
    for (;;) {
        ++k;
        const double* r = s.row(next);
        double far = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist[i] = std::min(dist[i], r[i]);
            if (dist[i] > far) {
                far = dist[i];
                next = i;
            }
        }
        if (far <= eps) return k;
    }
}

std::size_t greedy_set_cover(const FiniteMetricSpace& s, double eps) {
    const std::size_t n = s.size();
    std::vector<char> covered(n, 0);
    std::size_t left = n, k = 0;
    while (left) {
        std::size_t pick = 0, gain = 0;
        for (std::size_t c = 0; c < n; ++c) {
            const double* r = s.row(c);
            std::size_t g = 0;
            for (std::size_t i = 0; i < n; ++i) g += (!covered[i] && r[i] <= eps);
            if (g > gain) {
                gain = g;
                pick = c;
            }
        }
        const double* r = s.row(pick);
        for (std::size_t i = 0; i < n; ++i)
            if (!covered[i] && r[i] <= eps) {
                covered[i] = 1;
                --left;
            }
        ++k;
    }
    return k;
}

std::size_t packing(const FiniteMetricSpace& s, double eps) {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool far = true;
        for (auto c : chosen)
            if (s(i, c) <= 2.0 * eps) {
                far = false;
                break;
            }
        if (far) chosen.push_back(i);
    }
    return chosen.size();
}

std::size_t cover_value(const FiniteMetricSpace& s, double eps, CoverMode mode) {
    return mode == CoverMode::exact ? covering_number(s, eps) : covering_bounds(s, eps).upper;
}

}  // namespace

std::size_t covering_number(const FiniteMetricSpace& s, double eps) {
    if (!(eps > 0.0)) throw Error("covering radius must be positive");
    const std::size_t n = s.size();
    if (n > 25) throw Error("exact covering number limited to 25 points; use bounds mode");
    if (n == 0) return 0;
    std::vector<Mask> sets(n, 0);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < n; ++i)
            if (s(c, i) <= eps) sets[c] |= Mask(1) << i;
    Mask all = n == 32 ? ~Mask(0) : ((Mask(1) << n) - 1);
    return SetCover(std::move(sets), all).solve();
}

CoverBounds covering_bounds(const FiniteMetricSpace& s, double eps) {
    if (!(eps > 0.0)) throw Error("covering radius must be positive");
    if (s.size() == 0) return {};
    CoverBounds b;
    b.upper = farthest_point_cover(s, eps);
    if (s.size() <= 400) b.upper = std::min(b.upper, greedy_set_cover(s, eps));
    b.lower = packing(s, eps);
    return b;
}

std::size_t covering_number_auto(const FiniteMetricSpace& s, double eps) {
    return s.size() <= 25 ? covering_number(s, eps) : covering_bounds(s, eps).upper;
}

EntropyProfile entropy_profile(const FiniteMetricSpace& s, int k_min, double alpha, CoverMode mode) {
    EntropyProfile p;
    const double dmin = s.min_positive_distance();
    for (int k = k_min;; ++k) {
        const double eps = std::ldexp(1.0, -k);
        std::size_t n = (dmin == 0.0 || eps < dmin) ? s.size() : cover_value(s, eps, mode);
        double term = alpha > 0.0 ? double(n) * double(n) * std::exp(-std::pow(2.0, alpha * k)) : 0.0;
        p.rows.push_back({k, eps, n, term});
        if (n == s.size()) {
            p.k_max = k;
            break;
        }
    }
    return p;
}

TailSum entropy_tail_sum(const FiniteMetricSpace& s, double alpha, int m, CoverMode mode) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw Error("alpha must lie in (0, 1/2)");
    const double dmin = s.min_positive_distance();
    const double nn = double(s.size()) * double(s.size());
    TailSum t;
    for (int k = m;; ++k) {
        const double eps = std::ldexp(1.0, -k);
        const double decay = std::exp(-std::pow(2.0, alpha * k));
        bool saturated = dmin == 0.0 || eps < dmin;
        double term;
        if (saturated || nn * decay == 0.0) {
            term = nn * decay;
        } else {
            std::size_t n = cover_value(s, eps, mode);
            term = double(n) * double(n) * decay;
        }
        t.value += term;
        t.last_k = k;
        if ((saturated || nn * decay == 0.0) && (term == 0.0 || term < 1e-16 * t.value)) break;
    }
    return t;
}

double dudley_integral(const FiniteMetricSpace& s, double q, CoverMode mode) {
    if (!(q > 0.0 && q <= 1.0)) throw Error("metric exponent must lie in (0, 1]");
    if (s.size() <= 1) return 0.0;
    std::vector<double> ds;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) ds.push_back(s(i, j));
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());

    // N_{d^q}(S, r) = N_d(S, r^{1/q}); breakpoints at r = delta^q.
    double total = 0.0;
    double left = 0.0;
    double value = std::sqrt(std::log(double(s.size())));
    for (std::size_t j = 0; j < ds.size() && left < 1.0; ++j) {
        double right = std::min(1.0, std::pow(ds[j], q));
        if (right > left) total += (right - left) * value;
        left = std::max(left, right);
        value = std::sqrt(std::log(double(cover_value(s, ds[j], mode))));
    }
    if (left < 1.0) total += (1.0 - left) * value;
    return total;
}

double VolumeProfile::at(double u) const {
    std::size_t best = radii.size();
    for (std::size_t i = 0; i < radii.size(); ++i)
        if (radii[i] <= u * (1.0 + 1e-12) + 1e-15 && (best == radii.size() || radii[i] > radii[best])) best = i;
    if (best == radii.size()) throw Error("volume profile has no grid radius below the requested one");
    return values[best];
}

VolumeProfile volume_profile(const FiniteMetricSpace& s, const std::vector<double>& weights,
                             const std::vector<std::size_t>& centers, const std::vector<double>& radii) {
    if (weights.size() != s.size()) throw Error("one weight per point required");
    if (centers.empty()) throw Error("volume profile needs at least one center");
    VolumeProfile v;
    v.radii = radii;
    v.values.assign(radii.size(), std::numeric_limits<double>::infinity());
    std::vector<std::size_t> order(s.size());
    std::vector<double> prefix(s.size() + 1);
    std::vector<double> sorted(s.size());
    for (auto c : centers) {
        std::iota(order.begin(), order.end(), 0);
        const double* r = s.row(c);
        std::sort(order.begin(), order.end(), [r](std::size_t a, std::size_t b) { return r[a] < r[b]; });
        for (std::size_t i = 0; i < order.size(); ++i) {
            sorted[i] = r[order[i]];
            prefix[i + 1] = prefix[i] + weights[order[i]];
        }
        for (std::size_t k = 0; k < radii.size(); ++k) {
            auto cnt = std::upper_bound(sorted.begin(), sorted.end(), radii[k]) - sorted.begin();
            v.values[k] = std::min(v.values[k], prefix[cnt]);
        }
    }
    return v;
}

double entropy_bound_from_volume(double total_mass, const VolumeProfile& v, double u) {
    if (!(u > 0.0)) throw Error("radius must be positive");
    double vol = v.at(u / 4.0);
    if (!(vol > 0.0)) throw Error("volume profile value must be positive");
    return total_mass / vol;
}

ConditionIvReport check_condition_iv(const std::vector<ConditionIvInstance>& seq, double r_k, double alpha_k,
                                     const std::function<double(double)>& v_k, double c_prime,
                                     std::size_t grid) {
    ConditionIvReport rep;
    std::size_t passed = 0;
    for (const auto& inst : seq) {
        const auto& s = inst.space;
        const double lo = 1.0 / inst.c;
        bool ok = true;
        if (lo < c_prime) {
            std::vector<std::size_t> ball;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i == inst.root || s(inst.root, i) < inst.a * r_k) ball.push_back(i);
            std::vector<double> radii;
            for (std::size_t g = 0; g < grid; ++g) {
                double u = std::exp(std::log(lo) + (g + 0.5) / grid * (std::log(c_prime) - std::log(lo)));
                radii.push_back(inst.a * u);
            }
            auto vol = volume_profile(s, std::vector<double>(s.size(), 1.0), ball, radii);
            for (std::size_t g = 0; g < grid && ok; ++g)
                if (vol.values[g] / inst.b < v_k(radii[g] / inst.a)) ok = false;
        }
        rep.pass.push_back(ok);
        passed += ok;
        rep.vanishing.push_back(inst.b * inst.b * std::exp(-std::pow(inst.c, alpha_k)));
    }
    rep.pass_rate = seq.empty() ? 1.0 : double(passed) / double(seq.size());
    return rep;
}

}  // namespace reslim
