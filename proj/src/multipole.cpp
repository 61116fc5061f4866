#include "cgas/multipole.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

#include "cgas/errors.hpp"

namespace cgas {

namespace {

// members ascending, blocks ordered by smallest member
void canonicalize(IndexPartition& part) {
    for (auto& block : part.blocks) std::sort(block.begin(), block.end());
    std::sort(part.blocks.begin(), part.blocks.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.front() < b.front();
              });
}

} // namespace

int IndexPartition::block_of(int i) const {
    if (i < 0 || i >= universe)
        throw invalid_param("IndexPartition::block_of: index " + std::to_string(i) +
                            " outside universe of size " + std::to_string(universe));
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int member : blocks[b])
            if (member == i) return static_cast<int>(b);
    return -1;
}

void IndexPartition::validate() const {
    std::vector<char> seen(static_cast<std::size_t>(std::max(universe, 0)), 0);
    for (const auto& block : blocks) {
        if (block.empty()) throw invalid_param("IndexPartition: empty block");
        for (std::size_t k = 0; k < block.size(); ++k) {
            const int i = block[k];
            if (i < 0 || i >= universe)
                throw invalid_param("IndexPartition: index " + std::to_string(i) +
                                    " outside universe of size " + std::to_string(universe));
            if (k > 0 && block[k - 1] >= i)
                throw invalid_param("IndexPartition: block not strictly ascending");
            if (seen[i])
                throw invalid_param("IndexPartition: index " + std::to_string(i) +
                                    " appears in two blocks");
            seen[i] = 1;
        }
    }
}

namespace {

struct SweepEvent {
    double value = 0.0;
    int kind = 0; // 0 = quarter-radius removal, 1 = contact
    int i = -1;
    int j = -1; // second endpoint for contacts

    bool operator<(const SweepEvent& o) const {
        return std::tie(value, kind, i, j) < std::tie(o.value, o.kind, o.i, o.j);
    }
};

} // namespace

QClustering q_cluster(const std::vector<Point>& points, const std::vector<double>& r,
                      int q, double eps0, double r_bar, double lambda) {
    const int n = static_cast<int>(points.size());
    if (r.size() != points.size())
        throw invalid_param("q_cluster: points and r length mismatch");
    if (q < 2) throw invalid_param("q_cluster: contact budget q must be >= 2");
    if (!(eps0 > 0.0) || !std::isfinite(eps0))
        throw invalid_param("q_cluster: eps0 must be positive and finite");
    if (!(r_bar > 0.0) || !std::isfinite(r_bar))
        throw invalid_param("q_cluster: r_bar must be positive and finite");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw invalid_param("q_cluster: lambda must be positive and finite");
    for (int i = 0; i < n; ++i) {
        if (!(r[i] > 0.0) || !std::isfinite(r[i]))
            throw invalid_param("q_cluster: partner distances must be positive and finite");
        if (!std::isfinite(points[i].x()) || !std::isfinite(points[i].y()))
            throw invalid_param("q_cluster: non-finite point");
    }

    const double stop = eps0 * r_bar;

    // Two balls of common radius t touch once t reaches half their center
    // distance, so every event is a fixed radius known up front.
    std::vector<SweepEvent> events;
    events.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i) events.push_back({0.25 * r[i], 0, i, -1});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            events.push_back({0.5 * (points[i] - points[j]).norm(), 1, i, j});
    std::sort(events.begin(), events.end());

    std::vector<char> alive(n, 1);
    std::vector<int> degree(n, 0); // live touching balls, under the current radius
    std::vector<std::vector<int>> touching(n);

    QClustering out;
    out.clusters.universe = n;
    out.tau.assign(n, 0.0);

    auto remove_point = [&](int i) {
        alive[i] = 0;
        for (int j : touching[i])
            if (alive[j]) --degree[j];
    };

    std::size_t pos = 0;
    while (pos < events.size() && events[pos].value < stop) {
        // one group of exactly equal radii
        const double value = events[pos].value;
        std::size_t end = pos;
        while (end < events.size() && events[end].value == value) ++end;

        std::vector<int> quarter_due;
        std::vector<int> triggers;
        for (std::size_t k = pos; k < end; ++k) {
            const SweepEvent& ev = events[k];
            if (ev.kind == 0) {
                if (alive[ev.i]) quarter_due.push_back(ev.i);
                continue;
            }
            if (!alive[ev.i] || !alive[ev.j]) continue;
            touching[ev.i].push_back(ev.j);
            touching[ev.j].push_back(ev.i);
            ++degree[ev.i];
            ++degree[ev.j];
            // only a point gaining a contact can newly exhaust the budget
            for (int c : {ev.i, ev.j})
                if (degree[c] >= q &&
                    std::find(triggers.begin(), triggers.end(), c) == triggers.end())
                    triggers.push_back(c);
        }

        // A contact trigger sharing its radius with any other removal is
        // order-dependent: processing the other event first would change the
        // departing group. Quarter-radius removals among themselves commute.
        if (triggers.size() > 1 || (!triggers.empty() && !quarter_due.empty()))
            throw degenerate_input("q_cluster: simultaneous removal events at radius " +
                                   std::to_string(value));

        if (!triggers.empty()) {
            const int center = triggers.front();
            std::vector<int> cluster = {center};
            for (int j : touching[center])
                if (alive[j]) cluster.push_back(j);
            for (int i : cluster) remove_point(i);
            for (int i : cluster) out.tau[i] = std::max(value, lambda);
            out.clusters.blocks.push_back(std::move(cluster));
        } else {
            for (int i : quarter_due) {
                remove_point(i);
                out.tau[i] = std::max(value, lambda);
                out.clusters.blocks.push_back({i});
            }
        }
        pos = end;
    }

    for (int i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        out.tau[i] = std::max(stop, lambda);
        out.clusters.blocks.push_back({i});
    }

    canonicalize(out.clusters);
    return out;
}

ClusteringResult cluster_both_signs(const MatchedConfiguration& matched, int q,
                                    double eps0, double r_bar, double lambda) {
    const int n = matched.n();
    std::vector<int> inverse(n, -1);
    for (int i = 0; i < n; ++i) inverse[matched.sigma[i]] = i;

    // partner distance seen from the negative side
    std::vector<double> r_neg(n, 0.0);
    for (int j = 0; j < n; ++j) r_neg[j] = matched.r[inverse[j]];

    QClustering plus = q_cluster(matched.config.xs, matched.r, q, eps0, r_bar, lambda);
    QClustering minus = q_cluster(matched.config.ys, r_neg, q, eps0, r_bar, lambda);

    ClusteringResult out;
    out.clusters_pos = std::move(plus.clusters);
    out.clusters_neg = std::move(minus.clusters);
    out.tau_plus = std::move(plus.tau);
    out.tau_minus = std::move(minus.tau);
    return out;
}

IndexPartition multipole_partition(const MatchedConfiguration& matched, double m_mult,
                                   double lambda) {
    if (!(m_mult > 10.0))
        throw invalid_param("multipole_partition: m_mult must be > 10, got " +
                            std::to_string(m_mult));
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw invalid_param("multipole_partition: lambda must be positive and finite");
    const int n = matched.n();

    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };

    for (int i = 0; i < n; ++i) {
        const double reach_i = m_mult * std::max(matched.r[i], lambda);
        for (int j = i + 1; j < n; ++j) {
            const double reach = std::min(reach_i, m_mult * std::max(matched.r[j], lambda));
            if (matched.pair_distance(i, j) <= reach) parent[find(i)] = find(j);
        }
    }

    std::vector<std::vector<int>> buckets(n);
    for (int i = 0; i < n; ++i) buckets[find(i)].push_back(i);

    IndexPartition out;
    out.universe = n;
    for (auto& bucket : buckets)
        if (!bucket.empty()) out.blocks.push_back(std::move(bucket));
    canonicalize(out);
    return out;
}

BadPointClassification classify_points(const MatchedConfiguration& matched,
                                       const DerivedScales& scales,
                                       const ModelParams& params) {
    validate(params);
    if (scales.beta != params.beta || scales.lambda != params.lambda)
        throw invalid_param("classify_points: scales were derived from different parameters");
    const int n = matched.n();

    // smallest integer contact budget admitting q_beta touching balls
    const int q = static_cast<int>(std::ceil(scales.q_beta));

    const ClusteringResult clustering =
        cluster_both_signs(matched, q, params.eps0, scales.r_bar, params.lambda);

    const IndexPartition multipoles = multipole_partition(matched, params.m_mult, params.lambda);
    std::vector<int> block_index(n, -1);
    std::vector<int> block_size(multipoles.blocks.size(), 0);
    for (std::size_t b = 0; b < multipoles.blocks.size(); ++b) {
        block_size[b] = static_cast<int>(multipoles.blocks[b].size());
        for (int i : multipoles.blocks[b]) block_index[i] = static_cast<int>(b);
    }

    enum Label { kUnset = 0, kBad1, kBad21, kBad22, kBad3, kGood };
    std::vector<int> label(n, kUnset);

    BadPointClassification out;

    // rule 1: one of the dipole's balls died before a quarter of
    // max(partner distance, lambda); the negative-side radius of dipole i
    // lives at index sigma(i)
    for (int i = 0; i < n; ++i) {
        const double quarter = 0.25 * std::max(matched.r[i], params.lambda);
        if (clustering.tau_plus[i] < quarter ||
            clustering.tau_minus[matched.sigma[i]] < quarter)
            label[i] = kBad1;
    }

    // rule 2a: survivors in multipoles above the convergent size
    for (int i = 0; i < n; ++i) {
        if (label[i] != kUnset) continue;
        const bool oversized =
            scales.p_beta.is_minus_inf() ||
            (scales.p_beta.is_finite() && block_size[block_index[i]] > scales.p_beta.value());
        if (oversized) label[i] = kBad21;
    }

    // rule 2b: for each surviving size class, discard the whole class when
    // its population exceeds ceil(eps0^{-alpha} N lambda^{2(k-1)})
    if (scales.p_beta.is_finite()) {
        for (int k = 1; k <= scales.p_beta.value(); ++k) {
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (label[i] == kUnset && block_size[block_index[i]] == k) members.push_back(i);
            const double budget =
                std::ceil(std::pow(params.eps0, -scales.alpha) * static_cast<double>(n) *
                          std::pow(params.lambda, 2.0 * (k - 1)));
            if (static_cast<double>(members.size()) > budget) {
                for (int i : members) label[i] = kBad22;
                out.bad2_2[k] = std::move(members);
            }
        }
    }

    // rule 3: survivors with a discarded dipole within m_mult * max(r_i, lambda)
    // of them (their own radius, not the pair minimum), closed once under the
    // multipole relation
    std::vector<char> block_hit(multipoles.blocks.size(), 0);
    for (int i = 0; i < n; ++i) {
        if (label[i] != kUnset) continue;
        const double reach = params.m_mult * std::max(matched.r[i], params.lambda);
        for (int j = 0; j < n; ++j) {
            if (label[j] == kUnset || label[j] == kGood) continue;
            if (matched.pair_distance(i, j) <= reach) {
                block_hit[block_index[i]] = 1;
                break;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (label[i] != kUnset) continue;
        label[i] = block_hit[block_index[i]] ? kBad3 : kGood;
    }

    // distances to the discarded set and the final truncation radii
    const double cap = 4.0 * params.eps0 * scales.r_bar;
    out.d_bad.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.tau_z_plus.assign(n, 0.0);
    out.tau_z_minus.assign(n, 0.0);

    std::vector<int> discarded;
    for (int i = 0; i < n; ++i)
        if (label[i] != kGood) discarded.push_back(i);

    for (int i = 0; i < n; ++i) {
        if (label[i] != kGood) {
            out.tau_z_plus[i] = clustering.tau_plus[i];
            out.tau_z_minus[i] = clustering.tau_minus[matched.sigma[i]];
            continue;
        }
        // squared distances throughout, one square root at the end
        double best_sq = std::numeric_limits<double>::infinity();
        const Point& xi = matched.config.xs[i];
        const Point& yi = matched.config.ys[matched.sigma[i]];
        for (int j : discarded) {
            const Point& xj = matched.config.xs[j];
            const Point& yj = matched.config.ys[matched.sigma[j]];
            best_sq = std::min({best_sq, (xi - xj).squaredNorm(), (xi - yj).squaredNorm(),
                                (yi - xj).squaredNorm(), (yi - yj).squaredNorm()});
        }
        const double d = std::min(std::sqrt(best_sq), cap);
        out.d_bad[i] = d;
        const double tau = std::max(0.25 * d, params.lambda);
        out.tau_z_plus[i] = tau;
        out.tau_z_minus[i] = tau;
    }

    for (int i = 0; i < n; ++i) {
        switch (label[i]) {
            case kBad1: out.bad1.push_back(i); break;
            case kBad21: out.bad2_1.push_back(i); break;
            case kBad22: break; // grouped per size class above
            case kBad3: out.bad3.push_back(i); break;
            default: out.good.push_back(i); break;
        }
    }
    return out;
}

} // namespace cgas
