#include "mobius/matching.h"

#include <algorithm>
#include <string>

namespace mobius {

MatchGraph::MatchGraph(size_t num_nodes) : n_(num_nodes), weights_(num_nodes * num_nodes, kForbidden) {
    if (num_nodes % 2 != 0) {
        throw std::invalid_argument("match graph needs an even number of nodes, got " + std::to_string(num_nodes));
    }
}

void MatchGraph::set(size_t a, size_t b, int64_t w) {
    if (a >= n_ || b >= n_ || a == b) {
        throw std::out_of_range("bad match graph edge");
    }
    if (w < 0) {
        throw std::invalid_argument("negative match graph weight");
    }
    weights_[a * n_ + b] = w;
    weights_[b * n_ + a] = w;
}

namespace {

// Maximum-weight matching with maximum cardinality, after Galil's
// presentation of Edmonds' primal-dual blossom method. Vertex duals are kept
// doubled so integer edge weights give integer arithmetic throughout.
//
// Endpoints are numbered 2k and 2k+1 for edge k; endpoint(p) is the vertex at
// that end, and p ^ 1 is the opposite end.
class BlossomSolver {
   public:
    struct Edge {
        int i;
        int j;
        int64_t w;
    };

    BlossomSolver(int nvertex, std::vector<Edge> edges)
        : nv_(nvertex), edges_(std::move(edges)) {}

    // Returns mate[v] (vertex index) or -1.
    std::vector<int> solve();

   private:
    int64_t slack(int k) const { return dual_[edges_[k].i] + dual_[edges_[k].j] - 2 * edges_[k].w; }
    int endpoint(int p) const { return p % 2 == 0 ? edges_[p / 2].i : edges_[p / 2].j; }

    void leaves(int b, std::vector<int> &out) const;
    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int nv_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<bool> has_bestedges_;
    std::vector<int> unusedblossoms_;
    std::vector<int64_t> dual_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

void BlossomSolver::leaves(int b, std::vector<int> &out) const {
    if (b < nv_) {
        out.push_back(b);
        return;
    }
    for (int t : blossomchilds_[b]) {
        leaves(t, out);
    }
}

void BlossomSolver::assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        leaves(b, queue_);
    } else if (t == 2) {
        int base = blossombase_[b];
        assign_label(endpoint(mate_[base]), 1, mate_[base] ^ 1);
    }
}

int BlossomSolver::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = blossombase_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint(labelend_[b]);
            b = inblossom_[v];
            v = endpoint(labelend_[b]);
        }
        if (w != -1) {
            std::swap(v, w);
        }
    }
    for (int b : path) {
        label_[b] = 1;
    }
    return base;
}

void BlossomSolver::add_blossom(int base, int k) {
    int v = edges_[k].i;
    int w = edges_[k].j;
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<int> path;
    std::vector<int> endps;
    while (bv != bb) {
        blossomparent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint(labelend_[bv]);
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        blossomparent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint(labelend_[bw]);
        bw = inblossom_[w];
    }
    blossomchilds_[b] = path;
    blossomendps_[b] = endps;
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;

    std::vector<int> blossom_leaves;
    leaves(b, blossom_leaves);
    for (int leaf : blossom_leaves) {
        if (label_[inblossom_[leaf]] == 2) {
            queue_.push_back(leaf);
        }
        inblossom_[leaf] = b;
    }

    std::vector<int> bestedgeto(2 * nv_, -1);
    for (int child : path) {
        std::vector<int> candidates;
        if (!has_bestedges_[child]) {
            std::vector<int> child_leaves;
            leaves(child, child_leaves);
            for (int leaf : child_leaves) {
                for (int p : neighbend_[leaf]) {
                    candidates.push_back(p / 2);
                }
            }
        } else {
            candidates = blossombestedges_[child];
        }
        for (int kk : candidates) {
            int i = edges_[kk].i;
            int j = edges_[kk].j;
            if (inblossom_[j] == b) {
                std::swap(i, j);
            }
            int bj = inblossom_[j];
            if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                bestedgeto[bj] = kk;
            }
        }
        blossombestedges_[child].clear();
        has_bestedges_[child] = false;
        bestedge_[child] = -1;
    }
    blossombestedges_[b].clear();
    for (int kk : bestedgeto) {
        if (kk != -1) {
            blossombestedges_[b].push_back(kk);
        }
    }
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (int kk : blossombestedges_[b]) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
            bestedge_[b] = kk;
        }
    }
}

void BlossomSolver::expand_blossom(int b, bool endstage) {
    std::vector<int> childs = blossomchilds_[b];
    for (int s : childs) {
        blossomparent_[s] = -1;
        if (s < nv_) {
            inblossom_[s] = s;
        } else if (endstage && dual_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            std::vector<int> ls;
            leaves(s, ls);
            for (int leaf : ls) {
                inblossom_[leaf] = s;
            }
        }
    }
    if (!endstage && label_[b] == 2) {
        const auto &ch = blossomchilds_[b];
        const auto &eps = blossomendps_[b];
        const int len = static_cast<int>(ch.size());
        auto at = [len](const std::vector<int> &v, int idx) { return v[((idx % len) + len) % len]; };

        int entrychild = inblossom_[endpoint(labelend_[b] ^ 1)];
        int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
        int jstep;
        int endptrick;
        if (j & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint(p ^ 1)] = 0;
            label_[endpoint(at(eps, j - endptrick) ^ endptrick ^ 1)] = 0;
            assign_label(endpoint(p ^ 1), 2, p);
            allowedge_[at(eps, j - endptrick) / 2] = true;
            j += jstep;
            p = at(eps, j - endptrick) ^ endptrick;
            allowedge_[p / 2] = true;
            j += jstep;
        }
        int bv = at(ch, j);
        label_[endpoint(p ^ 1)] = label_[bv] = 2;
        labelend_[endpoint(p ^ 1)] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (at(ch, j) != entrychild) {
            bv = at(ch, j);
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            std::vector<int> ls;
            leaves(bv, ls);
            int found = -1;
            for (int leaf : ls) {
                if (label_[leaf] != 0) {
                    found = leaf;
                    break;
                }
            }
            if (found != -1) {
                label_[found] = 0;
                label_[endpoint(mate_[blossombase_[bv]])] = 0;
                assign_label(found, 2, labelend_[found]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
}

void BlossomSolver::augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) {
        t = blossomparent_[t];
    }
    if (t >= nv_) {
        augment_blossom(t, v);
    }
    auto &ch = blossomchilds_[b];
    auto &eps = blossomendps_[b];
    const int len = static_cast<int>(ch.size());
    auto at = [len](const std::vector<int> &vec, int idx) { return vec[((idx % len) + len) % len]; };

    int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = at(ch, j);
        int p = at(eps, j - endptrick) ^ endptrick;
        if (t >= nv_) {
            augment_blossom(t, endpoint(p));
        }
        j += jstep;
        t = at(ch, j);
        if (t >= nv_) {
            augment_blossom(t, endpoint(p ^ 1));
        }
        mate_[endpoint(p)] = p ^ 1;
        mate_[endpoint(p ^ 1)] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(eps.begin(), eps.begin() + i, eps.end());
    blossombase_[b] = blossombase_[ch[0]];
}

void BlossomSolver::augment_matching(int k) {
    int v = edges_[k].i;
    int w = edges_[k].j;
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
        while (true) {
            int bs = inblossom_[s];
            if (bs >= nv_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            int t = endpoint(labelend_[bs]);
            int bt = inblossom_[t];
            s = endpoint(labelend_[bt]);
            int jj = endpoint(labelend_[bt] ^ 1);
            if (bt >= nv_) {
                augment_blossom(bt, jj);
            }
            mate_[jj] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> BlossomSolver::solve() {
    const int nedge = static_cast<int>(edges_.size());
    if (nedge == 0) {
        return std::vector<int>(nv_, -1);
    }
    int64_t maxweight = 0;
    for (const auto &e : edges_) {
        maxweight = std::max(maxweight, e.w);
    }
    neighbend_.assign(nv_, {});
    for (int k = 0; k < nedge; k++) {
        neighbend_[edges_[k].i].push_back(2 * k + 1);
        neighbend_[edges_[k].j].push_back(2 * k);
    }
    mate_.assign(nv_, -1);
    label_.assign(2 * nv_, 0);
    labelend_.assign(2 * nv_, -1);
    inblossom_.resize(nv_);
    for (int v = 0; v < nv_; v++) {
        inblossom_[v] = v;
    }
    blossomparent_.assign(2 * nv_, -1);
    blossomchilds_.assign(2 * nv_, {});
    blossombase_.assign(2 * nv_, -1);
    for (int v = 0; v < nv_; v++) {
        blossombase_[v] = v;
    }
    blossomendps_.assign(2 * nv_, {});
    bestedge_.assign(2 * nv_, -1);
    blossombestedges_.assign(2 * nv_, {});
    has_bestedges_.assign(2 * nv_, false);
    unusedblossoms_.clear();
    for (int b = 2 * nv_ - 1; b >= nv_; b--) {
        unusedblossoms_.push_back(b);
    }
    dual_.assign(2 * nv_, 0);
    for (int v = 0; v < nv_; v++) {
        dual_[v] = maxweight;
    }
    allowedge_.assign(nedge, false);

    for (int stage = 0; stage < nv_; stage++) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = nv_; b < 2 * nv_; b++) {
            blossombestedges_[b].clear();
            has_bestedges_[b] = false;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), false);
        queue_.clear();
        for (int v = 0; v < nv_; v++) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }

        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    int k = p / 2;
                    int w = endpoint(p);
                    if (inblossom_[v] == inblossom_[w]) {
                        continue;
                    }
                    int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) {
                            allowedge_[k] = true;
                        }
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                            bestedge_[b] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) {
                break;
            }

            // No augmenting path under the current duals: find the largest
            // dual change that keeps every slack non-negative.
            int deltatype = -1;
            int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            for (int v = 0; v < nv_; v++) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * nv_; b++) {
                if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    int64_t d = slack(bestedge_[b]) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = nv_; b < 2 * nv_; b++) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                    (deltatype == -1 || dual_[b] < delta)) {
                    delta = dual_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                // Maximum cardinality reached; let the vertex duals run down.
                deltatype = 1;
                int64_t mn = dual_[0];
                for (int v = 1; v < nv_; v++) {
                    mn = std::min(mn, dual_[v]);
                }
                delta = std::max<int64_t>(0, mn);
            }

            for (int v = 0; v < nv_; v++) {
                if (label_[inblossom_[v]] == 1) {
                    dual_[v] -= delta;
                } else if (label_[inblossom_[v]] == 2) {
                    dual_[v] += delta;
                }
            }
            for (int b = nv_; b < 2 * nv_; b++) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                    if (label_[b] == 1) {
                        dual_[b] += delta;
                    } else if (label_[b] == 2) {
                        dual_[b] -= delta;
                    }
                }
            }

            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allowedge_[deltaedge] = true;
                int i = edges_[deltaedge].i;
                int j = edges_[deltaedge].j;
                if (label_[inblossom_[i]] == 0) {
                    std::swap(i, j);
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = true;
                queue_.push_back(edges_[deltaedge].i);
            } else {
                expand_blossom(deltablossom, false);
            }
        }

        if (!augmented) {
            break;
        }
        for (int b = nv_; b < 2 * nv_; b++) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }

    std::vector<int> result(nv_, -1);
    for (int v = 0; v < nv_; v++) {
        if (mate_[v] >= 0) {
            result[v] = endpoint(mate_[v]);
        }
    }
    return result;
}

Matching finish(const MatchGraph &graph, std::vector<std::pair<uint32_t, uint32_t>> pairs) {
    Matching m;
    for (auto &[a, b] : pairs) {
        if (a > b) {
            std::swap(a, b);
        }
        m.cost += graph.weight(a, b);
    }
    std::sort(pairs.begin(), pairs.end());
    m.pairs = std::move(pairs);
    return m;
}

}  // namespace

Matching mwpm(const MatchGraph &graph) {
    const size_t n = graph.size();
    if (n == 0) {
        return Matching{};
    }
    // Maximize sum(top - w) over maximum-cardinality matchings, which is a
    // minimum-weight perfect matching whenever a perfect one exists.
    int64_t top = 0;
    for (size_t a = 0; a < n; a++) {
        for (size_t b = a + 1; b < n; b++) {
            if (graph.weight(a, b) != kForbidden) {
                top = std::max(top, graph.weight(a, b));
            }
        }
    }
    top += 1;
    std::vector<BlossomSolver::Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (size_t a = 0; a < n; a++) {
        for (size_t b = a + 1; b < n; b++) {
            int64_t w = graph.weight(a, b);
            if (w != kForbidden) {
                edges.push_back({static_cast<int>(a), static_cast<int>(b), top - w});
            }
        }
    }
    BlossomSolver solver(static_cast<int>(n), std::move(edges));
    std::vector<int> mate = solver.solve();

    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    for (size_t v = 0; v < n; v++) {
        if (mate[v] < 0) {
            throw InfeasibleMatching("no perfect matching avoids the forbidden edges");
        }
        if (static_cast<size_t>(mate[v]) > v) {
            pairs.emplace_back(static_cast<uint32_t>(v), static_cast<uint32_t>(mate[v]));
        }
    }
    return finish(graph, std::move(pairs));
}

namespace {

void brute_force_recurse(
    const MatchGraph &graph,
    std::vector<bool> &used,
    std::vector<std::pair<uint32_t, uint32_t>> &current,
    int64_t cost,
    int64_t &best_cost,
    std::vector<std::pair<uint32_t, uint32_t>> &best) {
    const size_t n = graph.size();
    size_t first = 0;
    while (first < n && used[first]) {
        first++;
    }
    if (first == n) {
        if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best = current;
        }
        return;
    }
    used[first] = true;
    for (size_t other = first + 1; other < n; other++) {
        if (used[other] || graph.weight(first, other) == kForbidden) {
            continue;
        }
        used[other] = true;
        current.emplace_back(static_cast<uint32_t>(first), static_cast<uint32_t>(other));
        brute_force_recurse(graph, used, current, cost + graph.weight(first, other), best_cost, best);
        current.pop_back();
        used[other] = false;
    }
    used[first] = false;
}

}  // namespace

Matching brute_force_matching(const MatchGraph &graph) {
    if (graph.size() > kBruteForceMaxNodes) {
        throw std::invalid_argument(
            "brute force matching limited to " + std::to_string(kBruteForceMaxNodes) + " nodes, got " +
            std::to_string(graph.size()));
    }
    std::vector<bool> used(graph.size(), false);
    std::vector<std::pair<uint32_t, uint32_t>> current;
    std::vector<std::pair<uint32_t, uint32_t>> best;
    int64_t best_cost = -1;
    brute_force_recurse(graph, used, current, 0, best_cost, best);
    if (best_cost < 0 && graph.size() > 0) {
        throw InfeasibleMatching("no perfect matching avoids the forbidden edges");
    }
    return finish(graph, std::move(best));
}

}  // namespace mobius
