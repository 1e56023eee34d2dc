#include "hhqec/blossom.hpp"

#include <algorithm>
#include <stdexcept>

namespace hhqec {

namespace {

// Primal-dual blossom algorithm after Galil (1986), in the formulation popularised by
// Joris van Rantwijk's reference implementation. Vertex duals start at the maximum edge
// weight; with integer weights all dual changes stay integral (edge slacks between two
// S-blossoms are even).
class BlossomMatcher {
  public:
    BlossomMatcher(int n, const std::vector<WeightedEdge>& edges, bool max_cardinality)
        : n_(n), edges_(edges), max_card_(max_cardinality) {}

    std::vector<int> run();

  private:
    int n_;
    const std::vector<WeightedEdge>& edges_;
    bool max_card_;

    std::vector<int> endpoint_;
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
    std::vector<char> has_bestedges_;
    std::vector<int> unusedblossoms_;
    std::vector<std::int64_t> dualvar_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;

    std::int64_t slack(int k) const {
        const auto& e = edges_[k];
        return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
    }

    static int wrap(int j, int len) { return ((j % len) + len) % len; }

    void leaves(int b, std::vector<int>& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[b]) leaves(t, out);
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);
};

void BlossomMatcher::assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        leaves(b, queue_);
    } else if (t == 2) {
        const int base = blossombase_[b];
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

int BlossomMatcher::scan_blossom(int v, int w) {
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
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
}

void BlossomMatcher::add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    const int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    const int b = unusedblossoms_.back();
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
        v = endpoint_[labelend_[bv]];
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
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    blossomchilds_[b] = path;
    blossomendps_[b] = endps;
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    for (int leaf : leaves(b)) {
        if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
        inblossom_[leaf] = b;
    }
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int sub : path) {
        std::vector<std::vector<int>> nblists;
        if (!has_bestedges_[sub]) {
            for (int leaf : leaves(sub)) {
                std::vector<int> lst;
                for (int p : neighbend_[leaf]) lst.push_back(p / 2);
                nblists.push_back(std::move(lst));
            }
        } else {
            nblists.push_back(blossombestedges_[sub]);
        }
        for (const auto& nblist : nblists) {
            for (int kk : nblist) {
                int i = edges_[kk].u;
                int j = edges_[kk].v;
                if (inblossom_[j] == b) std::swap(i, j);
                const int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = kk;
                }
            }
        }
        blossombestedges_[sub].clear();
        has_bestedges_[sub] = 0;
        bestedge_[sub] = -1;
    }
    blossombestedges_[b].clear();
    for (int kk : bestedgeto) {
        if (kk != -1) blossombestedges_[b].push_back(kk);
    }
    has_bestedges_[b] = 1;
    bestedge_[b] = -1;
    for (int kk : blossombestedges_[b]) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
    }
}

void BlossomMatcher::expand_blossom(int b, bool endstage) {
    const std::vector<int> childs = blossomchilds_[b];
    for (int s : childs) {
        blossomparent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dualvar_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            for (int leaf : leaves(s)) inblossom_[leaf] = s;
        }
    }
    if (!endstage && label_[b] == 2) {
        const auto& ch = blossomchilds_[b];
        const auto& ep = blossomendps_[b];
        const int len = static_cast<int>(ch.size());
        const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
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
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[ep[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[ep[wrap(j - endptrick, len)] / 2] = 1;
            j += jstep;
            p = ep[wrap(j - endptrick, len)] ^ endptrick;
            allowedge_[p / 2] = 1;
            j += jstep;
        }
        int bv = ch[wrap(j, len)];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (ch[wrap(j, len)] != entrychild) {
            bv = ch[wrap(j, len)];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            int found = -1;
            for (int leaf : leaves(bv)) {
                if (label_[leaf] != 0) {
                    found = leaf;
                    break;
                }
            }
            if (found != -1) {
                label_[found] = 0;
                label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
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
    has_bestedges_[b] = 0;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
}

void BlossomMatcher::augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= n_) augment_blossom(t, v);
    auto& ch = blossomchilds_[b];
    auto& ep = blossomendps_[b];
    const int len = static_cast<int>(ch.size());
    const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
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
        t = ch[wrap(j, len)];
        const int p = ep[wrap(j - endptrick, len)] ^ endptrick;
        if (t >= n_) augment_blossom(t, endpoint_[p]);
        j += jstep;
        t = ch[wrap(j, len)];
        if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    blossombase_[b] = blossombase_[ch[0]];
}

void BlossomMatcher::augment_matching(int k) {
    const int v = edges_[k].u;
    const int w = edges_[k].v;
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
        while (true) {
            const int bs = inblossom_[s];
            if (bs >= n_) augment_blossom(bs, s);
            mate_[s] = p;
            if (labelend_[bs] == -1) break;
            const int t = endpoint_[labelend_[bs]];
            const int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            const int j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) augment_blossom(bt, j);
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> BlossomMatcher::run() {
    const int nedge = static_cast<int>(edges_.size());
    std::vector<int> result(n_, -1);
    if (nedge == 0) return result;
    for (const auto& e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_ || e.u == e.v) {
            throw std::invalid_argument("matching edge has invalid endpoints");
        }
    }

    std::int64_t maxweight = 0;
    for (const auto& e : edges_) maxweight = std::max(maxweight, e.weight);

    endpoint_.resize(2 * nedge);
    for (int p = 0; p < 2 * nedge; ++p) endpoint_[p] = (p % 2 == 0) ? edges_[p / 2].u : edges_[p / 2].v;
    neighbend_.assign(n_, {});
    for (int k = 0; k < nedge; ++k) {
        neighbend_[edges_[k].u].push_back(2 * k + 1);
        neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    for (int v = 0; v < n_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * n_, -1);
    blossomchilds_.assign(2 * n_, {});
    blossombase_.assign(2 * n_, -1);
    for (int v = 0; v < n_; ++v) blossombase_[v] = v;
    blossomendps_.assign(2 * n_, {});
    bestedge_.assign(2 * n_, -1);
    blossombestedges_.assign(2 * n_, {});
    has_bestedges_.assign(2 * n_, 0);
    unusedblossoms_.clear();
    for (int b = 2 * n_ - 1; b >= n_; --b) unusedblossoms_.push_back(b);
    std::reverse(unusedblossoms_.begin(), unusedblossoms_.end());
    dualvar_.assign(2 * n_, 0);
    for (int v = 0; v < n_; ++v) dualvar_[v] = maxweight;
    allowedge_.assign(nedge, 0);

    for (int stage = 0; stage < n_; ++stage) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n_; b < 2 * n_; ++b) {
            blossombestedges_[b].clear();
            has_bestedges_[b] = 0;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();
        for (int v = 0; v < n_; ++v) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                const int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    const int k = p / 2;
                    const int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) continue;
                    std::int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) allowedge_[k] = 1;
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            const int base = scan_blossom(v, w);
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
                        const int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                    }
                }
            }
            if (augmented) break;

            int deltatype = -1;
            std::int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!max_card_) {
                deltatype = 1;
                delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
            }
            for (int v = 0; v < n_; ++v) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    const std::int64_t dd = slack(bestedge_[v]);
                    if (deltatype == -1 || dd < delta) {
                        delta = dd;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n_; ++b) {
                if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    const std::int64_t ks = slack(bestedge_[b]);
                    if (ks % 2 != 0) throw std::logic_error("blossom: odd slack between S-blossoms");
                    const std::int64_t dd = ks / 2;
                    if (deltatype == -1 || dd < delta) {
                        delta = dd;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                    (deltatype == -1 || dualvar_[b] < delta)) {
                    delta = dualvar_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<std::int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
            }

            for (int v = 0; v < n_; ++v) {
                if (label_[inblossom_[v]] == 1) {
                    dualvar_[v] -= delta;
                } else if (label_[inblossom_[v]] == 2) {
                    dualvar_[v] += delta;
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                    if (label_[b] == 1) {
                        dualvar_[b] += delta;
                    } else if (label_[b] == 2) {
                        dualvar_[b] -= delta;
                    }
                }
            }

            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int i = edges_[deltaedge].u;
                int j = edges_[deltaedge].v;
                if (label_[inblossom_[i]] == 0) std::swap(i, j);
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                queue_.push_back(edges_[deltaedge].u);
            } else if (deltatype == 4) {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) break;
        for (int b = n_; b < 2 * n_; ++b) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }
    for (int v = 0; v < n_; ++v) result[v] = mate_[v] >= 0 ? endpoint_[mate_[v]] : -1;
    return result;
}

}  // namespace

std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality) {
    return BlossomMatcher(num_vertices, edges, max_cardinality).run();
}

std::vector<int> min_weight_perfect_matching(int num_vertices, const std::vector<WeightedEdge>& edges) {
    if (num_vertices == 0) return {};
    if (num_vertices % 2 != 0) throw std::runtime_error("perfect matching needs an even vertex count");
    std::int64_t wmax = 0;
    for (const auto& e : edges) {
        if (e.weight < 0) throw std::invalid_argument("matching weights must be non-negative");
        wmax = std::max(wmax, e.weight);
    }
    std::vector<WeightedEdge> flipped;
    flipped.reserve(edges.size());
    for (const auto& e : edges) flipped.push_back({e.u, e.v, wmax + 1 - e.weight});
    auto mate = max_weight_matching(num_vertices, flipped, true);
    for (int m : mate) {
        if (m < 0) throw std::runtime_error("graph has no perfect matching");
    }
    return mate;
}

}  // namespace hhqec
