// Presolve + bounded-variable revised simplex.
//
// Computational form: structural columns A (sparse), one logical variable per
// row, constraint system A x - r = 0 with all range information carried by
// the logical bounds. Columns that are +-unit vectors (logicals, slack-like
// structurals) are kept out of the factorized part of the basis: the basis
// splits into rows owned by a basic unit column and a small dense block K
// over the remaining rows and the non-unit basic columns. K's inverse is
// maintained explicitly with rank-one updates, so iterations cost O(k^2 + nnz)
// instead of O(m^2). For programs without unit columns this degenerates to an
// ordinary dense revised simplex.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gtkit/lp.hpp"

namespace gtkit::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-10;
constexpr double kDjTol = 1e-9;
constexpr double kUpdateTol = 1e-9;
constexpr int kRefactorEvery = 100;
constexpr int kDegenerateLimit = 60;

struct Row {
    std::vector<std::pair<std::uint32_t, double>> terms;
    double lo = -kInf;
    double hi = kInf;
};

struct Substitution {
    std::uint32_t var;
    double self_coef;
    double rhs;
    std::vector<std::pair<std::uint32_t, double>> terms;
};

struct Presolved {
    bool infeasible = false;
    std::vector<Row> rows;                 // kept rows, original var indices
    std::vector<double> obj;               // folded objective, original indices
    std::vector<double> lo, hi;            // working bounds (forcing rows may fix vars)
    std::vector<char> eliminated;          // substituted out by a singleton equality
    std::vector<Substitution> subs;        // replay in reverse to recover values
};

Presolved presolve(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    Presolved ps;
    ps.obj = lp.objective();
    ps.lo = lp.lower();
    ps.hi = lp.upper();
    ps.eliminated.assign(n, 0);

    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(ps.lo[j]) || !std::isfinite(ps.hi[j]))
            throw std::invalid_argument("solve requires finite variable bounds");
        if (ps.lo[j] > ps.hi[j]) throw std::invalid_argument("variable bounds crossed");
    }

    std::vector<Row> rows;
    rows.reserve(lp.constraints().size());
    for (const auto& c : lp.constraints()) {
        Row r;
        r.terms = c.terms;
        switch (c.rel) {
            case Relation::Eq: r.lo = r.hi = c.rhs; break;
            case Relation::Ge: r.lo = c.rhs; break;
            case Relation::Le: r.hi = c.rhs; break;
        }
        rows.push_back(std::move(r));
    }

    std::vector<int> occurrences(n, 0);
    for (const auto& r : rows)
        for (const auto& [j, v] : r.terms) { (void)v; ++occurrences[j]; }

    std::vector<char> dropped(rows.size(), 0);
    const auto fixed = [&](std::uint32_t j) { return ps.hi[j] - ps.lo[j] <= 0.0; };

    // Fold variables fixed by their bounds into the row ranges.
    const auto strip_fixed = [&](Row& r) {
        std::size_t out = 0;
        for (auto& t : r.terms) {
            if (fixed(t.first) && !ps.eliminated[t.first]) {
                const double c = t.second * ps.lo[t.first];
                if (std::isfinite(r.lo)) r.lo -= c;
                if (std::isfinite(r.hi)) r.hi -= c;
                --occurrences[t.first];
            } else {
                r.terms[out++] = t;
            }
        }
        r.terms.resize(out);
    };

    bool changed = true;
    for (int pass = 0; changed && pass < 16; ++pass) {
        changed = false;
        for (std::size_t ri = 0; ri < rows.size(); ++ri) {
            if (dropped[ri]) continue;
            Row& r = rows[ri];
            strip_fixed(r);

            // Singleton variable in an equality row: substitute it out and
            // carry its bounds into the row range.
            if (r.lo == r.hi) {
                int best = -1;
                for (int ti = 0; ti < static_cast<int>(r.terms.size()); ++ti) {
                    const auto [j, a] = r.terms[ti];
                    if (occurrences[j] == 1 && std::fabs(a) >= 1e-7 && !fixed(j)) {
                        if (best < 0 || std::fabs(a) > std::fabs(r.terms[best].second)) best = ti;
                    }
                }
                if (best >= 0) {
                    const auto [v, a] = r.terms[best];
                    const double b = r.lo;
                    r.terms.erase(r.terms.begin() + best);
                    --occurrences[v];
                    Substitution sub{v, a, b, r.terms};
                    const double av_lo = std::min(a * ps.lo[v], a * ps.hi[v]);
                    const double av_hi = std::max(a * ps.lo[v], a * ps.hi[v]);
                    r.lo = b - av_hi;
                    r.hi = b - av_lo;
                    const double cv = ps.obj[v];
                    if (cv != 0.0)
                        for (const auto& [j, g] : sub.terms) ps.obj[j] -= cv * g / a;
                    ps.obj[v] = 0.0;
                    ps.eliminated[v] = 1;
                    ps.subs.push_back(std::move(sub));
                    changed = true;
                }
            }

            // Activity bounds from the variable boxes.
            double amin = 0.0, amax = 0.0;
            for (const auto& [j, a] : r.terms) {
                amin += std::min(a * ps.lo[j], a * ps.hi[j]);
                amax += std::max(a * ps.lo[j], a * ps.hi[j]);
            }

            if (r.terms.empty()) {
                if (r.lo > kFeasTol || r.hi < -kFeasTol) {
                    ps.infeasible = true;
                    return ps;
                }
                dropped[ri] = 1;
                changed = true;
                continue;
            }
            if (amin > r.hi + kFeasTol || amax < r.lo - kFeasTol) {
                ps.infeasible = true;
                return ps;
            }

            // Forcing row: the activity can only touch one end of the range,
            // pinning every variable in the row at the matching bound.
            if (amin >= r.hi - 1e-12) {
                for (const auto& [j, a] : r.terms) {
                    const double bound = a > 0 ? ps.lo[j] : ps.hi[j];
                    ps.lo[j] = ps.hi[j] = bound;
                }
                strip_fixed(r);
                dropped[ri] = 1;
                changed = true;
                continue;
            }
            if (amax <= r.lo + 1e-12) {
                for (const auto& [j, a] : r.terms) {
                    const double bound = a > 0 ? ps.hi[j] : ps.lo[j];
                    ps.lo[j] = ps.hi[j] = bound;
                }
                strip_fixed(r);
                dropped[ri] = 1;
                changed = true;
                continue;
            }

            if (amin >= r.lo - 1e-12 && amax <= r.hi + 1e-12) {
                for (const auto& [j, v] : r.terms) { (void)v; --occurrences[j]; }
                r.terms.clear();
                dropped[ri] = 1;
                changed = true;
            }
        }
    }

    // Range rows whose upper side is dominated by an equality row: if
    // h >= g componentwise over nonnegative variables then g.x <= h.x = b.
    std::vector<std::size_t> eq_rows;
    for (std::size_t ri = 0; ri < rows.size(); ++ri)
        if (!dropped[ri] && rows[ri].lo == rows[ri].hi && !rows[ri].terms.empty())
            eq_rows.push_back(ri);
    if (!eq_rows.empty()) {
        std::vector<double> hdense(n, 0.0);
        for (auto ei : eq_rows) {
            const Row& h = rows[ei];
            bool ok = true;
            for (const auto& [j, a] : h.terms)
                if (a < 0.0 || ps.lo[j] < 0.0) { ok = false; break; }
            if (!ok) continue;
            for (const auto& [j, a] : h.terms) hdense[j] = a;
            for (std::size_t ri = 0; ri < rows.size(); ++ri) {
                if (dropped[ri] || ri == ei) continue;
                Row& g = rows[ri];
                if (g.terms.empty() || !(h.lo <= g.hi + 1e-12)) continue;
                double amin = 0.0;
                bool dom = true;
                for (const auto& [j, a] : g.terms) {
                    if (a < 0.0 || a > hdense[j] + 1e-12 || ps.lo[j] < 0.0) {
                        dom = false;
                        break;
                    }
                    amin += a * ps.lo[j];
                }
                if (!dom || amin < g.lo - 1e-12) continue;
                for (const auto& [j, v] : g.terms) { (void)v; --occurrences[j]; }
                g.terms.clear();
                dropped[ri] = 1;
            }
            for (const auto& [j, a] : h.terms) { (void)a; hdense[j] = 0.0; }
        }
    }

    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        if (dropped[ri]) continue;
        strip_fixed(rows[ri]);  // passes may have fixed variables after the last strip
        if (rows[ri].terms.empty()) {
            if (rows[ri].lo > kFeasTol || rows[ri].hi < -kFeasTol) {
                ps.infeasible = true;
                return ps;
            }
            continue;
        }
        ps.rows.push_back(std::move(rows[ri]));
    }
    return ps;
}

// ---------------------------------------------------------------------------

class Simplex {
  public:
    Simplex(const Presolved& ps, std::size_t n_orig) {
        keep_.reserve(n_orig);
        remap_.assign(n_orig, -1);
        for (std::uint32_t j = 0; j < n_orig; ++j) {
            if (ps.eliminated[j] || ps.hi[j] - ps.lo[j] <= 0.0) continue;
            remap_[j] = static_cast<int>(keep_.size());
            keep_.push_back(j);
        }
        ns_ = static_cast<int>(keep_.size());
        m_ = static_cast<int>(ps.rows.size());
        nv_ = ns_ + m_;

        lo_.resize(nv_);
        hi_.resize(nv_);
        cost_.assign(nv_, 0.0);
        for (int v = 0; v < ns_; ++v) {
            lo_[v] = ps.lo[keep_[v]];
            hi_[v] = ps.hi[keep_[v]];
            cost_[v] = ps.obj[keep_[v]];
        }
        for (int r = 0; r < m_; ++r) {
            lo_[ns_ + r] = ps.rows[r].lo;
            hi_[ns_ + r] = ps.rows[r].hi;
        }

        // Structural columns, compressed. Fixed variables were folded into the
        // row ranges by presolve, so every remaining term maps to a kept var.
        cstart_.assign(ns_ + 1, 0);
        std::vector<std::vector<std::pair<int, double>>> cols(ns_);
        for (int r = 0; r < m_; ++r)
            for (const auto& [j, a] : ps.rows[r].terms) cols[remap_[j]].emplace_back(r, a);
        for (int v = 0; v < ns_; ++v) cstart_[v + 1] = cstart_[v] + static_cast<int>(cols[v].size());
        crow_.resize(cstart_[ns_]);
        cval_.resize(cstart_[ns_]);
        for (int v = 0; v < ns_; ++v)
            for (int t = 0; t < static_cast<int>(cols[v].size()); ++t) {
                crow_[cstart_[v] + t] = cols[v][t].first;
                cval_[cstart_[v] + t] = cols[v][t].second;
            }

        unit_row_.assign(nv_, -1);
        unit_sign_.assign(nv_, 0.0);
        for (int v = 0; v < ns_; ++v) {
            const int len = cstart_[v + 1] - cstart_[v];
            if (len == 1 && std::fabs(cval_[cstart_[v]]) == 1.0) {
                unit_row_[v] = crow_[cstart_[v]];
                unit_sign_[v] = cval_[cstart_[v]];
            }
        }
        for (int r = 0; r < m_; ++r) {
            unit_row_[ns_ + r] = r;
            unit_sign_[ns_ + r] = -1.0;
        }

        // Initial basis: every logical basic in its own row, structurals at
        // their lower bound.
        state_.assign(nv_, 0);
        value_.assign(nv_, 0.0);
        owner_.assign(m_, -1);
        posF_.assign(m_, -1);
        posD_.assign(nv_, -1);
        for (int v = 0; v < ns_; ++v) value_[v] = lo_[v];
        for (int r = 0; r < m_; ++r) {
            const int v = ns_ + r;
            state_[v] = 2;
            owner_[r] = v;
        }
        k_ = 0;
        recompute_basics();
    }

    // Runs phase 1 (and phase 2 when want_optimal). Returns Optimal or
    // Infeasible; throws on the structurally impossible unbounded case.
    SolveStatus run(bool want_optimal) {
        if (!phase1()) return SolveStatus::Infeasible;
        if (want_optimal) phase2();
        return SolveStatus::Optimal;
    }

    // Values for the kept variables, in original indexing.
    void extract(std::vector<double>& x_orig) const {
        for (int v = 0; v < ns_; ++v) x_orig[keep_[v]] = value_[v];
    }

  private:
    static bool improving(double d, char st) {
        return (st == 0 && d < -kDjTol) || (st == 1 && d > kDjTol);
    }

    double infeas(int v) const {
        if (value_[v] > hi_[v] + kFeasTol) return value_[v] - hi_[v];
        if (value_[v] < lo_[v] - kFeasTol) return value_[v] - lo_[v];
        return 0.0;
    }

    bool phase1() {
        std::vector<double> c1(nv_, 0.0);
        for (long iter = 0;; ++iter) {
            guard_iterations(iter);
            maybe_refactor();
            double total = 0.0;
            std::fill(c1.begin(), c1.end(), 0.0);
            for_each_basic([&](int v) {
                const double f = infeas(v);
                if (f > 0.0) {
                    c1[v] = 1.0;
                    total += f;
                } else if (f < 0.0) {
                    c1[v] = -1.0;
                    total -= f;
                }
            });
            if (total <= kFeasTol * 10) return true;
            btran(c1);
            const int e = price(c1);
            if (e < 0) return false;
            step(e, /*phase1=*/true);
        }
    }

    void phase2() {
        for (long iter = 0;; ++iter) {
            guard_iterations(iter);
            maybe_refactor();
            btran(cost_);
            const int e = price(cost_);
            if (e < 0) return;
            step(e, /*phase1=*/false);
        }
    }

    void guard_iterations(long iter) const {
        if (iter > 400L * (nv_ + 16) + 200000L)
            throw std::runtime_error("simplex iteration limit exceeded (solver defect)");
    }

    template <class Fn>
    void for_each_basic(Fn&& fn) const {
        for (int r = 0; r < m_; ++r)
            if (owner_[r] >= 0) fn(owner_[r]);
        for (int j = 0; j < k_; ++j) fn(densev_[j]);
    }

    // --- column access -----------------------------------------------------

    template <class Fn>
    void for_col(int v, Fn&& fn) const {
        if (v >= ns_) {
            fn(v - ns_, -1.0);
            return;
        }
        for (int t = cstart_[v]; t < cstart_[v + 1]; ++t) fn(crow_[t], cval_[t]);
    }

    double col_entry(int v, int row) const {
        double out = 0.0;
        for_col(v, [&](int r, double a) {
            if (r == row) out = a;
        });
        return out;
    }

    // --- basis solves ------------------------------------------------------

    // pi such that pi . A_v = c_v for every basic v.
    void btran(const std::vector<double>& c) {
        pi_.assign(m_, 0.0);
        for (int r = 0; r < m_; ++r)
            if (owner_[r] >= 0) pi_[r] = c[owner_[r]] * unit_sign_[owner_[r]];
        if (k_ == 0) return;
        tmpk_.assign(k_, 0.0);
        for (int j = 0; j < k_; ++j) {
            const int v = densev_[j];
            double rhs = c[v];
            for_col(v, [&](int r, double a) {
                if (owner_[r] >= 0) rhs -= pi_[r] * a;
            });
            tmpk_[j] = rhs;
        }
        for (int b = 0; b < k_; ++b) {
            double s = 0.0;
            for (int a = 0; a < k_; ++a) s += tmpk_[a] * Kinv_[a * k_ + b];
            pi_[Frows_[b]] = s;
        }
    }

    // w = B^-1 A_e. Dense components in wd_, unit components in wrow_[row].
    void ftran(int e) {
        aF_.assign(k_, 0.0);
        racc_.assign(m_, 0.0);
        for_col(e, [&](int r, double a) {
            if (posF_[r] >= 0) aF_[posF_[r]] = a;
        });
        wd_.assign(k_, 0.0);
        for (int a = 0; a < k_; ++a) {
            double s = 0.0;
            for (int b = 0; b < k_; ++b) s += Kinv_[a * k_ + b] * aF_[b];
            wd_[a] = s;
        }
        for (int j = 0; j < k_; ++j) {
            if (wd_[j] == 0.0) continue;
            for_col(densev_[j], [&](int r, double a) { racc_[r] += a * wd_[j]; });
        }
        wrow_.assign(m_, 0.0);
        for_col(e, [&](int r, double a) { wrow_[r] += a; });
        for (int r = 0; r < m_; ++r) {
            if (owner_[r] < 0) continue;
            wrow_[r] = unit_sign_[owner_[r]] * (wrow_[r] - racc_[r]);
        }
    }

    // Most-violating reduced cost; Bland's least-index rule when the guard is
    // active. Returns -1 when no candidate remains.
    int price(const std::vector<double>& c) const {
        int best = -1;
        double best_score = kDjTol;
        for (int v = 0; v < nv_; ++v) {
            if (state_[v] == 2 || hi_[v] - lo_[v] <= 0.0) continue;
            double d = c[v];
            if (unit_row_[v] >= 0)
                d -= pi_[unit_row_[v]] * unit_sign_[v];
            else
                for_col(v, [&](int r, double a) { d -= pi_[r] * a; });
            if (!improving(d, state_[v])) continue;
            if (bland_) return v;
            const double score = std::fabs(d);
            if (score > best_score) {
                best_score = score;
                best = v;
            }
        }
        return best;
    }

    // One pivot from entering variable e.
    void step(int e, bool phase1) {
        ftran(e);
        const double dir = state_[e] == 0 ? 1.0 : -1.0;

        double best_t = hi_[e] - lo_[e];  // bound flip
        int leave = -1;                   // -1: bound flip
        bool leave_to_upper = false;
        double leave_abs_w = 0.0;

        const auto consider = [&](int v, double w) {
            if (std::fabs(w) <= kPivotTol) return;
            const double rate = -w * dir;
            double limit;
            bool to_upper;
            if (phase1 && value_[v] > hi_[v] + kFeasTol) {
                // Infeasible above: blocks when it comes back to hi; moving
                // further out is allowed in phase 1.
                if (rate > 0.0) return;
                limit = (value_[v] - hi_[v]) / -rate;
                to_upper = true;
            } else if (phase1 && value_[v] < lo_[v] - kFeasTol) {
                if (rate < 0.0) return;
                limit = (lo_[v] - value_[v]) / rate;
                to_upper = false;
            } else if (rate > 0.0) {
                if (hi_[v] == kInf) return;
                limit = (hi_[v] - value_[v]) / rate;
                to_upper = true;
            } else {
                if (lo_[v] == -kInf) return;
                limit = (value_[v] - lo_[v]) / -rate;
                to_upper = false;
            }
            if (limit < 0.0) limit = 0.0;
            const bool tie = limit <= best_t + 1e-12;
            const bool strictly = limit < best_t - 1e-12;
            const bool better =
                strictly ||
                (tie && (bland_ ? (leave < 0 || v < leave) : std::fabs(w) > leave_abs_w));
            if (better) {
                best_t = std::min(best_t, limit);
                leave = v;
                leave_to_upper = to_upper;
                leave_abs_w = std::fabs(w);
            }
        };

        for (int r = 0; r < m_; ++r)
            if (owner_[r] >= 0) consider(owner_[r], wrow_[r]);
        for (int j = 0; j < k_; ++j) consider(densev_[j], wd_[j]);

        if (best_t == kInf)
            throw std::runtime_error("unbounded direction in box-bounded program (solver defect)");

        degenerate_ = best_t <= 1e-11 ? degenerate_ + 1 : 0;
        bland_ = degenerate_ > kDegenerateLimit;

        const double t = best_t;
        if (t > 0.0) {
            for (int r = 0; r < m_; ++r)
                if (owner_[r] >= 0) value_[owner_[r]] -= wrow_[r] * dir * t;
            for (int j = 0; j < k_; ++j) value_[densev_[j]] -= wd_[j] * dir * t;
            value_[e] += dir * t;
        }

        if (leave < 0) {  // bound flip: e jumps to its opposite bound
            state_[e] = state_[e] == 0 ? 1 : 0;
            value_[e] = state_[e] == 0 ? lo_[e] : hi_[e];
            return;
        }

        const double w_leave = posD_[leave] >= 0 ? wd_[posD_[leave]] : wrow_[unit_row_[leave]];
        update_basis(e, leave, w_leave);
        state_[e] = 2;
        state_[leave] = leave_to_upper ? 1 : 0;
        value_[leave] = leave_to_upper ? hi_[leave] : lo_[leave];
        ++pivots_since_refactor_;
    }

    // --- basis structure updates --------------------------------------------

    void update_basis(int e, int l, double w_leave) {
        const bool e_unit = unit_row_[e] >= 0;
        const bool l_unit = unit_row_[l] >= 0 && posD_[l] < 0;
        const bool fast = std::fabs(w_leave) >= kUpdateTol;
        bool ok = false;
        if (e_unit && l_unit) {
            const int re = unit_row_[e];
            const int rl = unit_row_[l];
            if (re == rl) {
                owner_[re] = e;
                return;
            }
            // re leaves F (e owns it), rl joins F in the same slot.
            const int i0 = posF_[re];
            if (fast) {
                rowbuf_.assign(k_, 0.0);  // g = new row - old row
                gather_row(rl, rowbuf_);
                colbuf_.assign(k_, 0.0);
                gather_row(re, colbuf_);
                for (int j = 0; j < k_; ++j) rowbuf_[j] -= colbuf_[j];
                ok = rank1_row_update(i0, rowbuf_);
            }
            posF_[re] = -1;
            owner_[re] = e;
            owner_[rl] = -1;
            posF_[rl] = i0;
            Frows_[i0] = rl;
        } else if (e_unit && !l_unit) {
            const int re = unit_row_[e];
            ok = shrink(posF_[re], posD_[l], fast);
            owner_[re] = e;
        } else if (!e_unit && l_unit) {
            const int rl = unit_row_[l];
            ok = grow(rl, e, fast);
            owner_[rl] = -1;
        } else {
            // dense column replacement
            const int j0 = posD_[l];
            if (fast) {
                rowbuf_.assign(k_, 0.0);
                gather_col(e, rowbuf_);
                colbuf_.assign(k_, 0.0);
                gather_col(l, colbuf_);
                for (int i = 0; i < k_; ++i) rowbuf_[i] -= colbuf_[i];
                ok = rank1_col_update(j0, rowbuf_);
            }
            posD_[l] = -1;
            densev_[j0] = e;
            posD_[e] = j0;
        }
        if (!ok) refactor();
    }

    void gather_row(int row, std::vector<double>& out) const {
        for (int j = 0; j < k_; ++j) out[j] = col_entry(densev_[j], row);
    }
    void gather_col(int v, std::vector<double>& out) const {
        for_col(v, [&](int r, double a) {
            if (posF_[r] >= 0) out[posF_[r]] = a;
        });
    }

    // K' = K + e_{i0} g^T
    bool rank1_row_update(int i0, const std::vector<double>& g) {
        tmpk_.assign(k_, 0.0);  // g^T Kinv
        for (int b = 0; b < k_; ++b) {
            double s = 0.0;
            for (int a = 0; a < k_; ++a) s += g[a] * Kinv_[a * k_ + b];
            tmpk_[b] = s;
        }
        const double denom = 1.0 + tmpk_[i0];
        if (std::fabs(denom) < kUpdateTol) return false;
        colk_.assign(k_, 0.0);  // Kinv e_{i0}
        for (int a = 0; a < k_; ++a) colk_[a] = Kinv_[a * k_ + i0];
        for (int a = 0; a < k_; ++a) {
            const double f = colk_[a] / denom;
            if (f == 0.0) continue;
            double* row = &Kinv_[a * k_];
            for (int b = 0; b < k_; ++b) row[b] -= f * tmpk_[b];
        }
        return true;
    }

    // K' = K + d e_{j0}^T
    bool rank1_col_update(int j0, const std::vector<double>& d) {
        colk_.assign(k_, 0.0);  // Kinv d
        for (int a = 0; a < k_; ++a) {
            double s = 0.0;
            for (int b = 0; b < k_; ++b) s += Kinv_[a * k_ + b] * d[b];
            colk_[a] = s;
        }
        const double denom = 1.0 + colk_[j0];
        if (std::fabs(denom) < kUpdateTol) return false;
        tmpk_.assign(k_, 0.0);  // row j0 of Kinv
        for (int b = 0; b < k_; ++b) tmpk_[b] = Kinv_[j0 * k_ + b];
        for (int a = 0; a < k_; ++a) {
            const double f = colk_[a] / denom;
            if (f == 0.0) continue;
            double* row = &Kinv_[a * k_];
            for (int b = 0; b < k_; ++b) row[b] -= f * tmpk_[b];
        }
        return true;
    }

    bool shrink(int i0, int j0, bool fast) {
        const double piv = fast ? Kinv_[j0 * k_ + i0] : 0.0;
        if (std::fabs(piv) < kUpdateTol) {
            drop_structure(i0, j0);
            return false;
        }
        const int k2 = k_ - 1;
        std::vector<double> out(static_cast<std::size_t>(k2) * k2);
        for (int a = 0, ao = 0; a < k_; ++a) {
            if (a == j0) continue;
            for (int b = 0, bo = 0; b < k_; ++b) {
                if (b == i0) continue;
                out[ao * k2 + bo] =
                    Kinv_[a * k_ + b] - Kinv_[a * k_ + i0] * Kinv_[j0 * k_ + b] / piv;
                ++bo;
            }
            ++ao;
        }
        drop_structure(i0, j0);
        Kinv_ = std::move(out);
        return true;
    }

    void drop_structure(int i0, int j0) {
        posD_[densev_[j0]] = -1;
        posF_[Frows_[i0]] = -1;
        densev_.erase(densev_.begin() + j0);
        Frows_.erase(Frows_.begin() + i0);
        k_ -= 1;
        for (int j = 0; j < k_; ++j) posD_[densev_[j]] = j;
        for (int i = 0; i < k_; ++i) posF_[Frows_[i]] = i;
    }

    bool grow(int new_row, int new_var, bool fast) {
        const int k2 = k_ + 1;
        bool ok = false;
        if (fast) {
            rowbuf_.assign(k_, 0.0);  // v^T = A[new_row, dense]
            gather_row(new_row, rowbuf_);
            colbuf_.assign(k_, 0.0);  // u = A[F, new_var]
            gather_col(new_var, colbuf_);
            const double alpha = col_entry(new_var, new_row);

            // Schur complement of the bordered system.
            tmpk_.assign(k_, 0.0);  // Kinv u
            for (int a = 0; a < k_; ++a) {
                double s = 0.0;
                for (int b = 0; b < k_; ++b) s += Kinv_[a * k_ + b] * colbuf_[b];
                tmpk_[a] = s;
            }
            double s = alpha;
            for (int a = 0; a < k_; ++a) s -= rowbuf_[a] * tmpk_[a];
            if (std::fabs(s) >= kUpdateTol) {
                colk_.assign(k_, 0.0);  // v^T Kinv
                for (int b = 0; b < k_; ++b) {
                    double acc = 0.0;
                    for (int a = 0; a < k_; ++a) acc += rowbuf_[a] * Kinv_[a * k_ + b];
                    colk_[b] = acc;
                }
                std::vector<double> out(static_cast<std::size_t>(k2) * k2);
                for (int a = 0; a < k_; ++a)
                    for (int b = 0; b < k_; ++b)
                        out[a * k2 + b] = Kinv_[a * k_ + b] + tmpk_[a] * colk_[b] / s;
                for (int a = 0; a < k_; ++a) out[a * k2 + k_] = -tmpk_[a] / s;
                for (int b = 0; b < k_; ++b) out[k_ * k2 + b] = -colk_[b] / s;
                out[k_ * k2 + k_] = 1.0 / s;
                Kinv_ = std::move(out);
                ok = true;
            }
        }
        densev_.push_back(new_var);
        posD_[new_var] = k_;
        Frows_.push_back(new_row);
        posF_[new_row] = k_;
        k_ = k2;
        return ok;
    }

    void maybe_refactor() {
        if (pivots_since_refactor_ >= kRefactorEvery) {
            refactor();
            recompute_basics();
        }
    }

    // Rebuild Kinv from the current partition by Gauss-Jordan elimination.
    void refactor() {
        pivots_since_refactor_ = 0;
        if (k_ == 0) {
            Kinv_.clear();
            return;
        }
        std::vector<double> K(static_cast<std::size_t>(k_) * k_, 0.0);
        for (int j = 0; j < k_; ++j)
            for_col(densev_[j], [&](int r, double a) {
                if (posF_[r] >= 0) K[posF_[r] * k_ + j] = a;
            });
        // Invert K in place (augmented Gauss-Jordan with partial pivoting);
        // Kinv is laid out [dense slot][F slot] = K^-1.
        const int k = k_;
        std::vector<double> inv(static_cast<std::size_t>(k) * k, 0.0);
        for (int i = 0; i < k; ++i) inv[i * k + i] = 1.0;
        for (int col = 0; col < k; ++col) {
            int piv = col;
            double best = std::fabs(K[col * k + col]);
            for (int r = col + 1; r < k; ++r) {
                const double v = std::fabs(K[r * k + col]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (best < 1e-12) throw std::runtime_error("singular basis (solver defect)");
            if (piv != col) {
                for (int c = 0; c < k; ++c) {
                    std::swap(K[piv * k + c], K[col * k + c]);
                    std::swap(inv[piv * k + c], inv[col * k + c]);
                }
            }
            const double f = 1.0 / K[col * k + col];
            for (int c = 0; c < k; ++c) {
                K[col * k + c] *= f;
                inv[col * k + c] *= f;
            }
            for (int r = 0; r < k; ++r) {
                if (r == col) continue;
                const double g = K[r * k + col];
                if (g == 0.0) continue;
                for (int c = 0; c < k; ++c) {
                    K[r * k + c] -= g * K[col * k + c];
                    inv[r * k + c] -= g * inv[col * k + c];
                }
            }
        }
        // inv now holds K^-1 with rows indexed like K's columns (dense slots).
        Kinv_ = std::move(inv);
    }

    // Solve B x_B = -A_N x_N for the basic values.
    void recompute_basics() {
        racc_.assign(m_, 0.0);
        for (int v = 0; v < nv_; ++v) {
            if (state_[v] == 2 || value_[v] == 0.0) continue;
            for_col(v, [&](int r, double a) { racc_[r] -= a * value_[v]; });
        }
        // FTRAN with dense rhs racc_.
        aF_.assign(k_, 0.0);
        for (int b = 0; b < k_; ++b) aF_[b] = racc_[Frows_[b]];
        wd_.assign(k_, 0.0);
        for (int a = 0; a < k_; ++a) {
            double s = 0.0;
            for (int b = 0; b < k_; ++b) s += Kinv_[a * k_ + b] * aF_[b];
            wd_[a] = s;
        }
        rowacc_.assign(m_, 0.0);
        for (int j = 0; j < k_; ++j) {
            const int v = densev_[j];
            value_[v] = wd_[j];
            if (wd_[j] == 0.0) continue;
            for_col(v, [&](int r, double a) { rowacc_[r] += a * wd_[j]; });
        }
        for (int r = 0; r < m_; ++r) {
            if (owner_[r] < 0) continue;
            value_[owner_[r]] = unit_sign_[owner_[r]] * (racc_[r] - rowacc_[r]);
        }
    }

    // problem
    int ns_ = 0, m_ = 0, nv_ = 0;
    std::vector<std::uint32_t> keep_;
    std::vector<int> remap_;
    std::vector<int> cstart_, crow_;
    std::vector<double> cval_;
    std::vector<double> lo_, hi_, cost_;
    std::vector<int> unit_row_;
    std::vector<double> unit_sign_;

    // basis
    std::vector<char> state_;
    std::vector<double> value_;
    std::vector<int> owner_, posF_, posD_, Frows_, densev_;
    std::vector<double> Kinv_;
    int k_ = 0;

    // controls
    int pivots_since_refactor_ = 0;
    int degenerate_ = 0;
    bool bland_ = false;

    // scratch
    std::vector<double> pi_, aF_, wd_, racc_, rowacc_, wrow_, rowbuf_, colbuf_, tmpk_, colk_;
};

LpSolution finish(const LinearProgram& lp, const Presolved& ps, const Simplex* simplex,
                  SolveStatus status) {
    LpSolution sol;
    sol.status = status;
    if (status != SolveStatus::Optimal) return sol;
    const std::size_t n = lp.num_vars();
    sol.values.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        if (!ps.eliminated[j]) sol.values[j] = ps.lo[j];  // fixed vars
    if (simplex) simplex->extract(sol.values);
    for (auto it = ps.subs.rbegin(); it != ps.subs.rend(); ++it) {
        double s = it->rhs;
        for (const auto& [j, a] : it->terms) s -= a * sol.values[j];
        sol.values[it->var] = s / it->self_coef;
    }
    sol.objective_value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective_value += lp.objective()[j] * sol.values[j];
    return sol;
}

LpSolution solve_impl(const LinearProgram& lp, bool want_optimal) {
    Presolved ps = presolve(lp);
    if (ps.infeasible) return LpSolution{SolveStatus::Infeasible, {}, 0.0};
    Simplex simplex(ps, lp.num_vars());
    const SolveStatus status = simplex.run(want_optimal);
    return finish(lp, ps, &simplex, status);
}

}  // namespace

LpSolution solve(const LinearProgram& lp) { return solve_impl(lp, true); }

FeasibilityResult check_feasibility(const LinearProgram& lp) {
    const LpSolution sol = solve_impl(lp, false);
    FeasibilityResult out;
    out.feasible = sol.status == SolveStatus::Optimal;
    if (out.feasible) out.point = sol.values;
    return out;
}

}  // namespace gtkit::lp
