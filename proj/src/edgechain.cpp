#include "seis/edgechain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "seis/dynamics.hpp"

namespace seis {

namespace {

struct KindTraits {
    std::vector<uint8_t> alphabet;
    uint8_t boundary;  // frozen type beyond the window
};

KindTraits kind_traits(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::Upper: return {{0, 1, 2, 3}, 3};
        case ProcessKind::Contact: return {{0, 2}, 2};
        case ProcessKind::Limit: return {{0, 1}, 1};
        default:
            throw std::invalid_argument("edge chain: kind " + process_kind_name(kind) +
                                        " is not supported (no monotone window process)");
    }
}

int encode(const std::vector<uint8_t>& window, const KindTraits& tr) {
    int digit_of[4] = {-1, -1, -1, -1};
    for (size_t d = 0; d < tr.alphabet.size(); ++d) digit_of[tr.alphabet[d]] = static_cast<int>(d);
    int v = 0;
    for (uint8_t code : window) v = v * static_cast<int>(tr.alphabet.size()) + digit_of[code];
    return v;
}

// Window after an event: `left` is the new value at position -1 (0 if the
// event did not reach left of the window), `ext` the modified window cells.
// The window re-anchors at the leftmost active position; cells revealed on
// the right take the boundary type.
struct Outcome {
    std::vector<uint8_t> window;
    int delta = 0;
};

Outcome renormalize(uint8_t left, const std::vector<uint8_t>& ext, uint8_t boundary) {
    const int m1 = static_cast<int>(ext.size());  // m+1
    int p;
    if (left != 0) p = -1;
    else {
        p = m1;  // all visible actives vanished: anchor at the first boundary site
        for (int i = 0; i < m1; ++i)
            if (ext[static_cast<size_t>(i)] != 0) {
                p = i;
                break;
            }
    }
    Outcome o;
    o.delta = p;
    o.window.resize(static_cast<size_t>(m1));
    for (int i = 0; i < m1; ++i) {
        int pos = p + i;
        o.window[static_cast<size_t>(i)] =
            pos < 0 ? left : (pos < m1 ? ext[static_cast<size_t>(pos)] : boundary);
    }
    return o;
}

}  // namespace

int EdgeChain::state_index(const std::vector<uint8_t>& window) const {
    KindTraits tr = kind_traits(kind);
    int code = encode(window, tr);
    for (int i = 0; i < state_count(); ++i)
        if (encode(states[static_cast<size_t>(i)], tr) == code) return i;
    return -1;
}

std::vector<std::vector<uint8_t>> enumerate_states(ProcessKind kind, int m) {
    if (m < 0) throw std::invalid_argument("enumerate_states: m must be nonnegative");
    KindTraits tr = kind_traits(kind);
    const int base = static_cast<int>(tr.alphabet.size());
    const int m1 = m + 1;
    long total = 1;
    for (int i = 0; i < m1; ++i) total *= base;
    std::vector<std::vector<uint8_t>> states;
    for (long raw = 0; raw < total; ++raw) {
        long v = raw;
        std::vector<uint8_t> w(static_cast<size_t>(m1));
        for (int i = m1 - 1; i >= 0; --i) {
            w[static_cast<size_t>(i)] = tr.alphabet[static_cast<size_t>(v % base)];
            v /= base;
        }
        if (w[0] != 0) states.push_back(std::move(w));
    }
    return states;
}

EdgeChain build_edge_chain(ProcessKind kind, int m, double lambda, double tau) {
    KindTraits tr = kind_traits(kind);
    if (lambda <= 0) throw std::invalid_argument("build_edge_chain: lambda must be positive");
    if (kind == ProcessKind::Upper && tau <= 0)
        throw std::invalid_argument("build_edge_chain: tau must be positive for upper");

    EdgeChain chain;
    chain.kind = kind;
    chain.m = m;
    chain.lambda = lambda;
    chain.tau = tau;
    chain.states = enumerate_states(kind, m);

    // index lookup by encoded value
    const int base = static_cast<int>(tr.alphabet.size());
    long total = 1;
    for (int i = 0; i <= m; ++i) total *= base;
    std::vector<int> index_of(static_cast<size_t>(total), -1);
    for (int i = 0; i < chain.state_count(); ++i)
        index_of[static_cast<size_t>(encode(chain.states[static_cast<size_t>(i)], tr))] = i;

    const int m1 = m + 1;
    chain.exit_rate.assign(chain.states.size(), 0.0);
    chain.transitions.resize(chain.states.size());

    for (int si = 0; si < chain.state_count(); ++si) {
        const std::vector<uint8_t>& v = chain.states[static_cast<size_t>(si)];
        std::map<std::pair<int, int>, double> merged;  // (to, delta) -> rate

        auto emit = [&](uint8_t left, const std::vector<uint8_t>& ext, double rate) {
            Outcome o = renormalize(left, ext, tr.boundary);
            int to = index_of[static_cast<size_t>(encode(o.window, tr))];
            if (to == si && o.delta == 0) return;  // redundant
            merged[{to, o.delta}] += rate;
        };

        if (kind == ProcessKind::Limit) {
            const DispersalPmf pmf = dispersal_pmf(lambda, 2);  // every site of Z has 2 neighbors
            for (int i = 0; i < m1; ++i) {
                if (v[static_cast<size_t>(i)] != 1) continue;
                // occupied site fires at rate 1; bit 0 = left neighbor, bit 1 = right
                for (uint32_t mask = 0; mask < 4; ++mask) {
                    std::vector<uint8_t> ext = v;
                    uint8_t left = 0;
                    ext[static_cast<size_t>(i)] = 0;
                    if (mask & 1u) {
                        if (i == 0) left = 1;
                        else if (ext[static_cast<size_t>(i - 1)] == 0)
                            ext[static_cast<size_t>(i - 1)] = 1;
                    }
                    if ((mask & 2u) && i + 1 < m1 && ext[static_cast<size_t>(i + 1)] == 0)
                        ext[static_cast<size_t>(i + 1)] = 1;
                    emit(left, ext, pmf.prob[mask]);
                }
            }
            // Boundary site m+1 fires at rate 1 and occupies window site m with
            // the marginal probability of "left neighbor dispersed to",
            // lambda/(1+lambda); the constraint restores the boundary site.
            if (v[static_cast<size_t>(m)] == 0) {
                std::vector<uint8_t> ext = v;
                ext[static_cast<size_t>(m)] = 1;
                emit(0, ext, lambda / (1.0 + lambda));
            }
        } else {
            const bool upper = kind == ProcessKind::Upper;
            auto is_source = [&](uint8_t t) { return t == 2 || (upper && t == 3); };
            // transmission effect on an in-window target; returns true if it changes
            auto hit = [&](uint8_t& t) {
                if (t == 0) {
                    t = upper ? 1 : 2;
                    return true;
                }
                if (upper && t == 2) {
                    t = 3;
                    return true;
                }
                return false;
            };

            for (int i = 0; i < m1; ++i) {
                const uint8_t t = v[static_cast<size_t>(i)];
                // recovery, rate 1
                if (t == 2 || (upper && t == 3)) {
                    std::vector<uint8_t> ext = v;
                    ext[static_cast<size_t>(i)] = (t == 2) ? 0 : 1;
                    emit(0, ext, 1.0);
                }
                // onset, rate 1/tau
                if (upper && (t == 1 || t == 3)) {
                    std::vector<uint8_t> ext = v;
                    ext[static_cast<size_t>(i)] = 2;
                    emit(0, ext, 1.0 / tau);
                }
                // transmissions out of an infectious site, rate lambda each way
                if (is_source(t)) {
                    if (i + 1 < m1) {
                        std::vector<uint8_t> ext = v;
                        if (hit(ext[static_cast<size_t>(i + 1)])) emit(0, ext, lambda);
                    }
                    // i == m: the right neighbor is boundary type, no effect
                    if (i >= 1) {
                        std::vector<uint8_t> ext = v;
                        if (hit(ext[static_cast<size_t>(i - 1)])) emit(0, ext, lambda);
                    } else {
                        emit(upper ? 1 : 2, v, lambda);  // new leftmost site
                    }
                }
            }
            // Boundary site m+1 (boundary type, infectious) transmits into
            // window site m at rate lambda.
            {
                std::vector<uint8_t> ext = v;
                if (hit(ext[static_cast<size_t>(m)])) emit(0, ext, lambda);
            }
        }

        double q = 0.0;
        for (const auto& [key, rate] : merged) q += rate;
        chain.exit_rate[static_cast<size_t>(si)] = q;
        for (const auto& [key, rate] : merged)
            chain.transitions[static_cast<size_t>(si)].push_back(
                {si, key.first, key.second, rate, rate / q});
    }

    // Irreducibility: every state communicates with the all-boundary state.
    const int n = chain.state_count();
    std::vector<uint8_t> boundary_window(static_cast<size_t>(m1), tr.boundary);
    const int hub = index_of[static_cast<size_t>(encode(boundary_window, tr))];
    std::vector<std::vector<int>> fwd(static_cast<size_t>(n)), bwd(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (const auto& tr2 : chain.transitions[static_cast<size_t>(i)]) {
            fwd[static_cast<size_t>(i)].push_back(tr2.to);
            bwd[static_cast<size_t>(tr2.to)].push_back(i);
        }
    auto bfs = [&](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(static_cast<size_t>(n), 0);
        std::vector<int> stack{hub};
        seen[static_cast<size_t>(hub)] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adj[static_cast<size_t>(u)])
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    stack.push_back(w);
                }
        }
        return seen;
    };
    auto reach_from = bfs(fwd);
    auto reach_to = bfs(bwd);
    for (int i = 0; i < n; ++i)
        if (!reach_from[static_cast<size_t>(i)] || !reach_to[static_cast<size_t>(i)])
            throw std::runtime_error("build_edge_chain: chain is not irreducible");

    return chain;
}

std::vector<double> invariant_measure(const EdgeChain& chain) {
    const int n = chain.state_count();
    if (n == 0) throw std::invalid_argument("invariant_measure: empty chain");

    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (const auto& t : chain.transitions[static_cast<size_t>(i)]) P(i, t.to) += t.prob;

    // (P^T - I) mu = 0 with one balance row replaced by normalization.
    Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd mu = A.partialPivLu().solve(b);

    auto residual = [&](const Eigen::VectorXd& m) {
        return (P.transpose() * m - m).cwiseAbs().maxCoeff();
    };
    const double kTol = 1e-10;
    if (!mu.allFinite() || mu.minCoeff() < -1e-9 || residual(mu) > kTol) {
        // power-iteration fallback
        Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
        for (int it = 0; it < 100000; ++it) {
            v = P.transpose() * v;
            v /= v.sum();
            if (it % 64 == 0 && residual(v) <= kTol) break;
        }
        mu = v;
        if (residual(mu) > kTol)
            throw std::runtime_error("invariant_measure: residual " +
                                     std::to_string(residual(mu)) + " exceeds tolerance");
    }
    std::vector<double> out(static_cast<size_t>(n));
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        out[static_cast<size_t>(i)] = std::max(0.0, mu(i));
        s += out[static_cast<size_t>(i)];
    }
    for (double& x : out) x /= s;
    return out;
}

double expected_increment(const EdgeChain& chain, const std::vector<double>& mu) {
    if (static_cast<int>(mu.size()) != chain.state_count())
        throw std::invalid_argument("expected_increment: measure size mismatch");
    double e = 0.0;
    for (int i = 0; i < chain.state_count(); ++i)
        for (const auto& t : chain.transitions[static_cast<size_t>(i)])
            e += mu[static_cast<size_t>(i)] * t.prob * t.delta;
    return e;
}

double expected_increment(ProcessKind kind, int m, double lambda, double tau) {
    EdgeChain chain = build_edge_chain(kind, m, lambda, tau);
    return expected_increment(chain, invariant_measure(chain));
}

LambdaMResult lambda_m(ProcessKind kind, int m, double tau, std::pair<double, double> bracket,
                       double tol) {
    kind_traits(kind);  // rejects unsupported kinds
    if (bracket.first <= 0 || bracket.second <= bracket.first)
        throw std::invalid_argument("lambda_m: invalid bracket");
    auto f = [&](double lam) { return expected_increment(kind, m, lam, tau); };

    const int kGrid = 50;
    std::vector<double> xs(kGrid), fs(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        xs[static_cast<size_t>(i)] =
            bracket.first + (bracket.second - bracket.first) * i / (kGrid - 1);
        fs[static_cast<size_t>(i)] = f(xs[static_cast<size_t>(i)]);
    }
    std::vector<int> crossings;
    for (int i = 0; i + 1 < kGrid; ++i)
        if (fs[static_cast<size_t>(i)] > 0 && fs[static_cast<size_t>(i + 1)] <= 0)
            crossings.push_back(i);
    if (crossings.empty())
        throw std::invalid_argument("lambda_m: no sign change of E_mu(Delta) in the bracket");

    LambdaMResult res;
    res.multiple_sign_changes = crossings.size() > 1;
    double lo = xs[static_cast<size_t>(crossings.back())];
    double hi = xs[static_cast<size_t>(crossings.back() + 1)];
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    res.value = 0.5 * (lo + hi);
    return res;
}

void edge_chain_csv(const EdgeChain& chain, std::ostream& os) {
    os << "from,to,rate,probability,delta\n";
    for (int i = 0; i < chain.state_count(); ++i)
        for (const auto& t : chain.transitions[static_cast<size_t>(i)])
            os << t.from << ',' << t.to << ',' << t.rate << ',' << t.prob << ',' << t.delta
               << '\n';
}

}  // namespace seis
