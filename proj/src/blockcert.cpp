#include "seis/blockcert.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace seis {

void BlockGeometry::validate() const {
    if (J < 1) throw std::invalid_argument("block: J must be >= 1");
    if (!(K <= J && J < 2 * K))
        throw std::invalid_argument("block: geometry requires K <= J < 2K");
    int j = overlap();
    if (!(required >= 1 && required <= j))
        throw std::invalid_argument("block: requires 1 <= i <= j = J-K+1");
    if (budget <= 0 && T <= 0) throw std::invalid_argument("block: label budget must be positive");
    if (T < 0) throw std::invalid_argument("block: T must be nonnegative");
}

long UniformizedChain::encode(const Configuration& eta) const {
    long v = 0;
    for (int x = 0; x < sites; ++x) v = v * alphabet + eta[x];
    return v;
}

Configuration UniformizedChain::decode(long index) const {
    Configuration eta(process.kind, std::vector<uint8_t>(static_cast<size_t>(sites), 0));
    for (int x = sites - 1; x >= 0; --x) {
        eta[x] = static_cast<uint8_t>(index % alphabet);
        index /= alphabet;
    }
    return eta;
}

double UniformizedChain::row_sum(long i) const {
    double s = diag[static_cast<size_t>(i)];
    for (const auto& [col, val] : rows[static_cast<size_t>(i)]) s += val;
    return s;
}

UniformizedChain uniformized_chain(ProcessKind kind, const BlockGeometry& geom, double lambda,
                                   double tau) {
    geom.validate();
    if (kind != ProcessKind::TwoStageLower && kind != ProcessKind::Limit)
        throw std::invalid_argument(
            "uniformized_chain: only the two-stage and limit processes have the monotone "
            "worst-case reduction");

    UniformizedChain chain;
    chain.process = Process(kind, lambda, kind == ProcessKind::TwoStageLower ? tau : 0.0);
    chain.sites = geom.sites();
    chain.alphabet = kind == ProcessKind::TwoStageLower ? 3 : 2;

    const int s = chain.sites;
    // Total label intensity over the block: recovery + onset per site plus a
    // directed transmission stream per adjacent ordered pair; the limit
    // process carries a single rate-1 onset stream per site.
    chain.gamma = kind == ProcessKind::TwoStageLower
                      ? s * (1.0 + 1.0 / tau) + 2.0 * (s - 1) * lambda
                      : static_cast<double>(s);

    long count = 1;
    for (int x = 0; x < s; ++x) {
        count *= chain.alphabet;
        if (count > 1000000) throw std::runtime_error("uniformized_chain: state count > 1e6");
    }

    const Graph g = build_graph(GraphKind::Path, s);
    chain.diag.resize(static_cast<size_t>(count));
    chain.rows.resize(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        Configuration eta = chain.decode(i);
        double q = 0.0;
        for (const RateEntry& e : rate_map(chain.process, eta, g)) {
            Configuration to = eta;
            for (const auto& [x, code] : e.changes) to[x] = code;
            chain.rows[static_cast<size_t>(i)].emplace_back(chain.encode(to), e.rate / chain.gamma);
            q += e.rate;
        }
        if (q > chain.gamma + 1e-9)
            throw std::runtime_error("uniformized_chain: exit rate exceeds gamma");
        chain.diag[static_cast<size_t>(i)] = 1.0 - q / chain.gamma;
    }
    return chain;
}

int default_term_count(double gamma_T) {
    return static_cast<int>(std::ceil(gamma_T + 10.0 * std::sqrt(gamma_T)));
}

PoissonSumResult poisson_time_T(const UniformizedChain& chain, double T,
                                const std::vector<double>& v0, int N) {
    if (N < 1) throw std::invalid_argument("poisson_time_T: N must be >= 1");
    if (v0.size() != static_cast<size_t>(chain.state_count()))
        throw std::invalid_argument("poisson_time_T: initial vector size mismatch");
    const double gt = chain.gamma * T;

    // log-space Poisson weights against overflow
    auto weight = [&](int i) { return std::exp(-gt + i * std::log(gt) - std::lgamma(i + 1.0)); };

    const long n = chain.state_count();
    std::vector<double> acc(static_cast<size_t>(n), 0.0);
    std::vector<double> w = v0, next(static_cast<size_t>(n));
    double weight_sum = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double wi = (gt == 0.0) ? (i == 0 ? 1.0 : 0.0) : weight(i);
        weight_sum += wi;
        if (wi > 0)
            for (long s = 0; s < n; ++s) acc[static_cast<size_t>(s)] += wi * w[static_cast<size_t>(s)];
        if (i == N) break;
        // next = w * P
        std::fill(next.begin(), next.end(), 0.0);
        for (long r = 0; r < n; ++r) {
            const double wr = w[static_cast<size_t>(r)];
            if (wr == 0.0) continue;
            next[static_cast<size_t>(r)] += wr * chain.diag[static_cast<size_t>(r)];
            for (const auto& [col, val] : chain.rows[static_cast<size_t>(r)])
                next[static_cast<size_t>(col)] += wr * val;
        }
        w.swap(next);
    }
    PoissonSumResult res;
    res.v = std::move(acc);
    res.deficiency = std::max(0.0, 1.0 - weight_sum);
    res.terms = N;
    return res;
}

namespace {

bool crossing_event(const UniformizedChain& chain, const BlockGeometry& geom, long state) {
    const int j = geom.overlap();
    int left = 0, right = 0;
    long v = state;
    for (int x = chain.sites - 1; x >= 0; --x) {
        int code = static_cast<int>(v % chain.alphabet);
        v /= chain.alphabet;
        if (code != 0) {
            if (x < j) ++left;
            if (x > geom.J - j) ++right;
        }
    }
    return left >= geom.required && right >= geom.required;
}

// All size-i subsets of `positions`, as site lists.
void subsets_of_size(const std::vector<int>& positions, int i, std::vector<std::vector<int>>& out) {
    std::vector<int> idx(static_cast<size_t>(i));
    for (int t = 0; t < i; ++t) idx[static_cast<size_t>(t)] = t;
    const int n = static_cast<int>(positions.size());
    while (true) {
        std::vector<int> sel;
        for (int t = 0; t < i; ++t) sel.push_back(positions[static_cast<size_t>(idx[static_cast<size_t>(t)])]);
        out.push_back(sel);
        int t = i - 1;
        while (t >= 0 && idx[static_cast<size_t>(t)] == n - i + t) --t;
        if (t < 0) break;
        ++idx[static_cast<size_t>(t)];
        for (int u = t + 1; u < i; ++u) idx[static_cast<size_t>(u)] = idx[static_cast<size_t>(u - 1)] + 1;
    }
}

}  // namespace

double crossing_probability(const UniformizedChain& chain, const BlockGeometry& geom,
                            const Configuration& eta0) {
    const double T = geom.T > 0 ? geom.T : geom.budget / chain.gamma;
    const int N = default_term_count(chain.gamma * T);
    std::vector<double> v0(static_cast<size_t>(chain.state_count()), 0.0);
    v0[static_cast<size_t>(chain.encode(eta0))] = 1.0;
    PoissonSumResult ps = poisson_time_T(chain, T, v0, N);
    double p = 0.0;
    for (long s2 = 0; s2 < chain.state_count(); ++s2)
        if (crossing_event(chain, geom, s2)) p += ps.v[static_cast<size_t>(s2)];
    return p;
}

CertResult certify_block(ProcessKind kind, const BlockGeometry& geom, double lambda, double tau,
                         double threshold) {
    UniformizedChain chain = uniformized_chain(kind, geom, lambda, tau);
    CertResult cert;
    cert.kind = kind;
    cert.geometry = geom;
    cert.lambda = lambda;
    cert.tau = tau;
    cert.threshold = threshold;
    cert.gamma = chain.gamma;
    cert.T = geom.T > 0 ? geom.T : geom.budget / chain.gamma;
    cert.terms = default_term_count(cert.gamma * cert.T);
    cert.deficiency = 0.0;

    const int j = geom.overlap();
    std::vector<int> left_sites, right_sites;
    for (int x = 0; x < j; ++x) left_sites.push_back(x);
    for (int x = geom.J - j + 1; x <= geom.J; ++x) right_sites.push_back(x);
    std::vector<std::vector<int>> left_starts, right_starts;
    subsets_of_size(left_sites, geom.required, left_starts);
    subsets_of_size(right_sites, geom.required, right_starts);

    const uint8_t weakest = 1;  // exposed for two-stage, occupied for limit
    auto run = [&](const std::vector<int>& actives) {
        Configuration eta0(chain.process.kind,
                           std::vector<uint8_t>(static_cast<size_t>(chain.sites), 0));
        for (int x : actives) eta0[x] = weakest;
        std::vector<double> v0(static_cast<size_t>(chain.state_count()), 0.0);
        v0[static_cast<size_t>(chain.encode(eta0))] = 1.0;
        PoissonSumResult ps = poisson_time_T(chain, cert.T, v0, cert.terms);
        cert.deficiency = std::max(cert.deficiency, ps.deficiency);
        double p = 0.0;
        for (long s2 = 0; s2 < chain.state_count(); ++s2)
            if (crossing_event(chain, geom, s2)) p += ps.v[static_cast<size_t>(s2)];
        return p;
    };

    for (const auto& start : left_starts) cert.left_flank_probs.push_back(run(start));
    for (const auto& start : right_starts) cert.right_flank_probs.push_back(run(start));

    cert.min_prob = 1.0;
    for (double p : cert.left_flank_probs) cert.min_prob = std::min(cert.min_prob, p);
    for (double p : cert.right_flank_probs) cert.min_prob = std::min(cert.min_prob, p);
    cert.pass = cert.min_prob >= threshold;
    return cert;
}

void cert_report(const CertResult& cert, std::ostream& os) {
    os << "block certificate: process=" << process_kind_name(cert.kind) << " J=" << cert.geometry.J
       << " K=" << cert.geometry.K << " j=" << cert.geometry.overlap()
       << " i=" << cert.geometry.required << " lambda=" << cert.lambda;
    if (cert.kind == ProcessKind::TwoStageLower) os << " tau=" << cert.tau;
    os << "\n  gamma=" << cert.gamma << " T=" << cert.T << " terms=" << cert.terms
       << " deficiency=" << cert.deficiency << "\n  left-flank probabilities: ";
    for (double p : cert.left_flank_probs) os << p << ' ';
    os << "\n  right-flank probabilities: ";
    for (double p : cert.right_flank_probs) os << p << ' ';
    os << "\n  min=" << cert.min_prob << " threshold=" << cert.threshold
       << (cert.pass ? "  PASS" : "  FAIL") << '\n';
}

void cert_report_csv(const CertResult& cert, std::ostream& os) {
    os << "process,J,K,j,i,lambda,tau,gamma,T,terms,deficiency,min_prob,threshold,pass\n";
    os << process_kind_name(cert.kind) << ',' << cert.geometry.J << ',' << cert.geometry.K << ','
       << cert.geometry.overlap() << ',' << cert.geometry.required << ',' << cert.lambda << ','
       << cert.tau << ',' << cert.gamma << ',' << cert.T << ',' << cert.terms << ','
       << cert.deficiency << ',' << cert.min_prob << ',' << cert.threshold << ','
       << (cert.pass ? 1 : 0) << '\n';
}

}  // namespace seis
