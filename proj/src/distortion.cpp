#include "fairspace/distortion.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fairspace {

DistortionReport map_distortion(const SpaceMap& f,
                                const GroupedMetricSpace& x,
                                const GroupedMetricSpace& y) {
    size_t n = x.size();
    if (f.image.size() != n)
        throw Error(Errc::domain_mismatch, "map is not total on the domain space");
    for (size_t t : f.image)
        if (t >= y.size())
            throw Error(Errc::domain_mismatch, "map image leaves the codomain space");

    DistortionReport report;
    for (size_t p = 0; p < n; ++p)
        for (size_t q = p + 1; q < n; ++q) {
            double dev = std::abs(x.dist.at(p, q) - y.dist.at(f.image[p], f.image[q]));
            if (dev > report.rho) {
                report.rho = dev;
                report.witness_p = p;
                report.witness_q = q;
            }
        }
    return report;
}

namespace {

// Candidate decoding. all_maps: digits of the index base |Y|; bijections:
// factorial number system. Both give a fixed total order on candidates.
void decode_function(unsigned long long idx, size_t nx, size_t ny, std::vector<size_t>& img) {
    for (size_t i = 0; i < nx; ++i) {
        img[i] = static_cast<size_t>(idx % ny);
        idx /= ny;
    }
}

void decode_permutation(unsigned long long idx, size_t n, std::vector<size_t>& img,
                        std::vector<size_t>& pool) {
    pool.resize(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
    unsigned long long fact = 1;
    for (size_t i = 2; i < n; ++i) fact *= i;  // (n-1)!
    for (size_t i = 0; i < n; ++i) {
        size_t pick = n - 1 - i == 0 ? 0 : static_cast<size_t>(idx / fact);
        img[i] = pool[pick];
        pool.erase(pool.begin() + static_cast<long>(pick));
        if (n - 1 - i > 0) {
            idx %= fact;
            fact /= (n - 1 - i);
        }
    }
}

// Distortion of one candidate with early abort once it cannot beat `bound`.
double candidate_distortion(const std::vector<size_t>& img,
                            const GroupedMetricSpace& x,
                            const GroupedMetricSpace& y,
                            double bound) {
    double worst = 0.0;
    size_t n = x.size();
    for (size_t p = 0; p < n; ++p)
        for (size_t q = p + 1; q < n; ++q) {
            double dev = std::abs(x.dist.at(p, q) - y.dist.at(img[p], img[q]));
            if (dev > worst) {
                worst = dev;
                if (worst >= bound) return worst;
            }
        }
    return worst;
}

struct Best {
    double rho = std::numeric_limits<double>::infinity();
    unsigned long long idx = 0;
};

// Scans candidates [lo, hi); keeps the lowest-index minimizer.
Best scan_range(unsigned long long lo, unsigned long long hi, MapClass mode,
                const GroupedMetricSpace& x, const GroupedMetricSpace& y) {
    Best best;
    std::vector<size_t> img(x.size()), pool;
    for (unsigned long long c = lo; c < hi; ++c) {
        if (mode == MapClass::all_maps)
            decode_function(c, x.size(), y.size(), img);
        else
            decode_permutation(c, x.size(), img, pool);
        double rho = candidate_distortion(img, x, y, best.rho);
        if (rho < best.rho) {
            best.rho = rho;
            best.idx = c;
            if (rho == 0.0) break;  // cannot be beaten; lowest index wins ties anyway
        }
    }
    return best;
}

}  // namespace

MinDistortionReport min_distortion(const GroupedMetricSpace& x,
                                   const GroupedMetricSpace& y,
                                   const MinDistortionOptions& opts) {
    size_t cap = opts.size_cap ? opts.size_cap : (opts.mode == MapClass::all_maps ? 6 : 8);
    if (x.size() > cap)
        throw Error(Errc::size_cap_exceeded,
                    "exhaustive search needs |X| <= " + std::to_string(cap));
    if (opts.mode == MapClass::bijections && x.size() != y.size())
        throw Error(Errc::size_mismatch, "bijections mode needs |X| = |Y|");
    if (x.size() == 0 || y.size() == 0)
        throw Error(Errc::size_mismatch, "spaces must be non-empty");

    unsigned long long total = 1;
    if (opts.mode == MapClass::all_maps) {
        for (size_t i = 0; i < x.size(); ++i) total *= y.size();
    } else {
        for (size_t i = 2; i <= x.size(); ++i) total *= i;
    }

    Best best;
    if (opts.exec == ExecPolicy::serial) {
        best = scan_range(0, total, opts.mode, x, y);
    } else {
        int threads = 1;
#ifdef _OPENMP
        threads = omp_get_max_threads();
#endif
        std::vector<Best> partial(static_cast<size_t>(threads));
        unsigned long long chunk = (total + static_cast<unsigned long long>(threads) - 1) /
                                   static_cast<unsigned long long>(threads);
#pragma omp parallel for schedule(static, 1)
        for (int t = 0; t < threads; ++t) {
            unsigned long long lo = chunk * static_cast<unsigned long long>(t);
            unsigned long long hi = std::min(total, lo + chunk);
            if (lo < hi)
                partial[static_cast<size_t>(t)] = scan_range(lo, hi, opts.mode, x, y);
        }
        for (const Best& b : partial)
            if (b.rho < best.rho || (b.rho == best.rho && b.idx < best.idx)) best = b;
    }

    MinDistortionReport report;
    report.rho = best.rho;
    report.best.domain_id = x.space_id;
    report.best.codomain_id = y.space_id;
    report.best.image.resize(x.size());
    std::vector<size_t> pool;
    if (opts.mode == MapClass::all_maps)
        decode_function(best.idx, x.size(), y.size(), report.best.image);
    else
        decode_permutation(best.idx, x.size(), report.best.image, pool);
    report.detail = map_distortion(report.best, x, y);
    return report;
}

}  // namespace fairspace
