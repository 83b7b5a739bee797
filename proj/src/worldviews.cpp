#include "fairspace/worldviews.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fairspace {

AxiomVerdict check_wysiwyg(const GroupedMetricSpace& cs, const GroupedMetricSpace& os,
                           double eps, const SpaceMap* g) {
    AxiomVerdict verdict;
    verdict.epsilon_used = eps;

    DistortionReport report;
    if (g) {
        report = map_distortion(*g, cs, os);
    } else {
        MinDistortionOptions opts;
        opts.mode = MapClass::bijections;
        report = min_distortion(cs, os, opts).detail;
        try {
            MinDistortionOptions all;
            all.mode = MapClass::all_maps;
            verdict.all_maps_bound = min_distortion(cs, os, all).rho;
        } catch (const Error&) {
            // all-functions bound is informational; skip past the cap
        }
    }
    verdict.achieved_value = report.rho;
    verdict.holds = report.rho <= eps;
    if (!verdict.holds) verdict.witness = std::make_pair(report.witness_p, report.witness_q);
    return verdict;
}

AxiomVerdict check_wae(const GroupedMetricSpace& cs, double eps) {
    int k = cs.group_count();
    if (k < 2) throw Error(Errc::single_group, "equal-groups axiom needs k >= 2");

    AxiomVerdict verdict;
    verdict.epsilon_used = eps;
    GroupLevelSpace gl = induce_group_space(cs);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            double w = gl.dist.at(static_cast<size_t>(i), static_cast<size_t>(j));
            if (w > verdict.achieved_value) {
                verdict.achieved_value = w;
                verdict.witness = std::make_pair(static_cast<size_t>(i), static_cast<size_t>(j));
            }
        }
    verdict.holds = verdict.achieved_value < eps;  // strict, as the axiom states
    if (verdict.holds) verdict.witness.reset();
    return verdict;
}

FairnessVerdict check_fairness(const SpaceMap& composed, const GroupedMetricSpace& cs,
                               const GroupedMetricSpace& ds, double eps, double eps_prime,
                               const FairnessOptions& opts) {
    size_t n = cs.size();
    if (composed.image.size() != n)
        throw Error(Errc::domain_mismatch, "composed map is not total on the construct space");
    for (size_t t : composed.image)
        if (t >= ds.size())
            throw Error(Errc::domain_mismatch, "composed map leaves the decision space");

    FairnessVerdict verdict;
    verdict.epsilon = eps;
    verdict.epsilon_prime = eps_prime;

    if (opts.exec == ExecPolicy::serial) {
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) {
                double dc = cs.dist.at(p, q);
                if (dc > eps) continue;
                double dd = ds.dist.at(composed.image[p], composed.image[q]);
                if (dd > eps_prime) verdict.violations.push_back({p, q, dc, dd});
            }
    } else {
        int threads = 1;
#ifdef _OPENMP
        threads = omp_get_max_threads();
#endif
        // Interleaved chunks balance the triangular row lengths; the final
        // sort restores the lexicographic order the serial scan emits.
        std::vector<std::vector<FairnessViolation>> found(static_cast<size_t>(threads));
#pragma omp parallel num_threads(threads)
        {
            int tid = 0;
#ifdef _OPENMP
            tid = omp_get_thread_num();
#endif
            auto& local = found[static_cast<size_t>(tid)];
#pragma omp for schedule(static, 8)
            for (long long pp = 0; pp < static_cast<long long>(n); ++pp) {
                size_t p = static_cast<size_t>(pp);
                for (size_t q = p + 1; q < n; ++q) {
                    double dc = cs.dist.at(p, q);
                    if (dc > eps) continue;
                    double dd = ds.dist.at(composed.image[p], composed.image[q]);
                    if (dd > eps_prime) local.push_back({p, q, dc, dd});
                }
            }
        }
        for (auto& buffer : found)
            verdict.violations.insert(verdict.violations.end(), buffer.begin(), buffer.end());
        std::sort(verdict.violations.begin(), verdict.violations.end(),
                  [](const FairnessViolation& a, const FairnessViolation& b) {
                      return a.p != b.p ? a.p < b.p : a.q < b.q;
                  });
    }
    verdict.fair = verdict.violations.empty();
    return verdict;
}

SkewVerdict check_structural_bias(const GroupedMetricSpace& cs, const GroupedMetricSpace& os,
                                  double threshold, double delta, SmoothingMode mode,
                                  uint64_t seed) {
    SkewVerdict verdict;
    verdict.threshold = threshold;
    verdict.skew = group_skew(cs, os, delta, mode, seed);
    verdict.flagged = verdict.skew.sigma > threshold;
    return verdict;
}

SkewVerdict check_direct_discrimination(const GroupedMetricSpace& os,
                                        const GroupedMetricSpace& ds, double threshold,
                                        double delta, SmoothingMode mode, uint64_t seed) {
    return check_structural_bias(os, ds, threshold, delta, mode, seed);
}

NonDiscriminationVerdict check_non_discrimination(const GroupedMetricSpace& cs,
                                                  const GroupedMetricSpace& ds, double threshold,
                                                  double delta, SmoothingMode mode,
                                                  uint64_t seed) {
    NonDiscriminationVerdict verdict;
    verdict.threshold = threshold;
    verdict.skew = group_skew(cs, ds, delta, mode, seed);
    verdict.non_discriminatory = verdict.skew.sigma <= threshold;
    return verdict;
}

}  // namespace fairspace
