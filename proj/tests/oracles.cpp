#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oracles {

using infoneck::Matrix;

std::pair<std::vector<double>, Matrix> jacobi_eig_sym(const Matrix& sym) {
    const int64_t n = sym.rows;
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 0; j < n; ++j) a[i][j] = sym.at(i, j);
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int64_t i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int64_t i = 0; i < n; ++i)
            for (int64_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (int64_t p = 0; p < n; ++p) {
            for (int64_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int64_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int64_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int64_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<int64_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int64_t i, int64_t j) { return a[i][i] > a[j][j]; });
    std::vector<double> eig(n);
    Matrix vecs(n, n);
    for (int64_t r = 0; r < n; ++r) {
        eig[r] = a[order[r]][order[r]];
        for (int64_t c = 0; c < n; ++c)
            vecs.at(r, c) = static_cast<float>(v[c][order[r]]);
    }
    return {eig, vecs};
}

std::vector<double> pca_ratios_by_eig(const Matrix& data) {
    const int64_t n = data.rows, d = data.cols;
    std::vector<double> mean(d, 0.0);
    for (int64_t r = 0; r < n; ++r)
        for (int64_t c = 0; c < d; ++c) mean[c] += data.at(r, c);
    for (auto& m : mean) m /= static_cast<double>(n);
    Matrix cov(d, d);
    for (int64_t i = 0; i < d; ++i) {
        for (int64_t j = i; j < d; ++j) {
            double acc = 0.0;
            for (int64_t r = 0; r < n; ++r)
                acc += (data.at(r, i) - mean[i]) * (data.at(r, j) - mean[j]);
            cov.at(i, j) = cov.at(j, i) = static_cast<float>(acc / n);
        }
    }
    auto [eig, vecs] = jacobi_eig_sym(cov);
    double total = 0.0;
    for (double e : eig) total += std::max(e, 0.0);
    std::vector<double> ratios;
    for (double e : eig) {
        if (e > 1e-10 * std::max(total, 1e-30)) ratios.push_back(e / total);
    }
    return ratios;
}

namespace {

// pseudo-inverse of a symmetric PSD matrix via the Jacobi route above
std::vector<std::vector<double>> pinv_sym(const Matrix& sym) {
    auto [eig, vecs] = jacobi_eig_sym(sym);
    const int64_t n = sym.rows;
    const double tol = (eig.empty() ? 0.0 : std::abs(eig[0])) * n * 1e-12;
    std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
    for (size_t k = 0; k < eig.size(); ++k) {
        if (eig[k] <= tol) continue;
        for (int64_t i = 0; i < n; ++i)
            for (int64_t j = 0; j < n; ++j)
                out[i][j] += vecs.at(static_cast<int64_t>(k), i) *
                             vecs.at(static_cast<int64_t>(k), j) / eig[k];
    }
    return out;
}

}  // namespace

double reduced_rank_mse_from_samples(const Matrix& x, const Matrix& targets,
                                     int64_t rank) {
    const int64_t n = x.rows, c = x.cols, d = targets.cols;
    // center both
    std::vector<double> xm(c, 0.0), tm(d, 0.0);
    for (int64_t r = 0; r < n; ++r) {
        for (int64_t i = 0; i < c; ++i) xm[i] += x.at(r, i);
        for (int64_t i = 0; i < d; ++i) tm[i] += targets.at(r, i);
    }
    for (auto& m : xm) m /= n;
    for (auto& m : tm) m /= n;

    Matrix s(c, c);
    for (int64_t i = 0; i < c; ++i)
        for (int64_t j = i; j < c; ++j) {
            double acc = 0.0;
            for (int64_t r = 0; r < n; ++r)
                acc += (x.at(r, i) - xm[i]) * (x.at(r, j) - xm[j]);
            s.at(i, j) = s.at(j, i) = static_cast<float>(acc / n);
        }
    std::vector<std::vector<double>> cxt(c, std::vector<double>(d, 0.0));
    for (int64_t i = 0; i < c; ++i)
        for (int64_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int64_t r = 0; r < n; ++r)
                acc += (x.at(r, i) - xm[i]) * (targets.at(r, j) - tm[j]);
            cxt[i][j] = acc / n;
        }
    auto sinv = pinv_sym(s);
    // W_ols: c x d
    std::vector<std::vector<double>> w(c, std::vector<double>(d, 0.0));
    for (int64_t i = 0; i < c; ++i)
        for (int64_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int64_t k = 0; k < c; ++k) acc += sinv[i][k] * cxt[k][j];
            w[i][j] = acc;
        }
    // fitted values P = Xc * W  (n x d)
    std::vector<std::vector<double>> fit(n, std::vector<double>(d, 0.0));
    for (int64_t r = 0; r < n; ++r)
        for (int64_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int64_t i = 0; i < c; ++i) acc += (x.at(r, i) - xm[i]) * w[i][j];
            fit[r][j] = acc;
        }
    // principal directions of the fitted values via P^T P
    Matrix ptp(d, d);
    for (int64_t i = 0; i < d; ++i)
        for (int64_t j = i; j < d; ++j) {
            double acc = 0.0;
            for (int64_t r = 0; r < n; ++r) acc += fit[r][i] * fit[r][j];
            ptp.at(i, j) = ptp.at(j, i) = static_cast<float>(acc / n);
        }
    auto [eig, vecs] = jacobi_eig_sym(ptp);
    const int64_t keep = std::min<int64_t>(rank, d);
    // projector onto the top-L fitted directions
    std::vector<std::vector<double>> proj(d, std::vector<double>(d, 0.0));
    for (int64_t k = 0; k < keep; ++k)
        for (int64_t i = 0; i < d; ++i)
            for (int64_t j = 0; j < d; ++j)
                proj[i][j] += vecs.at(k, i) * vecs.at(k, j);
    double sse = 0.0;
    for (int64_t r = 0; r < n; ++r) {
        for (int64_t j = 0; j < d; ++j) {
            double pred = 0.0;
            for (int64_t i = 0; i < d; ++i) pred += fit[r][i] * proj[i][j];
            const double diff = pred - (targets.at(r, j) - tm[j]);
            sse += diff * diff;
        }
    }
    return sse / static_cast<double>(n * d);
}

namespace {

int edit_recurse(const std::vector<int>& ref, const std::vector<int>& hyp, size_t i,
                 size_t j) {
    if (i == ref.size()) return static_cast<int>(hyp.size() - j);  // insertions
    if (j == hyp.size()) return static_cast<int>(ref.size() - i);  // deletions
    int best = std::numeric_limits<int>::max();
    const int sub = (ref[i] == hyp[j] ? 0 : 1);
    best = std::min(best, sub + edit_recurse(ref, hyp, i + 1, j + 1));
    best = std::min(best, 1 + edit_recurse(ref, hyp, i + 1, j));  // delete ref[i]
    best = std::min(best, 1 + edit_recurse(ref, hyp, i, j + 1));  // insert hyp[j]
    return best;
}

}  // namespace

int edit_distance_exhaustive(const std::vector<int>& ref, const std::vector<int>& hyp) {
    return edit_recurse(ref, hyp, 0, 0);
}

double pearson_naive(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size();
    double ma = 0, mb = 0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double num = 0, da = 0, db = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::sqrt(da * db);
}

double ssim_naive(const Matrix& a, const Matrix& b, double dynamic_range) {
    const int64_t h = a.rows, w = a.cols;
    const int win = 11;
    const double sigma = 1.5;
    double kernel[11][11];
    double ksum = 0.0;
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
            const double dy = i - 5, dx = j - 5;
            kernel[i][j] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
            ksum += kernel[i][j];
        }
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) kernel[i][j] /= ksum;

    const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
    const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
    double total = 0.0;
    int64_t count = 0;
    for (int64_t y = 0; y + win <= h; ++y) {
        for (int64_t x = 0; x + win <= w; ++x) {
            double mu_a = 0, mu_b = 0;
            for (int i = 0; i < win; ++i)
                for (int j = 0; j < win; ++j) {
                    mu_a += kernel[i][j] * a.at(y + i, x + j);
                    mu_b += kernel[i][j] * b.at(y + i, x + j);
                }
            double va = 0, vb = 0, cov = 0;
            for (int i = 0; i < win; ++i)
                for (int j = 0; j < win; ++j) {
                    const double da = a.at(y + i, x + j) - mu_a;
                    const double db = b.at(y + i, x + j) - mu_b;
                    va += kernel[i][j] * da * da;
                    vb += kernel[i][j] * db * db;
                    cov += kernel[i][j] * da * db;
                }
            const double num = (2 * mu_a * mu_b + c1) * (2 * cov + c2);
            const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

namespace {

struct AlignBest {
    int matches = 0;
    int chunks = std::numeric_limits<int>::max();
};

void align_recurse(const std::vector<int>& ref, const std::vector<int>& hyp, size_t i,
                   size_t j, int matches, int chunks, bool in_chunk, AlignBest& best) {
    if (i == ref.size() || j == hyp.size()) {
        if (matches > best.matches ||
            (matches == best.matches && chunks < best.chunks)) {
            best.matches = matches;
            best.chunks = chunks;
        }
        return;
    }
    if (ref[i] == hyp[j]) {
        align_recurse(ref, hyp, i + 1, j + 1, matches + 1,
                      chunks + (in_chunk ? 0 : 1), true, best);
    }
    align_recurse(ref, hyp, i + 1, j, matches, chunks, false, best);
    align_recurse(ref, hyp, i, j + 1, matches, chunks, false, best);
}

}  // namespace

double meteor_exhaustive(const std::vector<int>& ref, const std::vector<int>& hyp) {
    AlignBest best;
    best.chunks = 0;
    align_recurse(ref, hyp, 0, 0, 0, 0, false, best);
    if (best.matches == 0) return 0.0;
    const double m = best.matches;
    const double precision = m / static_cast<double>(hyp.size());
    const double recall = m / static_cast<double>(ref.size());
    const double alpha = 0.9;
    const double fmean = precision * recall / (alpha * precision + (1 - alpha) * recall);
    const double frag = static_cast<double>(best.chunks) / m;
    return fmean * (1.0 - 0.5 * frag * frag * frag);
}

}  // namespace oracles
