#include "combnoise/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "combnoise/errors.hpp"

namespace combnoise {

namespace {

std::string zone_set_name(const std::vector<std::size_t>& zones) {
    std::string s;
    for (std::size_t k = 0; k < zones.size(); ++k) {
        if (k) s += '+';
        s += std::to_string(zones[k]);
    }
    return s;
}

double frobenius(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

} // namespace

NoiseMatrix NoiseMatrix::make(Quadrature quad, double rf_hz, std::size_t n,
                              std::vector<double> entries) {
    NoiseMatrix m;
    m.quadrature = quad;
    m.rf_hz = rf_hz;
    m.n = n;
    m.entries = std::move(entries);
    m.validate();
    return m;
}

void NoiseMatrix::validate() const {
    if (n < 2) throw DomainError("matrix: need dimension >= 2");
    if (entries.size() != n * n) throw DomainError("matrix: entry count must be n*n");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(at(i, j))) throw DomainError("matrix: non-finite entry");
            if (at(i, j) != at(j, i)) throw DomainError("matrix: not exactly symmetric");
        }
    if (!(rf_hz > 0.0)) throw DomainError("matrix: RF frequency must be positive");
}

double covariance_pair(const MeasuredVariance& vi, const MeasuredVariance& vj,
                       const MeasuredVariance& vij) {
    if (vi.zones.size() != 1 || vj.zones.size() != 1)
        throw DomainError("covariance: first two arguments must be single-band measurements");
    if (vij.zones.size() != 2 || vij.zones[0] != std::min(vi.zones[0], vj.zones[0]) ||
        vij.zones[1] != std::max(vi.zones[0], vj.zones[0]) || vi.zones[0] == vj.zones[0])
        throw DomainError("covariance: third argument must measure exactly the pair of the first two");
    if (vi.quadrature != vj.quadrature || vi.quadrature != vij.quadrature)
        throw DomainError("covariance: quadrature mismatch");
    if (vi.rf_hz != vj.rf_hz || vi.rf_hz != vij.rf_hz)
        throw DomainError("covariance: RF frequency mismatch");
    if (!(vi.power > 0.0) || !(vj.power > 0.0))
        throw DomainError("covariance: band powers must be positive");
    const double pt = vi.power + vj.power;
    if (std::abs(vij.power - pt) > 1e-9 * pt)
        throw DomainError("covariance: pair power inconsistent with band powers");
    return (vij.value - vi.power / pt * vi.value - vj.power / pt * vj.value) * pt /
           (2.0 * std::sqrt(vi.power * vj.power));
}

NoiseMatrix assemble(const std::vector<MeasuredVariance>& measurements) {
    if (measurements.empty()) throw ProtocolError("assemble: no measurements");
    const Quadrature quad = measurements.front().quadrature;
    const double rf = measurements.front().rf_hz;

    std::map<std::size_t, const MeasuredVariance*> singles;
    std::map<std::pair<std::size_t, std::size_t>, const MeasuredVariance*> pairs;
    std::size_t max_zone = 0;
    for (const auto& mv : measurements) {
        if (mv.quadrature != quad)
            throw ProtocolError("assemble: mixed quadratures in one measurement set");
        if (mv.rf_hz != rf)
            throw ProtocolError("assemble: mixed RF frequencies in one measurement set");
        if (mv.zones.size() == 1) {
            if (!singles.emplace(mv.zones[0], &mv).second)
                throw ProtocolError("assemble: duplicate measurement of band " +
                                    zone_set_name(mv.zones));
            max_zone = std::max(max_zone, mv.zones[0]);
        } else if (mv.zones.size() == 2) {
            if (!pairs.emplace(std::make_pair(mv.zones[0], mv.zones[1]), &mv).second)
                throw ProtocolError("assemble: duplicate measurement of pair " +
                                    zone_set_name(mv.zones));
            max_zone = std::max(max_zone, mv.zones[1]);
        } else {
            throw ProtocolError("assemble: unsupported band set " + zone_set_name(mv.zones));
        }
    }

    const std::size_t n = max_zone + 1;
    if (singles.size() != n)
        throw ProtocolError("assemble: expected " + std::to_string(n) + " single-band measurements, got " +
                            std::to_string(singles.size()));
    for (std::size_t i = 0; i < n; ++i)
        if (!singles.count(i))
            throw ProtocolError("assemble: missing single-band measurement " + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!pairs.count({i, j}))
                throw ProtocolError("assemble: missing pair measurement " +
                                    zone_set_name({i, j}));
    if (pairs.size() != n * (n - 1) / 2)
        throw ProtocolError("assemble: unexpected extra pair measurements");

    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = singles.at(i)->value;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = covariance_pair(*singles.at(i), *singles.at(j), *pairs.at({i, j}));
            entries[i * n + j] = c;
            entries[j * n + i] = c;
        }
    return NoiseMatrix::make(quad, rf, n, std::move(entries));
}

EigenDecomposition eig_sym(const NoiseMatrix& matrix) {
    matrix.validate();
    const std::size_t n = matrix.n;
    std::vector<double> a = matrix.entries;
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    const double norm = frobenius(a);
    const double tol = 1e-14 * norm;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a[i * n + j] * a[i * n + j];
        return std::sqrt(s);
    };

    bool converged = norm == 0.0 || off_norm() <= tol;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        converged = off_norm() <= tol;
    }
    if (!converged) throw NumericalError("eig: Jacobi sweeps did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });

    EigenDecomposition eig;
    eig.n = n;
    eig.eigenvalues.resize(n);
    eig.eigenvectors.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t col = order[k];
        eig.eigenvalues[k] = a[col * n + col];
        ModeVector& mv = eig.eigenvectors[k];
        mv.label = ModeLabel::Eigen;
        mv.eigen_index = static_cast<int>(k);
        mv.components.resize(n);
        for (std::size_t i = 0; i < n; ++i) mv.components[i] = v[i * n + col];
        // sign convention: largest-magnitude component positive, lowest index on ties
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(mv.components[i]) > std::abs(mv.components[imax])) imax = i;
        if (mv.components[imax] < 0.0)
            for (double& x : mv.components) x = -x;
    }
    return eig;
}

EigenResiduals eigen_residuals(const NoiseMatrix& matrix, const EigenDecomposition& eig) {
    const std::size_t n = matrix.n;
    EigenResiduals r;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double av = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                av += matrix.at(i, j) * eig.eigenvectors[k].components[j];
            r.eigen_residual = std::max(
                r.eigen_residual,
                std::abs(av - eig.eigenvalues[k] * eig.eigenvectors[k].components[i]));
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            double d = dot(eig.eigenvectors[k], eig.eigenvectors[l]);
            if (k == l) d -= 1.0;
            r.orthonormality = std::max(r.orthonormality, std::abs(d));
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double rec = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                rec += eig.eigenvalues[k] * eig.eigenvectors[k].components[i] *
                       eig.eigenvectors[k].components[j];
            r.reconstruction = std::max(r.reconstruction, std::abs(rec - matrix.at(i, j)));
        }
    return r;
}

double project_variance(const EigenDecomposition& eig, const ModeVector& w) {
    if (w.size() != eig.n) throw DomainError("projection: dimension mismatch");
    w.validate();
    double s = 0.0;
    for (std::size_t k = 0; k < eig.n; ++k) {
        const double d = dot(eig.eigenvectors[k], w);
        s += eig.eigenvalues[k] * d * d;
    }
    return s;
}

double excess_fraction(const EigenDecomposition& eig, std::size_t k) {
    if (k >= eig.n) throw DomainError("excess fraction: eigenmode index out of range");
    double denom = 0.0;
    for (double ev : eig.eigenvalues) denom += std::max(ev - 1.0, 0.0);
    if (denom == 0.0)
        throw DomainError("excess fraction: no eigenmode exceeds the shot floor");
    return std::max(eig.eigenvalues[k] - 1.0, 0.0) / denom;
}

std::pair<double, double> extract_collective(const NoiseMatrix& matrix, const ModeVector& w_ceo,
                                             const ModeVector& w_rep) {
    if (matrix.quadrature != Quadrature::Phase)
        throw DomainError("extraction: timing modes live in the phase quadrature");
    const EigenDecomposition eig = eig_sym(matrix);
    return {project_variance(eig, w_ceo), project_variance(eig, w_rep)};
}

} // namespace combnoise
