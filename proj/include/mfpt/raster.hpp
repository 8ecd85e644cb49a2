#pragma once
// Raster (binary PGM) environments: thresholding, exact Euclidean distance
// transform with nearest-site tracking, and local-PCA orientation extraction.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfpt/grid.hpp"
#include "mfpt/vec2.hpp"

namespace mfpt {

struct Raster8 {
    int width{0};
    int height{0};
    std::vector<std::uint8_t> pix;  ///< row-major, row 0 = top of the image

    std::uint8_t at(int col, int row) const {
        return pix[static_cast<std::size_t>(row) * width + col];
    }
};

/// Reads an 8-bit binary PGM (P5). Header comments are allowed.
inline Raster8 read_pgm8(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("pgm: cannot open " + path);
    auto next_token = [&]() -> std::string {
        std::string tok;
        int ch;
        while ((ch = in.get()) != EOF) {
            if (ch == '#') {
                while ((ch = in.get()) != EOF && ch != '\n') {}
                continue;
            }
            if (std::isspace(ch)) {
                if (!tok.empty()) return tok;
                continue;
            }
            tok.push_back(static_cast<char>(ch));
        }
        return tok;
    };
    if (next_token() != "P5") throw std::runtime_error("pgm: not a binary PGM (P5): " + path);
    Raster8 img;
    try {
        img.width = std::stoi(next_token());
        img.height = std::stoi(next_token());
        const int maxval = std::stoi(next_token());
        if (maxval <= 0 || maxval > 255)
            throw std::runtime_error("pgm: only 8-bit rasters are supported");
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("pgm: malformed header in " + path);
    }
    if (img.width <= 0 || img.height <= 0) throw std::runtime_error("pgm: empty raster " + path);
    img.pix.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pix.data()), static_cast<std::streamsize>(img.pix.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pix.size()))
        throw std::runtime_error("pgm: truncated pixel data in " + path);
    return img;
}

namespace detail {

/// 1D exact distance transform with site tracking (two-scan).
/// dist[i] = spacing * |i - site[i]| with site[i] the nearest marked index.
inline void edt_1d_scan(const std::vector<int>& marked, double spacing,
                        std::vector<double>& dist, std::vector<int>& site) {
    const int n = static_cast<int>(marked.size());
    const double inf = std::numeric_limits<double>::infinity();
    dist.assign(n, inf);
    site.assign(n, -1);
    double cur = inf;
    int cur_site = -1;
    for (int i = 0; i < n; ++i) {
        if (marked[i]) { cur = 0.0; cur_site = i; }
        else if (cur_site >= 0) cur += spacing;
        dist[i] = cur;
        site[i] = cur_site;
    }
    cur = inf;
    cur_site = -1;
    for (int i = n - 1; i >= 0; --i) {
        if (marked[i]) { cur = 0.0; cur_site = i; }
        else if (cur_site >= 0) cur += spacing;
        if (cur < dist[i]) { dist[i] = cur; site[i] = cur_site; }
    }
}

/// Felzenszwalb-Huttenlocher lower envelope over one row of squared
/// distances f(j) (may contain +inf); returns the arg-min column per j.
inline void edt_1d_parabolas(const std::vector<double>& f, double spacing,
                             std::vector<double>& out, std::vector<int>& argmin) {
    const int n = static_cast<int>(f.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<int> v(n);       // parabola sites
    std::vector<double> z(n + 1);  // envelope breakpoints
    int k = -1;
    for (int j = 0; j < n; ++j) {
        if (f[j] == inf) continue;
        const double xj = j * spacing;
        for (;;) {
            if (k < 0) {
                k = 0;
                v[0] = j;
                z[0] = -inf;
                z[1] = inf;
                break;
            }
            const double xv = v[k] * spacing;
            const double s = ((f[j] + xj * xj) - (f[v[k]] + xv * xv)) / (2.0 * (xj - xv));
            if (s <= z[k]) { --k; continue; }
            ++k;
            v[k] = j;
            z[k] = s;
            z[k + 1] = inf;
            break;
        }
    }
    out.assign(n, inf);
    argmin.assign(n, -1);
    if (k < 0) return;  // no finite parabola in this row
    int idx = 0;
    for (int j = 0; j < n; ++j) {
        const double xj = j * spacing;
        while (z[idx + 1] < xj) ++idx;
        const double dx = xj - v[idx] * spacing;
        out[j] = dx * dx + f[v[idx]];
        argmin[j] = v[idx];
    }
}

}  // namespace detail

/// Exact Euclidean distance transform of a pixel mask with per-axis
/// spacings. Returns squared distances and the nearest feature pixel
/// (col,row) per pixel. mask is row-major, width*height.
inline void distance_transform(const std::vector<int>& mask, int width, int height,
                               double dx, double dy, std::vector<double>& dist2,
                               std::vector<int>& site_col, std::vector<int>& site_row) {
    std::vector<double> coldist(static_cast<std::size_t>(width) * height);
    std::vector<int> colsite(static_cast<std::size_t>(width) * height);
    std::vector<int> column(height);
    std::vector<double> d1(height);
    std::vector<int> s1(height);
    for (int c = 0; c < width; ++c) {
        for (int r = 0; r < height; ++r) column[r] = mask[static_cast<std::size_t>(r) * width + c];
        detail::edt_1d_scan(column, dy, d1, s1);
        for (int r = 0; r < height; ++r) {
            coldist[static_cast<std::size_t>(r) * width + c] = d1[r];
            colsite[static_cast<std::size_t>(r) * width + c] = s1[r];
        }
    }
    dist2.assign(static_cast<std::size_t>(width) * height, 0.0);
    site_col.assign(dist2.size(), -1);
    site_row.assign(dist2.size(), -1);
    std::vector<double> f(width), out(width);
    std::vector<int> amin(width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double g = coldist[static_cast<std::size_t>(r) * width + c];
            f[c] = std::isinf(g) ? g : g * g;
        }
        detail::edt_1d_parabolas(f, dx, out, amin);
        for (int c = 0; c < width; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            dist2[i] = out[c];
            if (amin[c] >= 0) {
                site_col[i] = amin[c];
                site_row[i] = colsite[static_cast<std::size_t>(r) * width + amin[c]];
            }
        }
    }
}

struct RasterFields {
    ScalarField distance;
    DirectionField direction;
};

/// Thresholds the raster into a feature mask, computes d(x) by exact EDT
/// and gamma(x) as the principal axis of feature pixels within `window`
/// pixels of the nearest feature pixel. Pixel row 0 maps to the top bound.
inline RasterFields fields_from_raster(const Raster8& img, int threshold, int window,
                                       const GridSpec& grid) {
    if (img.width != grid.n1 || img.height != grid.n2)
        throw std::invalid_argument("raster: grid node counts must match raster dimensions");
    if (window < 1) throw std::invalid_argument("raster: window must be >= 1 pixel");
    const int w = img.width, h = img.height;
    std::vector<int> mask(static_cast<std::size_t>(w) * h, 0);
    long feature_count = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = img.pix[i] >= threshold ? 1 : 0;
        feature_count += mask[i];
    }
    if (feature_count == 0) throw std::runtime_error("raster: no pixel at or above threshold");

    std::vector<double> dist2;
    std::vector<int> scol, srow;
    distance_transform(mask, w, h, grid.dx1(), grid.dx2(), dist2, scol, srow);

    RasterFields out{ScalarField(grid), DirectionField(grid)};
    const double dx = grid.dx1(), dy = grid.dx2();
    const double w2 = static_cast<double>(window) * window;
    for (int r = 0; r < h; ++r) {
        const int k = h - 1 - r;  // image rows run top-down, the grid bottom-up
        for (int c = 0; c < w; ++c) {
            const std::size_t pi = static_cast<std::size_t>(r) * w + c;
            out.distance.at(c, k) = std::sqrt(dist2[pi]);
            const int nc = scol[pi], nr = srow[pi];
            // covariance of feature pixels within the window around the site
            double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
            int n = 0;
            for (int rr = std::max(0, nr - window); rr <= std::min(h - 1, nr + window); ++rr) {
                for (int cc = std::max(0, nc - window); cc <= std::min(w - 1, nc + window); ++cc) {
                    const double pr2 = double(cc - nc) * (cc - nc) + double(rr - nr) * (rr - nr);
                    if (pr2 > w2) continue;
                    if (!mask[static_cast<std::size_t>(rr) * w + cc]) continue;
                    const double px = cc * dx;
                    const double py = (h - 1 - rr) * dy;
                    sx += px; sy += py;
                    sxx += px * px; sxy += px * py; syy += py * py;
                    ++n;
                }
            }
            Vec2 axis{1.0, 0.0};
            bool flagged = true;
            if (n >= 2) {
                const double mx = sx / n, my = sy / n;
                const SymMat2 cov{sxx / n - mx * mx, sxy / n - mx * my, syy / n - my * my};
                const double tr = cov.trace();
                const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * cov.det()));
                const double l1 = 0.5 * (tr + disc);
                const double l2 = 0.5 * (tr - disc);
                if (l1 - l2 > 1e-12 * std::max(l1, 1e-300)) {
                    // eigenvector of the larger eigenvalue, better-conditioned form
                    Vec2 v = std::abs(cov.xy) > 1e-300 ? Vec2{cov.xy, l1 - cov.xx}
                             : (cov.xx >= cov.yy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0});
                    axis = canonical_axis(v.normalized());
                    flagged = false;
                }
            }
            out.direction.at(c, k) = axis;
            out.direction.flagged[grid.index(c, k)] = flagged ? 1 : 0;
        }
    }
    return out;
}

}  // namespace mfpt
