#include "mtnn/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mtnn/errors.hpp"
#include "mtnn/io_util.hpp"
#include "mtnn/rng.hpp"

namespace mtnn {

int ScalarField::size() const {
    if (dims.empty()) return 0;
    int n = 1;
    for (int d : dims) n *= d;
    return n;
}

void ScalarField::validate() const {
    if (dims.empty() || dims.size() > 2) {
        throw ConfigError("field '" + id + "': dims must have length 1 or 2");
    }
    for (int d : dims) {
        if (d <= 0) throw ConfigError("field '" + id + "': non-positive dimension");
    }
    if (static_cast<int>(values.size()) != size()) {
        throw ConfigError("field '" + id + "': value count does not match dims");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("field '" + id + "': non-finite value");
    }
}

ScalarField normalize_field(const ScalarField& f) {
    if (f.values.empty()) throw ConfigError("normalize_field: empty field");
    const auto [lo_it, hi_it] = std::minmax_element(f.values.begin(), f.values.end());
    const double lo = *lo_it, hi = *hi_it;
    ScalarField out = f;
    if (hi == lo) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    const double span = hi - lo;
    for (double& v : out.values) v = (v - lo) / span;
    return out;
}

std::vector<int> grid_neighbors(const std::vector<int>& dims, int v) {
    std::vector<int> out;
    if (dims.size() == 1) {
        if (v > 0) out.push_back(v - 1);
        if (v + 1 < dims[0]) out.push_back(v + 1);
    } else {
        const int w = dims[1];
        const int row = v / w, col = v % w;
        if (row > 0) out.push_back(v - w);
        if (col > 0) out.push_back(v - 1);
        if (col + 1 < w) out.push_back(v + 1);
        if (row + 1 < dims[0]) out.push_back(v + w);
    }
    return out;
}

namespace {

struct Bump {
    double x0, y0, x1, y1;  // center endpoints, unit square
    double sigma;
    double amp0, amp1;
};

double lerp(double a, double b, double t) { return a + (b - a) * t; }

// Bump trajectories are resampled until every pair keeps a minimum
// separation at every time step. Keeps the continuous mixture's local
// maxima at exactly one per bump for the default widths.
std::vector<Bump> draw_bumps(Rng& rng, int k, int count, const EnsembleSpec& spec) {
    const double margin = 0.22;
    const double min_sep = 0.30;
    std::vector<Bump> bumps;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        bumps.clear();
        for (int b = 0; b < k; ++b) {
            Bump bump;
            bump.x0 = rng.uniform(margin, 1.0 - margin);
            bump.y0 = rng.uniform(margin, 1.0 - margin);
            const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            const double travel = spec.drift * rng.next_double();
            bump.x1 = std::clamp(bump.x0 + travel * std::cos(angle), margin, 1.0 - margin);
            bump.y1 = std::clamp(bump.y0 + travel * std::sin(angle), margin, 1.0 - margin);
            bump.sigma = rng.uniform(0.06, 0.11);
            bump.amp0 = rng.uniform(spec.amp_min, spec.amp_max);
            bump.amp1 = rng.uniform(spec.amp_min, spec.amp_max);
            bumps.push_back(bump);
        }
        bool ok = true;
        for (int t = 0; t < count && ok; ++t) {
            const double u = count > 1 ? static_cast<double>(t) / (count - 1) : 0.0;
            for (size_t a = 0; a + 1 < bumps.size() && ok; ++a) {
                for (size_t b = a + 1; b < bumps.size(); ++b) {
                    const double ax = lerp(bumps[a].x0, bumps[a].x1, u);
                    const double ay = lerp(bumps[a].y0, bumps[a].y1, u);
                    const double bx = lerp(bumps[b].x0, bumps[b].x1, u);
                    const double by = lerp(bumps[b].y0, bumps[b].y1, u);
                    if (std::hypot(ax - bx, ay - by) < min_sep) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if (ok) return bumps;
    }
    throw ConfigError("gen_gauss2d: could not place " + std::to_string(k) +
                      " separated bumps; reduce the blob count or drift");
}

std::string field_id(const char* kind, uint64_t seed, int index) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s-%llu-%04d", kind,
                  static_cast<unsigned long long>(seed), index);
    return buf;
}

}  // namespace

std::vector<ScalarField> gen_gauss2d(const EnsembleSpec& spec) {
    if (spec.kind != EnsembleKind::gauss2d) throw ConfigError("gen_gauss2d: wrong kind");
    if (spec.grid.size() != 2 || spec.grid[0] < 8 || spec.grid[1] < 8) {
        throw ConfigError("gen_gauss2d: grid must be 2D with each dim >= 8");
    }
    if (spec.count <= 0) throw ConfigError("gen_gauss2d: count must be positive");
    if (spec.blob_min < 1 || spec.blob_max < spec.blob_min) {
        throw ConfigError("gen_gauss2d: invalid blob range");
    }

    Rng rng(spec.seed);
    const int k = static_cast<int>(rng.uniform_int(spec.blob_min, spec.blob_max));
    const std::vector<Bump> bumps = draw_bumps(rng, k, spec.count, spec);

    const int rows = spec.grid[0], cols = spec.grid[1];
    std::vector<ScalarField> fields;
    fields.reserve(spec.count);
    for (int t = 0; t < spec.count; ++t) {
        const double u = spec.count > 1 ? static_cast<double>(t) / (spec.count - 1) : 0.0;
        ScalarField f;
        f.dims = spec.grid;
        f.id = field_id("gauss2d", spec.seed, t);
        f.values.resize(static_cast<size_t>(rows) * cols);
        for (int r = 0; r < rows; ++r) {
            const double y = rows > 1 ? static_cast<double>(r) / (rows - 1) : 0.0;
            for (int c = 0; c < cols; ++c) {
                const double x = cols > 1 ? static_cast<double>(c) / (cols - 1) : 0.0;
                double v = 0.0;
                for (const Bump& bump : bumps) {
                    const double cx = lerp(bump.x0, bump.x1, u);
                    const double cy = lerp(bump.y0, bump.y1, u);
                    const double amp = lerp(bump.amp0, bump.amp1, u);
                    const double dx = x - cx, dy = y - cy;
                    v += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * bump.sigma * bump.sigma));
                }
                f.values[static_cast<size_t>(r) * cols + c] = v;
            }
        }
        fields.push_back(std::move(f));
    }
    return fields;
}

std::vector<ScalarField> gen_rand1d(const EnsembleSpec& spec) {
    if (spec.kind != EnsembleKind::rand1d) throw ConfigError("gen_rand1d: wrong kind");
    if (spec.grid.size() != 1 || spec.grid[0] < 8) {
        throw ConfigError("gen_rand1d: grid must be 1D with length >= 8");
    }
    if (spec.count <= 0) throw ConfigError("gen_rand1d: count must be positive");
    if (spec.blob_min < 1 || spec.blob_max < spec.blob_min) {
        throw ConfigError("gen_rand1d: invalid mode range");
    }

    Rng rng(spec.seed);
    const int modes = static_cast<int>(rng.uniform_int(spec.blob_min, spec.blob_max));
    // Random Fourier series; amplitudes decay as 1/m, coefficients drift
    // linearly between a start and an end draw across the ensemble.
    struct Mode {
        double a0, a1, phase;
    };
    std::vector<Mode> series(modes);
    for (int m = 0; m < modes; ++m) {
        series[m].a0 = rng.uniform(spec.amp_min, spec.amp_max) / (m + 1);
        series[m].a1 = rng.uniform(spec.amp_min, spec.amp_max) / (m + 1);
        series[m].phase = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    }

    const int len = spec.grid[0];
    std::vector<ScalarField> fields;
    fields.reserve(spec.count);
    for (int t = 0; t < spec.count; ++t) {
        const double u = spec.count > 1 ? static_cast<double>(t) / (spec.count - 1) : 0.0;
        ScalarField f;
        f.dims = spec.grid;
        f.id = field_id("rand1d", spec.seed, t);
        f.values.resize(len);
        for (int i = 0; i < len; ++i) {
            const double x = static_cast<double>(i) / (len - 1);
            double v = 0.0;
            for (int m = 0; m < modes; ++m) {
                const double amp = lerp(series[m].a0, series[m].a1, u);
                v += amp * std::sin(2.0 * 3.14159265358979323846 * (m + 1) * x +
                                    series[m].phase + 0.35 * u * (m + 1));
            }
            f.values[i] = v;
        }
        fields.push_back(std::move(f));
    }
    return fields;
}

std::vector<ScalarField> generate_ensemble(const EnsembleSpec& spec) {
    switch (spec.kind) {
        case EnsembleKind::gauss2d:
            return gen_gauss2d(spec);
        case EnsembleKind::rand1d:
            return gen_rand1d(spec);
    }
    throw ConfigError("generate_ensemble: unknown kind");
}

void save_fields(const std::vector<ScalarField>& fields, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    for (const ScalarField& f : fields) {
        f.validate();
        out << "field " << f.id;
        for (int d : f.dims) out << ' ' << d;
        out << '\n';
        for (double v : f.values) out << fmt17(v) << '\n';
    }
    if (!out) throw ParseError(path + ": write failed");
}

std::vector<ScalarField> load_fields(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::vector<ScalarField> fields;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream header(line);
        std::string tag, id;
        header >> tag >> id;
        if (tag != "field" || id.empty()) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'field <id> <dims>'");
        }
        ScalarField f;
        f.id = id;
        int d;
        while (header >> d) f.dims.push_back(d);
        if (f.dims.empty() || f.dims.size() > 2) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad dimension list");
        }
        const int n = f.size();
        f.values.reserve(n);
        for (int i = 0; i < n; ++i) {
            if (!std::getline(in, line)) {
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": truncated field '" + id + "'");
            }
            ++lineno;
            f.values.push_back(parse_double(line, path, lineno));
        }
        f.validate();
        fields.push_back(std::move(f));
    }
    return fields;
}

}  // namespace mtnn
