#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mtnn {

/// A scalar function sampled on a regular 1D or 2D grid, row-major.
struct ScalarField {
    std::vector<int> dims;
    std::vector<double> values;
    std::string id;

    int size() const;
    bool is_2d() const { return dims.size() == 2; }
    void validate() const;
    bool operator==(const ScalarField& o) const {
        return dims == o.dims && values == o.values && id == o.id;
    }
};

enum class EnsembleKind { gauss2d, rand1d };

/// Parameters of a synthetic ensemble. Equal specs produce bitwise-identical
/// ensembles; the generator algorithms are pinned in docs/formats.md.
/// blob_min/blob_max bound the Gaussian bump count (gauss2d) or the number of
/// Fourier modes (rand1d); drift is the fraction of the domain that bump
/// centers travel across the whole ensemble.
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::gauss2d;
    int count = 1;
    std::vector<int> grid;
    uint64_t seed = 0;
    int blob_min = 2;
    int blob_max = 5;
    double amp_min = 0.5;
    double amp_max = 1.5;
    double drift = 0.1;
};

std::vector<ScalarField> gen_gauss2d(const EnsembleSpec& spec);
std::vector<ScalarField> gen_rand1d(const EnsembleSpec& spec);
std::vector<ScalarField> generate_ensemble(const EnsembleSpec& spec);

/// Affine map of values onto [0,1]; a constant field maps to all zeros.
ScalarField normalize_field(const ScalarField& f);

/// Grid adjacency used by merge-tree construction: 4-connectivity on 2D
/// grids, chain adjacency on 1D.
std::vector<int> grid_neighbors(const std::vector<int>& dims, int v);

void save_fields(const std::vector<ScalarField>& fields, const std::string& path);
std::vector<ScalarField> load_fields(const std::string& path);

}  // namespace mtnn
