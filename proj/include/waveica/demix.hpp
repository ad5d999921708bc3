#ifndef WAVEICA_DEMIX_HPP
#define WAVEICA_DEMIX_HPP

#include <utility>
#include <vector>

#include "waveica/estimators.hpp"
#include "waveica/sample.hpp"
#include "waveica/wavelet.hpp"

namespace waveica {

struct WhitenResult {
    Sample unit_cube;               // whitened rows remapped into [0,1]^d
    Matrix transform;               // ZCA transform C^{-1/2}
    std::vector<double> mean;
    std::vector<double> whitened;   // flat n*d, zero mean, identity covariance
};

// Symmetric (ZCA) whitening; throws std::runtime_error on singular covariance.
WhitenResult whiten(const Sample& sample);

struct Profile2D {
    double theta_star = 0.0;
    std::vector<std::pair<double, double>> profile;  // (theta, C2_j)
};

// Grid search of the plug-in contrast over rotations of the whitened sample,
// theta on [0, pi/2). d = 2 only.
Profile2D contrast_profile_2d(const Sample& sample, WaveletSpec spec, const ScalingTable& table,
                              int grid_size);

struct TraceEntry {
    int sweep;
    int axis_p, axis_q;
    double theta;
    double contrast;  // full-dimension contrast after the accepted rotation
};

struct DemixResult {
    Matrix rotation;           // accumulated plane rotations (identity at sweeps = 0)
    Matrix whiten_transform;
    std::vector<double> mean;
    std::vector<TraceEntry> trace;
    double final_contrast = 0.0;
};

// Pairwise plane search with Jacobi rotations; a plane rotation is kept only
// when it strictly lowers the full d-dimensional contrast.
DemixResult jacobi_sweep(const Sample& sample, WaveletSpec spec, const ScalingTable& table,
                         int sweeps, int grid_size);

// Permutation/scale-invariant demixing error; 0 iff P is a scaled permutation.
double amari_error(const Matrix& p);

// Helper: remaps arbitrary flat rows affinely into [0,1]^d by per-axis min/max.
Sample to_unit_cube(const std::vector<double>& rows, long n, int d);

}  // namespace waveica

#endif
