//! Exact Gaussian-rational and floating-point linear algebra kernels.

pub mod charpoly;
pub mod exact;
pub mod float;

pub use exact::{exact_kernel, ExactMatrix, Rref};
pub use float::{
    char_poly, cluster_values, default_tol, directed_distance, float_eigenvalues, hausdorff,
    spectrum_clusters, spectrum_set, Cluster, EigenSpectrum, FloatMatrix,
};
